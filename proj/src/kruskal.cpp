#include "rocp/kruskal.hpp"

#include "rocp/matrix_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace rocp {

Dims KruskalModel::dims() const {
    Dims d(factors.size());
    for (std::size_t n = 0; n < factors.size(); ++n) d[n] = factors[n].rows();
    return d;
}

void KruskalModel::validate() const {
    if (rank < 1)
        throw std::domain_error("model rank must be positive");
    if (factors.size() < 2)
        throw std::domain_error("model must have at least 2 factors");
    for (const Matrix& f : factors) {
        if (f.cols() != rank)
            throw std::domain_error("factor column count does not match rank");
        if (!f.allFinite())
            throw std::domain_error("factor entries must be finite");
    }
}

KruskalModel random_model(const Dims& dims, int rank, Rng& rng) {
    KruskalModel m;
    m.rank = rank;
    m.factors.reserve(dims.size());
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Index d : dims) {
        Matrix f(d, rank);
        for (Eigen::Index i = 0; i < f.rows(); ++i)
            for (Eigen::Index r = 0; r < f.cols(); ++r)
                f(i, r) = gauss(rng);
        m.factors.push_back(std::move(f));
    }
    return m;
}

std::vector<Matrix> factors_excluding(const KruskalModel& m, int mode) {
    const int n_modes = m.order();
    if (mode < 1 || mode > n_modes)
        throw std::domain_error("mode out of range");
    std::vector<Matrix> out;
    out.reserve(n_modes - 1);
    for (int k = n_modes; k >= 1; --k)
        if (k != mode) out.push_back(m.factors[k - 1]);
    return out;
}

DenseTensor reconstruct(const KruskalModel& m, const Dims& dims) {
    m.validate();
    if (static_cast<int>(dims.size()) != m.order())
        throw std::domain_error("dims order does not match model");
    for (std::size_t n = 0; n < dims.size(); ++n)
        if (m.factors[n].rows() != dims[n])
            throw std::domain_error("factor rows do not match dims");

    // Mode-1 unfolding of the model is U(1) * Z(1)^T; the mode-1 layout is
    // the flat storage itself, so no fold pass is needed.
    const Matrix z = khatri_rao_list(factors_excluding(m, 1));
    const Matrix m1 = m.factors[0] * z.transpose();
    std::vector<double> data(m1.data(), m1.data() + m1.size());
    return DenseTensor(dims, std::move(data));
}

double fitness(const DenseTensor& x, const DenseTensor& x_hat) {
    if (x.dims() != x_hat.dims())
        throw std::domain_error("fitness: dims mismatch");
    const double x_norm = frobenius_norm(x);
    if (x_norm == 0.0)
        throw std::domain_error("fitness undefined for zero-norm reference tensor");
    double sum = 0.0;
    const double* a = x.data();
    const double* b = x_hat.data();
    for (Index i = 0; i < x.size(); ++i) {
        const double d = b[i] - a[i];
        sum += d * d;
    }
    return 1.0 - std::sqrt(sum) / x_norm;
}

double model_fitness(const DenseTensor& x, const KruskalModel& m) {
    return fitness(x, reconstruct(m, x.dims()));
}

}  // namespace rocp
