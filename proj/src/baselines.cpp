#include "rocp/baselines.hpp"

#include "rocp/errors.hpp"
#include "rocp/matrix_ops.hpp"
#include "rocp/solve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rocp {

namespace {

/// Z(n)^T Z(n) assembled as the Hadamard product of the factor Grams,
/// in the same decreasing-mode order as the Khatri-Rao list.
Matrix gram_excluding(const std::vector<Matrix>& grams, int mode) {
    const int n_modes = static_cast<int>(grams.size());
    Matrix g;
    for (int k = n_modes; k >= 1; --k) {
        if (k == mode) continue;
        g = g.size() == 0 ? grams[k - 1] : hadamard(g, grams[k - 1]);
    }
    return g;
}

std::vector<Matrix> factor_grams(const KruskalModel& model) {
    std::vector<Matrix> grams;
    grams.reserve(model.factors.size());
    for (const Matrix& f : model.factors)
        grams.push_back(f.transpose() * f);
    return grams;
}

void normalize_into_last_mode(KruskalModel& model) {
    const int n_modes = model.order();
    Eigen::VectorXd carry = Eigen::VectorXd::Ones(model.rank);
    for (int n = 0; n < n_modes - 1; ++n) {
        for (int r = 0; r < model.rank; ++r) {
            const double nrm = model.factors[n].col(r).norm();
            if (nrm > 0.0) {
                model.factors[n].col(r) /= nrm;
                carry(r) *= nrm;
            }
        }
    }
    model.factors[n_modes - 1] = model.factors[n_modes - 1] * carry.asDiagonal();
}

/// Last (t - t_prev) slices of x as their own tensor; slabs on the last
/// mode are contiguous in the flat layout.
DenseTensor tail_slab(const DenseTensor& x, Index t_prev) {
    Dims slab_dims = x.dims();
    const Index t = slab_dims.back();
    slab_dims.back() = t - t_prev;
    const Index slice = element_count(x.dims()) / t;
    std::vector<double> data(x.data() + t_prev * slice, x.data() + t * slice);
    return DenseTensor(std::move(slab_dims), std::move(data));
}

}  // namespace

KruskalModel cp_als(const DenseTensor& x, int rank, const AlsOptions& opts,
                    const KruskalModel* init, Rng& rng) {
    if (rank < 1)
        throw std::domain_error("cp_als: rank must be positive");
    if (frobenius_norm(x) == 0.0)
        throw std::domain_error("cp_als: zero tensor");
    const Dims& dims = x.dims();
    const int n_modes = static_cast<int>(dims.size());

    KruskalModel model;
    if (init) {
        model = *init;
        model.validate();
        if (model.dims() != dims)
            throw std::domain_error("cp_als: init factor shapes do not match tensor");
    } else {
        model = random_model(dims, rank, rng);
    }

    // Unfoldings are fixed across sweeps.
    std::vector<Matrix> unfoldings;
    unfoldings.reserve(n_modes);
    for (int n = 1; n <= n_modes; ++n) unfoldings.push_back(unfold(x, n));

    std::vector<Matrix> grams = factor_grams(model);

    double prev_fit = -std::numeric_limits<double>::infinity();
    for (int sweep = 1; sweep <= opts.max_iters; ++sweep) {
        for (int n = 1; n <= n_modes; ++n) {
            const Matrix z = khatri_rao_list(factors_excluding(model, n));
            const Matrix rhs = unfoldings[n - 1] * z;
            model.factors[n - 1] = solve_gram(gram_excluding(grams, n), rhs);
            if (!model.factors[n - 1].allFinite())
                throw NumericalError("cp_als: non-finite factor update", sweep);
            grams[n - 1] = model.factors[n - 1].transpose() * model.factors[n - 1];
        }
        normalize_into_last_mode(model);
        grams = factor_grams(model);

        const double fit = model_fitness(x, model);
        if (!std::isfinite(fit))
            throw NumericalError("cp_als: non-finite fitness", sweep);
        if (std::abs(fit - prev_fit) < opts.tol) break;
        prev_fit = fit;
    }
    return model;
}

KruskalModel batch_cold(const DenseTensor& x, int rank, const AlsOptions& opts, Rng& rng) {
    return cp_als(x, rank, opts, nullptr, rng);
}

KruskalModel batch_hot(const DenseTensor& x, int rank, const AlsOptions& opts,
                       const KruskalModel& prev) {
    const Dims& dims = x.dims();
    const int n_modes = static_cast<int>(dims.size());
    if (prev.order() != n_modes)
        throw std::domain_error("batch_hot: model order does not match tensor");
    for (int n = 0; n < n_modes - 1; ++n)
        if (prev.factors[n].rows() != dims[n])
            throw std::domain_error("batch_hot: head extents do not match previous model");
    const Index t_prev = prev.factors[n_modes - 1].rows();
    if (t_prev > dims.back())
        throw std::domain_error("batch_hot: tensor shorter than previous model");

    KruskalModel warm = prev;
    if (t_prev < dims.back()) {
        const DenseTensor slab = tail_slab(x, t_prev);
        const Matrix z = khatri_rao_list(factors_excluding(prev, n_modes));
        const Matrix pad = solve_gram(gram_excluding(factor_grams(prev), n_modes),
                                      unfold(slab, n_modes) * z);
        Matrix& temporal = warm.factors[n_modes - 1];
        temporal.conservativeResize(dims.back(), prev.rank);
        temporal.bottomRows(dims.back() - t_prev) = pad;
    }
    Rng unused(0);
    return cp_als(x, rank, opts, &warm, unused);
}

ComplementaryState online_full_init(const DenseTensor& x_init, const KruskalModel& model) {
    const Dims& dims = x_init.dims();
    const int n_modes = static_cast<int>(dims.size());
    if (model.dims() != dims)
        throw std::domain_error("online_full_init: model does not match tensor");

    ComplementaryState state;
    state.t_len = dims.back();
    state.dims_head.assign(dims.begin(), dims.end() - 1);
    state.p.reserve(n_modes - 1);
    state.q.reserve(n_modes - 1);
    for (int n = 1; n < n_modes; ++n) {
        const Matrix z = khatri_rao_list(factors_excluding(model, n));
        state.p.push_back(unfold(x_init, n) * z);
        state.q.push_back(z.transpose() * z);
    }
    return state;
}

void online_full_update(ComplementaryState& state, KruskalModel& model, const DenseTensor& x_new) {
    const int n_modes = model.order();
    const Dims& slab_dims = x_new.dims();
    if (static_cast<int>(slab_dims.size()) != n_modes)
        throw std::domain_error("online_full_update: batch order mismatch");
    for (int n = 0; n < n_modes - 1; ++n)
        if (slab_dims[n] != state.dims_head[n])
            throw std::domain_error("online_full_update: batch head extents do not match stream");
    const Index batch = slab_dims.back();

    // Temporal rows for the new slab.
    const Matrix z_head = khatri_rao_list(factors_excluding(model, n_modes));
    const Matrix u_new =
        solve_gram(z_head.transpose() * z_head, unfold(x_new, n_modes) * z_head);

    Matrix& temporal = model.factors[n_modes - 1];
    const Index t_old = temporal.rows();
    temporal.conservativeResize(t_old + batch, model.rank);
    temporal.bottomRows(batch) = u_new;

    // Non-temporal accumulation over the slab's full co-domain.
    for (int n = 1; n < n_modes; ++n) {
        std::vector<Matrix> slab_factors;
        slab_factors.reserve(n_modes - 1);
        slab_factors.push_back(u_new);
        for (int k = n_modes - 1; k >= 1; --k)
            if (k != n) slab_factors.push_back(model.factors[k - 1]);

        const Matrix z_new = khatri_rao_list(slab_factors);
        state.p[n - 1].noalias() += unfold(x_new, n) * z_new;
        state.q[n - 1].noalias() += z_new.transpose() * z_new;
        model.factors[n - 1] = solve_gram(state.q[n - 1], state.p[n - 1]);
    }
    state.t_len += batch;
}

}  // namespace rocp
