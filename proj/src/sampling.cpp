#include "rocp/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace rocp {

namespace {

std::vector<Index> decode_all(const Dims& dims, int mode, const std::vector<Index>& rows) {
    const int n_other = static_cast<int>(dims.size()) - 1;
    std::vector<Index> decoded(rows.size() * n_other);
    for (std::size_t c = 0; c < rows.size(); ++c) {
        const std::vector<Index> multi = decode_index(rows[c], dims, mode);
        for (int k = 0; k < n_other; ++k)
            decoded[c * n_other + k] = multi[k];
    }
    return decoded;
}

}  // namespace

SampleIndexSet SampleIndexSet::from_rows(const Dims& dims, int mode, std::vector<Index> rows) {
    SampleIndexSet idx;
    idx.mode = mode;
    idx.dims = dims;
    idx.decoded = decode_all(dims, mode, rows);  // validates each j
    idx.rows = std::move(rows);
    return idx;
}

SampleIndexSet SampleIndexSet::all_columns(const Dims& dims, int mode) {
    const Index co = codomain_size(dims, mode);
    std::vector<Index> rows(static_cast<std::size_t>(co));
    for (Index j = 0; j < co; ++j) rows[static_cast<std::size_t>(j)] = j + 1;
    return from_rows(dims, mode, std::move(rows));
}

Index auto_sample_count(int rank) {
    if (rank < 1)
        throw std::domain_error("rank must be positive");
    const double s = 10.0 * rank * std::log(static_cast<double>(rank));
    return std::max<Index>(rank, static_cast<Index>(std::ceil(s)));
}

SampleIndexSet draw_samples(const Dims& dims, int mode, Index s, Rng& rng) {
    if (s < 1)
        throw std::domain_error("sample count must be positive");
    const Index co = codomain_size(dims, mode);
    std::uniform_int_distribution<Index> uniform(1, co);
    std::vector<Index> rows(static_cast<std::size_t>(s));
    for (Index c = 0; c < s; ++c) rows[static_cast<std::size_t>(c)] = uniform(rng);
    return SampleIndexSet::from_rows(dims, mode, std::move(rows));
}

Matrix sample_unfolding(const DenseTensor& t, const SampleIndexSet& idx) {
    if (t.dims() != idx.dims)
        throw std::domain_error("sample_unfolding: index set drawn against different dims");
    const Dims& dims = t.dims();
    const int mode = idx.mode;
    const std::vector<Index> strides = tensor_strides(dims);
    const Index mode_stride = strides[mode - 1];
    const Index rows = dims[mode - 1];

    Matrix out(rows, idx.count());
    const double* src = t.data();
    for (Index c = 0; c < idx.count(); ++c) {
        Index base = 0;
        int pos = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (static_cast<int>(k) + 1 == mode) continue;
            base += (idx.decoded_at(c, pos++) - 1) * strides[k];
        }
        for (Index i = 0; i < rows; ++i)
            out(i, c) = src[base + i * mode_stride];
    }
    return out;
}

Matrix sampled_khatri_rao(const SampleIndexSet& idx, std::span<const Matrix> factors) {
    const int n_other = idx.n_other();
    if (static_cast<int>(factors.size()) != n_other)
        throw std::domain_error("sampled_khatri_rao: factor count mismatch");
    const Eigen::Index rank = factors.empty() ? 0 : factors[0].cols();
    for (const Matrix& f : factors)
        if (f.cols() != rank)
            throw std::domain_error("sampled_khatri_rao: factor column counts differ");

    Matrix z = Matrix::Ones(idx.count(), rank);
    // factors[l] holds the (n_other - l)-th co-mode (decreasing mode order);
    // multiplying left to right keeps the arithmetic order identical to the
    // full Khatri-Rao left fold.
    for (int l = 0; l < n_other; ++l) {
        const Matrix& f = factors[l];
        const int k = n_other - 1 - l;  // co-mode position in the decoded table
        for (Index c = 0; c < idx.count(); ++c) {
            const Index i = idx.decoded_at(c, k);
            if (i > f.rows())
                throw std::domain_error("sampled_khatri_rao: decoded index exceeds factor rows");
            z.row(c) = z.row(c).cwiseProduct(f.row(i - 1));
        }
    }
    return z;
}

}  // namespace rocp
