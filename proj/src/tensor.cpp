#include "rocp/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rocp {

namespace {

void check_dims(const Dims& dims) {
    if (dims.size() < 2)
        throw std::domain_error("tensor order must be at least 2");
    for (Index d : dims)
        if (d < 1)
            throw std::domain_error("tensor extents must be positive");
}

void check_mode(const Dims& dims, int mode) {
    if (mode < 1 || mode > static_cast<int>(dims.size()))
        throw std::domain_error("mode " + std::to_string(mode) + " out of range for order " +
                                std::to_string(dims.size()));
}

}  // namespace

DenseTensor::DenseTensor(Dims dims) : dims_(std::move(dims)) {
    check_dims(dims_);
    data_.assign(static_cast<std::size_t>(element_count(dims_)), 0.0);
}

DenseTensor::DenseTensor(Dims dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    check_dims(dims_);
    if (static_cast<Index>(data_.size()) != element_count(dims_))
        throw std::domain_error("data length does not match product of extents");
}

Index DenseTensor::flat_offset(std::span<const Index> multi_index) const {
    if (multi_index.size() != dims_.size())
        throw std::domain_error("multi-index order mismatch");
    Index off = 0;
    Index stride = 1;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        const Index i = multi_index[k];
        if (i < 1 || i > dims_[k])
            throw std::domain_error("multi-index out of range");
        off += (i - 1) * stride;
        stride *= dims_[k];
    }
    return off;
}

Index element_count(const Dims& dims) {
    Index n = 1;
    for (Index d : dims) n *= d;
    return n;
}

Index codomain_size(const Dims& dims, int mode) {
    check_mode(dims, mode);
    Index n = 1;
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (static_cast<int>(k) + 1 != mode) n *= dims[k];
    return n;
}

std::vector<Index> tensor_strides(const Dims& dims) {
    std::vector<Index> strides(dims.size());
    Index s = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        strides[k] = s;
        s *= dims[k];
    }
    return strides;
}

Index linear_index(std::span<const Index> multi_index, const Dims& dims, int mode) {
    check_mode(dims, mode);
    if (multi_index.size() != dims.size() - 1)
        throw std::domain_error("multi-index must cover all modes except the unfolding mode");
    Index j = 1;
    Index stride = 1;  // J_k, product of extents of preceding modes != n
    std::size_t pos = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<int>(k) + 1 == mode) continue;
        const Index i = multi_index[pos++];
        if (i < 1 || i > dims[k])
            throw std::domain_error("multi-index out of range");
        j += (i - 1) * stride;
        stride *= dims[k];
    }
    return j;
}

std::vector<Index> decode_index(Index j, const Dims& dims, int mode) {
    check_mode(dims, mode);
    if (j < 1 || j > codomain_size(dims, mode))
        throw std::domain_error("column index out of range");
    std::vector<Index> multi(dims.size() - 1);
    Index rem = j - 1;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (static_cast<int>(k) + 1 == mode) continue;
        multi[pos++] = rem % dims[k] + 1;
        rem /= dims[k];
    }
    return multi;
}

Matrix unfold(const DenseTensor& t, int mode) {
    const Dims& dims = t.dims();
    check_mode(dims, mode);
    const Index rows = dims[mode - 1];
    const Index cols = codomain_size(dims, mode);
    const std::vector<Index> strides = tensor_strides(dims);
    const Index mode_stride = strides[mode - 1];

    Matrix m(rows, cols);
    // Odometer over the co-modes; its increment order matches the J_k
    // column ordering, so j advances by one per step.
    std::vector<Index> counter(dims.size(), 0);
    Index base = 0;
    const double* src = t.data();
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i)
            m(i, j) = src[base + i * mode_stride];
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (static_cast<int>(k) + 1 == mode) continue;
            base += strides[k];
            if (++counter[k] < dims[k]) break;
            base -= dims[k] * strides[k];
            counter[k] = 0;
        }
    }
    return m;
}

DenseTensor fold(const Matrix& m, int mode, const Dims& dims) {
    check_dims(dims);
    check_mode(dims, mode);
    const Index rows = dims[mode - 1];
    const Index cols = codomain_size(dims, mode);
    if (m.rows() != rows || m.cols() != cols)
        throw std::domain_error("matrix shape does not match fold target");
    const std::vector<Index> strides = tensor_strides(dims);
    const Index mode_stride = strides[mode - 1];

    DenseTensor t(dims);
    std::vector<Index> counter(dims.size(), 0);
    Index base = 0;
    double* dst = t.data();
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i)
            dst[base + i * mode_stride] = m(i, j);
        for (std::size_t k = 0; k < dims.size(); ++k) {
            if (static_cast<int>(k) + 1 == mode) continue;
            base += strides[k];
            if (++counter[k] < dims[k]) break;
            base -= dims[k] * strides[k];
            counter[k] = 0;
        }
    }
    return t;
}

double frobenius_norm(const DenseTensor& t) {
    double sum = 0.0;
    for (double v : t.values()) sum += v * v;
    return std::sqrt(sum);
}

}  // namespace rocp
