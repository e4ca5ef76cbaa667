#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace rocp {

using Matrix = Eigen::MatrixXd;
using Index = std::int64_t;
using Dims = std::vector<Index>;

/// Dense N-way tensor of doubles, stored first-index-fastest:
/// element (i_1..i_N), 1-based, lives at flat offset
/// sum_k (i_k - 1) * prod_{m<k} I_m.
class DenseTensor {
public:
    DenseTensor() = default;

    /// Zero-filled tensor of the given extents.
    explicit DenseTensor(Dims dims);

    /// Takes ownership of a flat value array laid out first-index-fastest.
    DenseTensor(Dims dims, std::vector<double> data);

    const Dims& dims() const { return dims_; }
    int order() const { return static_cast<int>(dims_.size()); }
    Index size() const { return static_cast<Index>(data_.size()); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double operator[](Index flat) const { return data_[static_cast<std::size_t>(flat)]; }
    double& operator[](Index flat) { return data_[static_cast<std::size_t>(flat)]; }

    /// 0-based flat offset of a full 1-based multi-index.
    Index flat_offset(std::span<const Index> multi_index) const;

    /// Value at a full 1-based multi-index.
    double at(std::span<const Index> multi_index) const { return data_[flat_offset(multi_index)]; }
    double& at(std::span<const Index> multi_index) { return data_[flat_offset(multi_index)]; }

private:
    Dims dims_;
    std::vector<double> data_;
};

/// Number of elements, prod I_n.
Index element_count(const Dims& dims);

/// Size of the mode-n co-domain, prod_{k != n} I_k. mode is 1-based.
Index codomain_size(const Dims& dims, int mode);

/// Per-mode flat strides of the first-index-fastest layout.
std::vector<Index> tensor_strides(const Dims& dims);

/// Column index j (1-based) of the mode-n unfolding for a multi-index over
/// the modes other than n, given in increasing mode order, 1-based.
Index linear_index(std::span<const Index> multi_index, const Dims& dims, int mode);

/// Inverse of linear_index: per-mode 1-based indices {i_k : k != n} in
/// increasing mode order for column j of the mode-n unfolding.
std::vector<Index> decode_index(Index j, const Dims& dims, int mode);

/// Mode-n unfolding, I_n x prod_{k != n} I_k. mode is 1-based.
Matrix unfold(const DenseTensor& t, int mode);

/// Inverse of unfold.
DenseTensor fold(const Matrix& m, int mode, const Dims& dims);

double frobenius_norm(const DenseTensor& t);

}  // namespace rocp
