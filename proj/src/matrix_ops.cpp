#include "rocp/matrix_ops.hpp"

#include <stdexcept>

namespace rocp {

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw std::domain_error("khatri_rao: column counts differ");
    const auto m = a.rows();
    const auto p = b.rows();
    Matrix out(m * p, a.cols());
    for (Eigen::Index r = 0; r < a.cols(); ++r)
        for (Eigen::Index i = 0; i < m; ++i)
            out.col(r).segment(i * p, p) = a(i, r) * b.col(r);
    return out;
}

Matrix khatri_rao_list(std::span<const Matrix> ms) {
    if (ms.empty())
        throw std::domain_error("khatri_rao_list: empty list");
    Matrix acc = ms[0];
    for (std::size_t i = 1; i < ms.size(); ++i)
        acc = khatri_rao(acc, ms[i]);
    return acc;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::domain_error("hadamard: shape mismatch");
    return a.cwiseProduct(b);
}

}  // namespace rocp
