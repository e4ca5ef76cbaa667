#pragma once

#include "rocp/tensor.hpp"

#include <span>

namespace rocp {

/// Column-wise Kronecker product of a (M x R) and b (P x R), giving MP x R.
/// Row p + (m-1)*P (1-based) is the elementwise product a(m,:) * b(p,:),
/// so the second operand's row index varies fastest.
Matrix khatri_rao(const Matrix& a, const Matrix& b);

/// Left fold of khatri_rao over a nonempty list sharing a column count.
/// The last matrix in the list varies fastest in the row indexing.
Matrix khatri_rao_list(std::span<const Matrix> ms);

/// Elementwise product of two equally shaped matrices.
Matrix hadamard(const Matrix& a, const Matrix& b);

}  // namespace rocp
