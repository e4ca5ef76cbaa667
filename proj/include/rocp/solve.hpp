#pragma once

#include "rocp/tensor.hpp"

namespace rocp {

/// Flags raised by the normal-equation solvers.
struct SolveInfo {
    bool regularized = false;      // Tikhonov fallback was applied
    bool underdetermined = false;  // fewer sampled rows than rank
};

/// Condition-estimate threshold above which the Gram matrix is treated as
/// singular to working precision.
inline constexpr double kGramConditionLimit = 1e12;

/// Solves U * gram = rhs for U (rhs is I x R, gram is R x R symmetric PSD)
/// by a symmetric factorization. Falls back to gram + 1e-12 trace(gram) I
/// when the condition estimate exceeds kGramConditionLimit.
Matrix solve_gram(const Matrix& gram, const Matrix& rhs, SolveInfo* info = nullptr);

/// arg min_U | z_s U^T - x_s^T |_F via normal equations:
/// U = x_s z_s (z_s^T z_s)^-1, with z_s (s x R) and x_s (I x s).
Matrix solve_sampled_ls(const Matrix& z_s, const Matrix& x_s, SolveInfo* info = nullptr);

}  // namespace rocp
