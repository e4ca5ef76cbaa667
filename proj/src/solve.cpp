#include "rocp/solve.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace rocp {

Matrix solve_gram(const Matrix& gram, const Matrix& rhs, SolveInfo* info) {
    if (gram.rows() != gram.cols())
        throw std::domain_error("solve_gram: gram matrix must be square");
    if (rhs.cols() != gram.rows())
        throw std::domain_error("solve_gram: rhs column count must match gram size");

    // The Gram matrix is small (R x R), so an exact symmetric eigen
    // decomposition is an affordable condition estimate.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();

    if (hi <= 0.0) {
        // Zero (or negative-definite, impossible for a Gram) matrix: the
        // sampled system carries no information, return the zero solution.
        if (info) info->regularized = true;
        return Matrix::Zero(rhs.rows(), rhs.cols());
    }

    Matrix g = gram;
    if (lo <= 0.0 || hi / lo > kGramConditionLimit) {
        const double lambda = 1e-12 * gram.trace();
        g.diagonal().array() += lambda;
        if (info) info->regularized = true;
    }
    return g.ldlt().solve(rhs.transpose()).transpose();
}

Matrix solve_sampled_ls(const Matrix& z_s, const Matrix& x_s, SolveInfo* info) {
    if (x_s.cols() != z_s.rows())
        throw std::domain_error("solve_sampled_ls: sample counts of z_s and x_s differ");
    if (info && z_s.rows() < z_s.cols()) info->underdetermined = true;
    const Matrix gram = z_s.transpose() * z_s;
    const Matrix rhs = x_s * z_s;
    return solve_gram(gram, rhs, info);
}

}  // namespace rocp
