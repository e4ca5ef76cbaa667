#pragma once

#include "rocp/tensor.hpp"

#include <random>
#include <vector>

namespace rocp {

using Rng = std::mt19937_64;

/// Rank-R CP model: N loading matrices, factor n of shape I_n x R.
struct KruskalModel {
    int rank = 0;
    std::vector<Matrix> factors;

    int order() const { return static_cast<int>(factors.size()); }
    Dims dims() const;

    /// Throws if factor shapes are inconsistent or entries are not finite.
    void validate() const;
};

/// Model with i.i.d. standard-normal factor entries.
KruskalModel random_model(const Dims& dims, int rank, Rng& rng);

/// Factors other than `mode`, ordered U(N), ..., U(mode+1), U(mode-1), ..., U(1).
/// This ordering keeps khatri_rao_list row indexing consistent with
/// decode_index on `mode`.
std::vector<Matrix> factors_excluding(const KruskalModel& m, int mode);

/// Dense tensor represented by the model.
DenseTensor reconstruct(const KruskalModel& m, const Dims& dims);

/// 1 - |x_hat - x|_F / |x|_F. Throws on zero-norm x.
double fitness(const DenseTensor& x, const DenseTensor& x_hat);

/// fitness(x, reconstruct(m)).
double model_fitness(const DenseTensor& x, const KruskalModel& m);

}  // namespace rocp
