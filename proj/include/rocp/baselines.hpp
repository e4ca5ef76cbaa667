#pragma once

#include "rocp/kruskal.hpp"
#include "rocp/rocp.hpp"

namespace rocp {

struct AlsOptions {
    double tol = 1e-4;
    int max_iters = 50;
};

/// Batch CP-ALS with full Khatri-Rao normal equations; the Gram matrix is
/// assembled from the Hadamard product of the factor Grams. Columns are
/// normalized each sweep with the norms absorbed into the last mode.
/// Starts from `init` when given, otherwise from a random model.
KruskalModel cp_als(const DenseTensor& x, int rank, const AlsOptions& opts,
                    const KruskalModel* init, Rng& rng);

/// Re-decomposition from a fresh random initialization.
KruskalModel batch_cold(const DenseTensor& x, int rank, const AlsOptions& opts, Rng& rng);

/// Re-decomposition warm-started from the previous model; the temporal
/// factor is padded for the new rows by a least-squares solve on the new
/// slab before the sweeps run.
KruskalModel batch_hot(const DenseTensor& x, int rank, const AlsOptions& opts,
                       const KruskalModel& prev);

/// Exact complementary matrices of a decomposed tensor: P(n) = X(n) Z(n),
/// Q(n) = Z(n)^T Z(n) over the full co-domain (no sampling).
ComplementaryState online_full_init(const DenseTensor& x_init, const KruskalModel& model);

/// Streaming update with full (unsampled) Khatri-Rao products; the exact
/// analog of the sampled update, and identical to it when the sampling
/// enumerates every column.
void online_full_update(ComplementaryState& state, KruskalModel& model, const DenseTensor& x_new);

}  // namespace rocp
