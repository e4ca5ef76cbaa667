#pragma once

#include "rocp/kruskal.hpp"
#include "rocp/tensor.hpp"

#include <span>
#include <vector>

namespace rocp {

/// Sampled column indices of a mode-n unfolding, plus their decoded
/// per-mode multi-indices. Duplicates are permitted (sampling with
/// replacement). Decoded rows are stored in increasing mode order.
struct SampleIndexSet {
    int mode = 0;  // 1-based
    Dims dims;     // dims of the tensor the indices were drawn against
    std::vector<Index> rows;      // s column indices j, 1-based
    std::vector<Index> decoded;   // s x (N-1), row-major, 1-based

    Index count() const { return static_cast<Index>(rows.size()); }
    int n_other() const { return static_cast<int>(dims.size()) - 1; }

    /// Decoded index of sample c for the k-th co-mode (increasing mode order).
    Index decoded_at(Index c, int k) const {
        return decoded[static_cast<std::size_t>(c) * n_other() + k];
    }

    /// Index set over explicitly given column indices (validated and decoded).
    static SampleIndexSet from_rows(const Dims& dims, int mode, std::vector<Index> rows);

    /// Every column of the mode-n co-domain, in order.
    static SampleIndexSet all_columns(const Dims& dims, int mode);
};

/// s = max(R, ceil(10 R ln R)), the default sample-count rule.
Index auto_sample_count(int rank);

/// s indices drawn uniformly with replacement from 1..prod_{k != n} I_k.
SampleIndexSet draw_samples(const Dims& dims, int mode, Index s, Rng& rng);

/// Columns of unfold(t, n) selected by idx, as an I_n x s matrix. Columns
/// are gathered fiber by fiber; the full unfolding is never formed.
Matrix sample_unfolding(const DenseTensor& t, const SampleIndexSet& idx);

/// Rows idx of the Khatri-Rao product of `factors` (given in the
/// factors_excluding order: decreasing mode, skipping idx.mode), built
/// directly from factor rows. Works in O(s R) space.
Matrix sampled_khatri_rao(const SampleIndexSet& idx, std::span<const Matrix> factors);

}  // namespace rocp
