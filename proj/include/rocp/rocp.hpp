#pragma once

#include "rocp/cprand.hpp"
#include "rocp/kruskal.hpp"
#include "rocp/sampling.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace rocp {

/// Running accumulators P(n) = X_s(n) Z_s(n) and Q(n) = Z_s(n)^T Z_s(n)
/// for every non-temporal mode, plus the accumulated temporal length.
struct ComplementaryState {
    std::vector<Matrix> p;  // I_n x R, n = 1..N-1
    std::vector<Matrix> q;  // R x R
    Index t_len = 0;
    Index sample_count = 0;
    Dims dims_head;

    /// Bytes held by the P/Q blocks; constant along a stream.
    std::size_t byte_size() const;
};

struct RocpConfig {
    /// Keep the literal P(n) <- U_best(n) initialization instead of the
    /// consistent P(n) <- U_best(n) Q(n); for fidelity experiments only.
    bool literal_init = false;
};

/// Builds the complementary matrices from the initialization result.
/// Q(n) = Z_best(n)^T Z_best(n); P(n) = U_best(n) Q(n), so that the first
/// P Q^-1 solve reproduces the initial loadings.
ComplementaryState init_state(const InitResult& init, Index s, const RocpConfig& cfg = {});

/// Result of the temporal-mode solve for one incoming batch.
struct LastModeUpdate {
    Matrix u_new;        // I_N,new x R, new temporal rows
    SampleIndexSet idx;  // the fresh draw used
    Matrix z_s;          // s x R sampled Khatri-Rao of the non-temporal factors
    bool regularized = false;
};

/// Solves for the new temporal rows against a fresh uniform draw over the
/// batch's last-mode co-domain. The model's old temporal rows are not touched.
LastModeUpdate update_last_mode(const KruskalModel& model, const DenseTensor& x_new, Index s,
                                Rng& rng);

/// Deterministic variant taking an explicit index set (drawn against
/// x_new's dims), used by the exhaustive-sampling and replay tests.
LastModeUpdate update_last_mode_with(const KruskalModel& model, const DenseTensor& x_new,
                                     SampleIndexSet idx);

/// Per-batch record of the sampled systems, enough to recompute the P/Q
/// accumulation directly from the concatenated samples.
struct UpdateTrace {
    std::vector<SampleIndexSet> mode_idx;  // n = 1..N-1
    std::vector<Matrix> mode_z;            // Z_s(n)^new, s x R
    std::vector<Matrix> mode_x;            // X_s(n)^new, I_n x s
};

/// Sampled system built for one non-temporal mode of one batch.
struct ModeUpdate {
    Matrix z_new;  // s x R
    Matrix x_s;    // I_n x s
    bool regularized = false;
};

/// One mode's accumulation against an explicit index set (drawn against
/// x_new's dims, so the decoded last-mode component selects rows of
/// u_new): P += X_s Z_new, Q += Z_new^T Z_new, then U = P Q^-1.
ModeUpdate update_mode_with(ComplementaryState& state, KruskalModel& model,
                            const DenseTensor& x_new, const Matrix& u_new,
                            const SampleIndexSet& idx);

/// Accumulates the new batch into P(n)/Q(n) and re-solves every
/// non-temporal loading as P Q^-1. Sampling is restricted to the new slab:
/// a fresh draw per mode over x_new's co-domain.
void update_other_modes(ComplementaryState& state, KruskalModel& model, const DenseTensor& x_new,
                        const Matrix& u_new, Rng& rng, UpdateTrace* trace = nullptr);

/// Single-owner driver around the per-batch updates. The temporal factor
/// grows geometrically so steady-state updates do not reallocate it.
class RocpStream {
public:
    RocpStream(InitResult init, Index s, RocpConfig cfg = {});

    /// Applies one incoming batch (Algorithm 2: temporal solve, append,
    /// non-temporal accumulation).
    void consume(const DenseTensor& x_new, Rng& rng, UpdateTrace* trace = nullptr);

    /// Immutable snapshot of the current model (temporal factor trimmed to
    /// its used rows).
    KruskalModel model() const;

    const ComplementaryState& state() const { return state_; }
    Index t_len() const { return state_.t_len; }
    bool regularized() const { return regularized_; }

private:
    KruskalModel head_model_;  // temporal factor excluded
    Matrix temporal_;          // capacity rows >= t_len
    ComplementaryState state_;
    RocpConfig cfg_;
    bool regularized_ = false;
};

/// Algorithm 4: decompose the initial tensor, initialize the complementary
/// matrices, then fold in every batch.
KruskalModel rocp_run(const DenseTensor& x_init, std::span<const DenseTensor> batches, int rank,
                      const CprandOptions& init_opts, Rng& rng, const RocpConfig& cfg = {});

/// State persistence: matrix records in the tensor file format, in the
/// order P(1..N-1), Q(1..N-1), followed by the 64-bit temporal length.
void save_state(const ComplementaryState& state, std::ostream& out);
ComplementaryState load_state(std::istream& in);

}  // namespace rocp
