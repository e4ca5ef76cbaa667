#pragma once

#include "rocp/kruskal.hpp"
#include "rocp/sampling.hpp"

#include <vector>

namespace rocp {

struct CprandOptions {
    Index samples = 0;     // 0 = auto_sample_count(rank)
    double tol = 1e-4;     // stop when the tracked best fitness improves by less
    int max_iters = 100;
};

/// Outcome of the randomized ALS on the initial tensor. `model` is the
/// best iterate observed; the sampled Khatri-Rao matrices are rebuilt from
/// its factors with fresh draws, one per non-temporal mode.
struct InitResult {
    KruskalModel model;
    std::vector<Matrix> best_sampled_kr;       // n = 1..N-1, each s x R
    std::vector<Matrix> best_sampled_factors;  // U(n) of the best iterate, n = 1..N-1
    double best_fitness = 0.0;
    int iterations = 0;
    bool regularized = false;
};

/// Per-sweep record of the index sets used, for replay-style tests.
struct CprandTrace {
    std::vector<std::vector<SampleIndexSet>> sweeps;  // [sweep][mode-1]
};

/// Randomized CP-ALS: per sweep and mode, solve the row-sampled
/// least-squares problem from a fresh uniform draw; track the iterate with
/// the highest full-tensor fitness.
InitResult cprand_decompose(const DenseTensor& x, int rank, const CprandOptions& opts, Rng& rng,
                            CprandTrace* trace = nullptr);

}  // namespace rocp
