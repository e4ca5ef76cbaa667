#pragma once

#include "rocp/tensor.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rocp {

enum class Algorithm { rocp, online_full, batch_hot, batch_cold };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);

struct BenchConfig {
    Dims dims;
    int rank = 5;
    Index samples = 0;  // 0 = 10 R ln R rule
    double init_fraction = 0.2;
    Index batch_size = 1;
    std::vector<Algorithm> algorithms = {Algorithm::rocp, Algorithm::online_full,
                                         Algorithm::batch_hot, Algorithm::batch_cold};
    int trials = 10;
    std::uint64_t seed = 0;
    std::optional<double> sir_db = 20.0;

    double rocp_tol = 1e-4;  // randomized initialization
    int rocp_max_iters = 100;
    double als_tol = 1e-4;  // batch cold/hot
    int als_max_iters = 50;
    double online_tol = 1e-8;  // full-KR online baseline initialization
    int online_max_iters = 100;

    std::string input_path;  // load this tensor instead of generating
};

struct TrialResult {
    int trial = 0;
    Algorithm algorithm = Algorithm::rocp;
    double fitness = 0.0;
    double init_seconds = 0.0;
    double stream_seconds = 0.0;
    Index updates = 0;
    std::vector<double> update_seconds;

    double seconds_per_update() const {
        return updates > 0 ? stream_seconds / static_cast<double>(updates) : 0.0;
    }
};

/// Per-algorithm mean and (sample) standard deviation over trials.
struct Aggregate {
    Algorithm algorithm = Algorithm::rocp;
    double fitness_mean = 0.0, fitness_std = 0.0;
    double init_mean = 0.0, init_std = 0.0;
    double stream_mean = 0.0, stream_std = 0.0;
};

struct BenchReport {
    std::vector<TrialResult> rows;
    std::vector<Aggregate> aggregates;
};

/// Runs every (trial, algorithm) cell of the configured study. Trials run
/// in parallel up to the ROCP_THREADS environment cap (default serial, to
/// keep wall-clock measurements honest); fitness values are independent of
/// the parallelism because every cell derives its own rng from the seed.
BenchReport run_benchmark(const BenchConfig& cfg);

/// Aggregates recomputed from the rows (used both by run_benchmark and the
/// report-integrity checks).
std::vector<Aggregate> aggregate_rows(const std::vector<TrialResult>& rows);

/// One row per (trial, algorithm) with columns trial, algorithm, fitness,
/// init_seconds, stream_seconds, updates, seconds_per_update, followed by
/// mean/std rows per algorithm.
void write_csv(const BenchReport& report, std::ostream& out);

/// Per-update time series: trial, algorithm, update, seconds.
void write_updates_csv(const BenchReport& report, std::ostream& out);

}  // namespace rocp
