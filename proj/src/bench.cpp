#include "rocp/bench.hpp"

#include "rocp/baselines.hpp"
#include "rocp/cprand.hpp"
#include "rocp/rocp.hpp"
#include "rocp/synthetic.hpp"
#include "rocp/tensor_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace rocp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Rng make_rng(std::uint64_t seed, int trial, int stream) {
    std::seed_seq seq{static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(trial),
                      static_cast<std::uint64_t>(stream)};
    return Rng(seq);
}

/// Concatenation on the last mode; slabs are contiguous in the flat layout.
void append_slab(DenseTensor& x, const DenseTensor& slab) {
    Dims dims = x.dims();
    dims.back() += slab.dims().back();
    std::vector<double>& data = x.values();
    data.insert(data.end(), slab.values().begin(), slab.values().end());
    x = DenseTensor(std::move(dims), std::move(data));
}

TrialResult run_cell(const BenchConfig& cfg, Algorithm algo, int trial, const DenseTensor& full,
                     const StreamSplit& split) {
    TrialResult row;
    row.trial = trial;
    row.algorithm = algo;
    Rng rng = make_rng(cfg.seed, trial, static_cast<int>(algo) + 1);

    auto timed = [&row](auto&& fn) {
        const auto start = Clock::now();
        fn();
        const double dt = seconds_since(start);
        row.update_seconds.push_back(dt);
        row.stream_seconds += dt;
        ++row.updates;
    };

    switch (algo) {
        case Algorithm::rocp: {
            CprandOptions opts{cfg.samples, cfg.rocp_tol, cfg.rocp_max_iters};
            const Index s = cfg.samples > 0 ? cfg.samples : auto_sample_count(cfg.rank);
            const auto start = Clock::now();
            InitResult init = cprand_decompose(split.init, cfg.rank, opts, rng);
            RocpStream stream(std::move(init), s);
            row.init_seconds = seconds_since(start);
            for (const DenseTensor& batch : split.batches)
                timed([&] { stream.consume(batch, rng); });
            row.fitness = model_fitness(full, stream.model());
            break;
        }
        case Algorithm::online_full: {
            AlsOptions opts{cfg.online_tol, cfg.online_max_iters};
            const auto start = Clock::now();
            KruskalModel model = cp_als(split.init, cfg.rank, opts, nullptr, rng);
            ComplementaryState state = online_full_init(split.init, model);
            row.init_seconds = seconds_since(start);
            for (const DenseTensor& batch : split.batches)
                timed([&] { online_full_update(state, model, batch); });
            row.fitness = model_fitness(full, model);
            break;
        }
        case Algorithm::batch_hot: {
            AlsOptions opts{cfg.als_tol, cfg.als_max_iters};
            const auto start = Clock::now();
            KruskalModel model = cp_als(split.init, cfg.rank, opts, nullptr, rng);
            row.init_seconds = seconds_since(start);
            DenseTensor accum = split.init;
            for (const DenseTensor& batch : split.batches) {
                append_slab(accum, batch);
                timed([&] { model = batch_hot(accum, cfg.rank, opts, model); });
            }
            row.fitness = model_fitness(full, model);
            break;
        }
        case Algorithm::batch_cold: {
            AlsOptions opts{cfg.als_tol, cfg.als_max_iters};
            const auto start = Clock::now();
            KruskalModel model = cp_als(split.init, cfg.rank, opts, nullptr, rng);
            row.init_seconds = seconds_since(start);
            DenseTensor accum = split.init;
            for (const DenseTensor& batch : split.batches) {
                append_slab(accum, batch);
                timed([&] { model = batch_cold(accum, cfg.rank, opts, rng); });
            }
            row.fitness = model_fitness(full, model);
            break;
        }
    }
    return row;
}

int thread_cap() {
    if (const char* env = std::getenv("ROCP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

}  // namespace

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::rocp: return "rocp";
        case Algorithm::online_full: return "online_full";
        case Algorithm::batch_hot: return "batch_hot";
        case Algorithm::batch_cold: return "batch_cold";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
    for (Algorithm a : {Algorithm::rocp, Algorithm::online_full, Algorithm::batch_hot,
                        Algorithm::batch_cold})
        if (name == algorithm_name(a)) return a;
    return std::nullopt;
}

std::vector<Aggregate> aggregate_rows(const std::vector<TrialResult>& rows) {
    std::vector<Aggregate> out;
    std::vector<Algorithm> seen;
    for (const TrialResult& r : rows)
        if (std::find(seen.begin(), seen.end(), r.algorithm) == seen.end())
            seen.push_back(r.algorithm);

    for (Algorithm a : seen) {
        std::vector<const TrialResult*> group;
        for (const TrialResult& r : rows)
            if (r.algorithm == a) group.push_back(&r);
        const double n = static_cast<double>(group.size());

        auto mean_std = [&](auto field) {
            double mean = 0.0;
            for (const TrialResult* r : group) mean += field(*r);
            mean /= n;
            double var = 0.0;
            for (const TrialResult* r : group) {
                const double d = field(*r) - mean;
                var += d * d;
            }
            const double std_dev = group.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
            return std::pair<double, double>(mean, std_dev);
        };

        Aggregate agg;
        agg.algorithm = a;
        std::tie(agg.fitness_mean, agg.fitness_std) =
            mean_std([](const TrialResult& r) { return r.fitness; });
        std::tie(agg.init_mean, agg.init_std) =
            mean_std([](const TrialResult& r) { return r.init_seconds; });
        std::tie(agg.stream_mean, agg.stream_std) =
            mean_std([](const TrialResult& r) { return r.stream_seconds; });
        out.push_back(agg);
    }
    return out;
}

BenchReport run_benchmark(const BenchConfig& cfg) {
    if (cfg.trials < 1)
        throw std::domain_error("run_benchmark: trials must be positive");
    if (cfg.algorithms.empty())
        throw std::domain_error("run_benchmark: no algorithms selected");
    if (cfg.input_path.empty() && cfg.dims.size() < 2)
        throw std::domain_error("run_benchmark: dims required when no input tensor is given");

    BenchReport report;
    report.rows.resize(cfg.trials * cfg.algorithms.size());

    std::atomic<int> next_trial{0};
    auto worker = [&] {
        while (true) {
            const int trial = next_trial.fetch_add(1);
            if (trial >= cfg.trials) break;
            Rng data_rng = make_rng(cfg.seed, trial, 0);
            DenseTensor full = cfg.input_path.empty()
                                   ? gen_synthetic(cfg.dims, cfg.rank, cfg.sir_db, data_rng).x
                                   : read_tensor_file(cfg.input_path);
            const StreamSplit split = split_stream(full, cfg.init_fraction, cfg.batch_size);
            for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
                report.rows[trial * cfg.algorithms.size() + a] =
                    run_cell(cfg, cfg.algorithms[a], trial, full, split);
        }
    };

    const int n_threads = std::min<int>(thread_cap(), cfg.trials);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    report.aggregates = aggregate_rows(report.rows);
    return report;
}

namespace {

void csv_row(std::ostream& out, const std::string& label, const std::string& algo, double fitness,
             double init_s, double stream_s, const std::string& updates, double per_update) {
    out << label << ',' << algo << ',' << fitness << ',' << init_s << ',' << stream_s << ','
        << updates << ',' << per_update << '\n';
}

}  // namespace

void write_csv(const BenchReport& report, std::ostream& out) {
    const auto flags = out.flags();
    out.precision(17);
    out << "trial,algorithm,fitness,init_seconds,stream_seconds,updates,seconds_per_update\n";
    for (const TrialResult& r : report.rows)
        csv_row(out, std::to_string(r.trial), algorithm_name(r.algorithm), r.fitness,
                r.init_seconds, r.stream_seconds, std::to_string(r.updates),
                r.seconds_per_update());
    for (const Aggregate& a : report.aggregates) {
        const auto& group = report.rows;
        double per_update_mean = 0.0;
        int n = 0;
        for (const TrialResult& r : group)
            if (r.algorithm == a.algorithm) {
                per_update_mean += r.seconds_per_update();
                ++n;
            }
        per_update_mean /= std::max(n, 1);
        csv_row(out, "mean", algorithm_name(a.algorithm), a.fitness_mean, a.init_mean,
                a.stream_mean, "", per_update_mean);
        csv_row(out, "std", algorithm_name(a.algorithm), a.fitness_std, a.init_std, a.stream_std,
                "", 0.0);
    }
    out.flags(flags);
}

void write_updates_csv(const BenchReport& report, std::ostream& out) {
    const auto flags = out.flags();
    out.precision(17);
    out << "trial,algorithm,update,seconds\n";
    for (const TrialResult& r : report.rows)
        for (std::size_t u = 0; u < r.update_seconds.size(); ++u)
            out << r.trial << ',' << algorithm_name(r.algorithm) << ',' << u << ','
                << r.update_seconds[u] << '\n';
    out.flags(flags);
}

}  // namespace rocp
