#include "rocp/baselines.hpp"
#include "rocp/bench.hpp"
#include "rocp/cprand.hpp"
#include "rocp/errors.hpp"
#include "rocp/rocp.hpp"
#include "rocp/synthetic.hpp"
#include "rocp/tensor_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

rocp::Dims parse_dims(const std::vector<std::int64_t>& raw) {
    return rocp::Dims(raw.begin(), raw.end());
}

std::optional<double> parse_sir(const std::string& sir) {
    if (sir == "none") return std::nullopt;
    return std::stod(sir);
}

int cmd_gen(const std::vector<std::int64_t>& dims, int rank, const std::string& sir,
            std::uint64_t seed, const std::string& out_path) {
    rocp::Rng rng(seed);
    const rocp::SyntheticTensor data = rocp::gen_synthetic(parse_dims(dims), rank, parse_sir(sir), rng);
    rocp::write_tensor_file(data.x, out_path);
    std::cout << "wrote " << out_path << " (" << data.x.size() << " values)\n";
    return 0;
}

int cmd_decompose(const std::string& path, const std::string& algo, int rank, double tol,
                  int max_iters, std::uint64_t seed) {
    const rocp::DenseTensor x = rocp::read_tensor_file(path);
    rocp::Rng rng(seed);
    double fit = 0.0;
    int iters = 0;
    if (algo == "cp_als") {
        rocp::AlsOptions opts{tol, max_iters};
        const rocp::KruskalModel model = rocp::cp_als(x, rank, opts, nullptr, rng);
        fit = rocp::model_fitness(x, model);
    } else if (algo == "cprand") {
        rocp::CprandOptions opts{0, tol, max_iters};
        const rocp::InitResult res = rocp::cprand_decompose(x, rank, opts, rng);
        fit = res.best_fitness;
        iters = res.iterations;
    } else {
        std::cerr << "unknown algorithm: " << algo << " (expected cp_als or cprand)\n";
        return kExitConfig;
    }
    std::cout << "fitness " << fit;
    if (iters > 0) std::cout << " after " << iters << " sweeps";
    std::cout << '\n';
    return 0;
}

int cmd_stream(const std::string& path, int rank, std::int64_t samples, double init_frac,
               std::int64_t batch, std::uint64_t seed, const std::string& csv_path) {
    rocp::BenchConfig cfg;
    cfg.input_path = path;
    cfg.rank = rank;
    cfg.samples = samples;
    cfg.init_fraction = init_frac;
    cfg.batch_size = batch;
    cfg.algorithms = {rocp::Algorithm::rocp};
    cfg.trials = 1;
    cfg.seed = seed;
    const rocp::BenchReport report = rocp::run_benchmark(cfg);
    const rocp::TrialResult& row = report.rows.front();
    std::cout << "fitness " << row.fitness << ", init " << row.init_seconds << " s, stream "
              << row.stream_seconds << " s over " << row.updates << " updates\n";
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) {
            std::cerr << "cannot open " << csv_path << '\n';
            return kExitConfig;
        }
        rocp::write_csv(report, out);
    }
    return 0;
}

int cmd_bench(rocp::BenchConfig cfg, const std::vector<std::string>& algo_names,
              const std::string& csv_path, const std::string& updates_csv_path) {
    cfg.algorithms.clear();
    for (const std::string& name : algo_names) {
        const auto algo = rocp::parse_algorithm(name);
        if (!algo) {
            std::cerr << "unknown algorithm: " << name << '\n';
            return kExitConfig;
        }
        cfg.algorithms.push_back(*algo);
    }
    const rocp::BenchReport report = rocp::run_benchmark(cfg);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) {
            std::cerr << "cannot open " << csv_path << '\n';
            return kExitConfig;
        }
        rocp::write_csv(report, out);
    } else {
        rocp::write_csv(report, std::cout);
    }
    if (!updates_csv_path.empty()) {
        std::ofstream out(updates_csv_path);
        if (!out) {
            std::cerr << "cannot open " << updates_csv_path << '\n';
            return kExitConfig;
        }
        rocp::write_updates_csv(report, out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized online CP decomposition toolkit"};
    app.require_subcommand(1);

    // gen
    std::vector<std::int64_t> gen_dims;
    int gen_rank = 5;
    std::string gen_sir = "20";
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic low-rank tensor file");
    gen->add_option("--dims", gen_dims, "Tensor extents")->required()->expected(2, 16);
    gen->add_option("--rank", gen_rank, "CP rank of the planted model");
    gen->add_option("--sir-db", gen_sir, "Signal-to-interference rate in dB, or 'none'");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "Output tensor file")->required();

    // decompose
    std::string dec_path, dec_algo = "cp_als";
    int dec_rank = 5, dec_iters = 50;
    double dec_tol = 1e-4;
    std::uint64_t dec_seed = 0;
    CLI::App* dec = app.add_subcommand("decompose", "One-shot decomposition of a tensor file");
    dec->add_option("file", dec_path, "Input tensor file")->required();
    dec->add_option("--algo", dec_algo, "cp_als or cprand");
    dec->add_option("--rank", dec_rank, "CP rank");
    dec->add_option("--tol", dec_tol, "Fitness-change stopping tolerance");
    dec->add_option("--max-iters", dec_iters, "Sweep limit");
    dec->add_option("--seed", dec_seed, "RNG seed");

    // stream
    std::string str_path, str_csv;
    int str_rank = 5;
    std::int64_t str_samples = 0, str_batch = 1;
    double str_frac = 0.2;
    std::uint64_t str_seed = 0;
    CLI::App* str = app.add_subcommand("stream", "Stream a tensor file through the sampled online update");
    str->add_option("file", str_path, "Input tensor file")->required();
    str->add_option("--rank", str_rank, "CP rank");
    str->add_option("--samples", str_samples, "Sample count (0 = 10 R ln R rule)");
    str->add_option("--init-frac", str_frac, "Fraction of slices used for initialization");
    str->add_option("--batch", str_batch, "Slices per update");
    str->add_option("--seed", str_seed, "RNG seed");
    str->add_option("--csv", str_csv, "Write the run report to this CSV");

    // bench
    rocp::BenchConfig bench_cfg;
    std::vector<std::int64_t> bench_dims;
    std::vector<std::string> bench_algos = {"rocp", "online_full", "batch_hot", "batch_cold"};
    std::string bench_sir = "20", bench_csv, bench_updates_csv;
    CLI::App* bench = app.add_subcommand("bench", "Multi-trial benchmark of the four algorithms");
    bench->add_option("--dims", bench_dims, "Tensor extents")->expected(2, 16);
    bench->add_option("--input", bench_cfg.input_path, "Tensor file (instead of --dims generation)");
    bench->add_option("--rank", bench_cfg.rank, "CP rank");
    bench->add_option("--samples", bench_cfg.samples, "Sample count (0 = 10 R ln R rule)");
    bench->add_option("--init-frac", bench_cfg.init_fraction, "Initial-slice fraction");
    bench->add_option("--batch", bench_cfg.batch_size, "Slices per update");
    bench->add_option("--algorithms", bench_algos, "Subset of rocp online_full batch_hot batch_cold");
    bench->add_option("--trials", bench_cfg.trials, "Trial count");
    bench->add_option("--seed", bench_cfg.seed, "Base RNG seed");
    bench->add_option("--sir-db", bench_sir, "SIR in dB, or 'none'");
    bench->add_option("--als-tol", bench_cfg.als_tol, "Batch ALS tolerance");
    bench->add_option("--als-max-iters", bench_cfg.als_max_iters, "Batch ALS sweep limit");
    bench->add_option("--rocp-tol", bench_cfg.rocp_tol, "Randomized init tolerance");
    bench->add_option("--rocp-max-iters", bench_cfg.rocp_max_iters, "Randomized init sweep limit");
    bench->add_option("--csv", bench_csv, "Report CSV path (stdout when omitted)");
    bench->add_option("--updates-csv", bench_updates_csv, "Per-update time series CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed())
            return cmd_gen(gen_dims, gen_rank, gen_sir, gen_seed, gen_out);
        if (dec->parsed())
            return cmd_decompose(dec_path, dec_algo, dec_rank, dec_tol, dec_iters, dec_seed);
        if (str->parsed())
            return cmd_stream(str_path, str_rank, str_samples, str_frac, str_batch, str_seed,
                              str_csv);
        if (bench->parsed()) {
            bench_cfg.dims = parse_dims(bench_dims);
            bench_cfg.sir_db = parse_sir(bench_sir);
            return cmd_bench(bench_cfg, bench_algos, bench_csv, bench_updates_csv);
        }
    } catch (const rocp::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
