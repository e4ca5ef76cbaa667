#include "rocp/synthetic.hpp"

#include <cmath>
#include <stdexcept>

namespace rocp {

SyntheticTensor gen_synthetic(const Dims& dims, int rank, std::optional<double> sir_db, Rng& rng) {
    if (rank < 1)
        throw std::domain_error("gen_synthetic: rank must be positive");

    SyntheticTensor out;
    out.truth = random_model(dims, rank, rng);
    out.x = reconstruct(out.truth, dims);
    if (!sir_db)
        return out;

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> noise(static_cast<std::size_t>(out.x.size()));
    double noise_sq = 0.0;
    for (double& v : noise) {
        v = gauss(rng);
        noise_sq += v * v;
    }
    const double signal_norm = frobenius_norm(out.x);
    // |noise|^2 = |signal|^2 * 10^(-sir/10), scaled after the draw.
    const double scale = signal_norm * std::pow(10.0, -*sir_db / 20.0) / std::sqrt(noise_sq);
    double* x = out.x.data();
    for (std::size_t i = 0; i < noise.size(); ++i) x[i] += scale * noise[i];
    return out;
}

StreamSplit split_stream(const DenseTensor& x, double init_fraction, Index batch_size) {
    if (init_fraction <= 0.0 || init_fraction >= 1.0)
        throw std::domain_error("split_stream: init fraction must lie in (0,1)");
    if (batch_size < 1)
        throw std::domain_error("split_stream: batch size must be positive");
    const Dims& dims = x.dims();
    const Index t = dims.back();
    const Index t_init = static_cast<Index>(std::floor(init_fraction * static_cast<double>(t)));
    if (t_init < 1)
        throw std::domain_error("split_stream: initial slice is empty");

    const Index slice = element_count(dims) / t;
    auto take = [&](Index from, Index len) {
        Dims d = dims;
        d.back() = len;
        std::vector<double> data(x.data() + from * slice, x.data() + (from + len) * slice);
        return DenseTensor(std::move(d), std::move(data));
    };

    StreamSplit split;
    split.init = take(0, t_init);
    for (Index pos = t_init; pos < t; pos += batch_size)
        split.batches.push_back(take(pos, std::min(batch_size, t - pos)));
    return split;
}

}  // namespace rocp
