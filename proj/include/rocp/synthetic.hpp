#pragma once

#include "rocp/kruskal.hpp"
#include "rocp/tensor.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace rocp {

/// Low-rank tensor from standard-normal loading matrices plus Gaussian
/// noise scaled so that 10 log10(|signal|^2 / |noise|^2) equals sir_db
/// exactly for the drawn noise realization. No noise when sir_db is empty.
struct SyntheticTensor {
    DenseTensor x;
    KruskalModel truth;
};

SyntheticTensor gen_synthetic(const Dims& dims, int rank, std::optional<double> sir_db, Rng& rng);

/// Leading floor(init_fraction * I_N) slices as the initial tensor; the
/// remaining slices in order as batches of `batch_size` (last one may be
/// smaller).
struct StreamSplit {
    DenseTensor init;
    std::vector<DenseTensor> batches;
};

StreamSplit split_stream(const DenseTensor& x, double init_fraction, Index batch_size);

}  // namespace rocp
