#include "rocp/cprand.hpp"

#include "rocp/errors.hpp"
#include "rocp/solve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rocp {

InitResult cprand_decompose(const DenseTensor& x, int rank, const CprandOptions& opts, Rng& rng,
                            CprandTrace* trace) {
    if (rank < 1)
        throw std::domain_error("cprand_decompose: rank must be positive");
    if (opts.max_iters < 1)
        throw std::domain_error("cprand_decompose: need at least one sweep");
    if (frobenius_norm(x) == 0.0)
        throw std::domain_error("cprand_decompose: zero tensor");

    const Dims& dims = x.dims();
    const int n_modes = static_cast<int>(dims.size());
    const Index s = opts.samples > 0 ? opts.samples : auto_sample_count(rank);

    KruskalModel model = random_model(dims, rank, rng);

    InitResult result;
    result.best_fitness = -std::numeric_limits<double>::infinity();

    double prev_fit = result.best_fitness;
    int sweep = 0;
    while (sweep < opts.max_iters) {
        ++sweep;
        if (trace) trace->sweeps.emplace_back();
        for (int n = 1; n <= n_modes; ++n) {
            SampleIndexSet idx = draw_samples(dims, n, s, rng);
            const Matrix z_s = sampled_khatri_rao(idx, factors_excluding(model, n));
            const Matrix x_s = sample_unfolding(x, idx);
            SolveInfo info;
            model.factors[n - 1] = solve_sampled_ls(z_s, x_s, &info);
            result.regularized = result.regularized || info.regularized;
            if (!model.factors[n - 1].allFinite())
                throw NumericalError("cprand_decompose: non-finite factor update", sweep);
            if (trace) trace->sweeps.back().push_back(std::move(idx));
        }

        const double fit = model_fitness(x, model);
        if (!std::isfinite(fit))
            throw NumericalError("cprand_decompose: non-finite fitness", sweep);
        if (fit > result.best_fitness) {
            result.best_fitness = fit;
            result.model = model;
        }
        if (std::abs(fit - prev_fit) < opts.tol) break;
        prev_fit = fit;
    }
    result.iterations = sweep;

    // Sampled Khatri-Rao matrices and loadings of the best iterate, one
    // fresh draw per non-temporal mode.
    result.best_sampled_kr.reserve(n_modes - 1);
    result.best_sampled_factors.reserve(n_modes - 1);
    for (int n = 1; n < n_modes; ++n) {
        SampleIndexSet idx = draw_samples(dims, n, s, rng);
        result.best_sampled_kr.push_back(sampled_khatri_rao(idx, factors_excluding(result.model, n)));
        result.best_sampled_factors.push_back(result.model.factors[n - 1]);
    }
    return result;
}

}  // namespace rocp
