#include "rocp/rocp.hpp"

#include "rocp/solve.hpp"
#include "rocp/tensor_io.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace rocp {

namespace {

void check_head_dims(const Dims& head, const DenseTensor& x_new) {
    const Dims& d = x_new.dims();
    if (d.size() != head.size() + 1)
        throw std::domain_error("batch order does not match stream order");
    for (std::size_t k = 0; k < head.size(); ++k)
        if (d[k] != head[k])
            throw std::domain_error("batch head extents do not match stream");
}

/// Factor list in the factors_excluding order for mode n of the new slab:
/// u_new stands in for the temporal factor.
std::vector<Matrix> slab_factors_excluding(const KruskalModel& model, const Matrix& u_new,
                                           int mode) {
    const int n_modes = model.order();
    std::vector<Matrix> out;
    out.reserve(n_modes - 1);
    out.push_back(u_new);
    for (int k = n_modes - 1; k >= 1; --k)
        if (k != mode) out.push_back(model.factors[k - 1]);
    return out;
}

}  // namespace

std::size_t ComplementaryState::byte_size() const {
    std::size_t bytes = sizeof(*this) + dims_head.size() * sizeof(Index);
    for (const Matrix& m : p) bytes += static_cast<std::size_t>(m.size()) * sizeof(double);
    for (const Matrix& m : q) bytes += static_cast<std::size_t>(m.size()) * sizeof(double);
    return bytes;
}

ComplementaryState init_state(const InitResult& init, Index s, const RocpConfig& cfg) {
    const int n_modes = init.model.order();
    if (static_cast<int>(init.best_sampled_kr.size()) != n_modes - 1 ||
        static_cast<int>(init.best_sampled_factors.size()) != n_modes - 1)
        throw std::domain_error("init_state: expected one sampled system per non-temporal mode");

    ComplementaryState state;
    state.sample_count = s;
    state.t_len = init.model.factors[n_modes - 1].rows();
    state.p.reserve(n_modes - 1);
    state.q.reserve(n_modes - 1);
    for (int n = 0; n < n_modes - 1; ++n) {
        const Matrix& z = init.best_sampled_kr[n];
        const Matrix& u = init.best_sampled_factors[n];
        if (z.rows() != s)
            throw std::domain_error("init_state: sampled Khatri-Rao row count differs from s");
        if (z.cols() != u.cols())
            throw std::domain_error("init_state: rank mismatch");
        Matrix q = z.transpose() * z;
        state.p.push_back(cfg.literal_init ? u : Matrix(u * q));
        state.q.push_back(std::move(q));
        state.dims_head.push_back(u.rows());
    }
    return state;
}

LastModeUpdate update_last_mode_with(const KruskalModel& model, const DenseTensor& x_new,
                                     SampleIndexSet idx) {
    const int n_modes = model.order();
    if (idx.mode != n_modes)
        throw std::domain_error("update_last_mode: index set must be over the temporal mode");
    LastModeUpdate upd;
    upd.z_s = sampled_khatri_rao(idx, factors_excluding(model, n_modes));
    const Matrix x_s = sample_unfolding(x_new, idx);
    SolveInfo info;
    upd.u_new = solve_sampled_ls(upd.z_s, x_s, &info);
    upd.regularized = info.regularized;
    upd.idx = std::move(idx);
    return upd;
}

LastModeUpdate update_last_mode(const KruskalModel& model, const DenseTensor& x_new, Index s,
                                Rng& rng) {
    const int n_modes = model.order();
    const Dims model_dims = model.dims();
    const Dims head(model_dims.begin(), model_dims.end() - 1);
    check_head_dims(head, x_new);
    SampleIndexSet idx = draw_samples(x_new.dims(), n_modes, s, rng);
    return update_last_mode_with(model, x_new, std::move(idx));
}

ModeUpdate update_mode_with(ComplementaryState& state, KruskalModel& model,
                            const DenseTensor& x_new, const Matrix& u_new,
                            const SampleIndexSet& idx) {
    const int n = idx.mode;
    if (n < 1 || n >= model.order())
        throw std::domain_error("update_mode_with: index set must be over a non-temporal mode");

    ModeUpdate upd;
    upd.z_new = sampled_khatri_rao(idx, slab_factors_excluding(model, u_new, n));
    upd.x_s = sample_unfolding(x_new, idx);

    state.p[n - 1].noalias() += upd.x_s * upd.z_new;
    state.q[n - 1].noalias() += upd.z_new.transpose() * upd.z_new;
    SolveInfo info;
    model.factors[n - 1] = solve_gram(state.q[n - 1], state.p[n - 1], &info);
    upd.regularized = info.regularized;
    return upd;
}

void update_other_modes(ComplementaryState& state, KruskalModel& model, const DenseTensor& x_new,
                        const Matrix& u_new, Rng& rng, UpdateTrace* trace) {
    check_head_dims(state.dims_head, x_new);
    const int n_modes = model.order();
    if (u_new.rows() != x_new.dims().back())
        throw std::domain_error("update_other_modes: u_new rows must equal the batch size");

    for (int n = 1; n < n_modes; ++n) {
        SampleIndexSet idx = draw_samples(x_new.dims(), n, state.sample_count, rng);
        ModeUpdate upd = update_mode_with(state, model, x_new, u_new, idx);
        if (trace) {
            trace->mode_idx.push_back(std::move(idx));
            trace->mode_z.push_back(std::move(upd.z_new));
            trace->mode_x.push_back(std::move(upd.x_s));
        }
    }
}

RocpStream::RocpStream(InitResult init, Index s, RocpConfig cfg) : cfg_(cfg) {
    state_ = init_state(init, s, cfg_);
    regularized_ = init.regularized;
    head_model_.rank = init.model.rank;
    head_model_.factors = std::move(init.model.factors);
    temporal_ = std::move(head_model_.factors.back());
    // The last slot stays in place as the temporal position; updates index
    // it only through u_new, never through its contents.
    head_model_.factors.back() = Matrix();
}

void RocpStream::consume(const DenseTensor& x_new, Rng& rng, UpdateTrace* trace) {
    check_head_dims(state_.dims_head, x_new);
    const Index batch = x_new.dims().back();

    LastModeUpdate lm = update_last_mode_with(
        head_model_, x_new, draw_samples(x_new.dims(), head_model_.order(), state_.sample_count, rng));
    regularized_ = regularized_ || lm.regularized;

    if (temporal_.rows() < state_.t_len + batch) {
        const Index capacity = std::max<Index>(2 * temporal_.rows(), state_.t_len + batch);
        temporal_.conservativeResize(capacity, head_model_.rank);
    }
    temporal_.middleRows(state_.t_len, batch) = lm.u_new;

    update_other_modes(state_, head_model_, x_new, lm.u_new, rng, trace);
    state_.t_len += batch;
}

KruskalModel RocpStream::model() const {
    KruskalModel m;
    m.rank = head_model_.rank;
    m.factors.assign(head_model_.factors.begin(), head_model_.factors.end() - 1);
    m.factors.push_back(temporal_.topRows(state_.t_len));
    return m;
}

KruskalModel rocp_run(const DenseTensor& x_init, std::span<const DenseTensor> batches, int rank,
                      const CprandOptions& init_opts, Rng& rng, const RocpConfig& cfg) {
    InitResult init = cprand_decompose(x_init, rank, init_opts, rng);
    const Index s = init_opts.samples > 0 ? init_opts.samples : auto_sample_count(rank);
    RocpStream stream(std::move(init), s, cfg);
    for (const DenseTensor& batch : batches)
        stream.consume(batch, rng);
    return stream.model();
}

void save_state(const ComplementaryState& state, std::ostream& out) {
    for (const Matrix& m : state.p) write_matrix(m, out);
    for (const Matrix& m : state.q) write_matrix(m, out);
    put_u64le(out, static_cast<std::uint64_t>(state.t_len));
}

ComplementaryState load_state(std::istream& in) {
    // Matrix records are self-describing; the stream ends with the 8-byte
    // temporal length. A record is at least 25 bytes, so the remaining
    // byte count tells records and tail apart unambiguously.
    const std::istream::pos_type start = in.tellg();
    in.seekg(0, std::ios::end);
    const std::istream::pos_type end = in.tellg();
    in.seekg(start);

    std::vector<Matrix> records;
    while (end - in.tellg() > 8)
        records.push_back(read_matrix(in));
    if (records.empty() || records.size() % 2 != 0)
        throw std::runtime_error("state record must hold matching P and Q lists");

    ComplementaryState state;
    const std::size_t half = records.size() / 2;
    state.p.assign(records.begin(), records.begin() + half);
    state.q.assign(records.begin() + half, records.end());
    state.t_len = static_cast<Index>(get_u64le(in));
    for (const Matrix& p : state.p) state.dims_head.push_back(p.rows());
    for (std::size_t n = 0; n < half; ++n)
        if (state.q[n].rows() != state.q[n].cols() || state.q[n].rows() != state.p[n].cols())
            throw std::runtime_error("state record shape mismatch");
    return state;
}

}  // namespace rocp
