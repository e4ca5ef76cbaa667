#include "rocp/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace rocp {

namespace {

constexpr char kMagic[4] = {'R', 'O', 'C', 'P'};
constexpr std::uint8_t kVersion = 1;

void put_u32le(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

std::uint32_t get_u32le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw std::runtime_error("tensor record truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void put_u64le(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

std::uint64_t get_u64le(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("tensor record truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void write_tensor(const DenseTensor& t, std::ostream& out) {
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    put_u32le(out, static_cast<std::uint32_t>(t.order()));
    for (Index d : t.dims()) put_u64le(out, static_cast<std::uint64_t>(d));
    for (double v : t.values()) put_u64le(out, std::bit_cast<std::uint64_t>(v));
    if (!out) throw std::runtime_error("tensor write failed");
}

DenseTensor read_tensor(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string_view(magic, 4) != std::string_view(kMagic, 4))
        throw std::runtime_error("bad tensor magic");
    const int version = in.get();
    if (version != kVersion)
        throw std::runtime_error("unsupported tensor format version");
    const std::uint32_t order = get_u32le(in);
    if (order < 2 || order > 64)
        throw std::runtime_error("implausible tensor order");
    Dims dims(order);
    for (std::uint32_t k = 0; k < order; ++k)
        dims[k] = static_cast<Index>(get_u64le(in));
    const Index count = element_count(dims);
    std::vector<double> data(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i)
        data[static_cast<std::size_t>(i)] = std::bit_cast<double>(get_u64le(in));
    return DenseTensor(std::move(dims), std::move(data));
}

void write_tensor_file(const DenseTensor& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_tensor(t, out);
}

DenseTensor read_tensor_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_tensor(in);
}

void write_matrix(const Matrix& m, std::ostream& out) {
    std::vector<double> data(m.data(), m.data() + m.size());
    write_tensor(DenseTensor({m.rows(), m.cols()}, std::move(data)), out);
}

Matrix read_matrix(std::istream& in) {
    DenseTensor t = read_tensor(in);
    if (t.order() != 2)
        throw std::runtime_error("expected an order-2 record");
    return Eigen::Map<const Matrix>(t.data(), t.dims()[0], t.dims()[1]);
}

}  // namespace rocp
