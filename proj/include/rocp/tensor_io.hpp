#pragma once

#include "rocp/tensor.hpp"

#include <iosfwd>
#include <string>

namespace rocp {

/// Binary tensor record: magic "ROCP", version byte 1, 32-bit LE order N,
/// N 64-bit LE extents, then prod I_n doubles (64-bit LE IEEE-754) in
/// first-index-fastest order.
void write_tensor(const DenseTensor& t, std::ostream& out);
DenseTensor read_tensor(std::istream& in);

void write_tensor_file(const DenseTensor& t, const std::string& path);
DenseTensor read_tensor_file(const std::string& path);

/// Matrices are stored as order-2 records (rows, cols); the
/// first-index-fastest layout coincides with column-major storage.
void write_matrix(const Matrix& m, std::ostream& out);
Matrix read_matrix(std::istream& in);

void put_u64le(std::ostream& out, std::uint64_t v);
std::uint64_t get_u64le(std::istream& in);

}  // namespace rocp
