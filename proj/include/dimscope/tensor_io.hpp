// Minimal binary tensor container.
//
// Layout (all integers little-endian):
//   bytes 0..7    magic "DIMSCOPE"
//   bytes 8..11   version, u32 (currently 1)
//   byte  12      dtype code, u8 (1 = IEEE-754 binary64, little-endian)
//   byte  13      rank, u8 (<= 4)
//   then          rank x u64 dims
//   then          row-major payload, 8 * prod(dims) bytes
//
// See FORMATS.md for a hex dump of a worked example.

#ifndef DIMSCOPE_TENSOR_IO_HPP
#define DIMSCOPE_TENSOR_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dimscope/common.hpp"

namespace dimscope {

inline constexpr char kTensorMagic[8] = {'D', 'I', 'M', 'S', 'C', 'O', 'P', 'E'};
inline constexpr std::uint32_t kTensorVersion = 1;
inline constexpr std::uint8_t kTensorDtypeF64 = 1;
inline constexpr std::uint8_t kTensorMaxRank = 4;

struct Tensor {
    std::vector<std::uint64_t> dims;
    std::vector<double> values;   // row-major

    std::size_t element_count() const;
};

/// Writes dims/values to path. Rejects rank > 4, dim products that overflow,
/// and value counts that disagree with dims.
void write_tensor(const std::string& path, const Tensor& tensor);

/// Reads a tensor back, bitwise. Truncation reports the byte offset where
/// the file ended short.
Tensor read_tensor(const std::string& path);

/// Writes an n x d matrix as a rank-2 tensor, rows as samples.
void write_matrix_tensor(const std::string& path, const Matrix& m);

/// Reads a rank-2 tensor into a matrix.
Matrix read_matrix_tensor(const std::string& path);

}  // namespace dimscope

#endif  // DIMSCOPE_TENSOR_IO_HPP
