#include "dimscope/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

namespace dimscope {

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& buf, double v) {
    put_u64(buf, std::bit_cast<std::uint64_t>(v));
}

std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

[[noreturn]] void truncated(const std::string& path, std::size_t have, std::size_t need) {
    throw ValidationError("tensor '" + path + "': truncated at byte offset " +
                          std::to_string(have) + " (need " + std::to_string(need) + ")");
}

}  // namespace

std::size_t Tensor::element_count() const {
    std::uint64_t count = 1;
    for (const std::uint64_t d : dims) {
        if (d == 0) return 0;
        if (count > std::numeric_limits<std::uint64_t>::max() / d)
            throw ValidationError("tensor: dimension product overflows");
        count *= d;
    }
    return static_cast<std::size_t>(count);
}

void write_tensor(const std::string& path, const Tensor& tensor) {
    if (tensor.dims.size() > kTensorMaxRank)
        throw ValidationError("tensor: rank " + std::to_string(tensor.dims.size()) +
                              " exceeds the maximum of 4");
    const std::size_t count = tensor.element_count();
    if (count != tensor.values.size())
        throw ValidationError("tensor: dims imply " + std::to_string(count) +
                              " values, got " + std::to_string(tensor.values.size()));
    if (count > std::numeric_limits<std::size_t>::max() / 8)
        throw ValidationError("tensor: payload size overflows");

    std::string buf;
    buf.reserve(14 + 8 * tensor.dims.size() + 8 * count);
    buf.append(kTensorMagic, sizeof(kTensorMagic));
    put_u32(buf, kTensorVersion);
    buf.push_back(static_cast<char>(kTensorDtypeF64));
    buf.push_back(static_cast<char>(tensor.dims.size()));
    for (const std::uint64_t d : tensor.dims) put_u64(buf, d);
    for (const double v : tensor.values) put_f64(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("tensor: cannot open '" + path + "' for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw ValidationError("tensor: write to '" + path + "' failed");
}

Tensor read_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("tensor: cannot open '" + path + "'");
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* bytes = reinterpret_cast<const unsigned char*>(raw.data());
    const std::size_t size = raw.size();

    if (size < 8) truncated(path, size, 8);
    if (std::memcmp(raw.data(), kTensorMagic, 8) != 0)
        throw ValidationError("tensor '" + path + "': bad magic");
    if (size < 14) truncated(path, size, 14);
    const std::uint32_t version = get_u32(bytes + 8);
    if (version != kTensorVersion)
        throw ValidationError("tensor '" + path + "': version " + std::to_string(version) +
                              " not supported (expected " + std::to_string(kTensorVersion) + ")");
    const std::uint8_t dtype = bytes[12];
    if (dtype != kTensorDtypeF64)
        throw ValidationError("tensor '" + path + "': dtype code " + std::to_string(dtype) +
                              " not supported");
    const std::uint8_t rank = bytes[13];
    if (rank > kTensorMaxRank)
        throw ValidationError("tensor '" + path + "': rank " + std::to_string(rank) +
                              " exceeds the maximum of 4");

    const std::size_t dims_end = 14 + 8 * static_cast<std::size_t>(rank);
    if (size < dims_end) truncated(path, size, dims_end);

    Tensor tensor;
    tensor.dims.resize(rank);
    for (std::uint8_t i = 0; i < rank; ++i) tensor.dims[i] = get_u64(bytes + 14 + 8 * i);

    const std::size_t count = tensor.element_count();
    if (count > std::numeric_limits<std::size_t>::max() / 8)
        throw ValidationError("tensor '" + path + "': payload size overflows");
    const std::size_t expected = dims_end + 8 * count;
    if (size < expected) truncated(path, size, expected);
    if (size > expected)
        throw ValidationError("tensor '" + path + "': " + std::to_string(size - expected) +
                              " trailing bytes");

    tensor.values.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        tensor.values[i] = std::bit_cast<double>(get_u64(bytes + dims_end + 8 * i));
    return tensor;
}

void write_matrix_tensor(const std::string& path, const Matrix& m) {
    Tensor t;
    t.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
    t.values.reserve(static_cast<std::size_t>(m.size()));
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) t.values.push_back(m(r, c));
    write_tensor(path, t);
}

Matrix read_matrix_tensor(const std::string& path) {
    const Tensor t = read_tensor(path);
    if (t.dims.size() != 2)
        throw ValidationError("tensor '" + path + "': expected rank 2, got rank " +
                              std::to_string(t.dims.size()));
    const Index rows = static_cast<Index>(t.dims[0]);
    const Index cols = static_cast<Index>(t.dims[1]);
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
            m(r, c) = t.values[static_cast<std::size_t>(r * cols + c)];
    return m;
}

}  // namespace dimscope
