#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace blm {

enum class DType { F32, F64 };

std::size_t item_size(DType dtype) noexcept;

/// Dense little-endian float tensor, row-major.
struct Tensor {
    std::vector<std::size_t> shape;
    std::variant<std::vector<float>, std::vector<double>> data;

    DType dtype() const noexcept { return data.index() == 0 ? DType::F32 : DType::F64; }
    std::size_t size() const noexcept;
};

/// Product of the dimensions; 1 for a 0-d shape.
std::size_t shape_elements(std::span<const std::size_t> shape);

struct NpyHeader {
    DType dtype = DType::F32;
    std::vector<std::size_t> shape;
    std::size_t data_offset = 0;  // start of the payload
};

/// Parses magic, version and dict header of an NPY v1.0 file. Only '<f4'
/// and '<f8' with fortran_order False are accepted.
///
/// Throws Error(Parse) for a bad magic, malformed or truncated header, and
/// unsupported version or dtype.
NpyHeader parse_npy_header(std::span<const std::byte> bytes);

/// Throws as parse_npy_header, plus Error(Parse) when the payload length
/// differs from what the header describes.
Tensor parse_npy(std::span<const std::byte> bytes);

/// NPY v1.0 bytes; the header is space-padded so the payload starts on a
/// 64-byte boundary.
std::vector<std::byte> write_npy(const Tensor& tensor);

Tensor read_npy_file(const std::filesystem::path& path);
void write_npy_file(const std::filesystem::path& path, const Tensor& tensor);

/// Whole-file read. Throws Error(Io) if the file cannot be opened/read.
std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);

}  // namespace blm
