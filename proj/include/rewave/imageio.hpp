#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rewave/projection.hpp"

namespace rewave::imageio {

// Malformed PNG stream; `byte_offset` points at the offending byte.
struct DecodeError : std::runtime_error {
  DecodeError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"),
        byte_offset(offset) {}
  std::size_t byte_offset;
};

// Encoder parameters are pinned so identical pixel data always yields
// identical file bytes: deflate level 6, default strategy, scanline filter
// type 0 (None) on every row, one IDAT chunk, no ancillary chunks.
inline constexpr int kCompressionLevel = 6;

// 8-bit grayscale, no alpha, no interlace.
std::vector<std::uint8_t> encode_binary(const BinaryImage& image);

// 8-bit-per-channel RGB, no alpha, no interlace.
std::vector<std::uint8_t> encode_raw(const RawImage& image);

enum class ImageKind : std::uint8_t { kGray8, kRgb8 };

struct DecodedImage {
  ImageKind kind = ImageKind::kGray8;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;  // 1 or 3 bytes per pixel, row-major
};

// Inverse of the encoders.  Throws DecodeError on malformed input.
DecodedImage decode(std::span<const std::uint8_t> bytes);

// First pixel offset holding a value outside {0,255}, if any.
std::optional<std::size_t> find_binary_violation(const DecodedImage& image);

// Conversions back to the projection types; throw DecodeError when the
// decoded image has the wrong kind or is not square.
BinaryImage to_binary(const DecodedImage& image);
RawImage to_raw(const DecodedImage& image);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace rewave::imageio
