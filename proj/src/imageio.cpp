#include "rewave/imageio.hpp"

#include <zlib.h>

#include <cstdlib>
#include <cstring>
#include <fstream>

#include "rewave/errors.hpp"

namespace rewave::imageio {

namespace {

constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n',
                                        0x1a, '\n'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  std::span<const std::uint8_t> data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(crc32(0L, Z_NULL, 0), out.data() + crc_start,
                          static_cast<uInt>(4 + data.size()));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

std::vector<std::uint8_t> deflate_scanlines(
    std::span<const std::uint8_t> pixels, std::uint32_t width,
    std::uint32_t height, int channels) {
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  std::vector<std::uint8_t> filtered;
  filtered.reserve((stride + 1) * height);
  for (std::uint32_t row = 0; row < height; ++row) {
    filtered.push_back(0);  // filter type None
    const std::uint8_t* src = pixels.data() + row * stride;
    filtered.insert(filtered.end(), src, src + stride);
  }

  uLongf bound = compressBound(static_cast<uLong>(filtered.size()));
  std::vector<std::uint8_t> compressed(bound);
  const int rc = compress2(compressed.data(), &bound, filtered.data(),
                           static_cast<uLong>(filtered.size()),
                           kCompressionLevel);
  if (rc != Z_OK) throw std::runtime_error("deflate failed");
  compressed.resize(bound);
  return compressed;
}

std::vector<std::uint8_t> encode_png(std::span<const std::uint8_t> pixels,
                                     std::uint32_t width, std::uint32_t height,
                                     int channels) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kSignature, kSignature + 8);

  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, width);
  put_u32(ihdr, height);
  ihdr.push_back(8);                            // bit depth
  ihdr.push_back(channels == 1 ? 0 : 2);        // grayscale / truecolor
  ihdr.push_back(0);                            // compression
  ihdr.push_back(0);                            // filter method
  ihdr.push_back(0);                            // no interlace
  append_chunk(out, "IHDR", ihdr);

  append_chunk(out, "IDAT", deflate_scanlines(pixels, width, height, channels));
  append_chunk(out, "IEND", {});
  return out;
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

void unfilter_rows(std::vector<std::uint8_t>& raw, std::uint32_t width,
                   std::uint32_t height, int channels,
                   std::vector<std::uint8_t>& pixels, std::size_t idat_offset) {
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  pixels.assign(stride * height, 0);
  for (std::uint32_t row = 0; row < height; ++row) {
    const std::uint8_t* src = raw.data() + row * (stride + 1);
    const std::uint8_t filter = src[0];
    std::uint8_t* dst = pixels.data() + row * stride;
    const std::uint8_t* above =
        row == 0 ? nullptr : pixels.data() + (row - 1) * stride;
    for (std::size_t k = 0; k < stride; ++k) {
      const int x = src[1 + k];
      const int left = k >= static_cast<std::size_t>(channels)
                           ? dst[k - channels]
                           : 0;
      const int up = above ? above[k] : 0;
      const int upleft =
          (above && k >= static_cast<std::size_t>(channels))
              ? above[k - channels]
              : 0;
      int value = 0;
      switch (filter) {
        case 0: value = x; break;
        case 1: value = x + left; break;
        case 2: value = x + up; break;
        case 3: value = x + (left + up) / 2; break;
        case 4: value = x + paeth(left, up, upleft); break;
        default:
          throw DecodeError("unknown scanline filter type", idat_offset);
      }
      dst[k] = static_cast<std::uint8_t>(value & 0xff);
    }
  }
}

}  // namespace

std::vector<std::uint8_t> encode_binary(const BinaryImage& image) {
  return encode_png(image.pixels, static_cast<std::uint32_t>(image.side),
                    static_cast<std::uint32_t>(image.side), 1);
}

std::vector<std::uint8_t> encode_raw(const RawImage& image) {
  return encode_png(image.rgb, static_cast<std::uint32_t>(image.side),
                    static_cast<std::uint32_t>(image.side), 3);
}

DecodedImage decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0) {
    throw DecodeError("not a PNG stream", 0);
  }

  DecodedImage img;
  int channels = 0;
  bool saw_ihdr = false;
  bool saw_iend = false;
  std::vector<std::uint8_t> idat;
  std::size_t idat_offset = 0;

  std::size_t pos = 8;
  while (!saw_iend) {
    if (pos + 8 > bytes.size()) {
      throw DecodeError("truncated chunk header", pos);
    }
    const std::uint32_t len = get_u32(bytes.data() + pos);
    const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
    if (pos + 12 + static_cast<std::size_t>(len) > bytes.size()) {
      throw DecodeError("truncated chunk payload", pos);
    }
    const std::uint8_t* payload = bytes.data() + pos + 8;
    const std::uint32_t stored_crc = get_u32(payload + len);
    const uLong crc = crc32(crc32(0L, Z_NULL, 0), bytes.data() + pos + 4,
                            static_cast<uInt>(4 + len));
    if (static_cast<std::uint32_t>(crc) != stored_crc) {
      throw DecodeError("chunk checksum mismatch", pos + 8 + len);
    }

    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw DecodeError("bad IHDR length", pos);
      img.width = get_u32(payload);
      img.height = get_u32(payload + 4);
      const std::uint8_t depth = payload[8];
      const std::uint8_t color = payload[9];
      if (img.width == 0 || img.height == 0) {
        throw DecodeError("zero image dimension", pos + 8);
      }
      if (depth != 8 || (color != 0 && color != 2)) {
        throw DecodeError("unsupported bit depth or color type", pos + 16);
      }
      if (payload[10] != 0 || payload[11] != 0 || payload[12] != 0) {
        throw DecodeError("unsupported compression/filter/interlace",
                          pos + 18);
      }
      channels = color == 0 ? 1 : 3;
      img.kind = color == 0 ? ImageKind::kGray8 : ImageKind::kRgb8;
      saw_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      if (!saw_ihdr) throw DecodeError("IDAT before IHDR", pos);
      if (idat.empty()) idat_offset = pos;
      idat.insert(idat.end(), payload, payload + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      saw_iend = true;
    }
    // other chunk types are skipped
    pos += 12 + len;
  }

  if (!saw_ihdr) throw DecodeError("missing IHDR", 8);
  if (idat.empty()) throw DecodeError("missing IDAT", 8);

  const std::size_t stride = static_cast<std::size_t>(img.width) * channels;
  const std::size_t expected = (stride + 1) * img.height;
  std::vector<std::uint8_t> raw(expected);
  uLongf raw_len = static_cast<uLongf>(expected);
  const int rc = uncompress(raw.data(), &raw_len, idat.data(),
                            static_cast<uLong>(idat.size()));
  if (rc != Z_OK || raw_len != expected) {
    throw DecodeError("corrupt or size-mismatched image data", idat_offset);
  }

  unfilter_rows(raw, img.width, img.height, channels, img.pixels, idat_offset);
  return img;
}

std::optional<std::size_t> find_binary_violation(const DecodedImage& image) {
  for (std::size_t k = 0; k < image.pixels.size(); ++k) {
    if (image.pixels[k] != 0 && image.pixels[k] != 255) return k;
  }
  return std::nullopt;
}

BinaryImage to_binary(const DecodedImage& image) {
  if (image.kind != ImageKind::kGray8) {
    throw DecodeError("expected a grayscale image", 0);
  }
  if (image.width != image.height) {
    throw DecodeError("expected a square image", 0);
  }
  BinaryImage out;
  out.side = static_cast<int>(image.width);
  out.pixels = image.pixels;
  return out;
}

RawImage to_raw(const DecodedImage& image) {
  if (image.kind != ImageKind::kRgb8) {
    throw DecodeError("expected an RGB image", 0);
  }
  if (image.width != image.height) {
    throw DecodeError("expected a square image", 0);
  }
  RawImage out;
  out.side = static_cast<int>(image.width);
  out.rgb = image.pixels;
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file", path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed", path);
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create file", path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed", path);
}

}  // namespace rewave::imageio
