#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "qdinpaint/image.hpp"

namespace qdi {

enum class HolePolarity {
  HoleIsZero,  // PNG 0 = hole, 255 = valid
  HoleIsOne,   // PNG 255 = hole, 0 = valid
};

struct Gray8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

struct Rgb8 {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // interleaved RGB
};

// Any PNG color type is expanded; alpha is composited away, gray is replicated.
Rgb8 read_png_rgb8(const std::filesystem::path& path);
Gray8 read_png_gray8(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Gray8& img);
void write_png(const std::filesystem::path& path, const Rgb8& img);

// 8-bit <-> [0, 1] by v / 255 and round(v * 255).
RgbImage to_rgb_image(const Rgb8& img);
Rgb8 to_rgb8(const RgbImage& img);

RgbImage read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const RgbImage& img);

// Gray values >= 128 are the "on" level of the polarity.
BinaryMask read_mask(const std::filesystem::path& path, HolePolarity polarity = HolePolarity::HoleIsZero);
void write_mask(const std::filesystem::path& path, const BinaryMask& mask,
                HolePolarity polarity = HolePolarity::HoleIsZero);
Gray8 encode_mask(const BinaryMask& mask, HolePolarity polarity);

}  // namespace qdi
