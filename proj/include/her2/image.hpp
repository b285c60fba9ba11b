#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace her2 {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kWhite{255, 255, 255};

// Row-major interleaved RGB8 raster.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = kWhite);
  RgbImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return pixels_.empty(); }

  Rgb at(int x, int y) const noexcept {
    const std::uint8_t* p = &pixels_[Offset(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    std::uint8_t* p = &pixels_[Offset(x, y)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  std::span<const std::uint8_t> row(int y) const noexcept {
    return {pixels_.data() + Offset(0, y), static_cast<std::size_t>(width_) * 3};
  }
  std::span<std::uint8_t> row(int y) noexcept {
    return {pixels_.data() + Offset(0, y), static_cast<std::size_t>(width_) * 3};
  }

  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }
  std::vector<std::uint8_t>& pixels() noexcept { return pixels_; }

  void FillRect(int x0, int y0, int w, int h, Rgb c);

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t Offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Single-channel 8-bit raster, used for label maps on disk.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;
};

// PNG and TIFF are the only accepted slide formats. Errors raise her2::Error
// with ErrorKind::kIo.
RgbImage ReadRgbImage(const std::filesystem::path& path);
void WriteRgbPng(const std::filesystem::path& path, const RgbImage& image);
GrayImage ReadGrayPng(const std::filesystem::path& path);
void WriteGrayPng(const std::filesystem::path& path, const GrayImage& image);

RgbImage ResizeBilinear(const RgbImage& image, int width, int height);
std::vector<std::uint8_t> ResizeNearest(std::span<const std::uint8_t> values,
                                        int width, int height, int new_width,
                                        int new_height);

// Draws `text` onto `image` with its baseline at (x, y).
void DrawText(RgbImage& image, int x, int y, const std::string& text, Rgb color,
              double scale = 0.5);

}  // namespace her2
