#include "her2/image.hpp"

#include <algorithm>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "her2/error.hpp"

namespace her2 {

namespace {

// Wraps an RgbImage buffer without copying. OpenCV treats it as BGR, which
// is irrelevant for geometry-only operations.
cv::Mat View(const RgbImage& image) {
  return cv::Mat(image.height(), image.width(), CV_8UC3,
                 const_cast<std::uint8_t*>(image.pixels().data()));
}

RgbImage FromMat(const cv::Mat& mat) {
  cv::Mat continuous = mat.isContinuous() ? mat : mat.clone();
  std::vector<std::uint8_t> pixels(continuous.datastart, continuous.dataend);
  return RgbImage(mat.cols, mat.rows, std::move(pixels));
}

const std::vector<int>& PngParams() {
  // Level 1 keeps spill directories fast; output stays lossless and stable.
  static const std::vector<int> params{cv::IMWRITE_PNG_COMPRESSION, 1};
  return params;
}

void EnsureParent(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
}

}  // namespace

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    Fail(ErrorKind::kInvalidArgument, "image dimensions must be positive");
  }
  pixels_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    Fail(ErrorKind::kInvalidArgument, "image dimensions must be positive");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
    Fail(ErrorKind::kInvalidArgument, "pixel buffer length must be width*height*3");
  }
}

void RgbImage::FillRect(int x0, int y0, int w, int h, Rgb c) {
  const int x1 = std::min(width_, x0 + w);
  const int y1 = std::min(height_, y0 + h);
  for (int y = std::max(0, y0); y < y1; ++y) {
    for (int x = std::max(0, x0); x < x1; ++x) set(x, y, c);
  }
}

RgbImage ReadRgbImage(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    Fail(ErrorKind::kIo, "cannot read image: " + path.string() + " does not exist");
  }
  const auto ext = path.extension().string();
  std::string lower(ext);
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  if (lower != ".png" && lower != ".tif" && lower != ".tiff") {
    Fail(ErrorKind::kIo, "unsupported slide format (PNG/TIFF only): " + path.string());
  }
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) Fail(ErrorKind::kIo, "cannot decode image: " + path.string());
  if (bgr.depth() != CV_8U) {
    Fail(ErrorKind::kIo, "only 8-bit images are supported: " + path.string());
  }
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  return FromMat(rgb);
}

void WriteRgbPng(const std::filesystem::path& path, const RgbImage& image) {
  EnsureParent(path);
  cv::Mat bgr;
  cv::cvtColor(View(image), bgr, cv::COLOR_RGB2BGR);
  if (!cv::imwrite(path.string(), bgr, PngParams())) {
    Fail(ErrorKind::kIo, "cannot write " + path.string());
  }
}

GrayImage ReadGrayPng(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) {
    Fail(ErrorKind::kIo, "cannot read image: " + path.string() + " does not exist");
  }
  cv::Mat gray = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
  if (gray.empty()) Fail(ErrorKind::kIo, "cannot decode image: " + path.string());
  cv::Mat continuous = gray.isContinuous() ? gray : gray.clone();
  return {gray.cols, gray.rows,
          std::vector<std::uint8_t>(continuous.datastart, continuous.dataend)};
}

void WriteGrayPng(const std::filesystem::path& path, const GrayImage& image) {
  EnsureParent(path);
  cv::Mat mat(image.height, image.width, CV_8UC1,
              const_cast<std::uint8_t*>(image.values.data()));
  if (!cv::imwrite(path.string(), mat, PngParams())) {
    Fail(ErrorKind::kIo, "cannot write " + path.string());
  }
}

RgbImage ResizeBilinear(const RgbImage& image, int width, int height) {
  if (image.width() == width && image.height() == height) return image;
  cv::Mat out;
  cv::resize(View(image), out, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  return FromMat(out);
}

std::vector<std::uint8_t> ResizeNearest(std::span<const std::uint8_t> values,
                                        int width, int height, int new_width,
                                        int new_height) {
  if (width == new_width && height == new_height) {
    return {values.begin(), values.end()};
  }
  cv::Mat src(height, width, CV_8UC1, const_cast<std::uint8_t*>(values.data()));
  cv::Mat out;
  cv::resize(src, out, cv::Size(new_width, new_height), 0, 0, cv::INTER_NEAREST);
  cv::Mat continuous = out.isContinuous() ? out : out.clone();
  return {continuous.datastart, continuous.dataend};
}

void DrawText(RgbImage& image, int x, int y, const std::string& text, Rgb color,
              double scale) {
  cv::Mat view(image.height(), image.width(), CV_8UC3, image.pixels().data());
  cv::putText(view, text, cv::Point(x, y), cv::FONT_HERSHEY_SIMPLEX, scale,
              cv::Scalar(color.r, color.g, color.b), 1, cv::LINE_8);
}

}  // namespace her2
