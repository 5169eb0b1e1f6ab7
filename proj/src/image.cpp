#include "porebench/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "porebench/error.hpp"

namespace porebench {

PoreImage::PoreImage(int width, int height, bool fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1)
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be at least 1x1");
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                fill ? 1 : 0);
}

PoreImage::PoreImage(int width, int height, std::vector<std::uint8_t> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
  if (width < 1 || height < 1)
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be at least 1x1");
  if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw Error(ErrorCode::InvalidArgument,
                "cell count " + std::to_string(cells_.size()) + " does not match " +
                    std::to_string(width) + "x" + std::to_string(height));
  for (auto& c : cells_) c = c ? 1 : 0;
}

void PoreImage::set_pixel_length(double l) {
  if (!(l > 0.0) || !std::isfinite(l))
    throw Error(ErrorCode::InvalidArgument, "pixel length must be positive and finite");
  pixel_length_ = l;
}

std::size_t PoreImage::void_count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

PoreImage PoreImage::tiled(int nx, int ny) const {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::InvalidArgument, "tile counts must be positive");
  PoreImage out(width_ * nx, height_ * ny, false);
  for (int y = 0; y < out.height_; ++y)
    for (int x = 0; x < out.width_; ++x) out.set_void(x, y, is_void(x % width_, y % height_));
  out.pixel_length_ = pixel_length_;
  out.periodic_x_ = periodic_x_;
  out.periodic_y_ = periodic_y_;
  return out;
}

PoreImage PoreImage::rotated90() const {
  // Displayed counterclockwise: the top row becomes the left column, read bottom-up.
  PoreImage out(height_, width_, false);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set_void(y, width_ - 1 - x, is_void(x, y));
  out.pixel_length_ = pixel_length_;
  out.periodic_x_ = periodic_y_;
  out.periodic_y_ = periodic_x_;
  return out;
}

PoreImage PoreImage::mirrored_x() const {
  PoreImage out = *this;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set_void(width_ - 1 - x, y, is_void(x, y));
  return out;
}

PoreImage PoreImage::mirrored_y() const {
  PoreImage out = *this;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set_void(x, height_ - 1 - y, is_void(x, y));
  return out;
}

PoreImage PoreImage::translated(int dx, int dy) const {
  PoreImage out = *this;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) {
      const int tx = ((x + dx) % width_ + width_) % width_;
      const int ty = ((y + dy) % height_ + height_) % height_;
      out.set_void(tx, ty, is_void(x, y));
    }
  return out;
}

}  // namespace porebench
