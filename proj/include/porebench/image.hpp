#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace porebench {

enum class Axis { X, Y };

constexpr Axis other_axis(Axis a) noexcept { return a == Axis::X ? Axis::Y : Axis::X; }

/// Periodic binary raster of a unit cell. Cells are row-major, x runs along
/// columns and y along rows (row 0 is the top edge). A nonzero cell is void.
class PoreImage {
 public:
  static constexpr int kDefaultResolution = 200;

  PoreImage() = default;
  /// All cells start as `fill` (true = void).
  PoreImage(int width, int height, bool fill = true);
  PoreImage(int width, int height, std::vector<std::uint8_t> cells);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return cells_.size(); }
  int extent(Axis a) const noexcept { return a == Axis::X ? width_ : height_; }

  bool is_void(int x, int y) const { return cells_[index(x, y)] != 0; }
  bool is_void(std::size_t i) const { return cells_[i] != 0; }
  void set_void(int x, int y, bool v) { cells_[index(x, y)] = v ? 1 : 0; }
  void set_void(std::size_t i, bool v) { cells_[i] = v ? 1 : 0; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  int x_of(std::size_t i) const noexcept { return static_cast<int>(i % static_cast<std::size_t>(width_)); }
  int y_of(std::size_t i) const noexcept { return static_cast<int>(i / static_cast<std::size_t>(width_)); }

  const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }

  double pixel_length() const noexcept { return pixel_length_; }
  void set_pixel_length(double l);

  bool periodic_x() const noexcept { return periodic_x_; }
  bool periodic_y() const noexcept { return periodic_y_; }
  bool periodic(Axis a) const noexcept { return a == Axis::X ? periodic_x_ : periodic_y_; }
  void set_periodic(bool px, bool py) noexcept {
    periodic_x_ = px;
    periodic_y_ = py;
  }

  std::size_t void_count() const noexcept;
  bool any_void() const noexcept { return void_count() > 0; }

  /// Tiles the image `nx` by `ny` times; flags and pixel length are kept.
  PoreImage tiled(int nx, int ny) const;
  /// Rotates by 90 degrees counterclockwise in the displayed orientation.
  /// The periodic flags swap with the axes.
  PoreImage rotated90() const;
  PoreImage mirrored_x() const;
  PoreImage mirrored_y() const;
  /// Toroidal shift: output(x + dx, y + dy) = input(x, y).
  PoreImage translated(int dx, int dy) const;

  friend bool operator==(const PoreImage& a, const PoreImage& b) noexcept {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.cells_ == b.cells_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
  double pixel_length_ = 1.0;
  bool periodic_x_ = true;
  bool periodic_y_ = true;
};

/// Index arithmetic with optional wrap. Returns false when the step leaves a
/// non-periodic image.
inline bool step_coord(int& c, int delta, int extent, bool periodic) noexcept {
  int n = c + delta;
  if (n < 0 || n >= extent) {
    if (!periodic) return false;
    n = ((n % extent) + extent) % extent;
  }
  c = n;
  return true;
}

}  // namespace porebench
