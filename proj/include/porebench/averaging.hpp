#pragma once

#include <cstddef>
#include <string_view>
#include <optional>
#include <vector>

#include "porebench/image.hpp"

namespace porebench {

/// Real-valued pore-scale field over a mask. Only void pixels of the mask
/// carry meaningful values; everything averaged ignores the solid ones.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(PoreImage mask, double fill = 0.0);
  ScalarField(PoreImage mask, std::vector<double> values);

  int width() const noexcept { return mask_.width(); }
  int height() const noexcept { return mask_.height(); }
  std::size_t size() const noexcept { return values_.size(); }
  const PoreImage& mask() const noexcept { return mask_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(int x, int y) const { return values_[mask_.index(x, y)]; }

  /// Same mask, same bits on every void pixel.
  friend bool operator==(const ScalarField& a, const ScalarField& b) noexcept;

 private:
  PoreImage mask_;
  std::vector<double> values_;
};

enum class AveragingKind { Full, Sub, Convolutional };

std::string_view averaging_kind_name(AveragingKind kind) noexcept;
std::optional<AveragingKind> parse_averaging_kind(std::string_view name) noexcept;

struct AveragingScheme {
  AveragingKind kind = AveragingKind::Full;
  int sub_nx = 1;  // regions along x
  int sub_ny = 1;  // regions along y
  int filter_w = 1;
  int filter_h = 1;
  /// Divide by all window pixels instead of the void ones.
  bool superficial = false;

  static AveragingScheme full() { return {}; }
  static AveragingScheme sub(int nx, int ny) { return {AveragingKind::Sub, nx, ny, 1, 1, false}; }
  static AveragingScheme convolutional(int w, int h) {
    return {AveragingKind::Convolutional, 1, 1, w, h, false};
  }
};

/// Throws NonDividingSubgrid, EvenFilter or InvalidArgument.
void validate_scheme(const AveragingScheme& scheme, int width, int height);

/// One value per window: 1x1 for full, sub_nx x sub_ny regions for sub,
/// one window centered on every pixel for convolutional. Windows without
/// void pixels hold NaN and are counted in `empty_windows`.
struct WindowAverages {
  AveragingKind kind = AveragingKind::Full;
  int nx = 1;
  int ny = 1;
  std::vector<double> values;
  std::vector<std::size_t> void_counts;

  std::size_t empty_windows() const noexcept;
  /// Throws EmptyWindow when any window has no void pixel.
  void require_nonempty() const;
  double scalar() const { return values.front(); }
  double at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)];
  }
};

/// Window that pixel `i` reports to.
std::size_t window_of(const AveragingScheme& scheme, int width, int height, std::size_t pixel);

WindowAverages average(const ScalarField& field, const AveragingScheme& scheme);

/// Per-pixel mean part: the average of the window that each pixel reports to.
ScalarField broadcast(const WindowAverages& averages, const AveragingScheme& scheme,
                      const PoreImage& mask);

struct Decomposition {
  ScalarField mean;
  ScalarField variation;  // zero on solid pixels
};

/// field = mean + variation on every void pixel.
Decomposition decompose(const ScalarField& field, const AveragingScheme& scheme);

/// Scheme average of the pointwise product of two variation fields.
/// Throws MaskMismatch when the masks differ.
WindowAverages variation_product(const ScalarField& a_var, const ScalarField& b_var,
                                 const AveragingScheme& scheme);

}  // namespace porebench
