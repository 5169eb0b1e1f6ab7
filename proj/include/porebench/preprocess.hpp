#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "porebench/image.hpp"

namespace porebench {

/// Per-pixel component ids over the void space; solid pixels hold -1. Ids
/// are assigned in row-major order of each component's first pixel.
struct ComponentLabeling {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;
  std::vector<std::size_t> sizes;  // pixel count per component id

  int count() const noexcept { return static_cast<int>(sizes.size()); }
  /// Largest component id; ties go to the lowest id. -1 when empty.
  int largest() const noexcept;
};

/// 4-neighborhood labeling that wraps across the image's periodic axes.
ComponentLabeling label_components(const PoreImage& image);

/// Turns every void pixel outside the largest component into solid.
/// Throws NoVoidSpace on an all-solid image.
PoreImage keep_largest_component(const PoreImage& image);

struct PeriodicityReport {
  bool connected_x = false;  // some void loop winds around the x direction
  bool connected_y = false;
};

/// Detects void paths that link opposite boundaries through the periodic
/// wrap. Wrap is applied on both axes regardless of the image flags.
PeriodicityReport check_periodic_connectivity(const PoreImage& image);

struct PreprocessReport {
  int n_components = 0;
  std::size_t void_pixels = 0;
  std::size_t largest_component_pixels = 0;
  double largest_fraction = 0.0;
  /// Largest component holds less than `discontinuity_threshold` of the void.
  bool high_discontinuity = false;
  std::size_t removed_pixels = 0;
  PeriodicityReport periodicity;
};

PreprocessReport preprocess_report(const PoreImage& image, double discontinuity_threshold = 0.5);

}  // namespace porebench
