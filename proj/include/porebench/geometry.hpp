#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "porebench/image.hpp"

namespace porebench {

enum class GeneratorKind {
  Square,
  Rectangle,
  Circle,
  Ellipse,
  Triangle,
  Cross,
  Perlin,
  Fractal,
  Voronoi,
};

std::string_view generator_kind_name(GeneratorKind kind) noexcept;
std::optional<GeneratorKind> parse_generator_kind(std::string_view name) noexcept;
bool is_shape(GeneratorKind kind) noexcept;
bool is_noise(GeneratorKind kind) noexcept;

/// Parameters for every generator. Fields that a generator does not use are
/// ignored by it.
///
/// Shapes are centered in the cell:
///  - square: `half_width`
///  - rectangle, ellipse: `half_width` along x, `half_height` along y
///  - circle: `radius`
///  - triangle: equilateral with circumradius `radius`, apex pointing up
///  - cross: two bars of half-length `half_width` and half-thickness `half_height`
/// `rotation` is counterclockwise in degrees as displayed.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Circle;

  double radius = 40.0;
  double half_width = 40.0;
  double half_height = 20.0;
  double rotation = 0.0;

  int scale = 50;            // noise lattice wavelength in pixels
  double threshold = 0.5;    // void iff normalized noise >= threshold
  int octaves = 4;           // fractal only
  double persistence = 0.5;  // fractal amplitude factor per octave

  int seeds = 8;             // voronoi seed count
  double aperture = 3.0;     // voronoi channel half-width in pixels
  /// Explicit voronoi seed positions in pixel units; overrides `seeds` when
  /// nonempty.
  std::vector<std::array<double, 2>> seed_points;

  std::uint64_t rng_seed = 0;
};

PoreImage generate_shape(const GeneratorSpec& spec, int width = PoreImage::kDefaultResolution,
                         int height = PoreImage::kDefaultResolution);

/// Raw periodic gradient-noise field (row-major), normalized to [0, 1].
std::vector<double> noise_field(const GeneratorSpec& spec, int width, int height);

PoreImage generate_noise(const GeneratorSpec& spec, int width = PoreImage::kDefaultResolution,
                         int height = PoreImage::kDefaultResolution);

/// Distance of every pixel center to the nearest periodic Voronoi cell edge.
std::vector<double> voronoi_edge_distance(const GeneratorSpec& spec, int width, int height);

PoreImage generate_voronoi(const GeneratorSpec& spec, int width = PoreImage::kDefaultResolution,
                           int height = PoreImage::kDefaultResolution);

/// Dispatches on `spec.kind`.
PoreImage generate(const GeneratorSpec& spec, int width = PoreImage::kDefaultResolution,
                   int height = PoreImage::kDefaultResolution);

}  // namespace porebench
