#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "porebench/graph.hpp"
#include "porebench/image.hpp"

namespace porebench {

double porosity(const PoreImage& image);

/// Exact Euclidean distance (in pixels) from every pixel center to the
/// nearest solid pixel center; 0 on solid, +inf when no solid is reachable.
/// Periodic axes use the wrapped metric.
std::vector<double> distance_transform(const PoreImage& image);

struct PoreSizeOptions {
  int smoothing_radius = 2;  // box filter radius applied to the distance map
};

struct PoreSizeDistribution {
  int n_pores = 0;
  std::vector<double> volumes;  // pixel count per pore
  double mean = 0.0;
  double stddev = 0.0;          // population
  std::vector<std::int32_t> segments;  // pore id per pixel, -1 on solid
  std::vector<std::size_t> peaks;      // marker pixel per pore
};

/// Distance transform, smoothing, peak detection and merging, then
/// marker-based watershed flooding of the void space.
PoreSizeDistribution pore_size_distribution(const PoreImage& image,
                                            const PoreSizeOptions& options = {});

/// Directionality bins, counterclockwise from +x with y pointing up
/// (row 0 is north).
enum class Compass : int { E = 0, NE, N, NW, W, SW, S, SE };

struct SurfaceMetrics {
  double raw_surface = 0.0;       // interface length in physical units
  double specific_surface = 0.0;  // raw surface / cell area
  std::array<double, 8> directionality{};
  double directionality_std = 0.0;  // population, over the 8 bins
  std::size_t boundary_pixels = 0;  // void pixels touching at least one solid face
  std::size_t zero_normal_pixels = 0;  // slits and isolated pixels, in no bin
};

SurfaceMetrics surface_metrics(const PoreImage& image);

struct TortuosityOptions {
  bool record_paths = false;
};

struct TortuosityResult {
  double tau = 1.0;
  double mean_path_length = 0.0;  // physical units
  double straight_length = 0.0;   // physical units
  std::size_t n_paths = 0;        // sources that reached the opposite face
  std::size_t n_sources = 0;
  /// Path length in units of pixel length is straight_steps + diagonal_pairs
  /// * sqrt(2) - diagonal_pairs; sums over all paths, kept exact.
  long long straight_steps = 0;
  long long diagonal_pairs = 0;
  std::vector<std::vector<std::size_t>> paths;  // pixel sequences when recorded
};

/// Geometric tortuosity along `axis`, with stair-wise charging: two
/// consecutive orthogonal steps cost sqrt(2), any other step 1.
///
/// Every void pixel of either face is a source. When the image is periodic
/// along `axis`, a source is routed through the periodic continuation to its
/// own copy one cell further, and the straight length is the cell extent.
/// Otherwise it is routed to the nearest void pixel of the opposite face and
/// the straight length is the distance between the two face pixel rows. The
/// off-axis wraps when its periodic flag is set.
///
/// Throws DegenerateAxis below 2 pixels along `axis` and NoCrossingPath when
/// no source gets across.
TortuosityResult tortuosity(const PoreImage& image, Axis axis, const TortuosityOptions& options = {});

/// Stair-wise path length (in pixel lengths) of a step sequence, using the
/// same charging rule as `tortuosity`. Steps are 0=E, 1=N, 2=W, 3=S.
double stairwise_length(const std::vector<int>& steps);

struct MaxFlowResult {
  long long flow = 0;
  /// Saturated edges separating the faces, as pixel index pairs.
  std::vector<std::pair<std::size_t, std::size_t>> cut;
};

/// Edmonds-Karp maximum flow between the low and high faces of `axis` on the
/// unit-capacity pore graph. Throws NoBoundaryVoid or DegenerateAxis.
MaxFlowResult max_flow(const PoreImage& image, Axis axis);

struct MetricsOptions {
  PoreSizeOptions pore_size;
  TortuosityOptions tortuosity;
};

struct AxisWarning {
  std::string code;
  std::string axis;
  std::string message;
};

struct MetricsReport {
  double porosity = 0.0;
  int n_pores = 0;
  double mean_pore_size = 0.0;
  double std_pore_size = 0.0;
  double specific_surface = 0.0;
  std::array<double, 8> directionality{};
  double directionality_std = 0.0;
  int connectivity = 0;
  std::optional<double> tau_x, tau_y;
  std::optional<long long> max_flow_x, max_flow_y;
  /// Axis metrics that could not be evaluated.
  std::vector<AxisWarning> warnings;
};

/// All metrics for one geometry. Throws NoVoidSpace on an all-solid image;
/// per-axis failures become warnings.
MetricsReport compute_metrics(const PoreImage& image, const MetricsOptions& options = {});

}  // namespace porebench
