#include <cmath>
#include <numbers>

#include "porebench/error.hpp"
#include "porebench/metrics.hpp"

namespace porebench {

namespace {

// Bin of a summed normal whose components are in {-1, 0, 1}, y pointing up.
int compass_bin(int nx, int ny) {
  static constexpr int kBins[3][3] = {
      // ny = -1, 0, +1 for nx = -1
      {static_cast<int>(Compass::SW), static_cast<int>(Compass::W), static_cast<int>(Compass::NW)},
      // nx = 0
      {static_cast<int>(Compass::S), -1, static_cast<int>(Compass::N)},
      // nx = +1
      {static_cast<int>(Compass::SE), static_cast<int>(Compass::E), static_cast<int>(Compass::NE)},
  };
  return kBins[nx + 1][ny + 1];
}

}  // namespace

SurfaceMetrics surface_metrics(const PoreImage& image) {
  if (!image.any_void()) throw Error(ErrorCode::NoVoidSpace, "image has no void pixels");
  const int w = image.width(), h = image.height();
  const double len = image.pixel_length();

  SurfaceMetrics m;
  std::array<std::size_t, 8> counts{};
  // Surface in pixel lengths is units + diagonals * sqrt(2); both counted
  // exactly so tiled cells give the same specific surface bit for bit.
  std::size_t units = 0, diagonals = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!image.is_void(x, y)) continue;
      // Neighbors in image coordinates; the normal points from the solid
      // face into this pixel, expressed with y up.
      auto solid_at = [&](int dx, int dy) {
        int cx = x, cy = y;
        if (!step_coord(cx, dx, w, image.periodic_x()) || !step_coord(cy, dy, h, image.periodic_y()))
          return false;
        return !image.is_void(cx, cy);
      };
      const bool solid_e = solid_at(1, 0), solid_w = solid_at(-1, 0);
      const bool solid_n = solid_at(0, -1), solid_s = solid_at(0, 1);

      const int faces = solid_e + solid_w + solid_n + solid_s;
      if (faces == 0) continue;
      ++m.boundary_pixels;

      const int nx = static_cast<int>(solid_w) - static_cast<int>(solid_e);
      const int ny = static_cast<int>(solid_s) - static_cast<int>(solid_n);
      const bool opposite_pair = (solid_e && solid_w) || (solid_n && solid_s);
      switch (faces) {
        case 1: units += 1; break;
        case 2: opposite_pair ? units += 2 : diagonals += 1; break;
        case 3: diagonals += 1; break;  // two half diagonals
        default: units += 4; break;
      }
      const int bin = compass_bin(nx, ny);
      if (bin < 0)
        ++m.zero_normal_pixels;
      else
        ++counts[static_cast<std::size_t>(bin)];
    }
  }

  const double raw = static_cast<double>(units) + static_cast<double>(diagonals) * std::numbers::sqrt2;
  m.raw_surface = raw * len;
  m.specific_surface = m.raw_surface / (static_cast<double>(w) * h * len * len);
  if (m.boundary_pixels > 0) {
    for (std::size_t b = 0; b < 8; ++b)
      m.directionality[b] =
          static_cast<double>(counts[b]) / static_cast<double>(m.boundary_pixels);
    double mean = 0.0;
    for (double d : m.directionality) mean += d;
    mean /= 8.0;
    double var = 0.0;
    for (double d : m.directionality) var += (d - mean) * (d - mean);
    m.directionality_std = std::sqrt(var / 8.0);
  }
  return m;
}

}  // namespace porebench
