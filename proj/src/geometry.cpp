#include "porebench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "porebench/error.hpp"

namespace porebench {

namespace {

struct KindName {
  GeneratorKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 9> kKindNames{{
    {GeneratorKind::Square, "square"},
    {GeneratorKind::Rectangle, "rectangle"},
    {GeneratorKind::Circle, "circle"},
    {GeneratorKind::Ellipse, "ellipse"},
    {GeneratorKind::Triangle, "triangle"},
    {GeneratorKind::Cross, "cross"},
    {GeneratorKind::Perlin, "perlin"},
    {GeneratorKind::Fractal, "fractal"},
    {GeneratorKind::Voronoi, "voronoi"},
}};

// Bit-exact across standard libraries: mt19937_64 is fully specified, the
// std distributions are not.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void require_dims(int width, int height) {
  if (width < 1 || height < 1)
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be at least 1x1");
}

bool inside_shape(const GeneratorSpec& s, double qx, double qy) {
  switch (s.kind) {
    case GeneratorKind::Square:
      return std::abs(qx) < s.half_width && std::abs(qy) < s.half_width;
    case GeneratorKind::Rectangle:
      return std::abs(qx) < s.half_width && std::abs(qy) < s.half_height;
    case GeneratorKind::Circle:
      return qx * qx + qy * qy < s.radius * s.radius;
    case GeneratorKind::Ellipse: {
      if (s.half_width <= 0.0 || s.half_height <= 0.0) return false;
      const double u = qx / s.half_width;
      const double v = qy / s.half_height;
      return u * u + v * v < 1.0;
    }
    case GeneratorKind::Triangle: {
      // Equilateral, apex at (0, r); inside iff strictly left of all three
      // counterclockwise edges.
      const double r = s.radius;
      const double h = r * std::numbers::sqrt3 / 2.0;
      const std::array<std::array<double, 2>, 3> v{{{0.0, r}, {-h, -r / 2.0}, {h, -r / 2.0}}};
      for (int k = 0; k < 3; ++k) {
        const auto& a = v[static_cast<std::size_t>(k)];
        const auto& b = v[static_cast<std::size_t>((k + 1) % 3)];
        const double cross = (b[0] - a[0]) * (qy - a[1]) - (b[1] - a[1]) * (qx - a[0]);
        if (!(cross > 0.0)) return false;
      }
      return true;
    }
    case GeneratorKind::Cross: {
      const double a = s.half_width, b = s.half_height;
      return (std::abs(qx) < a && std::abs(qy) < b) || (std::abs(qx) < b && std::abs(qy) < a);
    }
    default:
      return false;
  }
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

// One octave of lattice-gradient noise whose lattice wraps with the given
// periods, so the field is exactly periodic over the image.
class PeriodicGradientLattice {
 public:
  PeriodicGradientLattice(int period_x, int period_y, std::mt19937_64& rng)
      : px_(period_x), py_(period_y), gx_(static_cast<std::size_t>(period_x * period_y)),
        gy_(gx_.size()) {
    for (std::size_t i = 0; i < gx_.size(); ++i) {
      const double angle = 2.0 * std::numbers::pi * unit_uniform(rng);
      gx_[i] = std::cos(angle);
      gy_[i] = std::sin(angle);
    }
  }

  double operator()(double u, double v) const {
    const double fu = std::floor(u), fv = std::floor(v);
    const int i0 = static_cast<int>(fu), j0 = static_cast<int>(fv);
    const double du = u - fu, dv = v - fv;
    const double n00 = corner(i0, j0, du, dv);
    const double n10 = corner(i0 + 1, j0, du - 1.0, dv);
    const double n01 = corner(i0, j0 + 1, du, dv - 1.0);
    const double n11 = corner(i0 + 1, j0 + 1, du - 1.0, dv - 1.0);
    const double su = fade(du), sv = fade(dv);
    const double a = n00 + su * (n10 - n00);
    const double b = n01 + su * (n11 - n01);
    return a + sv * (b - a);
  }

 private:
  double corner(int i, int j, double dx, double dy) const {
    const int wi = ((i % px_) + px_) % px_;
    const int wj = ((j % py_) + py_) % py_;
    const auto k = static_cast<std::size_t>(wj * px_ + wi);
    return gx_[k] * dx + gy_[k] * dy;
  }

  int px_, py_;
  std::vector<double> gx_, gy_;
};

std::vector<std::array<double, 2>> voronoi_seeds(const GeneratorSpec& spec, int width,
                                                 int height) {
  std::vector<std::array<double, 2>> seeds;
  if (!spec.seed_points.empty()) {
    for (auto p : spec.seed_points) {
      p[0] = std::fmod(std::fmod(p[0], width) + width, width);
      p[1] = std::fmod(std::fmod(p[1], height) + height, height);
      seeds.push_back(p);
    }
  } else {
    std::mt19937_64 rng(spec.rng_seed);
    for (int k = 0; k < spec.seeds; ++k) {
      const double x = unit_uniform(rng) * width;
      const double y = unit_uniform(rng) * height;
      seeds.push_back({x, y});
    }
  }
  if (seeds.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "voronoi generator needs at least 2 seeds");
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (seeds[i] == seeds[j])
        throw Error(ErrorCode::DegenerateSeeds,
                    "voronoi seeds " + std::to_string(i) + " and " + std::to_string(j) +
                        " coincide");
  return seeds;
}

}  // namespace

std::string_view generator_kind_name(GeneratorKind kind) noexcept {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "unknown";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) noexcept {
  for (const auto& kn : kKindNames)
    if (kn.name == name) return kn.kind;
  return std::nullopt;
}

bool is_shape(GeneratorKind kind) noexcept {
  return kind != GeneratorKind::Perlin && kind != GeneratorKind::Fractal &&
         kind != GeneratorKind::Voronoi;
}

bool is_noise(GeneratorKind kind) noexcept {
  return kind == GeneratorKind::Perlin || kind == GeneratorKind::Fractal;
}

PoreImage generate_shape(const GeneratorSpec& spec, int width, int height) {
  require_dims(width, height);
  if (!is_shape(spec.kind))
    throw Error(ErrorCode::InvalidArgument,
                std::string(generator_kind_name(spec.kind)) + " is not a simple shape");
  if (spec.radius < 0.0 || spec.half_width < 0.0 || spec.half_height < 0.0)
    throw Error(ErrorCode::InvalidArgument, "shape sizes must be non-negative");

  const double theta = spec.rotation * std::numbers::pi / 180.0;
  const double c = std::cos(theta), s = std::sin(theta);
  PoreImage img(width, height, true);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      // Pixel center relative to the cell center, y pointing up.
      const double px = x + 0.5 - width / 2.0;
      const double py = height / 2.0 - (y + 0.5);
      // Undo the shape rotation.
      const double qx = c * px + s * py;
      const double qy = -s * px + c * py;
      if (inside_shape(spec, qx, qy)) img.set_void(x, y, false);
    }
  }

  for (int x = 0; x < width; ++x)
    if (!img.is_void(x, 0) || !img.is_void(x, height - 1))
      throw Error(ErrorCode::ShapeTooLarge, "inclusion touches the top or bottom boundary");
  for (int y = 0; y < height; ++y)
    if (!img.is_void(0, y) || !img.is_void(width - 1, y))
      throw Error(ErrorCode::ShapeTooLarge, "inclusion touches the left or right boundary");
  return img;
}

std::vector<double> noise_field(const GeneratorSpec& spec, int width, int height) {
  require_dims(width, height);
  if (!is_noise(spec.kind))
    throw Error(ErrorCode::InvalidArgument,
                std::string(generator_kind_name(spec.kind)) + " is not a noise generator");
  if (spec.scale < 1 || width % spec.scale != 0 || height % spec.scale != 0)
    throw Error(ErrorCode::NonWrappingScale,
                "noise scale " + std::to_string(spec.scale) + " must divide " +
                    std::to_string(width) + "x" + std::to_string(height));
  const int octaves = spec.kind == GeneratorKind::Perlin ? 1 : spec.octaves;
  if (octaves < 1 || (spec.kind == GeneratorKind::Fractal && octaves < 2))
    throw Error(ErrorCode::InvalidArgument, "fractal noise needs at least 2 octaves");
  if (!(spec.persistence > 0.0))
    throw Error(ErrorCode::InvalidArgument, "persistence must be positive");

  const int base_px = width / spec.scale;
  const int base_py = height / spec.scale;
  std::mt19937_64 rng(spec.rng_seed);
  std::vector<double> field(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                            0.0);
  double amplitude = 1.0;
  for (int o = 0; o < octaves; ++o) {
    const int freq = 1 << o;
    PeriodicGradientLattice lattice(base_px * freq, base_py * freq, rng);
    const double inv = static_cast<double>(freq) / spec.scale;
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        field[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
              static_cast<std::size_t>(x)] += amplitude * lattice((x + 0.5) * inv, (y + 0.5) * inv);
    amplitude *= spec.persistence;
  }

  const auto [lo_it, hi_it] = std::minmax_element(field.begin(), field.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  for (auto& v : field) v = span > 0.0 ? (v - lo) / span : 0.0;
  return field;
}

PoreImage generate_noise(const GeneratorSpec& spec, int width, int height) {
  const auto field = noise_field(spec, width, height);
  PoreImage img(width, height, false);
  for (std::size_t i = 0; i < field.size(); ++i) img.set_void(i, field[i] >= spec.threshold);
  return img;
}

std::vector<double> voronoi_edge_distance(const GeneratorSpec& spec, int width, int height) {
  require_dims(width, height);
  const auto seeds = voronoi_seeds(spec, width, height);

  // Replicate the seed set into the 3x3 neighborhood of tiles.
  std::vector<std::array<double, 2>> padded;
  padded.reserve(seeds.size() * 9);
  for (int ty = -1; ty <= 1; ++ty)
    for (int tx = -1; tx <= 1; ++tx)
      for (const auto& s : seeds) padded.push_back({s[0] + tx * width, s[1] + ty * height});

  std::vector<double> dist(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double px = x + 0.5, py = y + 0.5;
      std::size_t nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < padded.size(); ++k) {
        const double dx = px - padded[k][0], dy = py - padded[k][1];
        const double d2 = dx * dx + dy * dy;
        if (d2 < best) {
          best = d2;
          nearest = k;
        }
      }
      // Distance to the cell boundary is the distance to the closest bisector.
      double edge = std::numeric_limits<double>::infinity();
      const auto& c = padded[nearest];
      for (std::size_t k = 0; k < padded.size(); ++k) {
        if (k == nearest) continue;
        const double dx = px - padded[k][0], dy = py - padded[k][1];
        const double sx = padded[k][0] - c[0], sy = padded[k][1] - c[1];
        const double sep = std::sqrt(sx * sx + sy * sy);
        edge = std::min(edge, (dx * dx + dy * dy - best) / (2.0 * sep));
      }
      dist[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x)] = edge;
    }
  }
  return dist;
}

PoreImage generate_voronoi(const GeneratorSpec& spec, int width, int height) {
  if (spec.kind != GeneratorKind::Voronoi)
    throw Error(ErrorCode::InvalidArgument, "spec kind is not voronoi");
  if (spec.seed_points.empty() && spec.seeds < 2)
    throw Error(ErrorCode::InvalidArgument, "voronoi generator needs at least 2 seeds");
  if (!(spec.aperture >= 1.0))
    throw Error(ErrorCode::InvalidArgument, "voronoi aperture must be at least 1 pixel");
  const auto dist = voronoi_edge_distance(spec, width, height);
  PoreImage img(width, height, false);
  for (std::size_t i = 0; i < dist.size(); ++i) img.set_void(i, dist[i] <= spec.aperture);
  return img;
}

PoreImage generate(const GeneratorSpec& spec, int width, int height) {
  if (is_shape(spec.kind)) return generate_shape(spec, width, height);
  if (is_noise(spec.kind)) return generate_noise(spec, width, height);
  return generate_voronoi(spec, width, height);
}

}  // namespace porebench
