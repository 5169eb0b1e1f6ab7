#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <tuple>

#include "porebench/error.hpp"
#include "porebench/metrics.hpp"
#include "porebench/preprocess.hpp"

namespace porebench {

namespace {

constexpr double kFar = 1e20;

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher) for one line of
// squared distances.
void squared_distance_1d(const std::vector<double>& f, std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  out.assign(f.size(), 0.0);
  std::vector<int> v(f.size());
  std::vector<double> z(f.size() + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto intersect = [&](int q, int p) {
    return ((f[static_cast<std::size_t>(q)] + static_cast<double>(q) * q) -
            (f[static_cast<std::size_t>(p)] + static_cast<double>(p) * p)) /
           (2.0 * q - 2.0 * p);
  };
  for (int q = 1; q < n; ++q) {
    double s = intersect(q, v[static_cast<std::size_t>(k)]);
    while (s <= z[static_cast<std::size_t>(k)]) {
      --k;
      s = intersect(q, v[static_cast<std::size_t>(k)]);
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int p = v[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(q)] =
        static_cast<double>(q - p) * (q - p) + f[static_cast<std::size_t>(p)];
  }
}

// A periodic line is transformed as three copies; the middle copy sees the
// nearest image of every site.
void transform_line(std::vector<double>& line, bool periodic) {
  std::vector<double> out;
  if (!periodic) {
    squared_distance_1d(line, out);
    line = std::move(out);
    return;
  }
  const std::size_t n = line.size();
  std::vector<double> ext(3 * n);
  for (std::size_t i = 0; i < ext.size(); ++i) ext[i] = line[i % n];
  squared_distance_1d(ext, out);
  std::copy(out.begin() + static_cast<std::ptrdiff_t>(n),
            out.begin() + static_cast<std::ptrdiff_t>(2 * n), line.begin());
}

std::vector<double> box_mean(const std::vector<double>& values, const PoreImage& image,
                             int radius) {
  const int w = image.width(), h = image.height();
  if (radius <= 0) return values;
  auto pass = [&](const std::vector<double>& in, bool horizontal) {
    std::vector<double> sum(in.size(), 0.0), cnt(in.size(), 0.0);
    const bool periodic = horizontal ? image.periodic_x() : image.periodic_y();
    const int extent = horizontal ? w : h;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double s = 0.0, c = 0.0;
        for (int d = -radius; d <= radius; ++d) {
          int px = x, py = y;
          int& moving = horizontal ? px : py;
          if (!step_coord(moving, d, extent, periodic)) continue;
          const std::size_t j = image.index(px, py);
          s += in[j];
          c += 1.0;
        }
        sum[image.index(x, y)] = s;
        cnt[image.index(x, y)] = c;
      }
    return std::make_pair(sum, cnt);
  };
  auto [hs, hc] = pass(values, true);
  for (std::size_t i = 0; i < hs.size(); ++i) hs[i] /= hc[i];
  auto [vs, vc] = pass(hs, false);
  for (std::size_t i = 0; i < vs.size(); ++i) vs[i] /= vc[i];
  return vs;
}

double wrapped_delta(int a, int b, int extent, bool periodic) {
  int d = std::abs(a - b);
  if (periodic) d = std::min(d, extent - d);
  return static_cast<double>(d);
}

}  // namespace

std::vector<double> distance_transform(const PoreImage& image) {
  const int w = image.width(), h = image.height();
  std::vector<double> d(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) d[i] = image.is_void(i) ? kFar : 0.0;

  std::vector<double> line;
  for (int x = 0; x < w; ++x) {
    line.resize(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) line[static_cast<std::size_t>(y)] = d[image.index(x, y)];
    transform_line(line, image.periodic_y());
    for (int y = 0; y < h; ++y) d[image.index(x, y)] = line[static_cast<std::size_t>(y)];
  }
  for (int y = 0; y < h; ++y) {
    line.resize(static_cast<std::size_t>(w));
    for (int x = 0; x < w; ++x) line[static_cast<std::size_t>(x)] = d[image.index(x, y)];
    transform_line(line, image.periodic_x());
    for (int x = 0; x < w; ++x) d[image.index(x, y)] = line[static_cast<std::size_t>(x)];
  }
  for (auto& v : d) v = v >= kFar / 2 ? std::numeric_limits<double>::infinity() : std::sqrt(v);
  return d;
}

PoreSizeDistribution pore_size_distribution(const PoreImage& image,
                                            const PoreSizeOptions& options) {
  if (!image.any_void()) throw Error(ErrorCode::NoVoidSpace, "image has no void pixels");
  if (options.smoothing_radius < 0)
    throw Error(ErrorCode::InvalidArgument, "smoothing radius must be non-negative");
  const int w = image.width(), h = image.height();
  const bool px = image.periodic_x(), py = image.periodic_y();

  auto dist = distance_transform(image);
  // Without any reachable solid the map is flat; a finite stand-in larger
  // than any in-cell distance keeps the pipeline uniform.
  const double far = static_cast<double>(w + h);
  for (auto& v : dist)
    if (!std::isfinite(v)) v = far;
  const auto smooth = box_mean(dist, image, options.smoothing_radius);
  const auto comp = label_components(image);

  auto for_each_neighbor8 = [&](std::size_t i, auto&& fn) {
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        int x = image.x_of(i), y = image.y_of(i);
        if (!step_coord(x, dx, w, px) || !step_coord(y, dy, h, py)) continue;
        const std::size_t j = image.index(x, y);
        if (j != i && comp.labels[j] == comp.labels[i]) fn(j);
      }
  };

  // Regional maxima of the smoothed map: equal-valued plateaus with no
  // higher neighbor in the same component.
  struct Peak {
    std::size_t pixel;
    double height;
    double radius;
    std::vector<std::size_t> plateau;
  };
  std::vector<Peak> peaks;
  std::vector<char> visited(image.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < image.size(); ++start) {
    if (!image.is_void(start) || visited[start]) continue;
    std::vector<std::size_t> plateau;
    bool is_max = true;
    visited[start] = 1;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      plateau.push_back(i);
      for_each_neighbor8(i, [&](std::size_t j) {
        if (smooth[j] > smooth[start]) {
          is_max = false;
        } else if (smooth[j] == smooth[start] && !visited[j]) {
          visited[j] = 1;
          queue.push_back(j);
        }
      });
    }
    if (!is_max) continue;
    std::size_t rep = plateau.front();
    for (auto p : plateau)
      if (dist[p] > dist[rep] || (dist[p] == dist[rep] && p < rep)) rep = p;
    peaks.push_back({rep, smooth[rep], dist[rep], std::move(plateau)});
  }

  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    return std::tie(b.height, b.radius, a.pixel) < std::tie(a.height, a.radius, b.pixel);
  });

  // Merge: a peak closer to an already accepted (larger) peak than that
  // peak's distance value belongs to it.
  std::vector<const Peak*> accepted;
  for (const auto& p : peaks) {
    bool merged = false;
    for (const Peak* a : accepted) {
      if (comp.labels[a->pixel] != comp.labels[p.pixel]) continue;
      const double dx = wrapped_delta(image.x_of(p.pixel), image.x_of(a->pixel), w, px);
      const double dy = wrapped_delta(image.y_of(p.pixel), image.y_of(a->pixel), h, py);
      if (std::sqrt(dx * dx + dy * dy) < a->radius) {
        merged = true;
        break;
      }
    }
    if (!merged) accepted.push_back(&p);
  }

  PoreSizeDistribution out;
  out.segments.assign(image.size(), -1);
  out.n_pores = static_cast<int>(accepted.size());

  // Priority flood on the negated distance map: deepest (largest distance)
  // pixels are released first, ties in arrival order.
  using Item = std::tuple<double, long long, std::size_t>;
  auto later = [](const Item& a, const Item& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) > std::get<1>(b);
  };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> flood(later);
  long long arrival = 0;
  for (std::size_t k = 0; k < accepted.size(); ++k) {
    out.peaks.push_back(accepted[k]->pixel);
    for (auto p : accepted[k]->plateau) {
      out.segments[p] = static_cast<std::int32_t>(k);
      flood.emplace(dist[p], arrival++, p);
    }
  }
  constexpr std::array<std::array<int, 2>, 4> steps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  while (!flood.empty()) {
    const auto [value, order, i] = flood.top();
    flood.pop();
    for (const auto& s : steps) {
      int x = image.x_of(i), y = image.y_of(i);
      if (!step_coord(x, s[0], w, px) || !step_coord(y, s[1], h, py)) continue;
      const std::size_t j = image.index(x, y);
      if (!image.is_void(j) || out.segments[j] >= 0) continue;
      out.segments[j] = out.segments[i];
      flood.emplace(dist[j], arrival++, j);
    }
  }

  out.volumes.assign(accepted.size(), 0.0);
  for (auto s : out.segments)
    if (s >= 0) out.volumes[static_cast<std::size_t>(s)] += 1.0;
  double sum = 0.0;
  for (double v : out.volumes) sum += v;
  out.mean = sum / static_cast<double>(out.volumes.size());
  double var = 0.0;
  for (double v : out.volumes) var += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(var / static_cast<double>(out.volumes.size()));
  return out;
}

}  // namespace porebench
