#include "porebench/preprocess.hpp"

#include <array>
#include <deque>

#include "porebench/error.hpp"

namespace porebench {

namespace {

constexpr std::array<std::array<int, 2>, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

}  // namespace

int ComponentLabeling::largest() const noexcept {
  int best = -1;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (best < 0 || sizes[i] > sizes[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

ComponentLabeling label_components(const PoreImage& image) {
  const int w = image.width(), h = image.height();
  ComponentLabeling out;
  out.width = w;
  out.height = h;
  out.labels.assign(image.size(), -1);

  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < image.size(); ++start) {
    if (!image.is_void(start) || out.labels[start] >= 0) continue;
    const auto id = static_cast<std::int32_t>(out.sizes.size());
    std::size_t size = 0;
    out.labels[start] = id;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      ++size;
      for (const auto& s : kSteps) {
        int x = image.x_of(i), y = image.y_of(i);
        if (!step_coord(x, s[0], w, image.periodic_x()) ||
            !step_coord(y, s[1], h, image.periodic_y()))
          continue;
        const std::size_t j = image.index(x, y);
        if (image.is_void(j) && out.labels[j] < 0) {
          out.labels[j] = id;
          queue.push_back(j);
        }
      }
    }
    out.sizes.push_back(size);
  }
  return out;
}

PoreImage keep_largest_component(const PoreImage& image) {
  const auto lab = label_components(image);
  if (lab.count() == 0) throw Error(ErrorCode::NoVoidSpace, "image has no void pixels");
  const int keep = lab.largest();
  PoreImage out = image;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (lab.labels[i] >= 0 && lab.labels[i] != keep) out.set_void(i, false);
  return out;
}

PeriodicityReport check_periodic_connectivity(const PoreImage& image) {
  const int w = image.width(), h = image.height();
  PeriodicityReport report;

  // Breadth-first traversal of the torus that records, for every pixel, the
  // tile it was reached in. Reaching a pixel again from a different tile
  // closes a loop that winds around the torus.
  struct Lift {
    int tx = 0, ty = 0;
    bool seen = false;
  };
  std::vector<Lift> lift(image.size());
  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < image.size(); ++start) {
    if (!image.is_void(start) || lift[start].seen) continue;
    lift[start].seen = true;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      const Lift here = lift[i];
      for (const auto& s : kSteps) {
        const int x0 = image.x_of(i), y0 = image.y_of(i);
        const int nx = x0 + s[0], ny = y0 + s[1];
        const int tx = here.tx + (nx < 0 ? -1 : (nx >= w ? 1 : 0));
        const int ty = here.ty + (ny < 0 ? -1 : (ny >= h ? 1 : 0));
        const std::size_t j = image.index((nx % w + w) % w, (ny % h + h) % h);
        if (!image.is_void(j)) continue;
        if (!lift[j].seen) {
          lift[j] = {tx, ty, true};
          queue.push_back(j);
        } else {
          if (lift[j].tx != tx) report.connected_x = true;
          if (lift[j].ty != ty) report.connected_y = true;
        }
      }
    }
  }
  return report;
}

PreprocessReport preprocess_report(const PoreImage& image, double discontinuity_threshold) {
  PreprocessReport r;
  const auto lab = label_components(image);
  r.n_components = lab.count();
  r.void_pixels = image.void_count();
  if (r.n_components > 0) {
    r.largest_component_pixels = lab.sizes[static_cast<std::size_t>(lab.largest())];
    r.largest_fraction =
        static_cast<double>(r.largest_component_pixels) / static_cast<double>(r.void_pixels);
  }
  r.high_discontinuity = r.n_components > 0 && r.largest_fraction < discontinuity_threshold;
  r.removed_pixels = r.void_pixels - r.largest_component_pixels;
  r.periodicity = check_periodic_connectivity(image);
  return r;
}

}  // namespace porebench
