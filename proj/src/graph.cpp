#include "porebench/graph.hpp"

#include <deque>

#include "porebench/error.hpp"

namespace porebench {

PoreGraph build_graph(const PoreImage& image, bool periodic_x, bool periodic_y) {
  const int w = image.width(), h = image.height();
  PoreGraph g;
  g.width_ = w;
  g.height_ = h;
  g.periodic_x_ = periodic_x;
  g.periodic_y_ = periodic_y;
  g.node_of_pixel_.assign(image.size(), -1);

  const double volume = image.pixel_length() * image.pixel_length();
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (!image.is_void(i)) continue;
    g.node_of_pixel_[i] = static_cast<int>(g.nodes_.size());
    g.nodes_.push_back({i, image.x_of(i), image.y_of(i), volume});
  }
  if (g.nodes_.empty()) throw Error(ErrorCode::NoVoidSpace, "image has no void pixels");

  // One edge per face: each node links to its east and south neighbors. A
  // wrap onto itself (extent 1) is not a face between two pixels.
  for (const auto& n : g.nodes_) {
    const int u = g.node_of_pixel_[n.pixel];
    int ex = n.x;
    if (step_coord(ex, 1, w, periodic_x) && ex != n.x) {
      const int v = g.node_at(ex, n.y);
      if (v >= 0) g.edges_.push_back({u, v, true, ex < n.x, 1});
    }
    int sy = n.y;
    if (step_coord(sy, 1, h, periodic_y) && sy != n.y) {
      const int v = g.node_at(n.x, sy);
      if (v >= 0) g.edges_.push_back({u, v, false, sy < n.y, 1});
    }
  }

  std::vector<std::size_t> degree(g.nodes_.size() + 1, 0);
  for (const auto& e : g.edges_) {
    ++degree[static_cast<std::size_t>(e.u) + 1];
    ++degree[static_cast<std::size_t>(e.v) + 1];
  }
  for (std::size_t i = 1; i < degree.size(); ++i) degree[i] += degree[i - 1];
  g.offsets_ = degree;
  g.incidence_.resize(g.edges_.size() * 2);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::size_t k = 0; k < g.edges_.size(); ++k) {
    const auto& e = g.edges_[k];
    g.incidence_[fill[static_cast<std::size_t>(e.u)]++] = {static_cast<int>(k), e.v};
    g.incidence_[fill[static_cast<std::size_t>(e.v)]++] = {static_cast<int>(k), e.u};
  }
  return g;
}

int connectivity(const PoreGraph& graph) {
  std::vector<char> seen(graph.node_count(), 0);
  std::deque<int> queue;
  int traversals = 0;
  for (std::size_t s = 0; s < graph.node_count(); ++s) {
    if (seen[s]) continue;
    ++traversals;
    seen[s] = 1;
    queue.push_back(static_cast<int>(s));
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const auto& inc : graph.incident(u)) {
        if (!seen[static_cast<std::size_t>(inc.other)]) {
          seen[static_cast<std::size_t>(inc.other)] = 1;
          queue.push_back(inc.other);
        }
      }
    }
  }
  return traversals;
}

}  // namespace porebench
