#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "porebench/image.hpp"

namespace porebench {

struct PoreNode {
  std::size_t pixel = 0;
  int x = 0;
  int y = 0;
  double volume = 1.0;  // pixel_length squared
};

/// Undirected unit-capacity edge. `v` is the east (horizontal) or south
/// (vertical) neighbor of `u`, possibly across a periodic boundary.
struct PoreEdge {
  int u = 0;
  int v = 0;
  bool horizontal = true;
  bool wraps = false;
  int capacity = 1;
};

/// Node per void pixel, edge per shared face between 4-adjacent void pixels.
class PoreGraph {
 public:
  struct Incidence {
    int edge;
    int other;
  };

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool periodic_x() const noexcept { return periodic_x_; }
  bool periodic_y() const noexcept { return periodic_y_; }

  const std::vector<PoreNode>& nodes() const noexcept { return nodes_; }
  const std::vector<PoreEdge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Node id of a pixel, or -1 for solid pixels.
  int node_of(std::size_t pixel) const { return node_of_pixel_[pixel]; }
  int node_at(int x, int y) const {
    return node_of_pixel_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                          static_cast<std::size_t>(x)];
  }

  std::span<const Incidence> incident(int node) const {
    const auto b = offsets_[static_cast<std::size_t>(node)];
    const auto e = offsets_[static_cast<std::size_t>(node) + 1];
    return {incidence_.data() + b, e - b};
  }

 private:
  friend PoreGraph build_graph(const PoreImage&, bool, bool);

  int width_ = 0;
  int height_ = 0;
  bool periodic_x_ = false;
  bool periodic_y_ = false;
  std::vector<PoreNode> nodes_;
  std::vector<PoreEdge> edges_;
  std::vector<int> node_of_pixel_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidence_;
};

/// Throws NoVoidSpace when the image has no void pixel.
PoreGraph build_graph(const PoreImage& image, bool periodic_x, bool periodic_y);
inline PoreGraph build_graph(const PoreImage& image) {
  return build_graph(image, image.periodic_x(), image.periodic_y());
}

/// Number of traversals needed to reach every node.
int connectivity(const PoreGraph& graph);

}  // namespace porebench
