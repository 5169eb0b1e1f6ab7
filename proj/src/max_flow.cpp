#include <deque>
#include <limits>

#include "porebench/error.hpp"
#include "porebench/metrics.hpp"

namespace porebench {

namespace {

constexpr long long kUnbounded = std::numeric_limits<long long>::max() / 4;

// Residual network with paired arcs: arc k and arc k ^ 1 are reverses.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t n) : head_(n, -1) {}

  /// Undirected edges get capacity in both directions on one arc pair.
  int add(int from, int to, long long cap, long long reverse_cap) {
    const int k = static_cast<int>(to_.size());
    push(from, to, cap);
    push(to, from, reverse_cap);
    return k;
  }

  long long run(int s, int t) {
    long long total = 0;
    std::vector<int> via(head_.size());
    for (;;) {
      std::fill(via.begin(), via.end(), -1);
      std::deque<int> queue{s};
      via[static_cast<std::size_t>(s)] = -2;
      while (!queue.empty() && via[static_cast<std::size_t>(t)] == -1) {
        const int u = queue.front();
        queue.pop_front();
        for (int k = head_[static_cast<std::size_t>(u)]; k >= 0; k = next_[static_cast<std::size_t>(k)]) {
          const int v = to_[static_cast<std::size_t>(k)];
          if (cap_[static_cast<std::size_t>(k)] > 0 && via[static_cast<std::size_t>(v)] == -1) {
            via[static_cast<std::size_t>(v)] = k;
            queue.push_back(v);
          }
        }
      }
      if (via[static_cast<std::size_t>(t)] == -1) return total;
      long long push_amount = kUnbounded;
      for (int v = t; v != s;) {
        const int k = via[static_cast<std::size_t>(v)];
        push_amount = std::min(push_amount, cap_[static_cast<std::size_t>(k)]);
        v = to_[static_cast<std::size_t>(k ^ 1)];
      }
      for (int v = t; v != s;) {
        const int k = via[static_cast<std::size_t>(v)];
        cap_[static_cast<std::size_t>(k)] -= push_amount;
        cap_[static_cast<std::size_t>(k ^ 1)] += push_amount;
        v = to_[static_cast<std::size_t>(k ^ 1)];
      }
      total += push_amount;
    }
  }

  std::vector<char> reachable(int s) const {
    std::vector<char> seen(head_.size(), 0);
    std::deque<int> queue{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int k = head_[static_cast<std::size_t>(u)]; k >= 0; k = next_[static_cast<std::size_t>(k)]) {
        const int v = to_[static_cast<std::size_t>(k)];
        if (cap_[static_cast<std::size_t>(k)] > 0 && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          queue.push_back(v);
        }
      }
    }
    return seen;
  }

 private:
  void push(int from, int to, long long cap) {
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[static_cast<std::size_t>(from)]);
    head_[static_cast<std::size_t>(from)] = static_cast<int>(to_.size()) - 1;
  }

  std::vector<int> head_;
  std::vector<int> to_;
  std::vector<long long> cap_;
  std::vector<int> next_;
};

}  // namespace

MaxFlowResult max_flow(const PoreImage& image, Axis axis) {
  const int extent = image.extent(axis);
  if (extent < 2)
    throw Error(ErrorCode::DegenerateAxis, "maximum flow needs at least 2 pixels along the axis");
  const bool along_x = axis == Axis::X;
  const int across = image.extent(other_axis(axis));
  auto pixel_at = [&](int along, int off) {
    return along_x ? image.index(along, off) : image.index(off, along);
  };

  bool low_void = false, high_void = false;
  for (int off = 0; off < across; ++off) {
    low_void = low_void || image.is_void(pixel_at(0, off));
    high_void = high_void || image.is_void(pixel_at(extent - 1, off));
  }
  if (!low_void || !high_void)
    throw Error(ErrorCode::NoBoundaryVoid,
                std::string("a face normal to ") + (along_x ? "x" : "y") + " has no void pixel");

  const PoreGraph g = build_graph(image, along_x ? false : image.periodic_x(),
                                  along_x ? image.periodic_y() : false);
  const int source = static_cast<int>(g.node_count());
  const int sink = source + 1;
  FlowNetwork net(g.node_count() + 2);
  for (const auto& e : g.edges()) net.add(e.u, e.v, e.capacity, e.capacity);
  for (int off = 0; off < across; ++off) {
    const int lo = g.node_of(pixel_at(0, off));
    if (lo >= 0) net.add(source, lo, kUnbounded, 0);
    const int hi = g.node_of(pixel_at(extent - 1, off));
    if (hi >= 0) net.add(hi, sink, kUnbounded, 0);
  }

  MaxFlowResult out;
  out.flow = net.run(source, sink);
  const auto side = net.reachable(source);
  for (const auto& e : g.edges()) {
    if (side[static_cast<std::size_t>(e.u)] != side[static_cast<std::size_t>(e.v)])
      out.cut.emplace_back(g.nodes()[static_cast<std::size_t>(e.u)].pixel,
                           g.nodes()[static_cast<std::size_t>(e.v)].pixel);
  }
  return out;
}

}  // namespace porebench
