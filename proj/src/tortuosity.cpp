#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <tuple>

#include "porebench/error.hpp"
#include "porebench/metrics.hpp"
#include "porebench/parallel.hpp"

namespace porebench {

namespace {

constexpr double kPairExtra = std::numbers::sqrt2 - 1.0;
constexpr int kNoPending = 4;  // state slot for "no unpaired previous step"
constexpr int kStates = 5;

bool orthogonal(int a, int b) { return ((a ^ b) & 1) != 0; }

// Exact path cost: straight steps count 1, each completed L adds
// (sqrt(2) - 1) on top of its first step.
struct Cost {
  long long straight = 0;
  long long pairs = 0;
  double value() const { return static_cast<double>(straight) + kPairExtra * static_cast<double>(pairs); }
};

struct SourceResult {
  bool reached = false;
  Cost cost;
  std::vector<std::size_t> path;
};

// Search state of one copy of the cell along the axis.
struct Layer {
  std::vector<Cost> best;
  std::vector<double> key;
  std::vector<char> done;
  std::vector<std::pair<int, int>> parent;  // (layer, state)
};

// Dijkstra over (node, unpaired last step, cell copy). Moving across a wrap
// edge along the axis enters the neighboring copy. The search stops at the
// first state accepted by `is_goal(node, copy)`.
template <typename Goal>
SourceResult route(const PoreGraph& g, bool along_x, int source, const Goal& is_goal,
                   bool record_path) {
  const std::size_t n_states = g.node_count() * kStates;
  std::map<int, Layer> layers;
  auto layer = [&](int copy) -> Layer& {
    auto it = layers.find(copy);
    if (it == layers.end()) {
      Layer l;
      l.best.resize(n_states);
      l.key.assign(n_states, std::numeric_limits<double>::infinity());
      l.done.assign(n_states, 0);
      if (record_path) l.parent.assign(n_states, {0, -1});
      it = layers.emplace(copy, std::move(l)).first;
    }
    return it->second;
  };

  using Item = std::tuple<double, int, int>;  // key, copy, state
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  const int start = source * kStates + kNoPending;
  layer(0).key[static_cast<std::size_t>(start)] = 0.0;
  open.emplace(0.0, 0, start);

  SourceResult result;
  int final_copy = 0, final_state = -1;
  while (!open.empty()) {
    const auto [k, copy, s] = open.top();
    open.pop();
    const auto su = static_cast<std::size_t>(s);
    Layer& here = layer(copy);
    if (here.done[su]) continue;
    here.done[su] = 1;
    const int node = s / kStates;
    const int pending = s % kStates;
    if (is_goal(node, copy)) {
      final_copy = copy;
      final_state = s;
      break;
    }
    const Cost base = here.best[su];
    for (const auto& inc : g.incident(node)) {
      const auto& e = g.edges()[static_cast<std::size_t>(inc.edge)];
      // Edge v is east/south of u; steps are 0=E, 1=N, 2=W, 3=S.
      const bool forward = e.u == node && inc.other == e.v;
      const int dir = e.horizontal ? (forward ? 0 : 2) : (forward ? 3 : 1);
      int next_copy = copy;
      if (e.wraps && e.horizontal == along_x) next_copy += forward ? 1 : -1;
      Cost c = base;
      int next_pending;
      if (pending != kNoPending && orthogonal(pending, dir)) {
        ++c.pairs;
        next_pending = kNoPending;
      } else {
        ++c.straight;
        next_pending = dir;
      }
      const int t = inc.other * kStates + next_pending;
      const auto tu = static_cast<std::size_t>(t);
      Layer& there = layer(next_copy);
      const double v = c.value();
      if (!there.done[tu] && v < there.key[tu]) {
        there.key[tu] = v;
        there.best[tu] = c;
        if (record_path) there.parent[tu] = {copy, s};
        open.emplace(v, next_copy, t);
      }
    }
  }
  if (final_state < 0) return result;
  result.reached = true;
  result.cost = layer(final_copy).best[static_cast<std::size_t>(final_state)];
  if (record_path) {
    int c = final_copy, s = final_state;
    while (s >= 0) {
      result.path.push_back(g.nodes()[static_cast<std::size_t>(s / kStates)].pixel);
      const auto p = layer(c).parent[static_cast<std::size_t>(s)];
      c = p.first;
      s = p.second;
    }
    std::reverse(result.path.begin(), result.path.end());
  }
  return result;
}

}  // namespace

double stairwise_length(const std::vector<int>& steps) {
  // Same greedy pairing as the search: an unpaired step pairs with the next
  // one when they are orthogonal.
  Cost c;
  int pending = kNoPending;
  for (int d : steps) {
    if (pending != kNoPending && orthogonal(pending, d)) {
      ++c.pairs;
      pending = kNoPending;
    } else {
      ++c.straight;
      pending = d;
    }
  }
  return c.value();
}

TortuosityResult tortuosity(const PoreImage& image, Axis axis, const TortuosityOptions& options) {
  const int extent = image.extent(axis);
  if (extent < 2)
    throw Error(ErrorCode::DegenerateAxis, "tortuosity needs at least 2 pixels along the axis");
  const bool along_x = axis == Axis::X;
  const bool periodic_along = image.periodic(axis);
  const PoreGraph g = build_graph(image);

  const int across = image.extent(other_axis(axis));
  auto pixel_at = [&](int along, int off) {
    return along_x ? image.index(along, off) : image.index(off, along);
  };

  // Void pixels of both faces; face_of[node] is 0 (low), 1 (high) or -1.
  std::vector<int> face_of(g.node_count(), -1);
  std::vector<int> sources;
  for (int side = 0; side < 2; ++side)
    for (int off = 0; off < across; ++off) {
      const int s = g.node_of(pixel_at(side == 0 ? 0 : extent - 1, off));
      if (s < 0) continue;
      face_of[static_cast<std::size_t>(s)] = side;
      sources.push_back(s);
    }

  std::vector<SourceResult> results(sources.size());
  parallel_for(sources.size(), [&](std::size_t k) {
    const int s = sources[k];
    if (periodic_along) {
      // One full period: from the pixel to its own copy in the next cell.
      results[k] = route(
          g, along_x, s, [s](int node, int copy) { return node == s && copy == 1; },
          options.record_paths);
    } else {
      const int target_face = 1 - face_of[static_cast<std::size_t>(s)];
      results[k] = route(
          g, along_x, s,
          [&](int node, int) { return face_of[static_cast<std::size_t>(node)] == target_face; },
          options.record_paths);
    }
  });

  TortuosityResult out;
  out.n_sources = sources.size();
  for (auto& r : results) {
    if (!r.reached) continue;
    ++out.n_paths;
    out.straight_steps += r.cost.straight;
    out.diagonal_pairs += r.cost.pairs;
    if (options.record_paths) out.paths.push_back(std::move(r.path));
  }
  if (out.n_paths == 0)
    throw Error(ErrorCode::NoCrossingPath,
                std::string("no void path crosses the cell along ") + (along_x ? "x" : "y"));

  const double len = image.pixel_length();
  const Cost total{out.straight_steps, out.diagonal_pairs};
  out.mean_path_length = total.value() / static_cast<double>(out.n_paths) * len;
  out.straight_length = static_cast<double>(periodic_along ? extent : extent - 1) * len;
  out.tau = out.mean_path_length / out.straight_length;
  return out;
}

}  // namespace porebench
