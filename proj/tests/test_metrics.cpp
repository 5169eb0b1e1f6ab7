#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "oracles.hpp"
#include "porebench/error.hpp"
#include "porebench/graph.hpp"
#include "porebench/metrics.hpp"
#include "porebench/preprocess.hpp"

using namespace porebench;

namespace {

constexpr double kR2 = std::numbers::sqrt2;

PoreImage with_solids(int w, int h, std::initializer_list<std::pair<int, int>> solids) {
  PoreImage img(w, h, true);
  for (auto [x, y] : solids) img.set_void(x, y, false);
  return img;
}

// Population standard deviation of eight bins.
double bin_std(const std::array<double, 8>& d) {
  double mean = 0;
  for (double v : d) mean += v / 8.0;
  double var = 0;
  for (double v : d) var += (v - mean) * (v - mean) / 8.0;
  return std::sqrt(var);
}

void check_surface(const PoreImage& img, double raw, std::size_t boundary,
                   const std::array<double, 8>& di) {
  const auto m = surface_metrics(img);
  CHECK(m.raw_surface == doctest::Approx(raw).epsilon(1e-14));
  CHECK(m.specific_surface == doctest::Approx(raw / (img.width() * img.height())).epsilon(1e-14));
  CHECK(m.boundary_pixels == boundary);
  for (std::size_t b = 0; b < 8; ++b) {
    CAPTURE(b);
    CHECK(m.directionality[b] == doctest::Approx(di[b]).epsilon(1e-15));
  }
  CHECK(m.directionality_std == doctest::Approx(bin_std(di)).epsilon(1e-14));
}

PoreImage disk_field(int w, int h, std::initializer_list<std::array<double, 3>> disks) {
  PoreImage img(w, h, false);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (const auto& d : disks)
        if (std::hypot(x - d[0], y - d[1]) <= d[2]) img.set_void(x, y, true);
  return img;
}

}  // namespace

TEST_CASE("porosity") {
  CHECK(porosity(PoreImage(10, 10, true)) == 1.0);
  CHECK(porosity(PoreImage(10, 10, false)) == 0.0);
  PoreImage img(200, 200, false);
  for (std::size_t i = 0; i < 26000; ++i) img.set_void(i * 40000 / 26000, true);
  CHECK(oracle::count_void(img) == 26000);
  CHECK(porosity(img) == 0.65);
}

TEST_CASE("distance transform against brute force") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 40; ++t) {
    auto img = oracle::random_image(rng, 3 + t % 11, 2 + t % 7, 0.8);
    img.set_periodic(t % 2 == 0, t % 3 != 0);
    const auto d = distance_transform(img);
    const int w = img.width(), h = img.height();
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double best = std::numeric_limits<double>::infinity();
        for (int sy = 0; sy < h; ++sy)
          for (int sx = 0; sx < w; ++sx) {
            if (img.is_void(sx, sy)) continue;
            int ddx = std::abs(sx - x), ddy = std::abs(sy - y);
            if (img.periodic_x()) ddx = std::min(ddx, w - ddx);
            if (img.periodic_y()) ddy = std::min(ddy, h - ddy);
            best = std::min(best, std::sqrt(double(ddx * ddx + ddy * ddy)));
          }
        CHECK(d[img.index(x, y)] == best);
      }
  }
}

TEST_CASE("pore size distribution examples") {
  SUBCASE("single void disk") {
    const auto img = disk_field(40, 40, {{{20, 20, 10}}});
    const auto psd = pore_size_distribution(img);
    CHECK(psd.n_pores == 1);
    CHECK(psd.mean == static_cast<double>(oracle::count_void(img)));
    CHECK(psd.stddev == 0.0);
  }
  SUBCASE("two identical disks") {
    const auto img = disk_field(60, 40, {{{15, 20, 8}}, {{45, 20, 8}}});
    const auto psd = pore_size_distribution(img);
    CHECK(psd.n_pores == 2);
    CHECK(psd.stddev == 0.0);
    CHECK(psd.mean == oracle::count_void(img) / 2.0);
  }
  SUBCASE("dumbbell splits inside the throat") {
    auto img = disk_field(60, 40, {{{15, 20, 8}}, {{45, 20, 8}}});
    for (int x = 23; x <= 37; ++x) img.set_void(x, 20, true);
    const auto psd = pore_size_distribution(img);
    REQUIRE(psd.n_pores == 2);
    // every pixel of a disk body carries that disk's label
    std::set<int> left, right;
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 60; ++x) {
        if (!img.is_void(x, y)) continue;
        const int lab = psd.segments[img.index(x, y)];
        CHECK(lab >= 0);
        if (std::hypot(x - 15.0, y - 20.0) <= 8.0) left.insert(lab);
        if (std::hypot(x - 45.0, y - 20.0) <= 8.0) right.insert(lab);
      }
    CHECK(left.size() == 1);
    CHECK(right.size() == 1);
    CHECK(*left.begin() != *right.begin());
    double total = 0;
    for (double v : psd.volumes) total += v;
    CHECK(total == static_cast<double>(oracle::count_void(img)));
  }
  SUBCASE("all solid") { CHECK_THROWS_AS(pore_size_distribution(PoreImage(5, 5, false)), Error); }
}

TEST_CASE("surface rule micro-oracles") {
  using D = std::array<double, 8>;  // E NE N NW W SW S SE
  SUBCASE("all void") {
    const auto m = surface_metrics(PoreImage(10, 10, true));
    CHECK(m.raw_surface == 0.0);
    CHECK(m.directionality == D{});
    CHECK(m.directionality_std == 0.0);
  }
  SUBCASE("single solid pixel") {
    check_surface(with_solids(10, 10, {{5, 5}}), 4.0, 4, D{0.25, 0, 0.25, 0, 0.25, 0, 0.25, 0});
    CHECK(surface_metrics(with_solids(10, 10, {{5, 5}})).specific_surface == 0.04);
  }
  SUBCASE("corner") {
    const double s = 1.0 / 6;
    check_surface(with_solids(10, 10, {{4, 5}, {5, 6}}), 4 + 2 * kR2, 6, D{s, s, s, 0, s, s, s, 0});
  }
  SUBCASE("slit") {
    const auto img = with_solids(10, 10, {{4, 5}, {6, 5}});
    const double s = 1.0 / 7;
    check_surface(img, 8.0, 7, D{s, 0, 2 * s, 0, s, 0, 2 * s, 0});
    CHECK(surface_metrics(img).zero_normal_pixels == 1);
  }
  SUBCASE("three boundaries") {
    const double s = 1.0 / 8;
    check_surface(with_solids(10, 10, {{4, 5}, {6, 5}, {5, 6}}), 5 + 3 * kR2, 8,
                  D{s, 0, 3 * s, 0, s, s, s, s});
  }
  SUBCASE("isolated void pixel") {
    const auto img = with_solids(10, 10, {{4, 5}, {6, 5}, {5, 4}, {5, 6}});
    const double s = 1.0 / 9;
    check_surface(img, 8 + 4 * kR2, 9, D{s, s, s, s, s, s, s, s});
    CHECK(surface_metrics(img).zero_normal_pixels == 1);
  }
  SUBCASE("pixel length scales the surface") {
    auto img = with_solids(10, 10, {{5, 5}});
    img.set_pixel_length(0.5);
    const auto m = surface_metrics(img);
    CHECK(m.raw_surface == 2.0);
    CHECK(m.specific_surface == 2.0 / 25.0);
  }
  SUBCASE("periodic wrap sees solids across the edge") {
    const auto img = with_solids(6, 6, {{0, 0}});
    CHECK(surface_metrics(img).raw_surface == 4.0);
    auto open = img;
    open.set_periodic(false, false);
    CHECK(surface_metrics(open).raw_surface == 2.0);
  }
}

TEST_CASE("surface conservation on sparse inclusions") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    PoreImage img(30, 30, true);
    std::size_t faces = 0;
    // solid pixels on a lattice of spacing 3 can never share a void neighbor
    for (int y = 1; y < 30; y += 3)
      for (int x = 1; x < 30; x += 3)
        if (oracle::uniform(rng) < 0.5) {
          img.set_void(x, y, false);
          faces += 4;
        }
    if (faces == 0) continue;
    const auto m = surface_metrics(img);
    CHECK(m.raw_surface == static_cast<double>(faces));
    double sum = 0;
    for (double d : m.directionality) sum += d;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("pore graph examples") {
  PoreImage strip(3, 1, true);
  CHECK(build_graph(strip, false, false).node_count() == 3);
  CHECK(build_graph(strip, false, false).edge_count() == 2);
  CHECK(build_graph(strip, true, false).edge_count() == 3);

  PoreImage checker(4, 4, false);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) checker.set_void(x, y, (x + y) % 2 == 0);
  const auto g = build_graph(checker, false, false);
  CHECK(g.node_count() == 8);
  CHECK(g.edge_count() == 0);
  CHECK(connectivity(g) == 8);
  CHECK(connectivity(build_graph(PoreImage(5, 5, true))) == 1);

  std::mt19937_64 rng(12);
  const auto cleaned = keep_largest_component(oracle::random_image(rng, 20, 20, 0.5));
  CHECK(connectivity(build_graph(cleaned)) == 1);
  CHECK_THROWS_AS(build_graph(PoreImage(2, 2, false)), Error);
}

TEST_CASE("stair-wise charging") {
  CHECK(stairwise_length({}) == 0.0);
  CHECK(stairwise_length({0, 0, 0}) == 3.0);
  CHECK(stairwise_length({0, 3}) == kR2);
  CHECK(stairwise_length({0, 3, 0, 3}) == 2 * kR2);
  CHECK(stairwise_length({0, 3, 0}) == doctest::Approx(kR2 + 1));
  CHECK(stairwise_length({0, 2}) == 2.0);  // a reversal is not an L
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    std::vector<int> steps(static_cast<std::size_t>(rng() % 12));
    for (auto& s : steps) s = static_cast<int>(rng() % 4);
    CHECK(stairwise_length(steps) == doctest::Approx(oracle::stair_dp(steps)).epsilon(1e-14));
  }
}

TEST_CASE("tortuosity examples") {
  SUBCASE("straight open channel") {
    PoreImage img(12, 7, false);
    for (int x = 0; x < 12; ++x) img.set_void(x, 3, true);
    CHECK(tortuosity(img, Axis::X).tau == 1.0);
    CHECK_THROWS_AS(tortuosity(img, Axis::Y), Error);
  }
  SUBCASE("all void") {
    const PoreImage img(9, 6, true);
    CHECK(tortuosity(img, Axis::X).tau == 1.0);
    CHECK(tortuosity(img, Axis::Y).tau == 1.0);
  }
  SUBCASE("45 degree staircase") {
    for (int n : {4, 10, 33}) {
      PoreImage img(n, n, false);
      for (int k = 0; k < n; ++k) {
        img.set_void(k, k, true);
        img.set_void((k + 1) % n, k, true);
      }
      const auto tx = tortuosity(img, Axis::X);
      const auto ty = tortuosity(img, Axis::Y);
      CAPTURE(n);
      CHECK(std::abs(tx.tau - kR2) <= 1e-9);
      CHECK(std::abs(ty.tau - kR2) <= 1e-9);
      CHECK(tx.straight_length == n);
    }
  }
  SUBCASE("non-periodic axis routes face to face") {
    auto img = PoreImage(6, 3, true);
    img.set_periodic(false, false);
    const auto t = tortuosity(img, Axis::X);
    CHECK(t.tau == 1.0);
    CHECK(t.straight_length == 5.0);
    CHECK(t.n_sources == 6);
  }
  SUBCASE("paths are recorded") {
    PoreImage img(5, 3, false);
    for (int x = 0; x < 5; ++x) img.set_void(x, 1, true);
    TortuosityOptions opt;
    opt.record_paths = true;
    const auto t = tortuosity(img, Axis::X, opt);
    REQUIRE(t.paths.size() == 2);
    CHECK(t.paths[0].size() == 6);  // returns to its own copy
    CHECK(t.paths[0].front() == t.paths[0].back());
  }
  SUBCASE("degenerate axis") {
    CHECK_THROWS_AS(tortuosity(PoreImage(1, 5, true), Axis::X), Error);
  }
}

TEST_CASE("tortuosity against exhaustive enumeration") {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    auto img = oracle::random_image(rng, 3 + t % 3, 3 + (t / 3) % 2, 0.65);
    img.set_periodic(t % 4 != 1, t % 5 != 2);
    for (Axis axis : {Axis::X, Axis::Y}) {
      const auto ref = oracle::enumerate_tortuosity(img, axis);
      if (ref.reached == 0) {
        CHECK_THROWS_AS(tortuosity(img, axis), Error);
        continue;
      }
      const auto got = tortuosity(img, axis);
      CHECK(got.n_paths == ref.reached);
      CHECK(std::abs(got.tau - ref.tau) <= 1e-12);
      CHECK(got.tau >= 1.0);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("max flow examples") {
  SUBCASE("all void N x N") {
    PoreImage img(4, 4, true);
    CHECK(max_flow(img, Axis::X).flow == 4);
    img.set_periodic(false, false);
    CHECK(max_flow(img, Axis::X).flow == 4);
    CHECK(max_flow(img, Axis::X).cut.size() == 4);
  }
  SUBCASE("straight channel of width w") {
    PoreImage img(10, 9, false);
    for (int y = 2; y < 5; ++y)
      for (int x = 0; x < 10; ++x) img.set_void(x, y, true);
    CHECK(max_flow(img, Axis::X).flow == 3);
  }
  SUBCASE("solid bar across the axis") {
    PoreImage img(6, 6, true);
    for (int y = 0; y < 6; ++y) img.set_void(3, y, false);
    CHECK(max_flow(img, Axis::X).flow == 0);
    CHECK(max_flow(img, Axis::Y).flow == 5);
  }
  SUBCASE("bottleneck and cut edges") {
    const auto img = oracle::from_rows({"...#...", ".......", "...#...", "...#..."});
    const auto r = max_flow(img, Axis::X);
    CHECK(r.flow == 1);
    REQUIRE(r.cut.size() == 1);
    std::set<std::size_t> ends{r.cut[0].first, r.cut[0].second};
    // the single bridge pixel is (3, 1)
    CHECK(ends.count(img.index(3, 1)) == 1);
  }
  SUBCASE("errors") {
    PoreImage img(5, 5, true);
    for (int y = 0; y < 5; ++y) img.set_void(0, y, false);
    CHECK_THROWS_AS(max_flow(img, Axis::X), Error);
    CHECK_THROWS_AS(max_flow(PoreImage(1, 3, true), Axis::X), Error);
  }
}

TEST_CASE("max flow against brute-force min cut") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 150; ++t) {
    auto img = oracle::random_image(rng, 2 + t % 4, 2 + (t / 4) % 4, 0.6);
    img.set_periodic(t % 2 == 0, t % 3 == 0);
    for (Axis axis : {Axis::X, Axis::Y}) {
      const long long ref = oracle::brute_force_min_cut(img, axis);
      try {
        const auto r = max_flow(img, axis);
        CHECK(r.flow == ref);
        CHECK(r.cut.size() == static_cast<std::size_t>(r.flow));
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoBoundaryVoid);
        CHECK(ref == 0);
      }
    }
  }
}

TEST_CASE("axis symmetry and mirror invariance") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 25; ++t) {
    const auto img = oracle::random_image(rng, 9 + t % 4, 7 + t % 3, 0.62);
    if (!img.any_void()) continue;
    const auto base = compute_metrics(img);
    const auto rot = compute_metrics(img.rotated90());
    CHECK(rot.tau_x == base.tau_y);
    CHECK(rot.tau_y == base.tau_x);
    CHECK(rot.max_flow_x == base.max_flow_y);
    CHECK(rot.max_flow_y == base.max_flow_x);
    CHECK(rot.porosity == base.porosity);
    CHECK(rot.specific_surface == doctest::Approx(base.specific_surface).epsilon(1e-14));

    for (int axis = 0; axis < 2; ++axis) {
      const auto mir = compute_metrics(axis == 0 ? img.mirrored_x() : img.mirrored_y());
      CHECK(mir.porosity == base.porosity);
      CHECK(mir.specific_surface == doctest::Approx(base.specific_surface).epsilon(1e-14));
      CHECK(mir.tau_x == base.tau_x);
      CHECK(mir.tau_y == base.tau_y);
      CHECK(mir.max_flow_x == base.max_flow_x);
      CHECK(mir.max_flow_y == base.max_flow_y);
      CHECK(mir.connectivity == base.connectivity);
      // E NE N NW W SW S SE under x mirror: E<->W, NE<->NW, SW<->SE
      static constexpr int kMirX[8] = {4, 3, 2, 1, 0, 7, 6, 5};
      static constexpr int kMirY[8] = {0, 7, 6, 5, 4, 3, 2, 1};
      for (int b = 0; b < 8; ++b)
        CHECK(mir.directionality[static_cast<std::size_t>((axis == 0 ? kMirX : kMirY)[b])] ==
              doctest::Approx(base.directionality[static_cast<std::size_t>(b)]).epsilon(1e-14));
    }
  }
}

TEST_CASE("metrics report") {
  SUBCASE("all solid") { CHECK_THROWS_AS(compute_metrics(PoreImage(4, 4, false)), Error); }
  SUBCASE("per-axis failures become warnings") {
    PoreImage img(8, 8, true);
    for (int y = 0; y < 8; ++y) img.set_void(4, y, false);
    const auto r = compute_metrics(img);
    CHECK_FALSE(r.tau_x.has_value());
    CHECK(r.max_flow_x == 0);
    CHECK(r.tau_y == 1.0);
    CHECK(r.max_flow_y == 7);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].code == "NoCrossingPath");
    CHECK(r.warnings[0].axis == "x");
  }
  SUBCASE("invariants on random images") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 10; ++t) {
      const auto img = oracle::random_image(rng, 24, 20, 0.7);
      const auto r = compute_metrics(img);
      CHECK(r.porosity >= 0.0);
      CHECK(r.porosity <= 1.0);
      if (r.tau_x) CHECK(*r.tau_x >= 1.0);
      if (r.tau_y) CHECK(*r.tau_y >= 1.0);
      CHECK(r.connectivity == label_components(img).count());
      for (double d : r.directionality) CHECK(d >= 0.0);
    }
  }
}

TEST_CASE("directionality bins sum over nonzero-normal pixels") {
  std::mt19937_64 rng(41);
  int clean = 0;
  for (int t = 0; t < 200; ++t) {
    const auto img = oracle::random_image(rng, 12, 9, 0.5 + 0.45 * oracle::uniform(rng));
    const auto m = surface_metrics(img);
    double sum = 0.0;
    for (double v : m.directionality) {
      CHECK(v >= 0.0);
      sum += v;
    }
    if (m.boundary_pixels == 0) {
      CHECK(sum == 0.0);
      continue;
    }
    const double want = static_cast<double>(m.boundary_pixels - m.zero_normal_pixels) /
                        static_cast<double>(m.boundary_pixels);
    CHECK(std::abs(sum - want) <= 1e-9);
    if (m.zero_normal_pixels == 0) {
      ++clean;
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
  CHECK(clean > 10);
}
