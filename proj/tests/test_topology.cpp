#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "vlcfl/error.hpp"
#include "vlcfl/random.hpp"
#include "vlcfl/topology.hpp"

using namespace vlcfl;

TEST_CASE("distance") {
  CHECK(distance({0, 0, 0}, {0, 0, 0}) == 0.0);
  CHECK(distance({3, 4, 0}, {0, 0, 0}) == 5.0);
  CHECK(distance({0, 0, 2.5}, {0, 1.66, 0}) == doctest::Approx(3.0).epsilon(0.001));
  CHECK(distance({1, 2, 3}, {-4, 5, 0.5}) == distance({-4, 5, 0.5}, {1, 2, 3}));
  CHECK(horizontal_distance({3, 4, 10}, {0, 0, -2}) == 5.0);
}

TEST_CASE("AP layout") {
  TopologyParams p;
  const auto aps = vlc_ap_layout(p);
  REQUIRE(aps.size() == 4);
  for (const auto& ap : aps) {
    CHECK(std::hypot(ap.x, ap.y) == doctest::Approx(25.0));
    CHECK(ap.z == doctest::Approx(3.35));
  }
  CHECK(aps[0].x == doctest::Approx(25.0 / std::sqrt(2.0)));
  CHECK(aps[0].y == doctest::Approx(25.0 / std::sqrt(2.0)));
  CHECK(aps[2].x == doctest::Approx(-25.0 / std::sqrt(2.0)));
}

TEST_CASE("generate_topology counts and geometry") {
  TopologyParams p;
  const auto t = generate_topology(p, 3);
  CHECK(t.users.size() == 50);
  CHECK(t.n_indoor == 40);
  CHECK(t.n_outdoor == 10);
  for (std::size_t i = 0; i < t.users.size(); ++i) {
    const auto& u = t.users[i];
    CHECK(u.id == static_cast<UserId>(i));
    CHECK(u.indoor == (i < 40));
    CHECK(horizontal_distance(u.position, t.bs_position) <= p.cell_radius_m);
    CHECK(u.position.z == p.receiver_height_m);
    CHECK(u.cycles_per_sample >= p.cycles_min);
    CHECK(u.cycles_per_sample <= p.cycles_max);
    CHECK(u.cpu_freq_hz >= p.cpu_freq_min_hz);
    CHECK(u.cpu_freq_hz <= p.cpu_freq_max_hz);
    CHECK(u.shard_size == p.shard_size);
    if (u.indoor) {
      double nearest = 1e9;
      for (const auto& ap : t.vlc_aps) nearest = std::min(nearest, horizontal_distance(u.position, ap));
      CHECK(nearest <= p.ap_coverage_radius_m);
    }
  }
}

TEST_CASE("generate_topology edge cases") {
  TopologyParams p;
  p.n_users = 1;
  p.indoor_fraction = 0.0;
  const auto t = generate_topology(p, 1);
  CHECK(t.users.size() == 1);
  CHECK(t.n_indoor == 0);
  CHECK_FALSE(t.users[0].indoor);

  for (std::size_t n : {1, 2, 3, 7, 13, 99}) {
    for (double f : {0.0, 0.25, 0.5, 0.8, 1.0}) {
      p.n_users = n;
      p.indoor_fraction = f;
      const auto topo = generate_topology(p, n);
      CHECK(topo.n_indoor == static_cast<std::size_t>(std::llround(f * static_cast<double>(n))));
      CHECK(topo.n_indoor + topo.n_outdoor == n);
    }
  }

  p.n_users = 0;
  CHECK_THROWS_AS(generate_topology(p, 1), InvalidArgument);
  p.n_users = 5;
  p.indoor_fraction = 1.5;
  CHECK_THROWS_AS(generate_topology(p, 1), InvalidArgument);
  p.indoor_fraction = -0.1;
  CHECK_THROWS_AS(generate_topology(p, 1), InvalidArgument);
  p.indoor_fraction = 0.5;
  p.cell_radius_m = 0.0;
  CHECK_THROWS_AS(generate_topology(p, 1), InvalidArgument);
}

TEST_CASE("generate_topology is deterministic per seed") {
  TopologyParams p;
  CHECK(generate_topology(p, 7) == generate_topology(p, 7));
  CHECK_FALSE(generate_topology(p, 7) == generate_topology(p, 8));
}

TEST_CASE("outdoor radii follow the uniform-area law") {
  // Indoor users cluster around the APs by design; the disk law is checked on
  // an all-outdoor population.
  TopologyParams p;
  p.n_users = 20000;
  p.indoor_fraction = 0.0;
  const auto t = generate_topology(p, 11);
  std::vector<double> r;
  r.reserve(t.users.size());
  for (const auto& u : t.users) r.push_back(horizontal_distance(u.position, t.bs_position));
  std::sort(r.begin(), r.end());
  const double n = static_cast<double>(r.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double cdf = std::pow(r[i] / p.cell_radius_m, 2);
    ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n), std::abs(cdf - static_cast<double>(i + 1) / n)});
  }
  CHECK(ks < 0.02);
}

TEST_CASE("rng helpers") {
  Rng a(5);
  Rng b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  Rng c(9);
  std::vector<int> xs(50);
  for (int i = 0; i < 50; ++i) xs[static_cast<std::size_t>(i)] = i;
  c.shuffle(std::span<int>(xs));
  auto sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);

  Rng d(1);
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double z = d.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(sum / 20000.0 == doctest::Approx(0.0).epsilon(0.03));
  CHECK(sq / 20000.0 == doctest::Approx(1.0).epsilon(0.03));
  CHECK(derive_seed(1, 1) != derive_seed(1, 2));
  CHECK(derive_seed(1, 1) != derive_seed(2, 1));
}
