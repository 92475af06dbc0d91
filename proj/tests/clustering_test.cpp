#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "leakteam/clustering.hpp"
#include "leakteam/error.hpp"
#include "leakteam/propagation.hpp"

using namespace leakteam;

namespace {

PropagationMatrix fig2_sym() { return symmetrize(closure(direct_matrix(test::figure2_graph()))); }

using Clusters = std::vector<std::vector<MemberId>>;

Partition singletons(std::size_t n) {
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i;
  return Partition::from_assignment(labels);
}

}  // namespace

TEST_CASE("Threshold range") {
  CHECK_NOTHROW(Threshold(0.0));
  CHECK_NOTHROW(Threshold(1.0));
  CHECK_THROWS_AS(Threshold(-0.01), ValidationError);
  CHECK_THROWS_AS(Threshold(1.01), ValidationError);
  CHECK_THROWS_AS(Threshold(std::nan("")), ValidationError);
}

TEST_CASE("Partition canonical form") {
  std::vector<std::size_t> labels{7, 3, 7, 3, 9};
  auto p = Partition::from_assignment(labels);
  CHECK(p.clusters() == Clusters{{0, 2}, {1, 3}, {4}});
  CHECK(p.cluster_of(3) == 1);
  CHECK(Partition::from_clusters({{4}, {3, 1}, {2, 0}}, 5) == p);
  CHECK_THROWS_AS(Partition::from_clusters({{0}, {0, 1}}, 2), ValidationError);
  CHECK_THROWS_AS(Partition::from_clusters({{0}}, 2), ValidationError);
  CHECK_THROWS_AS(Partition::from_clusters({{0, 1}, {}}, 2), ValidationError);
}

TEST_CASE("dmax") {
  auto s = fig2_sym();
  std::vector<MemberId> c13{0, 2};
  CHECK(dmax(c13, 1, s) == 1.0);
  std::vector<MemberId> single{3};
  CHECK(dmax(single, 0, s) == s(3, 0));
  auto zeros = PropagationMatrix::identity(default_labels(3), MatrixKind::symmetrized);
  std::vector<MemberId> c01{0, 1};
  CHECK(dmax(c01, 2, zeros) == 0.0);
  CHECK_THROWS_AS(dmax({}, 2, zeros), ValidationError);
  CHECK_THROWS_AS(dmax(c01, 1, zeros), ValidationError);
}

TEST_CASE("cluster_members on the example network") {
  auto s = fig2_sym();
  CHECK(cluster_members(s, Threshold(0.95)).clusters() == Clusters{{0}, {1, 2, 3, 4, 5}});
  CHECK(cluster_members(s, Threshold(0.5)).clusters() == Clusters{{0, 1, 2, 3, 4, 5}});
  CHECK(cluster_members(s, Threshold(1.0)) == singletons(6));
  // 0.9 sits exactly on the m1 values; equal-to-eta pairs may be split.
  CHECK(cluster_members(s, Threshold(0.9)).cluster_count() == 2);

  std::vector<MemberId> seeds{5, 0};
  CHECK(cluster_members(s, Threshold(0.95), seeds).clusters() == Clusters{{0}, {1, 2, 3, 4, 5}});
}

TEST_CASE("cluster_members errors") {
  auto s = fig2_sym();
  std::vector<MemberId> dup{1, 1};
  CHECK_THROWS_AS(cluster_members(s, Threshold(0.5), dup), ValidationError);
  std::vector<MemberId> bad{6};
  CHECK_THROWS_AS(cluster_members(s, Threshold(0.5), bad), ValidationError);
  CHECK_THROWS_AS(cluster_members(closure(direct_matrix(test::figure2_graph())), Threshold(0.5)),
                  ValidationError);
}

TEST_CASE("verify_free_leak") {
  auto s = fig2_sym();
  auto good = Partition::from_clusters({{0}, {1, 2, 3, 4, 5}}, 6);
  auto report = verify_free_leak(good, s, Threshold(0.95));
  CHECK(report.ok);
  CHECK(report.violations.empty());

  auto bad = Partition::from_clusters({{0, 1}, {2, 3, 4, 5}}, 6);
  auto leaky = verify_free_leak(bad, s, Threshold(0.95));
  CHECK_FALSE(leaky.ok);
  REQUIRE_FALSE(leaky.violations.empty());
  CHECK(leaky.violations.front() == LeakViolation{1, 2, 0, 1, 1.0});
  // m2 against every member of the other cluster.
  CHECK(leaky.violations.size() == 4);
  CHECK(std::is_sorted(leaky.violations.begin(), leaky.violations.end(),
                       [](const auto& a, const auto& b) {
                         return std::pair(a.member_i, a.member_j) < std::pair(b.member_i, b.member_j);
                       }));

  CHECK(verify_free_leak(singletons(6), s, Threshold(1.0)).ok);
  CHECK_THROWS_AS(verify_free_leak(singletons(5), s, Threshold(1.0)), ValidationError);
}

TEST_CASE("components_oracle") {
  auto s = fig2_sym();
  CHECK(components_oracle(s, Threshold(0.95)).clusters() == Clusters{{0}, {1, 2, 3, 4, 5}});
  CHECK(components_oracle(s, Threshold(1.0)) == singletons(6));
  auto zeros = PropagationMatrix::identity(default_labels(5), MatrixKind::symmetrized);
  CHECK(components_oracle(zeros, Threshold(0.0)) == singletons(5));
  CHECK_THROWS_AS(components_oracle(closure(direct_matrix(test::figure2_graph())), Threshold(0.5)),
                  ValidationError);
}

TEST_CASE("spread_seeds") {
  CHECK(spread_seeds(6, 2) == std::vector<MemberId>{0, 3});
  CHECK(spread_seeds(3, 5) == std::vector<MemberId>{0, 1, 2});
  CHECK(spread_seeds(0, 2).empty());
}

TEST_CASE("property: clustering equals components and is leak free") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    auto s = test::random_symmetrized(rng, n);
    std::size_t previous_count = 0;
    for (int step = 0; step <= 10; ++step) {
      Threshold eta(step / 10.0);
      auto expected = components_oracle(s, eta);

      std::vector<MemberId> all(n);
      std::iota(all.begin(), all.end(), MemberId{0});
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<MemberId> seeds(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(rng() % (n + 1)));

      auto got = cluster_members(s, eta, seeds);
      CHECK(got == expected);
      CHECK(verify_free_leak(got, s, eta).ok);
      CHECK(got.cluster_count() >= previous_count);
      previous_count = got.cluster_count();

      // Finest: any split of a multi-member cluster exposes a pair above eta.
      for (const auto& cluster : got.clusters()) {
        if (cluster.size() < 2) continue;
        std::vector<std::size_t> labels(got.assignment());
        for (std::size_t k = 0; k < cluster.size(); ++k) {
          if (rng() % 2 == 0 || k == 0) labels[cluster[k]] = n + 1;
        }
        if (std::all_of(cluster.begin(), cluster.end(),
                        [&](MemberId m) { return labels[m] == n + 1; })) {
          labels[cluster.back()] = got.cluster_of(cluster.back());
        }
        CHECK_FALSE(verify_free_leak(Partition::from_assignment(labels), s, eta).ok);
      }
    }
  }
}
