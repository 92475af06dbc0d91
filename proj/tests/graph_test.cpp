#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "leakteam/error.hpp"
#include "leakteam/graph.hpp"
#include "leakteam/matrix.hpp"

using namespace leakteam;

TEST_CASE("direct_share_probability") {
  CHECK(direct_share_probability(90, 100) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(direct_share_probability(0, 100) == 0.0);
  CHECK(direct_share_probability(0, 0) == 0.0);
  CHECK(direct_share_probability(100, 100) == 1.0);
  CHECK_THROWS_AS(direct_share_probability(-1, 10), ValidationError);
  CHECK_THROWS_AS(direct_share_probability(1, -10), ValidationError);
  CHECK_THROWS_AS(direct_share_probability(11, 10), ValidationError);
  CHECK_THROWS_AS(direct_share_probability(1, 0), ValidationError);
}

TEST_CASE("build_graph on the example network") {
  auto g = test::figure2_graph();
  CHECK(g.size() == 6);
  CHECK(g.edge_count() == 16);
  CHECK(g.edge(0, 2) == 0.9);
  CHECK(g.edge(0, 1) == 0.0);    // arc exists, never used
  CHECK_FALSE(g.edge(0, 3).has_value());
  CHECK(g.out_arcs(1).size() == 4);
  CHECK(g.in_arcs(5).size() == 4);
  CHECK(g.find_member("m4") == MemberId{3});
  CHECK_FALSE(g.find_member("m7").has_value());
}

TEST_CASE("build_graph edge cases") {
  SUBCASE("empty") {
    auto g = build_graph(std::vector<std::string>{}, {});
    CHECK(g.size() == 0);
    CHECK(g.edge_count() == 0);
  }
  SUBCASE("probability out of range") {
    CHECK_THROWS_AS(build_graph(2, {{0, 1, 1.2}}), ValidationError);
    CHECK_THROWS_AS(build_graph(2, {{0, 1, -0.1}}), ValidationError);
    CHECK_THROWS_AS(build_graph(2, {{0, 1, std::nan("")}}), ValidationError);
  }
  SUBCASE("self edge") { CHECK_THROWS_AS(build_graph(2, {{1, 1, 0.5}}), ValidationError); }
  SUBCASE("unknown endpoint") { CHECK_THROWS_AS(build_graph(2, {{0, 2, 0.5}}), ValidationError); }
  SUBCASE("duplicate edge names both rows") {
    std::vector<std::size_t> rows{2, 3, 7};
    try {
      build_graph(default_labels(3), {{0, 1, 0.5}, {1, 2, 0.5}, {0, 1, 0.2}}, rows);
      FAIL("expected rejection");
    } catch (const ValidationError& err) {
      std::string msg = err.what();
      CHECK(msg.find("line 2") != std::string::npos);
      CHECK(msg.find("line 7") != std::string::npos);
    }
  }
  SUBCASE("duplicate or malformed labels") {
    CHECK_THROWS_AS(build_graph({"a", "a"}, {}), ValidationError);
    CHECK_THROWS_AS(build_graph({"a,b"}, {}), ValidationError);
    CHECK_THROWS_AS(build_graph({""}, {}), ValidationError);
  }
}

TEST_CASE("build_graph_from_interactions") {
  std::map<MemberId, double> held{{0, 10}};
  SUBCASE("quantities become ratios") {
    std::vector<InteractionRecord> recs{{0, 2, 9}, {0, 1, 0}};
    auto g = build_graph_from_interactions(default_labels(3), recs, held);
    CHECK(*g.edge(0, 2) == doctest::Approx(0.9).epsilon(1e-15));
    REQUIRE(g.edge(0, 1).has_value());
    CHECK(*g.edge(0, 1) == 0.0);
  }
  SUBCASE("sharing more than held") {
    std::vector<InteractionRecord> recs{{0, 2, 11}};
    CHECK_THROWS_AS(build_graph_from_interactions(default_labels(3), recs, held), ValidationError);
  }
  SUBCASE("missing held quantity") {
    std::vector<InteractionRecord> recs{{1, 2, 1}};
    CHECK_THROWS_AS(build_graph_from_interactions(default_labels(3), recs, held), ValidationError);
  }
}

TEST_CASE("direct_matrix reproduces the example matrix") {
  auto m = direct_matrix(test::figure2_graph());
  CHECK(m.kind() == MatrixKind::direct);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) CHECK(m(i, j) == test::kFigure2Direct[i][j]);
  }
  // Listed properties of the share matrix.
  for (std::size_t i = 0; i < 6; ++i) CHECK(m(i, i) == 1.0);
  bool some_row_not_stochastic = false;
  for (std::size_t i = 0; i < 6; ++i) {
    auto row = m.row(i);
    double sum = 0;
    for (double v : row) sum += v;
    some_row_not_stochastic |= sum != 1.0;
  }
  CHECK(some_row_not_stochastic);
  CHECK(m(0, 2) == 0.9);
  CHECK(m(2, 0) == 0.7);
}

TEST_CASE("direct_matrix without edges is identity-patterned") {
  auto m = direct_matrix(build_graph(3, {}));
  CHECK(m == PropagationMatrix::identity(default_labels(3), MatrixKind::direct));
}

TEST_CASE("PropagationMatrix validation") {
  CHECK_THROWS_AS(PropagationMatrix(default_labels(2), {1, 0.5, 0.5}, MatrixKind::direct),
                  ValidationError);
  CHECK_THROWS_AS(PropagationMatrix(default_labels(2), {0.9, 0, 0, 1}, MatrixKind::direct),
                  ValidationError);
  CHECK_THROWS_AS(PropagationMatrix(default_labels(2), {1, 1.5, 0, 1}, MatrixKind::closure),
                  ValidationError);
  CHECK_THROWS_AS(PropagationMatrix(default_labels(2), {1, 0.5, 0.4, 1}, MatrixKind::symmetrized),
                  ValidationError);
  CHECK_NOTHROW(PropagationMatrix(default_labels(2), {1, 0.5, 0.4, 1}, MatrixKind::closure));
}

TEST_CASE("property: direct matrix invariants and ingestion order") {
  std::mt19937_64 rng(20261016);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 9;
    auto g = test::random_grid_graph(rng, n, 0.4);
    auto m = direct_matrix(g);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(m(i, j) >= 0.0);
        CHECK(m(i, j) <= 1.0);
        if (i == j) {
          CHECK(m(i, j) == 1.0);
        } else if (!g.edge(static_cast<MemberId>(i), static_cast<MemberId>(j))) {
          CHECK(m(i, j) == 0.0);
        }
      }
    }

    std::vector<ShareEdge> shuffled(g.edges().begin(), g.edges().end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(direct_matrix(build_graph(n, shuffled)) == m);

    // The same graph expressed as quantities: held 10 units, shared p * 10.
    std::vector<InteractionRecord> recs;
    std::map<MemberId, double> held;
    for (const auto& e : shuffled) {
      recs.push_back({e.src, e.dst, std::round(e.p * 10.0)});
      held[e.src] = 10.0;
    }
    auto from_quantities = direct_matrix(build_graph_from_interactions(default_labels(n), recs, held));
    CHECK(from_quantities == m);
  }
}

TEST_CASE("natural_less orders numbered labels numerically") {
  CHECK(natural_less("m2", "m10"));
  CHECK_FALSE(natural_less("m10", "m2"));
  CHECK(natural_less("a", "b"));
  CHECK(natural_less("m1", "m1x"));
  CHECK_FALSE(natural_less("m1", "m1"));
  CHECK((natural_less("m01", "m1") != natural_less("m1", "m01")));
}
