#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "leakteam/graph.hpp"
#include "leakteam/matrix.hpp"

namespace leakteam::test {

// Six-member example network; includes the zero-probability arc m1->m2.
inline std::vector<ShareEdge> figure2_edges() {
  return {
      {0, 1, 0.0}, {0, 2, 0.9},                             //
      {1, 0, 0.8}, {1, 2, 0.8}, {1, 3, 1.0}, {1, 5, 0.7},   //
      {2, 0, 0.7}, {2, 1, 1.0}, {2, 4, 0.1}, {2, 5, 0.3},   //
      {3, 1, 0.2}, {3, 2, 0.9}, {3, 4, 1.0}, {3, 5, 0.6},   //
      {4, 5, 1.0},                                          //
      {5, 4, 0.4},
  };
}

inline SocialGraph figure2_graph() { return build_graph(6, figure2_edges()); }

inline constexpr std::array<std::array<double, 6>, 6> kFigure2Direct{{
    {1, 0, 0.9, 0, 0, 0},
    {0.8, 1, 0.8, 1, 0, 0.7},
    {0.7, 1, 1, 0, 0.1, 0.3},
    {0, 0.2, 0.9, 1, 1, 0.6},
    {0, 0, 0, 0, 1, 1},
    {0, 0, 0, 0, 0.4, 1},
}};

// Max product over simple paths, computed by exhaustive enumeration outside
// this library and frozen here. Differs from the printed example at (m2,m3)
// and (m4,m1).
inline constexpr std::array<std::array<double, 6>, 6> kFigure2Closure{{
    {1, 0.9, 0.9, 0.9, 0.9, 0.9},
    {0.8, 1, 0.9, 1, 1, 1},
    {0.8, 1, 1, 1, 1, 1},
    {0.72, 0.9, 0.9, 1, 1, 1},
    {0, 0, 0, 0, 1, 1},
    {0, 0, 0, 0, 0.4, 1},
}};

// Random graph with probabilities on the {0, 0.1, ..., 1} grid.
inline SocialGraph random_grid_graph(std::mt19937_64& rng, std::size_t n, double edge_chance) {
  std::bernoulli_distribution has_edge(edge_chance);
  std::uniform_int_distribution<int> grid(0, 10);
  std::vector<ShareEdge> edges;
  for (MemberId i = 0; i < n; ++i) {
    for (MemberId j = 0; j < n; ++j) {
      if (i != j && has_edge(rng)) edges.push_back({i, j, grid(rng) / 10.0});
    }
  }
  return build_graph(n, std::move(edges));
}

// Random symmetric matrix with unit diagonal, cells on the 0.1 grid.
inline PropagationMatrix random_symmetrized(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> grid(0, 10);
  std::vector<double> cells(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cells[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) cells[i * n + j] = cells[j * n + i] = grid(rng) / 10.0;
  }
  return PropagationMatrix(default_labels(n), std::move(cells), MatrixKind::symmetrized);
}

}  // namespace leakteam::test
