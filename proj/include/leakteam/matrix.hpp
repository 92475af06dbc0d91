#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leakteam/graph.hpp"

namespace leakteam {

enum class MatrixKind { direct, closure, symmetrized };

std::string_view to_string(MatrixKind kind);
MatrixKind parse_matrix_kind(std::string_view text);

/*
  PropagationMatrix -- dense n x n row-major probabilities with member labels.

  Construction checks the kind-independent invariants (cells in [0,1], unit
  diagonal) plus symmetry for symmetrized matrices. The direct and closure
  invariants that refer to a graph are established by the producing operation.
*/
class PropagationMatrix {
 public:
  PropagationMatrix() = default;
  PropagationMatrix(std::vector<std::string> labels, std::vector<double> cells, MatrixKind kind);

  /// Identity-patterned matrix of the given kind.
  static PropagationMatrix identity(std::vector<std::string> labels, MatrixKind kind);

  std::size_t size() const noexcept { return labels_.size(); }
  MatrixKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  double operator()(std::size_t i, std::size_t j) const { return cells_[i * size() + j]; }
  double at(std::size_t i, std::size_t j) const;
  std::span<const double> row(std::size_t i) const;
  std::span<const double> cells() const noexcept { return cells_; }

  friend bool operator==(const PropagationMatrix&, const PropagationMatrix&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> cells_;
  MatrixKind kind_ = MatrixKind::direct;
};

/// Throws ValidationError unless `m.kind() == expected`.
void require_kind(const PropagationMatrix& m, MatrixKind expected, std::string_view operation);

/// Direct share matrix: edge label on edges, 1 on the diagonal, 0 elsewhere.
PropagationMatrix direct_matrix(const SocialGraph& graph);

}  // namespace leakteam
