#include "leakteam/matrix.hpp"

#include <stdexcept>

#include "leakteam/error.hpp"

namespace leakteam {

std::string_view to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::direct:
      return "direct";
    case MatrixKind::closure:
      return "closure";
    case MatrixKind::symmetrized:
      return "symmetrized";
  }
  return "unknown";
}

MatrixKind parse_matrix_kind(std::string_view text) {
  if (text == "direct") return MatrixKind::direct;
  if (text == "closure") return MatrixKind::closure;
  if (text == "symmetrized") return MatrixKind::symmetrized;
  throw ValidationError("unknown matrix kind '" + std::string(text) + "'");
}

PropagationMatrix::PropagationMatrix(std::vector<std::string> labels, std::vector<double> cells,
                                     MatrixKind kind)
    : labels_(std::move(labels)), cells_(std::move(cells)), kind_(kind) {
  const std::size_t n = labels_.size();
  if (cells_.size() != n * n) {
    throw ValidationError("matrix has " + std::to_string(cells_.size()) + " cells, expected " +
                          std::to_string(n * n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = cells_[i * n + j];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("cell (" + labels_[i] + "," + labels_[j] + ") outside [0,1]");
      }
      if (i == j && v != 1.0) {
        throw ValidationError("diagonal cell of " + labels_[i] + " must be 1");
      }
      if (kind_ == MatrixKind::symmetrized && j < i && v != cells_[j * n + i]) {
        throw ValidationError("symmetrized matrix is not symmetric at (" + labels_[i] + "," +
                              labels_[j] + ")");
      }
    }
  }
}

PropagationMatrix PropagationMatrix::identity(std::vector<std::string> labels, MatrixKind kind) {
  const std::size_t n = labels.size();
  std::vector<double> cells(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) cells[i * n + i] = 1.0;
  return PropagationMatrix(std::move(labels), std::move(cells), kind);
}

double PropagationMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size()) throw std::out_of_range("matrix index out of range");
  return (*this)(i, j);
}

std::span<const double> PropagationMatrix::row(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("matrix row out of range");
  return std::span<const double>(cells_).subspan(i * size(), size());
}

void require_kind(const PropagationMatrix& m, MatrixKind expected, std::string_view operation) {
  if (m.kind() != expected) {
    throw ValidationError(std::string(operation) + " requires a " +
                          std::string(to_string(expected)) + " matrix, got " +
                          std::string(to_string(m.kind())));
  }
}

PropagationMatrix direct_matrix(const SocialGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<double> cells(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) cells[i * n + i] = 1.0;
  for (const auto& e : graph.edges()) cells[std::size_t{e.src} * n + e.dst] = e.p;
  return PropagationMatrix(graph.labels(), std::move(cells), MatrixKind::direct);
}

}  // namespace leakteam
