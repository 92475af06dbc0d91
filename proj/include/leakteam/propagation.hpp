#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "leakteam/graph.hpp"
#include "leakteam/matrix.hpp"

namespace leakteam {

/// Propagation probabilities of one owner's data to every member.
struct EnergyVector {
  MemberId owner = 0;
  std::vector<double> p;
  /// Sweeps performed, including the final confirming sweep.
  std::size_t iterations = 0;
  /// Sweeps in which at least one value changed.
  std::size_t changing_sweeps = 0;
};

/// A simple path owner -> target and the product of its edge labels.
struct WitnessPath {
  std::vector<MemberId> members;
  double product = 0.0;
};

struct OracleResult {
  double probability = 0.0;
  /// Absent when the target is unreachable.
  std::optional<WitnessPath> path;
};

/// Called after every sweep with its 1-based index and the values it produced.
using SweepObserver = std::function<void(std::size_t sweep, std::span<const double> values)>;

/// Largest graph the exhaustive path oracle accepts.
inline constexpr std::size_t kOracleMaxMembers = 12;

/**
 * Fixed point of p_i = max over in-neighbours k of p_k * w(k,i), with the
 * owner pinned to 1.
 *
 * Sweeps are Jacobi style: every sweep reads only the previous sweep's
 * values. Convergence is exact equality of two consecutive sweeps, capped
 * at n + 1 sweeps.
 */
EnergyVector propagate_from(const PropagationMatrix& direct, MemberId owner,
                            const SweepObserver& observer = {});

/// Row i is propagate_from(direct, i).p. Rows are evaluated on `threads`
/// workers (0 selects the hardware concurrency); output does not depend on it.
PropagationMatrix closure(const PropagationMatrix& direct, unsigned threads = 0);

/// Elementwise max(cell(i,j), cell(j,i)) of a closure.
PropagationMatrix symmetrize(const PropagationMatrix& m);

/// Exhaustive max product over simple owner->target paths on edges with p > 0.
OracleResult oracle_simple_path_max(const PropagationMatrix& direct, MemberId owner,
                                    MemberId target);

/// Path achieving the fixed-point value at `target`, rebuilt from the argmax
/// predecessors recorded while sweeping. Throws NoChannelError if unreachable.
WitnessPath witness_path(const PropagationMatrix& direct, MemberId owner, MemberId target);

}  // namespace leakteam
