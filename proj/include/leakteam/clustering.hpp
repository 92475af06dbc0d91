#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "leakteam/graph.hpp"
#include "leakteam/matrix.hpp"

namespace leakteam {

/// Disclosure threshold: cross-team propagation at or below it is acceptable.
class Threshold {
 public:
  explicit Threshold(double eta);
  double value() const noexcept { return eta_; }

 private:
  double eta_;
};

/*
  Partition -- every member in exactly one non-empty cluster.

  Canonical form: members ascending inside each cluster, clusters ordered by
  their smallest member. Equality therefore compares set partitions.
*/
class Partition {
 public:
  Partition() = default;
  /// From a per-member cluster label; labels need not be dense or ordered.
  static Partition from_assignment(std::span<const std::size_t> labels);
  /// From explicit clusters; throws unless they are disjoint, non-empty and cover [0, n).
  static Partition from_clusters(std::vector<std::vector<MemberId>> clusters, std::size_t n);

  std::size_t member_count() const noexcept { return assignment_.size(); }
  std::size_t cluster_count() const noexcept { return clusters_.size(); }
  const std::vector<std::vector<MemberId>>& clusters() const noexcept { return clusters_; }
  std::size_t cluster_of(MemberId m) const { return assignment_.at(m); }
  const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::vector<MemberId>> clusters_;
  std::vector<std::size_t> assignment_;
};

struct LeakViolation {
  MemberId member_i = 0;
  MemberId member_j = 0;
  std::size_t cluster_i = 0;
  std::size_t cluster_j = 0;
  double p = 0.0;

  friend bool operator==(const LeakViolation&, const LeakViolation&) = default;
};

struct LeakReport {
  double eta = 0.0;
  std::vector<LeakViolation> violations;
  bool ok = true;
};

/// Max over cluster members i of sym(i, candidate).
double dmax(std::span<const MemberId> cluster, MemberId candidate,
            const PropagationMatrix& sym);

/**
 * Threshold clustering by D_max assignment with fusion.
 *
 * Starts with one cluster per seed. Each pass visits members in ascending
 * order; every cluster whose D_max to the member exceeds eta claims it, and
 * all claiming clusters are fused with the member's own. A member claimed by
 * nobody opens a singleton. Passes repeat until nothing changes.
 *
 * The result is the finest partition in which every cross-cluster pair has
 * sym <= eta, whatever the seeds.
 */
Partition cluster_members(const PropagationMatrix& sym, Threshold eta,
                          std::span<const MemberId> seeds = {});

/// Lists every cross-cluster pair (i < j) with sym > eta.
LeakReport verify_free_leak(const Partition& partition, const PropagationMatrix& sym,
                            Threshold eta);

/// Connected components of the graph {i--j : sym(i,j) > eta}, by union-find.
Partition components_oracle(const PropagationMatrix& sym, Threshold eta);

/// `count` distinct seeds spread evenly over [0, n); clamped to n.
std::vector<MemberId> spread_seeds(std::size_t n, std::size_t count);

}  // namespace leakteam
