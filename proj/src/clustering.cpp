#include "leakteam/clustering.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "leakteam/error.hpp"

namespace leakteam {

namespace {

// Union by size with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

void require_symmetrized(const PropagationMatrix& sym, const char* operation) {
  require_kind(sym, MatrixKind::symmetrized, operation);
}

}  // namespace

Threshold::Threshold(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ValidationError("eta must lie in [0,1], got " + std::to_string(eta));
  }
}

Partition Partition::from_assignment(std::span<const std::size_t> labels) {
  Partition p;
  const std::size_t n = labels.size();
  p.assignment_.assign(n, 0);
  // First occurrence order of a label is the order of its smallest member.
  std::unordered_map<std::size_t, std::size_t> cluster_index;
  for (std::size_t m = 0; m < n; ++m) {
    auto [it, inserted] = cluster_index.try_emplace(labels[m], p.clusters_.size());
    if (inserted) p.clusters_.emplace_back();
    const std::size_t c = it->second;
    p.clusters_[c].push_back(static_cast<MemberId>(m));
    p.assignment_[m] = c;
  }
  return p;
}

Partition Partition::from_clusters(std::vector<std::vector<MemberId>> clusters, std::size_t n) {
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<std::size_t> labels(n, kUnassigned);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].empty()) throw ValidationError("partition contains an empty cluster");
    for (auto m : clusters[c]) {
      if (m >= n) throw ValidationError("partition member " + std::to_string(m) + " out of range");
      if (labels[m] != kUnassigned) {
        throw ValidationError("member " + std::to_string(m) + " appears in two clusters");
      }
      labels[m] = c;
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    if (labels[m] == kUnassigned) {
      throw ValidationError("member " + std::to_string(m) + " is not in any cluster");
    }
  }
  return from_assignment(labels);
}

double dmax(std::span<const MemberId> cluster, MemberId candidate, const PropagationMatrix& sym) {
  require_symmetrized(sym, "dmax");
  if (cluster.empty()) throw ValidationError("D_max is undefined for an empty cluster");
  if (candidate >= sym.size()) throw ValidationError("candidate out of range");
  double best = 0.0;
  for (auto m : cluster) {
    if (m >= sym.size()) throw ValidationError("cluster member out of range");
    if (m == candidate) throw ValidationError("candidate already belongs to the cluster");
    best = std::max(best, sym(m, candidate));
  }
  return best;
}

Partition cluster_members(const PropagationMatrix& sym, Threshold eta,
                          std::span<const MemberId> seeds) {
  require_symmetrized(sym, "cluster_members");
  const std::size_t n = sym.size();
  const double limit = eta.value();

  DisjointSets sets(n);
  std::vector<char> assigned(n, 0);
  for (auto s : seeds) {
    if (s >= n) throw ValidationError("seed " + std::to_string(s) + " out of range");
    if (assigned[s]) throw ValidationError("duplicate seed " + std::to_string(s));
    assigned[s] = 1;
  }

  std::vector<std::size_t> claims;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t m = 0; m < n; ++m) {
      // Clusters claiming m: those holding some member i with sym(i,m) > eta,
      // i.e. D_max(C, m) > eta.
      claims.clear();
      const std::size_t own = assigned[m] ? sets.find(m) : n;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == m || !assigned[i] || !(sym(i, m) > limit)) continue;
        auto root = sets.find(i);
        if (root != own) claims.push_back(root);
      }
      if (!assigned[m]) {
        assigned[m] = 1;
        changed = true;
      }
      for (auto root : claims) changed |= sets.unite(m, root);
    }
  }

  std::vector<std::size_t> roots(n);
  for (std::size_t m = 0; m < n; ++m) roots[m] = sets.find(m);
  return Partition::from_assignment(roots);
}

LeakReport verify_free_leak(const Partition& partition, const PropagationMatrix& sym,
                            Threshold eta) {
  require_symmetrized(sym, "verify_free_leak");
  const std::size_t n = sym.size();
  if (partition.member_count() != n) {
    throw ValidationError("partition covers " + std::to_string(partition.member_count()) +
                          " members but the matrix has " + std::to_string(n));
  }
  LeakReport report;
  report.eta = eta.value();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto ci = partition.cluster_of(static_cast<MemberId>(i));
      auto cj = partition.cluster_of(static_cast<MemberId>(j));
      if (ci == cj) continue;
      double p = std::max(sym(i, j), sym(j, i));
      if (p > eta.value()) {
        report.violations.push_back(
            LeakViolation{static_cast<MemberId>(i), static_cast<MemberId>(j), ci, cj, p});
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

Partition components_oracle(const PropagationMatrix& sym, Threshold eta) {
  require_symmetrized(sym, "components_oracle");
  const std::size_t n = sym.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sym(i, j) > eta.value()) {
        auto a = find(i), b = find(j);
        // Smaller root wins so each root is its component's smallest member.
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::size_t> roots(n);
  for (std::size_t m = 0; m < n; ++m) roots[m] = find(m);
  return Partition::from_assignment(roots);
}

std::vector<MemberId> spread_seeds(std::size_t n, std::size_t count) {
  count = std::min(count, n);
  std::vector<MemberId> seeds;
  seeds.reserve(count);
  for (std::size_t k = 0; k < count; ++k) seeds.push_back(static_cast<MemberId>(k * n / count));
  return seeds;
}

}  // namespace leakteam
