#include "leakteam/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "leakteam/error.hpp"

namespace leakteam {

namespace {

constexpr MemberId kNoMember = static_cast<MemberId>(-1);

// Positive off-diagonal cells of a direct matrix as in/out adjacency, ascending.
struct SparseArcs {
  std::vector<std::size_t> in_offsets;
  std::vector<Arc> in;
  std::vector<std::size_t> out_offsets;
  std::vector<MemberId> out;

  explicit SparseArcs(const PropagationMatrix& m) {
    const std::size_t n = m.size();
    in_offsets.assign(n + 1, 0);
    out_offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && m(i, j) > 0.0) {
          ++out_offsets[i + 1];
          ++in_offsets[j + 1];
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      in_offsets[i + 1] += in_offsets[i];
      out_offsets[i + 1] += out_offsets[i];
    }
    in.resize(in_offsets[n]);
    out.resize(out_offsets[n]);
    auto in_cursor = in_offsets;
    auto out_cursor = out_offsets;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && m(i, j) > 0.0) {
          in[in_cursor[j]++] = Arc{static_cast<MemberId>(i), m(i, j)};
          out[out_cursor[i]++] = static_cast<MemberId>(j);
        }
      }
    }
  }

  std::span<const Arc> in_arcs(std::size_t i) const {
    return std::span<const Arc>(in).subspan(in_offsets[i], in_offsets[i + 1] - in_offsets[i]);
  }
  std::span<const MemberId> out_members(std::size_t i) const {
    return std::span<const MemberId>(out).subspan(out_offsets[i],
                                                  out_offsets[i + 1] - out_offsets[i]);
  }
};

struct Update {
  MemberId member;
  double value;
  MemberId pred;
};

// Jacobi sweeps restricted to members with an in-neighbour that changed in
// the previous sweep; every other member would recompute its old value.
EnergyVector run_sweeps(const SparseArcs& arcs, std::size_t n, MemberId owner,
                        std::vector<MemberId>* pred_out, const SweepObserver& observer) {
  EnergyVector ev;
  ev.owner = owner;
  ev.p.assign(n, 0.0);
  ev.p[owner] = 1.0;
  std::vector<MemberId> pred(n, kNoMember);
  std::vector<MemberId> changed{owner};
  std::vector<MemberId> candidates;
  std::vector<char> marked(n, 0);
  std::vector<Update> updates;

  for (;;) {
    ++ev.iterations;
    if (ev.iterations > n + 1) {
      throw InternalError("propagation did not converge within n + 1 sweeps");
    }
    candidates.clear();
    for (auto k : changed) {
      for (auto i : arcs.out_members(k)) {
        if (i != owner && !marked[i]) {
          marked[i] = 1;
          candidates.push_back(i);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());

    updates.clear();
    for (auto i : candidates) {
      marked[i] = 0;
      double best = 0.0;
      MemberId best_pred = kNoMember;
      for (const auto& arc : arcs.in_arcs(i)) {
        double v = ev.p[arc.other] * arc.p;
        if (v > best) {
          best = v;
          best_pred = arc.other;
        }
      }
      if (best < ev.p[i]) throw InternalError("propagation value decreased between sweeps");
      if (best != ev.p[i]) updates.push_back(Update{i, best, best_pred});
    }

    changed.clear();
    for (const auto& u : updates) {
      ev.p[u.member] = u.value;
      pred[u.member] = u.pred;
      changed.push_back(u.member);
    }
    if (observer) observer(ev.iterations, ev.p);
    if (changed.empty()) break;
    ++ev.changing_sweeps;
  }
  if (pred_out) *pred_out = std::move(pred);
  return ev;
}

void check_member(const PropagationMatrix& m, MemberId id, const char* role) {
  if (id >= m.size()) {
    throw ValidationError(std::string(role) + " index " + std::to_string(id) +
                          " out of range for " + std::to_string(m.size()) + " members");
  }
}

double path_product(const PropagationMatrix& m, std::span<const MemberId> path) {
  double product = 1.0;
  for (std::size_t k = 1; k < path.size(); ++k) product *= m(path[k - 1], path[k]);
  return product;
}

}  // namespace

EnergyVector propagate_from(const PropagationMatrix& direct, MemberId owner,
                            const SweepObserver& observer) {
  require_kind(direct, MatrixKind::direct, "propagate_from");
  check_member(direct, owner, "owner");
  SparseArcs arcs(direct);
  return run_sweeps(arcs, direct.size(), owner, nullptr, observer);
}

PropagationMatrix closure(const PropagationMatrix& direct, unsigned threads) {
  require_kind(direct, MatrixKind::direct, "closure");
  const std::size_t n = direct.size();
  SparseArcs arcs(direct);
  std::vector<double> cells(n * n, 0.0);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      auto ev = run_sweeps(arcs, n, static_cast<MemberId>(i), nullptr, {});
      std::copy(ev.p.begin(), ev.p.end(), cells.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return PropagationMatrix(direct.labels(), std::move(cells), MatrixKind::closure);
}

PropagationMatrix symmetrize(const PropagationMatrix& m) {
  if (m.kind() == MatrixKind::direct) {
    throw ValidationError("symmetrize requires a closure matrix, got direct");
  }
  const std::size_t n = m.size();
  std::vector<double> cells(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cells[i * n + j] = std::max(m(i, j), m(j, i));
  }
  return PropagationMatrix(m.labels(), std::move(cells), MatrixKind::symmetrized);
}

OracleResult oracle_simple_path_max(const PropagationMatrix& direct, MemberId owner,
                                    MemberId target) {
  require_kind(direct, MatrixKind::direct, "oracle_simple_path_max");
  const std::size_t n = direct.size();
  if (n > kOracleMaxMembers) {
    throw ValidationError("path oracle refuses " + std::to_string(n) + " members (limit " +
                          std::to_string(kOracleMaxMembers) + ")");
  }
  check_member(direct, owner, "owner");
  check_member(direct, target, "target");
  if (owner == target) return OracleResult{1.0, WitnessPath{{owner}, 1.0}};

  OracleResult best;
  std::vector<MemberId> path{owner};
  std::vector<char> on_path(n, 0);
  on_path[owner] = 1;

  // Neighbours are visited in ascending order and only strictly better
  // products replace the incumbent, so ties keep the lexicographically
  // smallest path.
  auto dfs = [&](auto& self, MemberId at, double product) -> void {
    for (MemberId next = 0; next < n; ++next) {
      double w = direct(at, next);
      if (next == at || on_path[next] || !(w > 0.0)) continue;
      double extended = product * w;
      path.push_back(next);
      if (next == target) {
        if (extended > best.probability) {
          best.probability = extended;
          best.path = WitnessPath{path, extended};
        }
      } else {
        on_path[next] = 1;
        self(self, next, extended);
        on_path[next] = 0;
      }
      path.pop_back();
    }
  };
  dfs(dfs, owner, 1.0);
  return best;
}

WitnessPath witness_path(const PropagationMatrix& direct, MemberId owner, MemberId target) {
  require_kind(direct, MatrixKind::direct, "witness_path");
  check_member(direct, owner, "owner");
  check_member(direct, target, "target");
  const std::size_t n = direct.size();
  SparseArcs arcs(direct);
  std::vector<MemberId> pred;
  auto ev = run_sweeps(arcs, n, owner, &pred, {});
  if (!(ev.p[target] > 0.0)) {
    throw NoChannelError("no channel from " + direct.labels()[owner] + " to " +
                         direct.labels()[target]);
  }

  std::vector<MemberId> members{target};
  while (members.back() != owner) {
    MemberId prev = pred[members.back()];
    if (prev == kNoMember || members.size() > n) {
      throw InternalError("broken predecessor chain while rebuilding witness path");
    }
    members.push_back(prev);
  }
  std::reverse(members.begin(), members.end());
  WitnessPath wp{std::move(members), 0.0};
  wp.product = path_product(direct, wp.members);
  if (std::abs(wp.product - ev.p[target]) > 1e-12) {
    throw InternalError("witness path product disagrees with the fixed point");
  }
  return wp;
}

}  // namespace leakteam
