#include "leakteam/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <set>

#include "leakteam/error.hpp"
#include "leakteam/io.hpp"
#include "leakteam/propagation.hpp"

namespace leakteam {

PipelineResult run_pipeline(const PipelineConfig& config, const SocialGraph& graph) {
  if (config.seed_count < 1) throw ValidationError("seed count must be at least 1");
  PipelineResult r;
  r.direct = direct_matrix(graph);
  r.closure = closure(r.direct);
  r.symmetrized = symmetrize(r.closure);
  auto seeds = spread_seeds(graph.size(), config.seed_count);
  r.partition = cluster_members(r.symmetrized, config.eta, seeds);
  r.report = verify_free_leak(r.partition, r.symmetrized, config.eta);
  if (!r.report.ok) {
    throw InternalError("leak self-check failed: " + std::to_string(r.report.violations.size()) +
                        " cross-team pairs exceed eta");
  }
  return r;
}

TeamAssignment make_assignment(const PipelineConfig& config, const PipelineResult& result) {
  TeamAssignment a;
  const auto& labels = result.symmetrized.labels();
  for (const auto& cluster : result.partition.clusters()) {
    auto& team = a.teams.emplace_back();
    for (auto m : cluster) team.push_back(labels[m]);
  }
  a.eta = config.eta.value();
  a.seed_count = config.seed_count;
  a.direct_checksum = matrix_checksum(result.direct);
  a.closure_checksum = matrix_checksum(result.closure);
  a.symmetrized_checksum = matrix_checksum(result.symmetrized);
  return a;
}

nlohmann::ordered_json assignment_to_json(const TeamAssignment& a) {
  nlohmann::ordered_json j;
  j["teams"] = a.teams;
  nlohmann::ordered_json prov;
  prov["eta"] = json_number(a.eta);
  prov["seed_count"] = a.seed_count;
  prov["direct_checksum"] = a.direct_checksum;
  prov["closure_checksum"] = a.closure_checksum;
  prov["symmetrized_checksum"] = a.symmetrized_checksum;
  prov["version"] = a.version;
  j["provenance"] = std::move(prov);
  return j;
}

SocialGraph generate_graph(std::size_t n, double avg_out_degree, std::uint64_t rng_seed) {
  if (n < 1) throw ValidationError("generator needs at least one member");
  if (!(avg_out_degree >= 0.0) || !(avg_out_degree < static_cast<double>(n))) {
    throw ValidationError("average out-degree must lie in [0, n)");
  }
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<int> grid(0, 10);
  std::vector<ShareEdge> edges;
  const std::size_t others = n - 1;
  if (others > 0) {
    const double q = std::min(1.0, avg_out_degree / static_cast<double>(others));
    std::binomial_distribution<std::size_t> degree(others, q);
    std::set<std::size_t> picked;
    for (std::size_t src = 0; src < n; ++src) {
      const std::size_t k = degree(rng);
      // Floyd's sampling of k distinct values from [0, others).
      picked.clear();
      for (std::size_t j = others - k; j < others; ++j) {
        std::uniform_int_distribution<std::size_t> pick(0, j);
        auto t = pick(rng);
        if (!picked.insert(t).second) picked.insert(j);
      }
      for (auto t : picked) {
        // Skip over src so targets range over the other members.
        auto dst = static_cast<MemberId>(t < src ? t : t + 1);
        edges.push_back(ShareEdge{static_cast<MemberId>(src), dst, grid(rng) / 10.0});
      }
    }
  }
  return build_graph(n, std::move(edges));
}

std::vector<SweepRow> eta_sweep(const PropagationMatrix& sym, std::span<const double> etas) {
  if (!std::is_sorted(etas.begin(), etas.end())) {
    throw ValidationError("eta sweep values must be ascending");
  }
  std::vector<SweepRow> rows;
  rows.reserve(etas.size());
  for (double eta : etas) {
    rows.push_back(SweepRow{eta, cluster_members(sym, Threshold(eta)).cluster_count()});
  }
  return rows;
}

void write_sweep(std::ostream& out, std::span<const SweepRow> rows) {
  out << "eta,clusters\n";
  for (const auto& row : rows) out << format_number(row.eta) << ',' << row.cluster_count << '\n';
}

}  // namespace leakteam
