#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "leakteam/clustering.hpp"
#include "leakteam/graph.hpp"
#include "leakteam/matrix.hpp"

namespace leakteam {

inline constexpr const char* kToolVersion = "0.1.0";

enum class InputMode { edges, interactions };

struct PipelineConfig {
  Threshold eta{0.5};
  /// Initial clusters; the free-leak contract decides the final count.
  std::size_t seed_count = 2;
  InputMode input_mode = InputMode::edges;
  std::uint64_t rng_seed = 0;
};

/// Everything the pipeline computed, in stage order.
struct PipelineResult {
  PropagationMatrix direct;
  PropagationMatrix closure;
  PropagationMatrix symmetrized;
  Partition partition;
  LeakReport report;
};

/// Teams with labels resolved, plus the provenance needed to reproduce them.
struct TeamAssignment {
  std::vector<std::vector<std::string>> teams;
  double eta = 0.0;
  std::size_t seed_count = 0;
  std::string direct_checksum;
  std::string closure_checksum;
  std::string symmetrized_checksum;
  std::string version = kToolVersion;
};

/// ingest -> closure -> symmetrize -> cluster -> verify. Throws InternalError
/// if the final leak self-check fails.
PipelineResult run_pipeline(const PipelineConfig& config, const SocialGraph& graph);

TeamAssignment make_assignment(const PipelineConfig& config, const PipelineResult& result);
nlohmann::ordered_json assignment_to_json(const TeamAssignment& assignment);

/// Random digraph on m1..mn with p drawn from {0, 0.1, ..., 1}. Out-degrees
/// are Binomial(n-1, degree/(n-1)); the same seed gives the same graph.
SocialGraph generate_graph(std::size_t n, double avg_out_degree, std::uint64_t rng_seed);

struct SweepRow {
  double eta = 0.0;
  std::size_t cluster_count = 0;
};

/// Cluster count per threshold; `etas` must be ascending.
std::vector<SweepRow> eta_sweep(const PropagationMatrix& sym, std::span<const double> etas);
void write_sweep(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace leakteam
