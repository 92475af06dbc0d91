#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace leakteam {

/// Dense member index in [0, n).
using MemberId = std::uint32_t;

/// Directed share relation: `src` shares fraction `p` of its data with `dst`.
struct ShareEdge {
  MemberId src = 0;
  MemberId dst = 0;
  double p = 0.0;

  friend bool operator==(const ShareEdge&, const ShareEdge&) = default;
};

/// Adjacency entry; `other` is the far endpoint.
struct Arc {
  MemberId other = 0;
  double p = 0.0;
};

/// Raw interaction quantity: `src` shared `shared_qty` data units with `dst`.
struct InteractionRecord {
  MemberId src = 0;
  MemberId dst = 0;
  double shared_qty = 0.0;
};

/*
  SocialGraph -- immutable labeled digraph of members and share edges.

  Edges are stored sorted by (src, dst) with CSR-style out and in adjacency,
  so every downstream result is independent of input edge order.
*/
class SocialGraph {
 public:
  SocialGraph() = default;

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(MemberId m) const { return labels_.at(m); }
  std::optional<MemberId> find_member(std::string_view label) const;

  /// All edges, ascending by (src, dst).
  std::span<const ShareEdge> edges() const noexcept { return edges_; }
  std::span<const Arc> out_arcs(MemberId m) const;
  std::span<const Arc> in_arcs(MemberId m) const;

  /// Label of the edge src->dst, or nullopt when no such edge exists.
  std::optional<double> edge(MemberId src, MemberId dst) const;

 private:
  friend SocialGraph build_graph(std::vector<std::string>, std::vector<ShareEdge>,
                                 std::span<const std::size_t>);

  std::vector<std::string> labels_;
  std::map<std::string, MemberId, std::less<>> index_;
  std::vector<ShareEdge> edges_;
  std::vector<std::size_t> out_offsets_;
  std::vector<Arc> out_;
  std::vector<std::size_t> in_offsets_;
  std::vector<Arc> in_;
};

/// Share probability from raw quantities. A member holding nothing shares nothing.
double direct_share_probability(double shared_qty, double held_qty);

/**
 * Validates and builds a graph. Member i is labelled `labels[i]`.
 *
 * `rows` optionally names the origin of each edge (e.g. a CSV line number)
 * and is used only in error messages; when empty, 0-based edge positions
 * are reported instead.
 */
SocialGraph build_graph(std::vector<std::string> labels, std::vector<ShareEdge> edges,
                        std::span<const std::size_t> rows = {});

/// Convenience overload labelling members m1..mn.
SocialGraph build_graph(std::size_t n, std::vector<ShareEdge> edges);

/// Labels m1..mn.
std::vector<std::string> default_labels(std::size_t n);

/// Builds a graph whose edge labels are shared_qty / held(src).
SocialGraph build_graph_from_interactions(std::vector<std::string> labels,
                                          std::span<const InteractionRecord> records,
                                          const std::map<MemberId, double>& held,
                                          std::span<const std::size_t> rows = {});

/// Label ordering used for member ids: digit runs compare numerically, so m2 < m10.
bool natural_less(std::string_view a, std::string_view b);

/// Checks a label is usable in the CSV formats (non-empty, no comma, quote or newline).
void validate_label(std::string_view label);

}  // namespace leakteam
