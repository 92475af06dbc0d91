#include "leakteam/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "leakteam/error.hpp"

namespace leakteam {

namespace {

std::string describe_row(std::span<const std::size_t> rows, std::size_t i) {
  if (rows.empty()) return "edge #" + std::to_string(i);
  return "line " + std::to_string(rows[i]);
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::optional<MemberId> SocialGraph::find_member(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const Arc> SocialGraph::out_arcs(MemberId m) const {
  return std::span<const Arc>(out_).subspan(out_offsets_.at(m),
                                            out_offsets_.at(m + 1) - out_offsets_[m]);
}

std::span<const Arc> SocialGraph::in_arcs(MemberId m) const {
  return std::span<const Arc>(in_).subspan(in_offsets_.at(m),
                                           in_offsets_.at(m + 1) - in_offsets_[m]);
}

std::optional<double> SocialGraph::edge(MemberId src, MemberId dst) const {
  if (src >= size() || dst >= size()) return std::nullopt;
  auto arcs = out_arcs(src);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), dst,
                             [](const Arc& a, MemberId d) { return a.other < d; });
  if (it == arcs.end() || it->other != dst) return std::nullopt;
  return it->p;
}

double direct_share_probability(double shared_qty, double held_qty) {
  if (!std::isfinite(shared_qty) || !std::isfinite(held_qty)) {
    throw ValidationError("quantities must be finite");
  }
  if (shared_qty < 0.0 || held_qty < 0.0) {
    throw ValidationError("quantities must be non-negative");
  }
  if (held_qty == 0.0) {
    if (shared_qty > 0.0) throw ValidationError("shared quantity exceeds held quantity");
    return 0.0;
  }
  if (shared_qty > held_qty) throw ValidationError("shared quantity exceeds held quantity");
  return shared_qty / held_qty;
}

void validate_label(std::string_view label) {
  if (label.empty()) throw ValidationError("member label must be non-empty");
  if (label.find_first_of(",\"\r\n") != std::string_view::npos) {
    throw ValidationError("member label '" + std::string(label) +
                          "' contains a comma, quote or line break");
  }
}

bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && is_digit(a[ie])) ++ie;
      while (je < b.size() && is_digit(b[je])) ++je;
      auto da = a.substr(i, ie - i);
      auto db = b.substr(j, je - j);
      da.remove_prefix(std::min(da.find_first_not_of('0'), da.size()));
      db.remove_prefix(std::min(db.find_first_not_of('0'), db.size()));
      if (da.size() != db.size()) return da.size() < db.size();
      if (da != db) return da < db;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  // Equal under numeric comparison (e.g. m01 vs m1): fall back to a total order.
  return a < b;
}

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("m" + std::to_string(i + 1));
  return labels;
}

SocialGraph build_graph(std::vector<std::string> labels, std::vector<ShareEdge> edges,
                        std::span<const std::size_t> rows) {
  if (!rows.empty() && rows.size() != edges.size()) {
    throw ValidationError("row annotations do not match the edge count");
  }
  const std::size_t n = labels.size();
  SocialGraph g;
  for (std::size_t i = 0; i < n; ++i) {
    validate_label(labels[i]);
    auto [it, inserted] = g.index_.emplace(labels[i], static_cast<MemberId>(i));
    if (!inserted) throw ValidationError("duplicate member label '" + labels[i] + "'");
  }

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    if (edge.src >= n || edge.dst >= n) {
      throw ValidationError(describe_row(rows, e) + ": edge endpoint is not a member");
    }
    if (edge.src == edge.dst) {
      throw ValidationError(describe_row(rows, e) + ": self-edge on '" + labels[edge.src] + "'");
    }
    if (!(edge.p >= 0.0 && edge.p <= 1.0)) {
      throw ValidationError(describe_row(rows, e) + ": probability outside [0,1]");
    }
  }

  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (edges[a].src != edges[b].src) return edges[a].src < edges[b].src;
    return edges[a].dst < edges[b].dst;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = edges[order[k - 1]];
    const auto& cur = edges[order[k]];
    if (prev.src == cur.src && prev.dst == cur.dst) {
      auto first = std::min(order[k - 1], order[k]);
      auto second = std::max(order[k - 1], order[k]);
      throw ValidationError("duplicate edge " + labels[cur.src] + "->" + labels[cur.dst] +
                            " at " + describe_row(rows, first) + " and " +
                            describe_row(rows, second));
    }
  }

  g.edges_.reserve(edges.size());
  for (auto idx : order) g.edges_.push_back(edges[idx]);

  g.out_offsets_.assign(n + 1, 0);
  g.in_offsets_.assign(n + 1, 0);
  for (const auto& e : g.edges_) {
    ++g.out_offsets_[e.src + 1];
    ++g.in_offsets_[e.dst + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  g.out_.resize(g.edges_.size());
  g.in_.resize(g.edges_.size());
  auto out_cursor = g.out_offsets_;
  auto in_cursor = g.in_offsets_;
  // edges_ is sorted by (src, dst), so both adjacencies come out sorted by `other`.
  for (const auto& e : g.edges_) {
    g.out_[out_cursor[e.src]++] = Arc{e.dst, e.p};
    g.in_[in_cursor[e.dst]++] = Arc{e.src, e.p};
  }
  g.labels_ = std::move(labels);
  return g;
}

SocialGraph build_graph(std::size_t n, std::vector<ShareEdge> edges) {
  return build_graph(default_labels(n), std::move(edges));
}

SocialGraph build_graph_from_interactions(std::vector<std::string> labels,
                                          std::span<const InteractionRecord> records,
                                          const std::map<MemberId, double>& held,
                                          std::span<const std::size_t> rows) {
  std::vector<ShareEdge> edges;
  edges.reserve(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto it = held.find(rec.src);
    if (it == held.end()) {
      std::string who = rec.src < labels.size() ? labels[rec.src] : std::to_string(rec.src);
      throw ValidationError(describe_row(rows, r) + ": no held quantity for member '" + who +
                            "'");
    }
    try {
      edges.push_back(ShareEdge{rec.src, rec.dst,
                                direct_share_probability(rec.shared_qty, it->second)});
    } catch (const ValidationError& err) {
      throw ValidationError(describe_row(rows, r) + ": " + err.what());
    }
  }
  return build_graph(std::move(labels), std::move(edges), rows);
}

}  // namespace leakteam
