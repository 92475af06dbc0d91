#include "leakteam/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "leakteam/error.hpp"

namespace leakteam {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Line-oriented CSV reader that skips blank lines and tracks 1-based line numbers.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next() {
    while (std::getline(in_, buffer_)) {
      ++line_;
      std::string_view view = buffer_;
      if (line_ == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
      if (trim(view).empty()) continue;
      fields_ = split_csv_line(view);
      return true;
    }
    if (in_.bad()) throw ParseError("read failure", line_);
    return false;
  }

  const std::vector<std::string_view>& fields() const noexcept { return fields_; }
  std::size_t line() const noexcept { return line_; }

  void expect_header(std::initializer_list<std::string_view> names) {
    std::string wanted;
    for (auto n : names) wanted += (wanted.empty() ? "" : ",") + std::string(n);
    if (!next()) throw ParseError("empty file, expected header '" + wanted + "'", 0);
    if (!std::equal(fields_.begin(), fields_.end(), names.begin(), names.end())) {
      throw ParseError("expected header '" + wanted + "'", line_);
    }
  }

  void expect_fields(std::size_t count) const {
    if (fields_.size() != count) {
      throw ParseError("expected " + std::to_string(count) + " fields, found " +
                           std::to_string(fields_.size()),
                       line_);
    }
  }

  std::string label(std::size_t field) const {
    std::string text(fields_.at(field));
    try {
      validate_label(text);
    } catch (const ValidationError& err) {
      throw ParseError(err.what(), line_);
    }
    return text;
  }

 private:
  std::istream& in_;
  std::string buffer_;
  std::vector<std::string_view> fields_;
  std::size_t line_ = 0;
};

// Natural-order member table over every label seen.
class MemberTable {
 public:
  void add(const std::string& label) { labels_.insert(label); }

  std::vector<std::string> finish() {
    std::vector<std::string> ordered(labels_.begin(), labels_.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const std::string& a, const std::string& b) { return natural_less(a, b); });
    for (std::size_t i = 0; i < ordered.size(); ++i) ids_[ordered[i]] = static_cast<MemberId>(i);
    return ordered;
  }

  MemberId id(const std::string& label) const { return ids_.at(label); }

 private:
  std::set<std::string> labels_;
  std::map<std::string, MemberId> ids_;
};

struct LabeledRow {
  std::string src;
  std::string dst;
  double value;
  std::size_t line;
};

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

double parse_number(std::string_view text, std::size_t line) {
  text = trim(text);
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ParseError("'" + std::string(text) + "' is not a decimal number", line);
  }
  return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::vector<std::string> read_member_list(std::istream& in) {
  CsvReader csv(in);
  csv.expect_header({"member"});
  std::vector<std::string> members;
  while (csv.next()) {
    csv.expect_fields(1);
    members.push_back(csv.label(0));
  }
  return members;
}

SocialGraph read_edge_list(std::istream& in, std::span<const std::string> declared) {
  CsvReader csv(in);
  csv.expect_header({"src", "dst", "p"});
  MemberTable table;
  for (const auto& m : declared) {
    validate_label(m);
    table.add(m);
  }
  std::vector<LabeledRow> rows;
  while (csv.next()) {
    csv.expect_fields(3);
    LabeledRow row{csv.label(0), csv.label(1), parse_number(csv.fields()[2], csv.line()),
                   csv.line()};
    table.add(row.src);
    table.add(row.dst);
    rows.push_back(std::move(row));
  }
  auto labels = table.finish();
  std::vector<ShareEdge> edges;
  std::vector<std::size_t> lines;
  edges.reserve(rows.size());
  lines.reserve(rows.size());
  for (const auto& row : rows) {
    edges.push_back(ShareEdge{table.id(row.src), table.id(row.dst), row.value});
    lines.push_back(row.line);
  }
  return build_graph(std::move(labels), std::move(edges), lines);
}

SocialGraph read_interactions(std::istream& records, std::istream& held,
                              std::span<const std::string> declared) {
  MemberTable table;
  for (const auto& m : declared) {
    validate_label(m);
    table.add(m);
  }

  CsvReader held_csv(held);
  held_csv.expect_header({"member", "held_qty"});
  std::map<std::string, double> held_by_label;
  while (held_csv.next()) {
    held_csv.expect_fields(2);
    auto label = held_csv.label(0);
    double qty = parse_number(held_csv.fields()[1], held_csv.line());
    if (qty < 0.0) throw ParseError("held quantity must be non-negative", held_csv.line());
    if (!held_by_label.emplace(label, qty).second) {
      throw ParseError("duplicate held quantity for '" + label + "'", held_csv.line());
    }
    table.add(label);
  }

  CsvReader csv(records);
  csv.expect_header({"src", "dst", "shared_qty"});
  std::vector<LabeledRow> rows;
  while (csv.next()) {
    csv.expect_fields(3);
    LabeledRow row{csv.label(0), csv.label(1), parse_number(csv.fields()[2], csv.line()),
                   csv.line()};
    table.add(row.src);
    table.add(row.dst);
    rows.push_back(std::move(row));
  }

  auto labels = table.finish();
  std::map<MemberId, double> held_by_id;
  for (const auto& [label, qty] : held_by_label) held_by_id.emplace(table.id(label), qty);
  std::vector<InteractionRecord> recs;
  std::vector<std::size_t> lines;
  for (const auto& row : rows) {
    recs.push_back(InteractionRecord{table.id(row.src), table.id(row.dst), row.value});
    lines.push_back(row.line);
  }
  return build_graph_from_interactions(std::move(labels), recs, held_by_id, lines);
}

void write_edge_list(std::ostream& out, const SocialGraph& graph) {
  out << "src,dst,p\n";
  for (const auto& e : graph.edges()) {
    out << graph.label(e.src) << ',' << graph.label(e.dst) << ',' << format_number(e.p) << '\n';
  }
}

void write_matrix(std::ostream& out, const PropagationMatrix& m) {
  const std::size_t n = m.size();
  out << to_string(m.kind());
  for (const auto& label : m.labels()) out << ',' << label;
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out << m.labels()[i];
    for (std::size_t j = 0; j < n; ++j) out << ',' << format_number(m(i, j));
    out << '\n';
  }
}

PropagationMatrix read_matrix(std::istream& in) {
  CsvReader csv(in);
  if (!csv.next()) throw ParseError("empty matrix file", 0);
  MatrixKind kind;
  try {
    kind = parse_matrix_kind(csv.fields()[0]);
  } catch (const ValidationError& err) {
    throw ParseError(err.what(), csv.line());
  }
  std::vector<std::string> labels;
  for (std::size_t f = 1; f < csv.fields().size(); ++f) labels.push_back(csv.label(f));
  const std::size_t n = labels.size();
  std::vector<double> cells;
  cells.reserve(n * n);
  std::size_t row = 0;
  while (csv.next()) {
    if (row == n) throw ParseError("more rows than header labels", csv.line());
    csv.expect_fields(n + 1);
    if (csv.fields()[0] != labels[row]) {
      throw ParseError("row label '" + std::string(csv.fields()[0]) + "' does not match column '" +
                           labels[row] + "'",
                       csv.line());
    }
    for (std::size_t f = 1; f <= n; ++f) cells.push_back(parse_number(csv.fields()[f], csv.line()));
    ++row;
  }
  if (row != n) throw ParseError("expected " + std::to_string(n) + " rows, found " + std::to_string(row), csv.line());
  try {
    return PropagationMatrix(std::move(labels), std::move(cells), kind);
  } catch (const ValidationError& err) {
    throw ParseError(err.what(), 0);
  }
}

void write_energy_vector(std::ostream& out, const EnergyVector& ev,
                         std::span<const std::string> labels) {
  out << "member,p\n";
  for (std::size_t i = 0; i < ev.p.size(); ++i) {
    out << labels[i] << ',' << format_number(ev.p[i]) << '\n';
  }
}

nlohmann::ordered_json json_number(double value) {
  return std::stod(format_number(value));
}

nlohmann::ordered_json witness_to_json(const WitnessPath& path,
                                       std::span<const std::string> labels) {
  nlohmann::ordered_json members = nlohmann::ordered_json::array();
  for (auto m : path.members) members.push_back(labels[m]);
  nlohmann::ordered_json j;
  j["path"] = std::move(members);
  j["product"] = json_number(path.product);
  return j;
}

nlohmann::ordered_json partition_to_json(const Partition& partition,
                                         std::span<const std::string> labels) {
  nlohmann::ordered_json teams = nlohmann::ordered_json::array();
  for (const auto& cluster : partition.clusters()) {
    nlohmann::ordered_json team = nlohmann::ordered_json::array();
    for (auto m : cluster) team.push_back(labels[m]);
    teams.push_back(std::move(team));
  }
  return teams;
}

Partition partition_from_json(const nlohmann::json& teams, std::span<const std::string> labels) {
  if (!teams.is_array()) throw ParseError("teams must be an array of arrays of labels", 0);
  std::map<std::string, MemberId, std::less<>> ids;
  for (std::size_t i = 0; i < labels.size(); ++i) ids.emplace(labels[i], static_cast<MemberId>(i));
  std::vector<std::vector<MemberId>> clusters;
  for (const auto& team : teams) {
    if (!team.is_array()) throw ParseError("each team must be an array of labels", 0);
    auto& cluster = clusters.emplace_back();
    for (const auto& member : team) {
      if (!member.is_string()) throw ParseError("team members must be label strings", 0);
      auto it = ids.find(member.get<std::string>());
      if (it == ids.end()) {
        throw ValidationError("team member '" + member.get<std::string>() +
                              "' is not a member of the matrix");
      }
      cluster.push_back(it->second);
    }
  }
  return Partition::from_clusters(std::move(clusters), labels.size());
}

nlohmann::ordered_json report_to_json(const LeakReport& report,
                                      std::span<const std::string> labels) {
  nlohmann::ordered_json violations = nlohmann::ordered_json::array();
  for (const auto& v : report.violations) {
    nlohmann::ordered_json row;
    row["member_i"] = labels[v.member_i];
    row["member_j"] = labels[v.member_j];
    row["cluster_i"] = v.cluster_i;
    row["cluster_j"] = v.cluster_j;
    row["p"] = json_number(v.p);
    violations.push_back(std::move(row));
  }
  nlohmann::ordered_json j;
  j["eta"] = json_number(report.eta);
  j["ok"] = report.ok;
  j["violations"] = std::move(violations);
  return j;
}

std::string matrix_checksum(const PropagationMatrix& m) {
  std::ostringstream csv;
  write_matrix(csv, m);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : csv.str()) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace leakteam
