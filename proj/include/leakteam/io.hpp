#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "leakteam/clustering.hpp"
#include "leakteam/graph.hpp"
#include "leakteam/matrix.hpp"
#include "leakteam/propagation.hpp"

namespace leakteam {

/// Up to 12 significant digits, trailing zeros trimmed ("0.72", "1", "0").
std::string format_number(double value);

/// Strict decimal parse of the whole field; ParseError names `line`.
double parse_number(std::string_view text, std::size_t line);

/// Splits one CSV line on commas. Labels never contain commas or quotes.
std::vector<std::string_view> split_csv_line(std::string_view line);

/// Extra member labels: CSV with header `member`, one label per line.
std::vector<std::string> read_member_list(std::istream& in);

/**
 * Edge list, CSV header `src,dst,p`.
 *
 * Members are every label appearing in the file plus `declared`, numbered
 * in natural label order, so row order never affects member ids.
 */
SocialGraph read_edge_list(std::istream& in, std::span<const std::string> declared = {});

/// Interactions `src,dst,shared_qty` and holdings `member,held_qty`.
SocialGraph read_interactions(std::istream& records, std::istream& held,
                              std::span<const std::string> declared = {});

void write_edge_list(std::ostream& out, const SocialGraph& graph);

/// Matrix CSV: the corner cell holds the kind, first row and column the labels.
void write_matrix(std::ostream& out, const PropagationMatrix& m);
PropagationMatrix read_matrix(std::istream& in);

/// `member,p` rows for one owner.
void write_energy_vector(std::ostream& out, const EnergyVector& ev,
                         std::span<const std::string> labels);

/// Number rounded as format_number() would print it, for JSON output.
nlohmann::ordered_json json_number(double value);

nlohmann::ordered_json witness_to_json(const WitnessPath& path,
                                       std::span<const std::string> labels);

/// Array of clusters, each an array of member labels, in canonical order.
nlohmann::ordered_json partition_to_json(const Partition& partition,
                                         std::span<const std::string> labels);
Partition partition_from_json(const nlohmann::json& teams, std::span<const std::string> labels);

nlohmann::ordered_json report_to_json(const LeakReport& report,
                                      std::span<const std::string> labels);

/// 64-bit FNV-1a of the matrix CSV bytes, as 16 hex digits.
std::string matrix_checksum(const PropagationMatrix& m);

}  // namespace leakteam
