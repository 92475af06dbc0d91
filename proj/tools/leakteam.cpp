// leakteam -- command-line front end: ingest a share graph, compute the
// propagation closure, and split members into leak-free teams.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "leakteam/error.hpp"
#include "leakteam/io.hpp"
#include "leakteam/pipeline.hpp"
#include "leakteam/propagation.hpp"

using namespace leakteam;

namespace {

enum ExitCode { kOk = 0, kUserError = 1, kInternalError = 3, kLeakFound = 4 };

struct InputOptions {
  std::string input;
  std::string format = "auto";
  std::string held;
  std::string members;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

// Writes through `emit` to `path`, or to stdout when the path is empty.
template <typename Emit>
void write_output(const std::string& path, Emit&& emit) {
  if (path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  emit(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string detect_format(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    auto fields = split_csv_line(line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    std::vector<std::string> header(fields.begin(), fields.end());
    if (header == std::vector<std::string>{"src", "dst", "p"}) return "edges";
    if (header == std::vector<std::string>{"src", "dst", "shared_qty"}) return "interactions";
    return "matrix";
  }
  throw ParseError("'" + path + "' is empty", 0);
}

SocialGraph load_graph(const InputOptions& opt, const std::string& format) {
  std::vector<std::string> declared;
  if (!opt.members.empty()) {
    auto in = open_input(opt.members);
    declared = read_member_list(in);
  }
  auto in = open_input(opt.input);
  if (format == "edges") return read_edge_list(in, declared);
  if (opt.held.empty()) throw ValidationError("--held is required for interaction input");
  auto held = open_input(opt.held);
  return read_interactions(in, held, declared);
}

std::string resolve_format(const InputOptions& opt) {
  return opt.format == "auto" ? detect_format(opt.input) : opt.format;
}

// Loads any accepted input and advances it to the requested stage.
PropagationMatrix load_matrix(const InputOptions& opt, MatrixKind wanted) {
  const auto format = resolve_format(opt);
  PropagationMatrix m;
  if (format == "matrix") {
    auto in = open_input(opt.input);
    m = read_matrix(in);
  } else {
    m = direct_matrix(load_graph(opt, format));
  }
  if (static_cast<int>(m.kind()) > static_cast<int>(wanted)) {
    throw ValidationError("input is a " + std::string(to_string(m.kind())) + " matrix; a " +
                          std::string(to_string(wanted)) + " matrix or a graph is required");
  }
  if (m.kind() == MatrixKind::direct && wanted != MatrixKind::direct) m = closure(m);
  if (m.kind() == MatrixKind::closure && wanted == MatrixKind::symmetrized) m = symmetrize(m);
  return m;
}

MemberId member_by_label(const PropagationMatrix& m, const std::string& label) {
  const auto& labels = m.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<MemberId>(i);
  }
  throw ValidationError("unknown member '" + label + "'");
}

void add_input_options(CLI::App* cmd, InputOptions& opt, bool graph_only = false) {
  cmd->add_option("--input", opt.input, "Edge list, interaction CSV or matrix CSV")
      ->required()
      ->check(CLI::ExistingFile);
  std::vector<std::string> formats{"auto", "edges", "interactions"};
  if (!graph_only) formats.push_back("matrix");
  cmd->add_option("--format", opt.format, "Input format (auto detects from the header)")
      ->check(CLI::IsMember(formats));
  cmd->add_option("--held", opt.held, "Held quantities CSV `member,held_qty` (interactions)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--members", opt.members, "Extra members CSV `member` (e.g. isolated members)")
      ->check(CLI::ExistingFile);
}

CLI::Option* add_eta(CLI::App* cmd, double& eta) {
  return cmd->add_option("--eta", eta, "Disclosure threshold in [0,1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leak-aware team formation over data-sharing social graphs"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  InputOptions in_opt;
  std::string out_matrix, out_teams, out_report, out_path;
  std::string owner, target, teams_path;
  double eta = 0.0;
  std::size_t seeds = 2;
  std::size_t gen_n = 0;
  double gen_degree = 0.0;
  std::uint64_t rng_seed = 0;
  std::vector<double> etas;

  auto* ingest = app.add_subcommand("ingest", "Build the direct share matrix");
  add_input_options(ingest, in_opt, true);
  ingest->add_option("--out-matrix", out_matrix, "Matrix CSV destination (default stdout)");

  auto* propagate = app.add_subcommand("propagate", "Propagation probabilities from one owner");
  add_input_options(propagate, in_opt);
  propagate->add_option("--owner", owner, "Owner member label")->required();
  propagate->add_option("--target", target, "Also report a witness path to this member");

  auto* closure_cmd = app.add_subcommand("closure", "All-pairs propagation closure");
  add_input_options(closure_cmd, in_opt);
  closure_cmd->add_option("--out-matrix", out_matrix, "Matrix CSV destination (default stdout)");

  auto* sym_cmd = app.add_subcommand("symmetrize", "Pairwise max of the closure");
  add_input_options(sym_cmd, in_opt);
  sym_cmd->add_option("--out-matrix", out_matrix, "Matrix CSV destination (default stdout)");

  auto* cluster_cmd = app.add_subcommand("cluster", "Partition members into leak-free teams");
  add_input_options(cluster_cmd, in_opt);
  add_eta(cluster_cmd, eta);
  cluster_cmd->add_option("--seeds", seeds, "Initial cluster count")->check(CLI::PositiveNumber);
  cluster_cmd->add_option("--out-teams", out_teams, "Teams JSON destination (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Check a team partition for leaks above eta");
  add_input_options(verify_cmd, in_opt);
  add_eta(verify_cmd, eta);
  verify_cmd->add_option("--teams", teams_path, "Teams JSON")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--out-report", out_report, "Report JSON destination (default stdout)");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "ingest -> closure -> cluster -> verify");
  add_input_options(pipeline_cmd, in_opt, true);
  add_eta(pipeline_cmd, eta);
  pipeline_cmd->add_option("--seeds", seeds, "Initial cluster count")->check(CLI::PositiveNumber);
  pipeline_cmd->add_option("--out-matrix", out_matrix,
                           "Prefix for <prefix>.direct.csv, .closure.csv, .symmetrized.csv");
  pipeline_cmd->add_option("--out-teams", out_teams, "Teams JSON destination (default stdout)");
  pipeline_cmd->add_option("--out-report", out_report, "Leak report JSON destination");

  auto* gen_cmd = app.add_subcommand("gen", "Generate a random share graph");
  gen_cmd->add_option("--n", gen_n, "Member count")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--degree", gen_degree, "Average out-degree")->required();
  gen_cmd->add_option("--rng-seed", rng_seed, "Generator seed");
  gen_cmd->add_option("--out", out_path, "Edge list destination (default stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Cluster count for each eta");
  add_input_options(sweep_cmd, in_opt);
  sweep_cmd->add_option("--etas", etas, "Ascending thresholds, comma separated")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      auto m = load_matrix(in_opt, MatrixKind::direct);
      write_output(out_matrix, [&](std::ostream& o) { write_matrix(o, m); });
    } else if (propagate->parsed()) {
      auto m = load_matrix(in_opt, MatrixKind::direct);
      auto from = member_by_label(m, owner);
      auto ev = propagate_from(m, from);
      nlohmann::ordered_json j;
      j["owner"] = owner;
      j["iterations"] = ev.iterations;
      j["changing_sweeps"] = ev.changing_sweeps;
      nlohmann::ordered_json energy = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < ev.p.size(); ++i) {
        energy.push_back({{"member", m.labels()[i]}, {"p", json_number(ev.p[i])}});
      }
      j["energy"] = std::move(energy);
      if (!target.empty()) {
        j["witness"] = witness_to_json(witness_path(m, from, member_by_label(m, target)),
                                       m.labels());
      }
      std::cout << j.dump(2) << '\n';
    } else if (closure_cmd->parsed()) {
      auto m = load_matrix(in_opt, MatrixKind::closure);
      write_output(out_matrix, [&](std::ostream& o) { write_matrix(o, m); });
    } else if (sym_cmd->parsed()) {
      auto m = load_matrix(in_opt, MatrixKind::symmetrized);
      write_output(out_matrix, [&](std::ostream& o) { write_matrix(o, m); });
    } else if (cluster_cmd->parsed()) {
      auto sym = load_matrix(in_opt, MatrixKind::symmetrized);
      auto partition = cluster_members(sym, Threshold(eta), spread_seeds(sym.size(), seeds));
      nlohmann::ordered_json j;
      j["eta"] = json_number(eta);
      j["teams"] = partition_to_json(partition, sym.labels());
      write_output(out_teams, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    } else if (verify_cmd->parsed()) {
      auto sym = load_matrix(in_opt, MatrixKind::symmetrized);
      auto teams_in = open_input(teams_path);
      auto teams_json = nlohmann::json::parse(teams_in);
      if (teams_json.is_object()) teams_json = teams_json.at("teams");
      auto partition = partition_from_json(teams_json, sym.labels());
      auto report = verify_free_leak(partition, sym, Threshold(eta));
      write_output(out_report, [&](std::ostream& o) {
        o << report_to_json(report, sym.labels()).dump(2) << '\n';
      });
      return report.ok ? kOk : kLeakFound;
    } else if (pipeline_cmd->parsed()) {
      PipelineConfig config;
      config.eta = Threshold(eta);
      config.seed_count = seeds;
      const auto format = resolve_format(in_opt);
      if (format == "matrix") throw ValidationError("pipeline expects an edge or interaction file");
      config.input_mode = format == "edges" ? InputMode::edges : InputMode::interactions;
      auto result = run_pipeline(config, load_graph(in_opt, format));
      if (!out_matrix.empty()) {
        write_output(out_matrix + ".direct.csv", [&](std::ostream& o) { write_matrix(o, result.direct); });
        write_output(out_matrix + ".closure.csv", [&](std::ostream& o) { write_matrix(o, result.closure); });
        write_output(out_matrix + ".symmetrized.csv",
                     [&](std::ostream& o) { write_matrix(o, result.symmetrized); });
      }
      if (!out_report.empty()) {
        write_output(out_report, [&](std::ostream& o) {
          o << report_to_json(result.report, result.symmetrized.labels()).dump(2) << '\n';
        });
      }
      auto assignment = make_assignment(config, result);
      write_output(out_teams, [&](std::ostream& o) {
        o << assignment_to_json(assignment).dump(2) << '\n';
      });
    } else if (gen_cmd->parsed()) {
      auto graph = generate_graph(gen_n, gen_degree, rng_seed);
      write_output(out_path, [&](std::ostream& o) { write_edge_list(o, graph); });
    } else if (sweep_cmd->parsed()) {
      auto sym = load_matrix(in_opt, MatrixKind::symmetrized);
      auto rows = eta_sweep(sym, etas);
      write_sweep(std::cout, rows);
    }
  } catch (const InternalError& err) {
    std::cerr << "error: internal: " << err.what() << '\n';
    return kInternalError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUserError;
  }
  return kOk;
}
