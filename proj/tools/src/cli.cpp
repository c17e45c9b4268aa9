#include "pptool/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ppt/canonical.hpp"
#include "ppt/errors.hpp"
#include "ppt/io.hpp"
#include "ppt/spectra.hpp"
#include "ppt/sweep.hpp"
#include "ppt/theorem3.hpp"

namespace pptool {

namespace {

using ppt::Json;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ppt::IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw ppt::IoError("read failed: " + path);
  return os.str();
}

ppt::DensityMatrix load_state(const std::string& path) {
  return ppt::density_from_json(ppt::parse_json_text(read_text(path), path));
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("PPTOOL_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used, 0);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ppt::ArgumentError(std::string("PPTOOL_SEED is not an unsigned integer: ") + s);
  }
}

void print_counterexamples(const std::vector<std::filesystem::path>& paths, std::ostream& err) {
  for (const auto& p : paths) err << "counterexample written: " << p.string() << '\n';
}

struct AnalyzeArgs {
  std::string input;
  double tol = 1e-10;
};

struct SweepArgs {
  std::string config;
  std::optional<int> workers;
  std::optional<std::string> checkpoint;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> begin;
  std::optional<std::uint64_t> end;
  std::string format = "markdown";
  bool paper_table = false;
};

struct TableArgs {
  std::vector<std::string> checkpoints;
  std::string format = "markdown";
  bool paper_table = false;
};

struct AudenaertArgs {
  std::uint64_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "counterexamples";
  std::string ensemble = "hilbert_schmidt";
  int workers = 0;
  double threshold = -1e-9;
};

struct WitnessArgs {
  int n_max = 6;
  std::string format = "text";
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const ppt::DensityMatrix rho = load_state(a.input);
  const ppt::NegativeSpectrumReport rep = ppt::count_negative(rho, a.tol);
  out << ppt::to_json(rep).dump(2) << '\n';
  err << rho.shape().dim_a() << "x" << rho.shape().dim_b() << ": " << rep.negative_count
      << " negative PT eigenvalue(s), negativity " << rep.negativity << '\n';
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const Json j = ppt::parse_json_text(read_text(a.config), a.config);
  ppt::SweepConfig c = ppt::sweep_config_from_json(j);
  if (!j.contains("master_seed")) {
    if (auto s = env_seed()) c.master_seed = *s;
  }
  if (a.seed) c.master_seed = *a.seed;
  if (a.workers) c.workers = *a.workers;
  if (a.checkpoint) c.checkpoint_path = *a.checkpoint;
  if (a.samples) c.samples_per_cell = *a.samples;
  if (a.begin) c.sample_begin = *a.begin;
  if (a.end) c.sample_end = *a.end;
  const ppt::TableFormat fmt = ppt::parse_table_format(a.format);

  const ppt::SweepOutcome o = ppt::run_sweep(c);
  out << ppt::emit_table(o.table, fmt, a.paper_table);
  err << "sweep " << o.table.config_hash << ": " << o.processed << " new samples over " << c.dims.size()
      << " cell(s)\n";
  for (const auto& [key, cell] : o.table.cells) {
    err << "  " << cell.dim_a << "x" << cell.dim_b << ": max " << cell.max_negative_count() << " after "
        << cell.samples_done << " samples";
    const std::string status = ppt::overlay_status(cell);
    if (!status.empty()) err << " (" << status << ")";
    err << '\n';
  }
  print_counterexamples(o.counterexamples, err);
  if (o.stopped_on_breach) {
    err << "monitored bound breached; sweep stopped\n";
    return kExitBreach;
  }
  return kExitOk;
}

int cmd_table(const TableArgs& a, std::ostream& out, std::ostream&) {
  const ppt::TableFormat fmt = ppt::parse_table_format(a.format);
  std::vector<std::filesystem::path> paths(a.checkpoints.begin(), a.checkpoints.end());
  out << ppt::emit_table(ppt::merge_checkpoints(paths), fmt, a.paper_table);
  return kExitOk;
}

int cmd_audenaert(const AudenaertArgs& a, std::ostream& out, std::ostream& err) {
  std::uint64_t seed = 0;
  if (auto s = env_seed()) seed = *s;
  if (a.seed) seed = *a.seed;
  const ppt::AudenaertReport rep = ppt::run_audenaert_check(
      a.samples, seed, a.out_dir, ppt::EnsembleKind::parse(a.ensemble), a.workers, a.threshold);
  Json counterexamples = Json::array();
  for (const auto& p : rep.counterexamples) counterexamples.push_back(p.string());
  out << Json{{"tool_version", ppt::tool_version()},
              {"samples", rep.samples},
              {"master_seed", seed},
              {"ensemble", a.ensemble},
              {"threshold", a.threshold},
              {"min_eig", rep.min_eig},
              {"worst_index", rep.worst_index},
              {"violations", rep.counterexamples.size()},
              {"counterexamples", counterexamples}}
             .dump(2)
      << '\n';
  if (rep.counterexamples.empty()) {
    err << "no violation in " << rep.samples << " samples (min eig " << rep.min_eig << ")\n";
    return kExitOk;
  }
  err << rep.counterexamples.size() << " violation(s) below " << a.threshold << '\n';
  print_counterexamples(rep.counterexamples, err);
  return kExitBreach;
}

int cmd_witness(const WitnessArgs& a, std::ostream& out, std::ostream& err) {
  const std::vector<ppt::WitnessRow> rows = ppt::witness_validate(a.n_max);
  if (a.format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      arr.push_back({{"n", r.n},
                     {"negative_count", r.negative_count},
                     {"expected", r.expected},
                     {"max_eigenvalue_error", r.max_eigenvalue_error}});
    }
    out << Json{{"tool_version", ppt::tool_version()}, {"rows", arr}}.dump(2) << '\n';
  } else if (a.format == "text") {
    for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << rows[i].negative_count;
    out << '\n';
  } else {
    throw ppt::ArgumentError("witness: unknown format '" + a.format + "' (text, json)");
  }
  err << "maximally entangled witness saturates n(n-1)/2 for n = 2.." << a.n_max << '\n';
  return kExitOk;
}

int cmd_theorem2(const std::string& input, std::ostream& out, std::ostream& err) {
  const ppt::DensityMatrix rho = load_state(input);
  const ppt::CanonicalForm2Q form = ppt::canonicalize_two_qubit(rho);
  const ppt::Theorem2Report rep = ppt::theorem2_check(form);
  Json j = ppt::to_json(rep);
  j["canonical_form"] = ppt::to_json(form);
  out << j.dump(2) << '\n';
  err << (rep.applicable ? "block condition holds" : "block condition does not hold")
      << "; negative count " << rep.negative_count << '\n';
  return kExitOk;
}

int cmd_theorem3(const std::string& input, std::ostream& out, std::ostream& err) {
  const ppt::DensityMatrix rho = load_state(input);
  const ppt::Theorem3Report rep = ppt::theorem3_analyze(rho);
  out << ppt::to_json(rep).dump(2) << '\n';
  if (!rep.applicable) {
    err << (rep.near_degenerate ? "negative eigenvalue not separated from the next one"
                                : "not exactly one negative PT eigenvalue")
        << "; min eig |rho^T|^T = " << rep.abs_pt_pt_min_eig << '\n';
  } else {
    const auto& d = *rep.details;
    err << "E = " << rep.e << ", S " << (!d.s_matrix ? "undefined" : d.s_psd ? "PSD" : "not PSD")
        << ", min eig |rho^T|^T = "
        << rep.abs_pt_pt_min_eig << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Negative eigenvalues of partial transposes: analysis, sweeps and checks", "pptool"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ppt::tool_version());

  AnalyzeArgs analyze;
  auto* sub_analyze = app.add_subcommand("analyze", "Negative PT eigenvalue census of a state (JSON)");
  sub_analyze->add_option("input", analyze.input, "Density-matrix JSON file")->required();
  sub_analyze->add_option("--tol", analyze.tol, "Eigenvalues below -tol count as negative");

  SweepArgs sweep;
  auto* sub_sweep = app.add_subcommand("sweep", "Run or resume a Monte Carlo sweep from a config file");
  sub_sweep->add_option("config", sweep.config, "Sweep config JSON")->required();
  sub_sweep->add_option("--workers", sweep.workers, "Worker threads (default: config, else all cores)");
  sub_sweep->add_option("--checkpoint", sweep.checkpoint, "Checkpoint path (overrides config)");
  sub_sweep->add_option("--samples", sweep.samples, "Samples per cell (overrides config)");
  sub_sweep->add_option("--seed", sweep.seed, "Master seed (overrides config and PPTOOL_SEED)");
  sub_sweep->add_option("--begin", sweep.begin, "First sample index of this split");
  sub_sweep->add_option("--end", sweep.end, "One past the last sample index of this split");
  sub_sweep->add_option("--format", sweep.format, "markdown, csv or json");
  sub_sweep->add_flag("--paper-table", sweep.paper_table, "Overlay the published maximum counts");

  TableArgs table;
  auto* sub_table = app.add_subcommand("table", "Merge checkpoints and print the count table");
  sub_table->add_option("checkpoints", table.checkpoints, "Checkpoint files")->required();
  sub_table->add_option("--format", table.format, "markdown, csv or json");
  sub_table->add_flag("--paper-table", table.paper_table, "Overlay the published maximum counts");

  AudenaertArgs aud;
  auto* sub_aud = app.add_subcommand("audenaert", "Check min eig |rho^T|^T >= threshold on random two-qubit states");
  sub_aud->add_option("--samples", aud.samples, "Number of states");
  sub_aud->add_option("--seed", aud.seed, "Master seed (default PPTOOL_SEED, else 0)");
  sub_aud->add_option("--out-dir", aud.out_dir, "Directory for counterexample files");
  sub_aud->add_option("--ensemble", aud.ensemble, "hilbert_schmidt, random_pure, bell_diagonal or werner");
  sub_aud->add_option("--workers", aud.workers, "Worker threads (0 = all cores)");
  sub_aud->add_option("--threshold", aud.threshold, "Violation threshold");

  WitnessArgs witness;
  auto* sub_witness = app.add_subcommand("witness", "Negative counts of the maximally entangled state, n = 2..n_max");
  sub_witness->add_option("n_max", witness.n_max, "Largest local dimension")->required();
  sub_witness->add_option("--format", witness.format, "text or json");

  std::string t2_input;
  auto* sub_t2 = app.add_subcommand("theorem2", "Canonical form and block-determinant check of a two-qubit state");
  sub_t2->add_option("input", t2_input, "Density-matrix JSON file")->required();

  std::string t3_input;
  auto* sub_t3 = app.add_subcommand("theorem3", "Single-negative-eigenvalue analysis of a two-qubit state");
  sub_t3->add_option("input", t3_input, "Density-matrix JSON file")->required();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("pptool");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (sub_analyze->parsed()) return cmd_analyze(analyze, out, err);
    if (sub_sweep->parsed()) return cmd_sweep(sweep, out, err);
    if (sub_table->parsed()) return cmd_table(table, out, err);
    if (sub_aud->parsed()) return cmd_audenaert(aud, out, err);
    if (sub_witness->parsed()) return cmd_witness(witness, out, err);
    if (sub_t2->parsed()) return cmd_theorem2(t2_input, out, err);
    if (sub_t3->parsed()) return cmd_theorem3(t3_input, out, err);
  } catch (const ppt::InvariantError& e) {
    err << "invalid input: invariant '" << e.invariant() << "' violated by " << e.margin() << ": " << e.what()
        << '\n';
    return kExitInvalid;
  } catch (const ppt::TheoremViolation& e) {
    err << "BREACH: " << e.what() << '\n';
    return kExitBreach;
  } catch (const ppt::IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ppt::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ppt::NumericError& e) {
    err << "numerical failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitInternal;
  } catch (const ppt::Error& e) {
    // Argument, shape, precondition, merge and corruption errors.
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitInvalid;
}

}  // namespace pptool
