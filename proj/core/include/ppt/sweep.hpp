#pragma once

// Seeded Monte Carlo sweeps of the negative PT eigenvalue count.
//
// Sample i of cell (a, b) is drawn from SampleStream{seed, i} salted by the
// cell, so every record is a pure function of (config, cell, i). Work is cut
// into batches of consecutive (cell, i) pairs; a batch is analysed in
// parallel and appended to the checkpoint in index order, which makes the
// checkpoint byte-identical for any worker count.
//
// Checkpoint: JSON lines. Line 1 is a header carrying the config and its
// hash, every further line one SweepRecord.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppt/ensembles.hpp"
#include "ppt/linalg.hpp"

namespace ppt {

struct SweepConfig {
  std::vector<BipartiteShape> dims;
  EnsembleKind ensemble = EnsembleKind::hilbert_schmidt();
  std::uint64_t samples_per_cell = 100000;
  std::uint64_t master_seed = 0;
  double tol = 1e-10;
  int workers = 0;  // 0 = hardware concurrency
  std::filesystem::path checkpoint_path;  // empty = in memory only
  std::filesystem::path counterexample_dir;  // empty = <checkpoint>.counterexamples
  bool check_audenaert = false;  // 2 x 2 cells only
  double audenaert_threshold = -1e-9;
  std::uint64_t flush_interval = 10000;  // at most 10^4
  // Half-open range of sample indices to process in every cell, for split runs.
  std::uint64_t sample_begin = 0;
  std::optional<std::uint64_t> sample_end;

  /// ArgumentError on empty dims, zero dims, samples_per_cell == 0, tol <= 0,
  /// a bad flush interval or range, or an ensemble that does not fit a cell.
  void validate() const;
};

/// Every field by name. "workers" may be an integer or "auto".
SweepConfig sweep_config_from_json(const nlohmann::json& j);
nlohmann::json sweep_config_to_json(const SweepConfig& c);

/// The fields that determine each record, as canonical JSON. Excludes the
/// cell list (every cell has its own stream, so checkpoints of disjoint cells
/// merge), workers, paths, flush interval and sample range.
nlohmann::json sweep_config_identity(const SweepConfig& c);

/// FNV-1a 64 of the dumped identity, as 16 hex digits.
std::string sweep_config_hash(const SweepConfig& c);

struct SweepRecord {
  int dim_a = 0;
  int dim_b = 0;
  std::uint64_t sample_index = 0;
  int negative_count = 0;
  double most_negative = 0.0;
  double negativity = 0.0;
  std::optional<double> audenaert_min_eig;
  std::optional<std::string> counterexample;  // file name inside the counterexample dir

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

nlohmann::json record_to_json(const SweepRecord& r);
SweepRecord record_from_json(const nlohmann::json& j);

/// Analyses one sample. Throws TheoremViolation if the count exceeds the
/// Theorem 1 bound.
SweepRecord sweep_sample(const SweepConfig& config, const BipartiteShape& cell, std::uint64_t sample_index);

struct CellAggregate {
  int dim_a = 0;
  int dim_b = 0;
  std::map<int, std::uint64_t> histogram;  // negative count -> samples
  std::uint64_t samples_done = 0;
  double most_negative = 0.0;
  std::optional<double> audenaert_min_eig;
  std::vector<std::string> counterexample_refs;

  int max_negative_count() const;  // -1 when empty

  friend bool operator==(const CellAggregate&, const CellAggregate&) = default;
};

struct SweepTable {
  nlohmann::json config;  // identity echo
  std::string config_hash;
  std::map<std::pair<int, int>, CellAggregate> cells;

  void add(const SweepRecord& r);

  friend bool operator==(const SweepTable&, const SweepTable&) = default;
};

struct SweepOutcome {
  SweepTable table;
  std::uint64_t processed = 0;  // records produced by this call (not resumed)
  std::vector<std::filesystem::path> counterexamples;  // written by this call
  bool stopped_on_breach = false;  // conjecture or Audenaert monitor fired
};

/// Runs (or resumes) a sweep. An existing checkpoint with the same config hash
/// is resumed: its rows are skipped and a torn final line is truncated. A
/// different hash is a MergeError. IoError on write failure, leaving every
/// completed batch on disk. A Theorem 1 breach persists the offending state
/// and rethrows TheoremViolation. Conjecture or Audenaert breaches persist the
/// state and stop the run after the current batch.
SweepOutcome run_sweep(const SweepConfig& config);

struct CheckpointContents {
  nlohmann::json header;
  std::vector<SweepRecord> records;
  bool torn_tail = false;
};

/// Reads a checkpoint; a torn or unparsable last line is reported, not fatal.
/// ParseError for a bad header or a bad line before the last.
CheckpointContents read_checkpoint(const std::filesystem::path& path);

/// Aggregates one checkpoint.
SweepTable load_table(const std::filesystem::path& path);

/// Union of several checkpoints of one config. MergeError on a hash mismatch,
/// CorruptionError on two different rows for the same (cell, sample). A
/// zero-byte file contributes nothing.
SweepTable merge_checkpoints(const std::vector<std::filesystem::path>& paths);

enum class TableFormat { markdown, csv, json };
TableFormat parse_table_format(const std::string& name);

/// Published maximum counts for 2 <= M <= N <= 10, looked up symmetrically.
std::optional<int> published_max_count(int dim_a, int dim_b);

/// "ok", "under-sampled" or "EXCEEDS" against the published value; empty if
/// there is none for the cell.
std::string overlay_status(const CellAggregate& cell);

/// Grid with dimA rows and dimB columns (markdown), one row per cell (csv),
/// or the full structure (json). With `overlay`, each cell is compared with
/// the published table.
std::string emit_table(const SweepTable& table, TableFormat format, bool overlay = false);

struct WitnessRow {
  int n = 0;
  int negative_count = 0;
  int expected = 0;
  double max_eigenvalue_error = 0.0;  // distance of PT eigenvalues from +-1/n
};

/// PT of the maximally entangled state for n = 2..n_max. ArgumentError if
/// n_max < 2; TheoremViolation if any count differs from n(n-1)/2 or an
/// eigenvalue is more than 1e-10 from +-1/n.
std::vector<WitnessRow> witness_validate(int n_max);

struct AudenaertReport {
  std::uint64_t samples = 0;
  double min_eig = 0.0;
  std::uint64_t worst_index = 0;
  std::vector<std::filesystem::path> counterexamples;
};

/// min eig |rho^T|^T over random two-qubit states from `ensemble`. States
/// below `threshold` are written to `out_dir`.
AudenaertReport run_audenaert_check(std::uint64_t samples, std::uint64_t seed,
                                    const std::filesystem::path& out_dir,
                                    EnsembleKind ensemble = EnsembleKind::hilbert_schmidt(), int workers = 0,
                                    double threshold = -1e-9);

}  // namespace ppt
