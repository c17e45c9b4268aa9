#include "ppt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "ppt/errors.hpp"
#include "ppt/io.hpp"
#include "ppt/spectra.hpp"

namespace ppt {

namespace {

namespace fs = std::filesystem;

constexpr const char* kCheckpointKind = "pptspectra-sweep-checkpoint";
constexpr int kCheckpointVersion = 1;
constexpr std::uint64_t kMaxFlushInterval = 10000;

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Calls fn(i) for i in [0, n) on `workers` threads. If any call throws, the
// exception from the lowest index is rethrown after every thread has joined.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = n;
  std::exception_ptr err;
  constexpr std::size_t chunk = 32;

  auto body = [&] {
    for (;;) {
      const std::size_t start = next.fetch_add(chunk);
      if (start >= n) return;
      const std::size_t stop = std::min(n, start + chunk);
      for (std::size_t i = start; i < stop; ++i) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (i < err_index) {
            err_index = i;
            err = std::current_exception();
          }
        }
      }
    }
  };
  if (threads <= 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body);
  }
  if (err) std::rethrow_exception(err);
}

std::uint64_t cell_salt(const BipartiteShape& cell) {
  return (static_cast<std::uint64_t>(cell.dim_a()) << 32) | static_cast<std::uint32_t>(cell.dim_b());
}

SampleStream stream_for(const SweepConfig& c, const BipartiteShape& cell, std::uint64_t index) {
  return SampleStream{c.master_seed, index}.salted(cell_salt(cell));
}

fs::path counterexample_dir_for(const SweepConfig& c) {
  if (!c.counterexample_dir.empty()) return c.counterexample_dir;
  if (!c.checkpoint_path.empty()) {
    fs::path p = c.checkpoint_path;
    p += ".counterexamples";
    return p;
  }
  return "counterexamples";
}

std::string counterexample_name(int a, int b, std::uint64_t index) {
  std::ostringstream os;
  os << a << "x" << b << "_" << index << ".json";
  return os.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

fs::path persist_counterexample(const SweepConfig& c, const BipartiteShape& cell, std::uint64_t index,
                                const std::string& reason, const SweepRecord* rec) {
  const DensityMatrix rho = sample_state(c.ensemble, cell, stream_for(c, cell, index));
  Json j = {
      {"reason", reason},
      {"master_seed", c.master_seed},
      {"sample_index", index},
      {"ensemble", c.ensemble.name()},
      {"config_hash", sweep_config_hash(c)},
      {"tool_version", tool_version()},
      {"state", density_to_json(rho)},
  };
  if (rec) j["record"] = record_to_json(*rec);
  const fs::path path = counterexample_dir_for(c) / counterexample_name(cell.dim_a(), cell.dim_b(), index);
  write_text_file(path, j.dump(2) + "\n");
  return path;
}

std::optional<std::string> breach_reason(const SweepConfig& c, const SweepRecord& r) {
  if (r.dim_a == r.dim_b && r.negative_count > conjecture_bound(r.dim_a)) return "conjecture_bound";
  if (r.audenaert_min_eig && *r.audenaert_min_eig < c.audenaert_threshold) return "audenaert";
  return std::nullopt;
}

template <typename T>
T get_field(const Json& j, const char* name) {
  try {
    return j.at(name).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("field '") + name + "': " + e.what());
  }
}

Json dims_json(const SweepConfig& c) {
  Json dims = Json::array();
  for (const BipartiteShape& s : c.dims) dims.push_back({s.dim_a(), s.dim_b()});
  return dims;
}

Json header_json(const SweepConfig& c) {
  return {
      {"kind", kCheckpointKind},
      {"version", kCheckpointVersion},
      {"config_hash", sweep_config_hash(c)},
      {"config", sweep_config_identity(c)},
      {"dims", dims_json(c)},
  };
}

std::string header_hash(const Json& header, const fs::path& path) {
  if (!header.is_object() || header.value("kind", "") != kCheckpointKind) {
    throw ParseError(path.string() + ": not a sweep checkpoint (bad header)");
  }
  if (header.value("version", 0) != kCheckpointVersion) {
    throw ParseError(path.string() + ": unsupported checkpoint version");
  }
  return get_field<std::string>(header, "config_hash");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return os.str();
}

// Byte length of the intact prefix (through the last newline).
std::size_t intact_length(const std::string& text) {
  const std::size_t nl = text.rfind('\n');
  return nl == std::string::npos ? 0 : nl + 1;
}

}  // namespace

void SweepConfig::validate() const {
  if (dims.empty()) throw ArgumentError("sweep: dims must not be empty");
  for (const BipartiteShape& s : dims) {
    if (!ensemble.supports(s)) {
      std::ostringstream os;
      os << "sweep: ensemble '" << ensemble.name() << "' does not support " << s.dim_a() << "x" << s.dim_b();
      throw ArgumentError(os.str());
    }
  }
  if (samples_per_cell < 1) throw ArgumentError("sweep: samples_per_cell must be >= 1");
  if (!(tol > 0.0)) throw ArgumentError("sweep: tol must be > 0");
  if (workers < 0) throw ArgumentError("sweep: workers must be >= 1 or auto");
  if (flush_interval < 1 || flush_interval > kMaxFlushInterval) {
    throw ArgumentError("sweep: flush_interval must lie in [1, 10000]");
  }
  const std::uint64_t end = sample_end.value_or(samples_per_cell);
  if (sample_begin > end || end > samples_per_cell) {
    throw ArgumentError("sweep: sample range must satisfy begin <= end <= samples_per_cell");
  }
}

SweepConfig sweep_config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("sweep config must be a JSON object");
  static const std::set<std::string> known = {
      "dims", "ensemble", "ancilla_dim", "samples_per_cell", "master_seed", "tol", "workers",
      "checkpoint_path", "counterexample_dir", "check_audenaert", "audenaert_threshold",
      "flush_interval", "sample_begin", "sample_end"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ParseError("sweep config: unknown field '" + key + "'");
  }
  SweepConfig c;
  if (!j.contains("dims") || !j.at("dims").is_array()) throw ParseError("sweep config: field 'dims' must be an array");
  for (const Json& d : j.at("dims")) {
    if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number_integer()) {
      throw ParseError("sweep config: each 'dims' entry must be [dimA, dimB]");
    }
    c.dims.emplace_back(d[0].get<int>(), d[1].get<int>());
  }
  if (j.contains("ensemble")) {
    const int k = j.contains("ancilla_dim") ? get_field<int>(j, "ancilla_dim") : 0;
    c.ensemble = EnsembleKind::parse(get_field<std::string>(j, "ensemble"), k);
  }
  if (j.contains("samples_per_cell")) c.samples_per_cell = get_field<std::uint64_t>(j, "samples_per_cell");
  if (j.contains("master_seed")) c.master_seed = get_field<std::uint64_t>(j, "master_seed");
  if (j.contains("tol")) c.tol = get_field<double>(j, "tol");
  if (j.contains("workers")) {
    const Json& w = j.at("workers");
    if (w.is_string() && w.get<std::string>() == "auto") {
      c.workers = 0;
    } else if (w.is_number_integer() && w.get<int>() >= 1) {
      c.workers = w.get<int>();
    } else {
      throw ParseError("sweep config: field 'workers' must be a positive integer or \"auto\"");
    }
  }
  if (j.contains("checkpoint_path")) c.checkpoint_path = get_field<std::string>(j, "checkpoint_path");
  if (j.contains("counterexample_dir")) c.counterexample_dir = get_field<std::string>(j, "counterexample_dir");
  if (j.contains("check_audenaert")) c.check_audenaert = get_field<bool>(j, "check_audenaert");
  if (j.contains("audenaert_threshold")) c.audenaert_threshold = get_field<double>(j, "audenaert_threshold");
  if (j.contains("flush_interval")) c.flush_interval = get_field<std::uint64_t>(j, "flush_interval");
  if (j.contains("sample_begin")) c.sample_begin = get_field<std::uint64_t>(j, "sample_begin");
  if (j.contains("sample_end")) c.sample_end = get_field<std::uint64_t>(j, "sample_end");
  c.validate();
  return c;
}

Json sweep_config_to_json(const SweepConfig& c) {
  Json j = sweep_config_identity(c);
  j["dims"] = dims_json(c);
  j["workers"] = c.workers == 0 ? Json("auto") : Json(c.workers);
  j["checkpoint_path"] = c.checkpoint_path.string();
  if (!c.counterexample_dir.empty()) j["counterexample_dir"] = c.counterexample_dir.string();
  j["flush_interval"] = c.flush_interval;
  j["sample_begin"] = c.sample_begin;
  if (c.sample_end) j["sample_end"] = *c.sample_end;
  return j;
}

Json sweep_config_identity(const SweepConfig& c) {
  Json j = {
      {"ensemble", c.ensemble.name()},
      {"samples_per_cell", c.samples_per_cell},
      {"master_seed", c.master_seed},
      {"tol", c.tol},
      {"check_audenaert", c.check_audenaert},
      {"audenaert_threshold", c.audenaert_threshold},
  };
  if (c.ensemble.tag == EnsembleKind::Tag::induced) j["ancilla_dim"] = c.ensemble.ancilla_dim;
  return j;
}

std::string sweep_config_hash(const SweepConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : sweep_config_identity(c).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Json record_to_json(const SweepRecord& r) {
  Json j = {
      {"dimA", r.dim_a},
      {"dimB", r.dim_b},
      {"sample_index", r.sample_index},
      {"negative_count", r.negative_count},
      {"most_negative", r.most_negative},
      {"negativity", r.negativity},
  };
  if (r.audenaert_min_eig) j["audenaert_min_eig"] = *r.audenaert_min_eig;
  if (r.counterexample) j["counterexample"] = *r.counterexample;
  return j;
}

SweepRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("sweep record must be a JSON object");
  SweepRecord r;
  r.dim_a = get_field<int>(j, "dimA");
  r.dim_b = get_field<int>(j, "dimB");
  r.sample_index = get_field<std::uint64_t>(j, "sample_index");
  r.negative_count = get_field<int>(j, "negative_count");
  r.most_negative = get_field<double>(j, "most_negative");
  r.negativity = get_field<double>(j, "negativity");
  if (j.contains("audenaert_min_eig")) r.audenaert_min_eig = get_field<double>(j, "audenaert_min_eig");
  if (j.contains("counterexample")) r.counterexample = get_field<std::string>(j, "counterexample");
  return r;
}

SweepRecord sweep_sample(const SweepConfig& config, const BipartiteShape& cell, std::uint64_t sample_index) {
  const DensityMatrix rho = sample_state(config.ensemble, cell, stream_for(config, cell, sample_index));
  const NegativeSpectrumReport rep = count_negative(rho, config.tol);
  SweepRecord r;
  r.dim_a = cell.dim_a();
  r.dim_b = cell.dim_b();
  r.sample_index = sample_index;
  r.negative_count = rep.negative_count;
  r.most_negative = rep.most_negative;
  r.negativity = rep.negativity;
  if (config.check_audenaert && cell.dim_a() == 2 && cell.dim_b() == 2) {
    r.audenaert_min_eig = abs_pt_pt(rho).min_eigenvalue;
  }
  return r;
}

int CellAggregate::max_negative_count() const {
  for (auto it = histogram.rbegin(); it != histogram.rend(); ++it) {
    if (it->second > 0) return it->first;
  }
  return -1;
}

void SweepTable::add(const SweepRecord& r) {
  CellAggregate& cell = cells[{r.dim_a, r.dim_b}];
  cell.dim_a = r.dim_a;
  cell.dim_b = r.dim_b;
  ++cell.histogram[r.negative_count];
  ++cell.samples_done;
  cell.most_negative = std::min(cell.most_negative, r.most_negative);
  if (r.audenaert_min_eig) {
    cell.audenaert_min_eig = std::min(cell.audenaert_min_eig.value_or(*r.audenaert_min_eig), *r.audenaert_min_eig);
  }
  if (r.counterexample) cell.counterexample_refs.push_back(*r.counterexample);
}

CheckpointContents read_checkpoint(const fs::path& path) {
  const std::string text = read_file(path);
  CheckpointContents out;
  const std::size_t intact = intact_length(text);
  out.torn_tail = intact != text.size();

  std::istringstream lines(text.substr(0, intact));
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> body;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line_no == 1) {
      out.header = parse_json_text(line, path.string() + ":1");
      header_hash(out.header, path);
      continue;
    }
    body.push_back(std::move(line));
  }
  if (line_no == 0) {
    throw ParseError(path.string() + ": checkpoint has no complete header line");
  }
  for (std::size_t i = 0; i < body.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(i + 2);
    try {
      out.records.push_back(record_from_json(parse_json_text(body[i], where)));
    } catch (const ParseError& e) {
      // An unparsable final line is the signature of a torn append.
      if (i + 1 == body.size()) {
        out.torn_tail = true;
        break;
      }
      throw ParseError(where + ": " + e.what());
    }
  }
  return out;
}

SweepOutcome run_sweep(const SweepConfig& config) {
  config.validate();
  const int workers = resolve_workers(config.workers);
  const std::uint64_t end = config.sample_end.value_or(config.samples_per_cell);

  SweepOutcome outcome;
  outcome.table.config = sweep_config_identity(config);
  outcome.table.config_hash = sweep_config_hash(config);

  std::set<std::tuple<int, int, std::uint64_t>> done;
  std::ofstream out;
  if (!config.checkpoint_path.empty()) {
    const fs::path& path = config.checkpoint_path;
    std::error_code ec;
    const bool existing = fs::exists(path, ec) && fs::file_size(path, ec) > 0;
    if (existing) {
      CheckpointContents prior = read_checkpoint(path);
      const std::string hash = header_hash(prior.header, path);
      if (hash != outcome.table.config_hash) {
        throw MergeError(path.string() + ": checkpoint config hash " + hash + " does not match this config (" +
                         outcome.table.config_hash + ")");
      }
      if (prior.torn_tail) {
        // Keep the header and every parsed record; drop the rest.
        std::ostringstream keep;
        keep << prior.header.dump() << '\n';
        for (const SweepRecord& r : prior.records) keep << record_to_json(r).dump() << '\n';
        write_text_file(path, keep.str());
      }
      for (const SweepRecord& r : prior.records) {
        done.emplace(r.dim_a, r.dim_b, r.sample_index);
        outcome.table.add(r);
      }
      out.open(path, std::ios::binary | std::ios::app);
    } else {
      if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
      out.open(path, std::ios::binary | std::ios::trunc);
      if (out) out << header_json(config).dump() << '\n' << std::flush;
    }
    if (!out) throw IoError("cannot open checkpoint " + path.string() + " for writing");
  }

  struct Work {
    std::size_t cell;
    std::uint64_t index;
  };
  std::vector<Work> work;
  for (std::size_t ci = 0; ci < config.dims.size(); ++ci) {
    const BipartiteShape& s = config.dims[ci];
    for (std::uint64_t i = config.sample_begin; i < end; ++i) {
      if (!done.count({s.dim_a(), s.dim_b(), i})) work.push_back({ci, i});
    }
  }

  std::mutex persist_mutex;
  for (std::size_t start = 0; start < work.size(); start += config.flush_interval) {
    const std::size_t stop = std::min(work.size(), start + static_cast<std::size_t>(config.flush_interval));
    std::vector<SweepRecord> batch(stop - start);
    std::vector<fs::path> written(stop - start);

    parallel_for(batch.size(), workers, [&](std::size_t k) {
      const Work& w = work[start + k];
      const BipartiteShape& cell = config.dims[w.cell];
      try {
        batch[k] = sweep_sample(config, cell, w.index);
      } catch (const TheoremViolation& e) {
        fs::path p;
        {
          std::lock_guard lock(persist_mutex);
          p = persist_counterexample(config, cell, w.index, "theorem1_bound", nullptr);
        }
        throw TheoremViolation(std::string(e.what()) + "; state written to " + p.string());
      }
      if (const auto reason = breach_reason(config, batch[k])) {
        batch[k].counterexample = counterexample_name(cell.dim_a(), cell.dim_b(), w.index);
        std::lock_guard lock(persist_mutex);
        written[k] = persist_counterexample(config, cell, w.index, *reason, &batch[k]);
      }
    });

    if (out.is_open()) {
      std::string chunk;
      for (const SweepRecord& r : batch) {
        chunk += record_to_json(r).dump();
        chunk += '\n';
      }
      out << chunk << std::flush;
      if (!out) throw IoError("checkpoint write failed: " + config.checkpoint_path.string());
    }
    for (const SweepRecord& r : batch) outcome.table.add(r);
    outcome.processed += batch.size();
    for (fs::path& p : written) {
      if (!p.empty()) outcome.counterexamples.push_back(std::move(p));
    }
    if (!outcome.counterexamples.empty()) {
      outcome.stopped_on_breach = true;
      break;
    }
  }
  return outcome;
}

SweepTable load_table(const fs::path& path) {
  return merge_checkpoints({path});
}

SweepTable merge_checkpoints(const std::vector<fs::path>& paths) {
  if (paths.empty()) throw ArgumentError("merge_checkpoints: no checkpoints given");
  SweepTable table;
  std::map<std::tuple<int, int, std::uint64_t>, SweepRecord> rows;
  for (const fs::path& path : paths) {
    std::error_code ec;
    if (fs::is_regular_file(path, ec) && fs::file_size(path, ec) == 0) continue;
    const CheckpointContents c = read_checkpoint(path);
    const std::string hash = header_hash(c.header, path);
    if (table.config_hash.empty()) {
      table.config_hash = hash;
      table.config = c.header.value("config", Json::object());
    } else if (hash != table.config_hash) {
      throw MergeError("config hash mismatch: " + path.string() + " has " + hash + ", expected " +
                       table.config_hash);
    }
    for (const SweepRecord& r : c.records) {
      const auto key = std::make_tuple(r.dim_a, r.dim_b, r.sample_index);
      auto [it, inserted] = rows.emplace(key, r);
      if (!inserted && !(it->second == r)) {
        std::ostringstream os;
        os << "conflicting rows for cell " << r.dim_a << "x" << r.dim_b << " sample " << r.sample_index << " in "
           << path.string();
        throw CorruptionError(os.str());
      }
    }
  }
  for (const auto& [key, r] : rows) table.add(r);
  return table;
}

TableFormat parse_table_format(const std::string& name) {
  if (name == "markdown" || name == "md") return TableFormat::markdown;
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw ArgumentError("unknown table format '" + name + "' (markdown, csv, json)");
}

std::optional<int> published_max_count(int dim_a, int dim_b) {
  // Maximum observed counts for 2 <= M <= N <= 10, row M, column N.
  static constexpr int kTable[9][9] = {
      {1, 2, 3, 3, 3, 4, 4, 4, 5},
      {0, 3, 4, 4, 5, 5, 6, 6, 7},
      {0, 0, 6, 6, 7, 8, 8, 8, 9},
      {0, 0, 0, 10, 10, 10, 11, 11, 11},
      {0, 0, 0, 0, 15, 15, 15, 15, 16},
      {0, 0, 0, 0, 0, 21, 21, 21, 21},
      {0, 0, 0, 0, 0, 0, 28, 28, 28},
      {0, 0, 0, 0, 0, 0, 0, 36, 36},
      {0, 0, 0, 0, 0, 0, 0, 0, 45},
  };
  const int m = std::min(dim_a, dim_b);
  const int n = std::max(dim_a, dim_b);
  if (m < 2 || n > 10) return std::nullopt;
  return kTable[m - 2][n - 2];
}

std::string overlay_status(const CellAggregate& cell) {
  const auto ref = published_max_count(cell.dim_a, cell.dim_b);
  if (!ref) return "";
  const int seen = cell.max_negative_count();
  if (seen > *ref) return "EXCEEDS";
  if (seen < *ref) return "under-sampled";
  return "ok";
}

std::string emit_table(const SweepTable& table, TableFormat format, bool overlay) {
  std::ostringstream os;
  if (format == TableFormat::json) {
    Json cells = Json::array();
    for (const auto& [key, c] : table.cells) {
      Json hist = Json::object();
      for (const auto& [count, n] : c.histogram) hist[std::to_string(count)] = n;
      const BipartiteShape shape(c.dim_a, c.dim_b);
      Json cj = {
          {"dimA", c.dim_a},
          {"dimB", c.dim_b},
          {"samples_done", c.samples_done},
          {"max_negative_count", c.max_negative_count()},
          {"histogram", hist},
          {"most_negative", c.most_negative},
          {"theorem1_bound", theorem1_bound(shape)},
          {"conjecture_bound", c.dim_a == c.dim_b ? Json(conjecture_bound(c.dim_a)) : Json(nullptr)},
          {"counterexample_refs", c.counterexample_refs},
      };
      if (c.audenaert_min_eig) cj["audenaert_min_eig"] = *c.audenaert_min_eig;
      if (overlay) {
        const auto ref = published_max_count(c.dim_a, c.dim_b);
        cj["reference"] = ref ? Json(*ref) : Json(nullptr);
        cj["status"] = ref ? Json(overlay_status(c)) : Json(nullptr);
      }
      cells.push_back(std::move(cj));
    }
    Json j = {{"tool_version", tool_version()}, {"config_hash", table.config_hash}, {"config", table.config},
              {"cells", cells}};
    if (overlay) j["reference_source"] = "published maximum negative-eigenvalue counts, 2 <= M <= N <= 10";
    os << j.dump(2) << '\n';
    return os.str();
  }

  if (format == TableFormat::csv) {
    os << "dimA,dimB,samples_done,max_negative_count,theorem1_bound,conjecture_bound,most_negative,histogram";
    if (overlay) os << ",reference,status";
    os << '\n';
    for (const auto& [key, c] : table.cells) {
      os << c.dim_a << ',' << c.dim_b << ',' << c.samples_done << ',' << c.max_negative_count() << ','
         << theorem1_bound(BipartiteShape(c.dim_a, c.dim_b)) << ',';
      if (c.dim_a == c.dim_b) os << conjecture_bound(c.dim_a);
      os << ',' << std::setprecision(17) << c.most_negative << ',';
      bool first = true;
      for (const auto& [count, n] : c.histogram) {
        os << (first ? "" : ";") << count << ':' << n;
        first = false;
      }
      if (overlay) {
        const auto ref = published_max_count(c.dim_a, c.dim_b);
        os << ',';
        if (ref) os << *ref;
        os << ',' << overlay_status(c);
      }
      os << '\n';
    }
    return os.str();
  }

  std::set<int> rows;
  std::set<int> cols;
  for (const auto& [key, c] : table.cells) {
    rows.insert(key.first);
    cols.insert(key.second);
  }
  os << "| M \\ N |";
  for (int n : cols) os << ' ' << n << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < cols.size(); ++i) os << "---|";
  os << '\n';
  for (int m : rows) {
    os << "| " << m << " |";
    for (int n : cols) {
      const auto it = table.cells.find({m, n});
      if (it == table.cells.end()) {
        os << "  |";
        continue;
      }
      os << ' ' << it->second.max_negative_count();
      if (overlay) {
        if (const auto ref = published_max_count(m, n)) os << " (ref " << *ref << ", " << overlay_status(it->second) << ")";
      }
      os << " |";
    }
    os << '\n';
  }
  return os.str();
}

std::vector<WitnessRow> witness_validate(int n_max) {
  if (n_max < 2) throw ArgumentError("witness_validate: n_max must be >= 2");
  std::vector<WitnessRow> rows;
  for (int n = 2; n <= n_max; ++n) {
    const DensityMatrix rho = maximally_entangled(n);
    const RealVector ev = hermitian_eigenvalues(partial_transpose(rho.matrix(), rho.shape()));
    WitnessRow row;
    row.n = n;
    row.expected = conjecture_bound(n);
    row.negative_count = count_negative(rho).negative_count;
    const double w = 1.0 / n;
    for (double x : ev) row.max_eigenvalue_error = std::max(row.max_eigenvalue_error, std::abs(std::abs(x) - w));
    if (row.negative_count != row.expected || !(row.max_eigenvalue_error <= 1e-10)) {
      std::ostringstream os;
      os << "witness n = " << n << ": " << row.negative_count << " negative eigenvalues, expected " << row.expected
         << " (eigenvalue error " << row.max_eigenvalue_error << ")";
      throw TheoremViolation(os.str());
    }
    rows.push_back(row);
  }
  return rows;
}

AudenaertReport run_audenaert_check(std::uint64_t samples, std::uint64_t seed, const fs::path& out_dir,
                                    EnsembleKind ensemble, int workers, double threshold) {
  if (samples < 1) throw ArgumentError("audenaert check: samples must be >= 1");
  const BipartiteShape cell(2, 2);
  if (!ensemble.supports(cell)) throw ArgumentError("audenaert check: ensemble must support 2x2");
  SweepConfig c;
  c.dims = {cell};
  c.ensemble = ensemble;
  c.samples_per_cell = samples;
  c.master_seed = seed;
  c.check_audenaert = true;
  c.audenaert_threshold = threshold;
  c.counterexample_dir = out_dir;

  std::vector<double> min_eig(samples);
  parallel_for(samples, resolve_workers(workers), [&](std::size_t i) {
    const DensityMatrix rho = sample_state(ensemble, cell, stream_for(c, cell, i));
    min_eig[i] = abs_pt_pt(rho).min_eigenvalue;
  });

  AudenaertReport rep;
  rep.samples = samples;
  const auto worst = std::min_element(min_eig.begin(), min_eig.end());
  rep.min_eig = *worst;
  rep.worst_index = static_cast<std::uint64_t>(worst - min_eig.begin());
  for (std::uint64_t i = 0; i < samples; ++i) {
    if (min_eig[i] < threshold) {
      rep.counterexamples.push_back(persist_counterexample(c, cell, i, "audenaert", nullptr));
    }
  }
  return rep;
}

}  // namespace ppt
