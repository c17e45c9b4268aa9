#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <unistd.h>

#include "ppt/errors.hpp"
#include "ppt/io.hpp"
#include "ppt/spectra.hpp"
#include "ppt/sweep.hpp"

using namespace ppt;
namespace fs = std::filesystem;

namespace {

class SweepTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("pptsweep_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  SweepConfig small_config(const std::string& ck, std::uint64_t samples = 3000) const {
    SweepConfig c;
    c.dims = {BipartiteShape(2, 2), BipartiteShape(2, 3), BipartiteShape(3, 3)};
    c.samples_per_cell = samples;
    c.master_seed = 12345;
    c.flush_interval = 1000;
    c.workers = 2;
    c.checkpoint_path = path(ck);
    return c;
  }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

// First `lines` lines of `text`, newline-terminated.
std::string head_lines(const std::string& text, int lines) {
  std::size_t pos = 0;
  for (int i = 0; i < lines; ++i) pos = text.find('\n', pos) + 1;
  return text.substr(0, pos);
}

}  // namespace

TEST_F(SweepTest, ConfigJsonRoundTrip) {
  SweepConfig c = small_config("ck.jsonl");
  c.ensemble = EnsembleKind::induced(3);
  c.sample_end = 100;
  const SweepConfig back = sweep_config_from_json(sweep_config_to_json(c));
  EXPECT_EQ(back.dims, c.dims);
  EXPECT_EQ(back.ensemble, c.ensemble);
  EXPECT_EQ(back.samples_per_cell, c.samples_per_cell);
  EXPECT_EQ(back.master_seed, c.master_seed);
  EXPECT_EQ(back.workers, c.workers);
  EXPECT_EQ(back.checkpoint_path, c.checkpoint_path);
  EXPECT_EQ(back.sample_end, c.sample_end);
  EXPECT_EQ(sweep_config_hash(back), sweep_config_hash(c));
}

TEST_F(SweepTest, ConfigValidation) {
  EXPECT_THROW(sweep_config_from_json(Json{{"dims", {{2, 2}}}, {"bogus", 1}}), ParseError);
  EXPECT_THROW(sweep_config_from_json(Json{{"dims", {{2, 0}}}}), ArgumentError);
  EXPECT_THROW(sweep_config_from_json(Json{{"dims", {{2, 2}}}, {"samples_per_cell", 0}}), ArgumentError);
  EXPECT_THROW(sweep_config_from_json(Json{{"dims", {{2, 3}}}, {"ensemble", "werner"}}), ArgumentError);
  EXPECT_THROW(sweep_config_from_json(Json{{"dims", {{2, 2}}}, {"flush_interval", 20000}}), ArgumentError);
  EXPECT_THROW(sweep_config_from_json(Json{{"dims", {{2, 2}}}, {"workers", "many"}}), ParseError);
  EXPECT_EQ(sweep_config_from_json(Json{{"dims", {{2, 2}}}, {"workers", "auto"}}).workers, 0);
  EXPECT_THROW(sweep_config_from_json(Json{{"dims", {{2, 2}}}, {"master_seed", "x"}}), ParseError);
}

TEST_F(SweepTest, HashCoversOnlyRecordDeterminingFields) {
  const SweepConfig base = small_config("a.jsonl");
  SweepConfig other = base;
  other.workers = 16;
  other.checkpoint_path = path("b.jsonl");
  other.flush_interval = 7;
  other.sample_begin = 10;
  other.dims = {BipartiteShape(4, 4)};
  EXPECT_EQ(sweep_config_hash(base), sweep_config_hash(other));
  other.master_seed += 1;
  EXPECT_NE(sweep_config_hash(base), sweep_config_hash(other));
  EXPECT_EQ(sweep_config_hash(base).size(), 16u);
}

TEST_F(SweepTest, CheckpointIdenticalForAnyWorkerCount) {
  std::string reference;
  for (int w : {1, 4, 16}) {
    SweepConfig c = small_config("w" + std::to_string(w) + ".jsonl");
    c.workers = w;
    const SweepOutcome o = run_sweep(c);
    EXPECT_EQ(o.processed, 9000u);
    const std::string text = slurp(c.checkpoint_path);
    if (reference.empty()) {
      reference = text;
    } else {
      EXPECT_EQ(text, reference) << "workers " << w;
    }
  }
}

TEST_F(SweepTest, TableInvariantsAndSmallCells) {
  const SweepOutcome o = run_sweep(small_config("ck.jsonl"));
  ASSERT_EQ(o.table.cells.size(), 3u);
  for (const auto& [key, cell] : o.table.cells) {
    std::uint64_t total = 0;
    int max_key = -1;
    for (const auto& [count, n] : cell.histogram) {
      total += n;
      if (n > 0) max_key = count;
    }
    EXPECT_EQ(total, cell.samples_done);
    EXPECT_EQ(cell.samples_done, 3000u);
    EXPECT_EQ(max_key, cell.max_negative_count());
    EXPECT_LE(cell.max_negative_count(), theorem1_bound(BipartiteShape(cell.dim_a, cell.dim_b)));
  }
  EXPECT_EQ(o.table.cells.at({2, 2}).max_negative_count(), 1);
  EXPECT_EQ(load_table(path("ck.jsonl")), o.table);
}

TEST_F(SweepTest, SingleSampleRun) {
  SweepConfig c = small_config("one.jsonl", 1);
  c.dims = {BipartiteShape(2, 2)};
  const SweepOutcome o = run_sweep(c);
  const CellAggregate& cell = o.table.cells.at({2, 2});
  EXPECT_EQ(cell.samples_done, 1u);
  EXPECT_EQ(cell.histogram.size(), 1u);
}

TEST_F(SweepTest, RecordsArePureFunctionsOfCellAndIndex) {
  const SweepConfig c = small_config("unused.jsonl");
  const SweepRecord a = sweep_sample(c, BipartiteShape(2, 3), 77);
  SweepConfig alone = c;
  alone.dims = {BipartiteShape(2, 3)};
  EXPECT_EQ(sweep_sample(alone, BipartiteShape(2, 3), 77), a);
  EXPECT_EQ(record_from_json(record_to_json(a)), a);
}

TEST_F(SweepTest, ResumeAfterCrashAtBatchBoundaryIsBitwiseIdentical) {
  const SweepConfig full = small_config("full.jsonl");
  run_sweep(full);
  const std::string reference = slurp(full.checkpoint_path);

  SweepConfig crashed = full;
  crashed.checkpoint_path = path("crashed.jsonl");
  write(crashed.checkpoint_path, head_lines(reference, 1 + 4000));
  const SweepOutcome o = run_sweep(crashed);
  EXPECT_EQ(o.processed, 5000u);
  EXPECT_EQ(slurp(crashed.checkpoint_path), reference);
}

TEST_F(SweepTest, TornFinalLineIsTruncatedOnResume) {
  const SweepConfig full = small_config("full.jsonl");
  const SweepOutcome ref = run_sweep(full);
  const std::string text = slurp(full.checkpoint_path);

  SweepConfig torn = full;
  torn.checkpoint_path = path("torn.jsonl");
  const std::string prefix = head_lines(text, 1 + 2500);
  write(torn.checkpoint_path, prefix + "{\"dimA\":2,\"dimB\":3,\"most_neg");
  const CheckpointContents before = read_checkpoint(torn.checkpoint_path);
  EXPECT_TRUE(before.torn_tail);
  EXPECT_EQ(before.records.size(), 2500u);

  const SweepOutcome o = run_sweep(torn);
  EXPECT_EQ(o.processed, 6500u);
  EXPECT_EQ(o.table, ref.table);
  EXPECT_EQ(load_table(torn.checkpoint_path), ref.table);
  EXPECT_FALSE(read_checkpoint(torn.checkpoint_path).torn_tail);
}

TEST_F(SweepTest, ResumeRejectsDifferentConfig) {
  SweepConfig c = small_config("ck.jsonl", 10);
  run_sweep(c);
  c.master_seed = 1;
  EXPECT_THROW(run_sweep(c), MergeError);
}

TEST_F(SweepTest, SplitRunMergesToUnsplitRun) {
  SweepConfig whole = small_config("whole.jsonl", 10000);
  whole.dims = {BipartiteShape(2, 2)};
  const SweepOutcome ref = run_sweep(whole);

  SweepConfig first = whole;
  first.checkpoint_path = path("first.jsonl");
  first.sample_end = 5000;
  SweepConfig second = whole;
  second.checkpoint_path = path("second.jsonl");
  second.sample_begin = 5000;
  second.workers = 3;
  run_sweep(first);
  run_sweep(second);

  EXPECT_EQ(merge_checkpoints({first.checkpoint_path, second.checkpoint_path}), ref.table);
  EXPECT_EQ(merge_checkpoints({second.checkpoint_path, first.checkpoint_path}), ref.table);
  EXPECT_EQ(merge_checkpoints({whole.checkpoint_path, whole.checkpoint_path}), ref.table);
  EXPECT_EQ(merge_checkpoints({whole.checkpoint_path, first.checkpoint_path}), ref.table);
}

TEST_F(SweepTest, MergeOfDisjointCellsIsUnion) {
  SweepConfig a = small_config("a.jsonl", 200);
  a.dims = {BipartiteShape(2, 2)};
  SweepConfig b = small_config("b.jsonl", 200);
  b.dims = {BipartiteShape(3, 3)};
  const SweepOutcome oa = run_sweep(a);
  const SweepOutcome ob = run_sweep(b);
  const SweepTable merged = merge_checkpoints({a.checkpoint_path, b.checkpoint_path});
  ASSERT_EQ(merged.cells.size(), 2u);
  EXPECT_EQ(merged.cells.at({2, 2}), oa.table.cells.at({2, 2}));
  EXPECT_EQ(merged.cells.at({3, 3}), ob.table.cells.at({3, 3}));
}

TEST_F(SweepTest, MergeRejectsMismatchAndConflict) {
  SweepConfig a = small_config("a.jsonl", 50);
  SweepConfig b = small_config("b.jsonl", 50);
  b.master_seed = 99;
  run_sweep(a);
  run_sweep(b);
  EXPECT_THROW(merge_checkpoints({a.checkpoint_path, b.checkpoint_path}), MergeError);

  const std::string text = slurp(a.checkpoint_path);
  std::string lines = head_lines(text, 2);
  const std::size_t pos = lines.find("\"negative_count\":");
  ASSERT_NE(pos, std::string::npos);
  const std::size_t digit = pos + std::string("\"negative_count\":").size();
  lines[digit] = lines[digit] == '0' ? '1' : '0';
  write(path("bad.jsonl"), lines);
  EXPECT_THROW(merge_checkpoints({a.checkpoint_path, path("bad.jsonl")}), CorruptionError);
}

TEST_F(SweepTest, MonitorBreachPersistsAndStops) {
  // A positive threshold makes every two-qubit sample a monitored breach,
  // exercising the persistence path end to end.
  SweepConfig c = small_config("ck.jsonl", 50);
  c.dims = {BipartiteShape(2, 2)};
  c.check_audenaert = true;
  c.audenaert_threshold = 1.0;
  c.flush_interval = 20;
  const SweepOutcome o = run_sweep(c);
  EXPECT_TRUE(o.stopped_on_breach);
  EXPECT_EQ(o.processed, 20u);
  ASSERT_EQ(o.counterexamples.size(), 20u);
  EXPECT_EQ(o.table.cells.at({2, 2}).counterexample_refs.size(), 20u);

  const Json ce = parse_json_text(slurp(o.counterexamples.front()));
  EXPECT_EQ(ce.at("reason"), "audenaert");
  const DensityMatrix rho = density_from_json(ce.at("state"));
  const SweepRecord r = record_from_json(ce.at("record"));
  EXPECT_NEAR(abs_pt_pt(rho).min_eigenvalue, *r.audenaert_min_eig, 1e-15);
  EXPECT_TRUE(fs::exists(path("ck.jsonl.counterexamples")));
}

TEST_F(SweepTest, UnwritableCheckpointIsIoError) {
  write(path("file"), "x");
  SweepConfig c = small_config("file/ck.jsonl", 10);
  EXPECT_THROW(run_sweep(c), IoError);
}

TEST_F(SweepTest, AudenaertCheckFindsNoViolation) {
  const AudenaertReport r = run_audenaert_check(2000, 3, path("ce"));
  EXPECT_EQ(r.samples, 2000u);
  EXPECT_TRUE(r.counterexamples.empty());
  EXPECT_GE(r.min_eig, -1e-9);
  EXPECT_FALSE(fs::exists(path("ce")));
}

TEST(EmitTable, EmptyTableIsHeaderOnly) {
  const SweepTable empty;
  EXPECT_EQ(emit_table(empty, TableFormat::markdown), "| M \\ N |\n|---|\n");
  EXPECT_EQ(emit_table(empty, TableFormat::csv),
            "dimA,dimB,samples_done,max_negative_count,theorem1_bound,conjecture_bound,most_negative,histogram\n");
  const Json j = Json::parse(emit_table(empty, TableFormat::json));
  EXPECT_TRUE(j.at("cells").empty());
}

TEST(EmitTable, UpperTriangleGrid) {
  SweepTable t;
  for (int m = 2; m <= 4; ++m)
    for (int n = m; n <= 4; ++n) {
      SweepRecord r;
      r.dim_a = m;
      r.dim_b = n;
      r.negative_count = *published_max_count(m, n);
      t.add(r);
    }
  const std::string md = emit_table(t, TableFormat::markdown);
  std::istringstream in(md);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "| M \\ N | 2 | 3 | 4 |");
  EXPECT_EQ(lines[1], "|---|---|---|---|");
  EXPECT_EQ(lines[2], "| 2 | 1 | 2 | 3 |");
  EXPECT_EQ(lines[3], "| 3 |  | 3 | 4 |");
  EXPECT_EQ(lines[4], "| 4 |  |  | 6 |");
  for (const std::string& l : lines) EXPECT_EQ(std::count(l.begin(), l.end(), '|'), 5) << l;

  const std::string overlay = emit_table(t, TableFormat::markdown, true);
  EXPECT_NE(overlay.find("3 (ref 3, ok)"), std::string::npos);
  const Json j = Json::parse(emit_table(t, TableFormat::json, true));
  EXPECT_EQ(j.at("cells").size(), 6u);
  EXPECT_EQ(j.at("cells")[0].at("status"), "ok");
}

TEST(EmitTable, OverlayStatuses) {
  CellAggregate c;
  c.dim_a = 3;
  c.dim_b = 3;
  c.histogram[2] = 10;
  EXPECT_EQ(overlay_status(c), "under-sampled");
  c.histogram[3] = 1;
  EXPECT_EQ(overlay_status(c), "ok");
  c.histogram[4] = 1;
  EXPECT_EQ(overlay_status(c), "EXCEEDS");
  c.dim_a = 11;
  c.dim_b = 11;
  EXPECT_EQ(overlay_status(c), "");
  EXPECT_THROW(parse_table_format("html"), ArgumentError);
}

TEST(PublishedTable, Lookup) {
  EXPECT_EQ(published_max_count(2, 2), 1);
  EXPECT_EQ(published_max_count(5, 5), 10);
  EXPECT_EQ(published_max_count(6, 10), 16);
  EXPECT_EQ(published_max_count(10, 2), 5);
  EXPECT_EQ(published_max_count(2, 7), 4);
  EXPECT_FALSE(published_max_count(1, 4).has_value());
  EXPECT_FALSE(published_max_count(3, 11).has_value());
  for (int n = 2; n <= 10; ++n) EXPECT_EQ(published_max_count(n, n), conjecture_bound(n));
}

TEST(Witness, SaturatesConjecture) {
  const std::vector<WitnessRow> rows = witness_validate(6);
  ASSERT_EQ(rows.size(), 5u);
  const int expected[] = {1, 3, 6, 10, 15};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].n, static_cast<int>(i) + 2);
    EXPECT_EQ(rows[i].negative_count, expected[i]);
    EXPECT_LE(rows[i].max_eigenvalue_error, 1e-10);
  }
  EXPECT_THROW(witness_validate(1), ArgumentError);
}
