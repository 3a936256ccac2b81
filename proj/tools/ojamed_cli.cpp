// Command-line front end for the shared library: CSV in, one structured
// document (or a benchmark CSV) out. Exit codes: 0 ok, 2 usage/parse error,
// 3 resource guard, 4 numeric failure.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ojamed.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;
constexpr int kExitNumeric = 4;

int exit_code_for(ojamed_status s) {
  switch (s) {
    case OJAMED_OK: return kExitOk;
    case OJAMED_ERR_ARGUMENT: return kExitUsage;
    case OJAMED_ERR_PARSE: return kExitUsage;
    case OJAMED_ERR_CAP: return kExitResource;
    default: return kExitNumeric;
  }
}

[[noreturn]] void die(ojamed_status s) {
  std::fprintf(stderr, "ojamed: %s\n", ojamed_last_error());
  std::exit(exit_code_for(s));
}

[[noreturn]] void die_usage(const std::string& msg) {
  std::fprintf(stderr, "ojamed: %s\n", msg.c_str());
  std::exit(kExitUsage);
}

// ---- number formatting: 17 significant digits, round-trip safe ----

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%" PRIu64, v);
  return buf;
}

// minimal JSON writer preserving insertion order
class Doc {
 public:
  void field(const std::string& key, const std::string& raw) {
    parts_.push_back("\"" + key + "\": " + raw);
  }
  void str(const std::string& key, const std::string& value) {
    field(key, "\"" + value + "\"");
  }
  void num(const std::string& key, double v) { field(key, fmt(v)); }
  void num(const std::string& key, std::uint64_t v) { field(key, fmt(v)); }
  void num(const std::string& key, int v) { field(key, std::to_string(v)); }

  static std::string array(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += fmt(v[i]);
    }
    return s + "]";
  }

  static std::string matrix(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
    std::string s = "[";
    for (std::size_t i = 0; i < rows; ++i) {
      if (i) s += ", ";
      s += "[";
      for (std::size_t j = 0; j < cols; ++j) {
        if (j) s += ", ";
        s += fmt(v[i * cols + j]);
      }
      s += "]";
    }
    return s + "]";
  }

  std::string close() const {
    std::string s = "{\n";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      s += "  " + parts_[i];
      if (i + 1 < parts_.size()) s += ",";
      s += "\n";
    }
    return s + "}\n";
  }

 private:
  std::vector<std::string> parts_;
};

// ---- CSV input ----

struct Csv {
  std::vector<std::string> header;  // empty if the file has none
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(cell);
  for (std::string& s : out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  }
  return out;
}

bool numeric_cell(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end && *end == '\0';
}

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) die_usage("cannot open input file '" + path + "'");
  Csv csv;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells = split_line(line);
    if (first) {
      first = false;
      bool any_non_numeric = false;
      for (const std::string& c : cells) any_non_numeric = any_non_numeric || !numeric_cell(c);
      if (any_non_numeric) {
        csv.header = std::move(cells);
        continue;
      }
    }
    if (!csv.rows.empty() && cells.size() != csv.rows.front().size())
      die_usage("ragged CSV row in '" + path + "'");
    csv.rows.push_back(std::move(cells));
  }
  if (csv.rows.empty()) die_usage("no data rows in '" + path + "'");
  return csv;
}

struct Parsed {
  std::vector<double> values;  // row major
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<int32_t> labels;           // only with a group column
  std::vector<std::string> label_names;  // group id -> original label
};

Parsed parse_numeric(const Csv& csv, const std::string& group_column) {
  Parsed p;
  p.n = csv.rows.size();
  const std::size_t width = csv.rows.front().size();

  std::optional<std::size_t> group_idx;
  if (!group_column.empty()) {
    if (!csv.header.empty()) {
      for (std::size_t j = 0; j < csv.header.size(); ++j)
        if (csv.header[j] == group_column) group_idx = j;
    }
    if (!group_idx) {
      // headerless files address the group column by 1-based index
      char* end = nullptr;
      const long v = std::strtol(group_column.c_str(), &end, 10);
      if (end && *end == '\0' && v >= 1 && static_cast<std::size_t>(v) <= width)
        group_idx = static_cast<std::size_t>(v - 1);
    }
    if (!group_idx) die_usage("group column '" + group_column + "' not found");
  }

  p.k = width - (group_idx ? 1 : 0);
  if (p.k == 0) die_usage("no numeric columns left in the input");
  p.values.reserve(p.n * p.k);

  for (std::size_t i = 0; i < p.n; ++i) {
    const std::vector<std::string>& row = csv.rows[i];
    if (row.size() != width) die_usage("ragged CSV row");
    for (std::size_t j = 0; j < width; ++j) {
      if (group_idx && j == *group_idx) {
        const std::string& label = row[j];
        if (label.empty()) die_usage("missing group label in row " + std::to_string(i + 1));
        std::size_t id = 0;
        for (; id < p.label_names.size(); ++id)
          if (p.label_names[id] == label) break;
        if (id == p.label_names.size()) p.label_names.push_back(label);
        p.labels.push_back(static_cast<int32_t>(id));
        continue;
      }
      if (!numeric_cell(row[j]))
        die_usage("missing or non-numeric value in row " + std::to_string(i + 1));
      p.values.push_back(std::strtod(row[j].c_str(), nullptr));
    }
  }
  return p;
}

// ---- shared option plumbing ----

std::uint64_t env_max_enum() {
  const char* v = std::getenv("OJA_MAX_ENUM");
  if (!v || !*v) return 0;
  return std::strtoull(v, nullptr, 10);
}

struct DatasetHandle {
  ojamed_dataset* ds = nullptr;
  ~DatasetHandle() { ojamed_dataset_free(ds); }
};

void make_dataset(const Parsed& p, DatasetHandle& h) {
  const ojamed_status s = ojamed_dataset_create(p.values.data(), p.n, p.k, &h.ds);
  if (s != OJAMED_OK) die(s);
}

ojamed_algorithm parse_alg(const std::string& name) {
  if (name == "exact") return OJAMED_ALG_EXACT;
  if (name == "bounded") return OJAMED_ALG_BOUNDED_EXACT;
  if (name == "grid") return OJAMED_ALG_GRID;
  if (name == "evolutionary") return OJAMED_ALG_EVOLUTIONARY;
  if (name == "oracle") return OJAMED_ALG_ORACLE;
  die_usage("unknown algorithm '" + name + "'");
}

ojamed_score_kind parse_kind(const std::string& name) {
  if (name == "sign") return OJAMED_SCORE_SIGN;
  if (name == "rank") return OJAMED_SCORE_RANK;
  if (name == "signedrank") return OJAMED_SCORE_SIGNED_RANK;
  die_usage("unknown score kind '" + name + "'");
}

ojamed_score_family parse_family(const std::string& name) {
  if (name == "oja") return OJAMED_FAMILY_OJA;
  if (name == "marginal") return OJAMED_FAMILY_MARGINAL;
  if (name == "spatial") return OJAMED_FAMILY_SPATIAL;
  die_usage("unknown score family '" + name + "'");
}

std::vector<double> parse_vector(const std::string& text, std::size_t k,
                                 const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!numeric_cell(cell)) die_usage(what + " has a non-numeric component '" + cell + "'");
    out.push_back(std::strtod(cell.c_str(), nullptr));
  }
  if (out.size() != k)
    die_usage(what + " has " + std::to_string(out.size()) + " components, data has " +
              std::to_string(k));
  return out;
}

// center string -> spec; `storage` must outlive the returned struct
ojamed_center_spec parse_center(const std::string& text, std::size_t k, std::uint64_t seed,
                                std::vector<double>& storage) {
  ojamed_center_spec spec{};
  spec.kind = OJAMED_CENTER_DEFAULT;
  spec.point = nullptr;
  spec.median_seed = seed;
  if (text.empty()) return spec;
  if (text == "ojaMedian") {
    spec.kind = OJAMED_CENTER_OJA_MEDIAN;
  } else if (text == "compMedian") {
    spec.kind = OJAMED_CENTER_COMP_MEDIAN;
  } else if (text == "spatialMedian") {
    spec.kind = OJAMED_CENTER_SPATIAL_MEDIAN;
  } else if (text == "mean") {
    spec.kind = OJAMED_CENTER_MEAN;
  } else if (text.find(',') != std::string::npos || numeric_cell(text)) {
    storage = parse_vector(text, k, "--center");
    spec.kind = OJAMED_CENTER_EXPLICIT;
    spec.point = storage.data();
  } else {
    die_usage("unknown center '" + text + "'");
  }
  return spec;
}

std::string diagnostics_json(const ojamed_median_result* r) {
  std::string s = "{";
  const std::size_t count = ojamed_median_result_diag_count(r);
  for (std::size_t i = 0; i < count; ++i) {
    if (i) s += ", ";
    s += "\"" + std::string(ojamed_median_result_diag_name(r, i)) +
         "\": " + fmt(ojamed_median_result_diag_value(r, i));
  }
  const char* notes = ojamed_median_result_notes(r);
  if (notes && *notes) {
    if (count) s += ", ";
    s += "\"notes\": \"" + std::string(notes) + "\"";
  }
  return s + "}";
}

void print_median_result(const ojamed_median_result* r) {
  const std::size_t k = ojamed_median_result_dim(r);
  std::vector<double> point(k);
  ojamed_median_result_point(r, point.data());

  Doc doc;
  doc.str("algorithm", ojamed_median_result_algorithm(r));
  doc.field("point", Doc::array(point));
  doc.num("objective", ojamed_median_result_objective(r));
  doc.field("diagnostics", diagnostics_json(r));
  doc.num("seed", ojamed_median_result_seed(r));
  std::fputs(doc.close().c_str(), stdout);
}

// ---- subcommands ----

struct MedianCliOpts {
  std::string input;
  std::string alg = "evolutionary";
  int sp = 1;
  std::uint64_t seed = 0;
  bool raw = false;
  int max_rounds = 0;
  bool line_sweep = false;
  double volume_ratio = 1e-8;
  int grid_divisor = 10;
  double grid_threshold = 0.0;
  double grid_alpha = 0.05;
  int grid_hyperplanes = 50;
  double sigma_init = 1.0;
  int mutations = 10;
  int sigma_ada = 10;
  double ada_factor = 1.5;
  double sigma_log10_dec = 4.0;
  std::uint64_t subsets = 0;
  bool all_subsets = false;
  int max_steps = 10000;
};

void fill_opts(const MedianCliOpts& c, ojamed_median_opts& o) {
  ojamed_median_opts_init(&o);
  o.algorithm = parse_alg(c.alg);
  o.seed = c.seed;
  o.sp = c.sp;
  o.raw = c.raw ? 1 : 0;
  o.max_enum = env_max_enum();
  o.max_rounds = c.max_rounds;
  o.line_sweep = c.line_sweep ? 1 : 0;
  o.volume_ratio = c.volume_ratio;
  o.grid_spacing_divisor = c.grid_divisor;
  o.grid_spacing_threshold = c.grid_threshold;
  o.grid_alpha = c.grid_alpha;
  o.grid_hyperplanes_per_round = c.grid_hyperplanes;
  o.evo_sigma_init = c.sigma_init;
  o.evo_mutations = c.mutations;
  o.evo_sigma_ada = c.sigma_ada;
  o.evo_ada_factor = c.ada_factor;
  o.evo_sigma_log10_dec = c.sigma_log10_dec;
  o.evo_subsets = c.subsets;
  o.evo_use_all_subsets = c.all_subsets ? 1 : 0;
  o.evo_max_steps = c.max_steps;
}

int cmd_median(const MedianCliOpts& c) {
  const Parsed p = parse_numeric(read_csv(c.input), "");
  DatasetHandle ds;
  make_dataset(p, ds);
  ojamed_median_opts opts;
  fill_opts(c, opts);
  ojamed_median_result* r = nullptr;
  const ojamed_status s = ojamed_median(ds.ds, &opts, &r);
  if (s != OJAMED_OK) die(s);
  print_median_result(r);
  ojamed_median_result_free(r);
  return kExitOk;
}

int cmd_scores(const std::string& input, const std::string& kind, const std::string& family,
               const std::string& center, std::uint64_t seed) {
  const Parsed p = parse_numeric(read_csv(input), "");
  DatasetHandle ds;
  make_dataset(p, ds);
  std::vector<double> center_storage;
  const ojamed_center_spec spec = parse_center(center, p.k, seed, center_storage);
  ojamed_scores* sc = nullptr;
  const ojamed_status s = ojamed_scores_compute(ds.ds, parse_family(family), parse_kind(kind),
                                                &spec, env_max_enum(), &sc);
  if (s != OJAMED_OK) die(s);

  const std::size_t rows = ojamed_scores_rows(sc);
  const std::size_t cols = ojamed_scores_cols(sc);
  std::vector<double> values(rows * cols);
  ojamed_scores_values(sc, values.data());
  std::vector<double> resolved(cols);
  const bool has_center = ojamed_scores_center(sc, resolved.data()) != 0;

  Doc doc;
  doc.str("family", family);
  doc.str("kind", kind);
  if (has_center)
    doc.field("center", Doc::array(resolved));
  else
    doc.str("center", "per-definition");
  doc.field("scores", Doc::matrix(values, rows, cols));
  std::fputs(doc.close().c_str(), stdout);
  ojamed_scores_free(sc);
  return kExitOk;
}

int cmd_scm(const std::string& input, const std::string& type, const std::string& family,
            const std::string& center, std::uint64_t seed) {
  const Parsed p = parse_numeric(read_csv(input), "");
  DatasetHandle ds;
  make_dataset(p, ds);
  std::vector<double> center_storage;
  const ojamed_center_spec spec = parse_center(center, p.k, seed, center_storage);
  std::vector<double> cov(p.k * p.k);
  const ojamed_status s = ojamed_score_cov(ds.ds, parse_family(family), parse_kind(type), &spec,
                                           env_max_enum(), cov.data());
  if (s != OJAMED_OK) die(s);

  Doc doc;
  doc.str("family", family);
  doc.str("type", type);
  doc.field("matrix", Doc::matrix(cov, p.k, p.k));
  std::fputs(doc.close().c_str(), stdout);
  return kExitOk;
}

int cmd_test1(const std::string& input, const std::string& mu, const std::string& scores,
              const std::string& method, int replications, std::uint64_t seed) {
  const Parsed p = parse_numeric(read_csv(input), "");
  DatasetHandle ds;
  make_dataset(p, ds);
  const std::vector<double> mu0 = parse_vector(mu, p.k, "--mu");
  if (scores != "sign" && scores != "signedrank")
    die_usage("one-sample test supports --scores sign|signedrank");
  if (method != "approx" && method != "permutation")
    die_usage("--method must be approx or permutation");

  ojamed_test_result* t = nullptr;
  const ojamed_status s = ojamed_one_sample_test(
      ds.ds, mu0.data(), parse_kind(scores),
      method == "permutation" ? OJAMED_TEST_PERMUTATION : OJAMED_TEST_ASYMPTOTIC, replications,
      seed, env_max_enum(), &t);
  if (s != OJAMED_OK) die(s);

  Doc doc;
  doc.str("test", "one-sample");
  doc.str("scores", scores);
  doc.str("method", method == "permutation" ? "permutation" : "asymptotic");
  doc.num("Q", ojamed_test_result_statistic(t));
  doc.num("df", ojamed_test_result_df(t));
  doc.num("p_value", ojamed_test_result_p_value(t));
  doc.num("replications", ojamed_test_result_replications(t));
  doc.num("seed", ojamed_test_result_seed(t));
  doc.field("mu", Doc::array(mu0));
  if (ojamed_test_result_singular_cov(t)) doc.str("notes", "singular_score_cov");
  std::fputs(doc.close().c_str(), stdout);
  ojamed_test_result_free(t);
  return kExitOk;
}

int cmd_testc(const std::string& input, const std::string& group, const std::string& scores,
              const std::string& method, int replications, std::uint64_t seed) {
  const Parsed p = parse_numeric(read_csv(input), group);
  if (p.labels.empty()) die_usage("--group is required");
  DatasetHandle ds;
  make_dataset(p, ds);
  if (scores != "sign" && scores != "rank") die_usage("C-sample test supports --scores sign|rank");
  if (method != "approx" && method != "permutation")
    die_usage("--method must be approx or permutation");

  ojamed_test_result* t = nullptr;
  const ojamed_status s = ojamed_c_sample_test(
      ds.ds, p.labels.data(), parse_kind(scores),
      method == "permutation" ? OJAMED_TEST_PERMUTATION : OJAMED_TEST_ASYMPTOTIC, replications,
      seed, env_max_enum(), &t);
  if (s != OJAMED_OK) die(s);

  Doc doc;
  doc.str("test", "c-sample");
  doc.str("scores", scores);
  doc.str("method", method == "permutation" ? "permutation" : "asymptotic");
  doc.num("Q", ojamed_test_result_statistic(t));
  doc.num("df", ojamed_test_result_df(t));
  doc.num("p_value", ojamed_test_result_p_value(t));
  doc.num("replications", ojamed_test_result_replications(t));
  doc.num("seed", ojamed_test_result_seed(t));
  doc.num("groups", ojamed_test_result_groups(t));
  if (ojamed_test_result_singular_cov(t)) doc.str("notes", "singular_score_cov");
  std::fputs(doc.close().c_str(), stdout);
  ojamed_test_result_free(t);
  return kExitOk;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const long v = std::strtol(cell.c_str(), &end, 10);
    if (!end || *end != '\0' || v < 1) die_usage(what + " has an invalid entry '" + cell + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) die_usage(what + " is empty");
  return out;
}

// standard normal data, deterministic per (seed, n, k, rep)
std::vector<double> bench_data(std::uint64_t seed, int n, int k, int rep) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k),
                    static_cast<std::uint64_t>(rep)};
  std::mt19937_64 eng(seq);
  const auto u01 = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
  std::vector<double> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < out.size(); ++i) {
    double u1 = u01();
    while (u1 <= 0.0) u1 = u01();
    out[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u01());
  }
  return out;
}

int cmd_bench(const std::string& algs, const std::string& ns, const std::string& ks,
              std::uint64_t seed, int reps) {
  const std::vector<int> n_list = parse_int_list(ns, "--n");
  const std::vector<int> k_list = parse_int_list(ks, "--k");
  std::vector<std::string> alg_list;
  {
    std::stringstream ss(algs);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      (void)parse_alg(cell);  // validate early
      alg_list.push_back(cell);
    }
  }
  if (alg_list.empty()) die_usage("--alg is empty");
  if (reps < 1) die_usage("--reps must be at least 1");

  std::printf("alg,n,k,rep,wall_time,objective_gap_to_oracle\n");
  for (const int n : n_list)
    for (const int k : k_list)
      for (int rep = 0; rep < reps; ++rep) {
        const std::vector<double> values = bench_data(seed, n, k, rep);
        DatasetHandle ds;
        {
          const ojamed_status s = ojamed_dataset_create(
              values.data(), static_cast<std::size_t>(n), static_cast<std::size_t>(k), &ds.ds);
          if (s != OJAMED_OK) die(s);
        }

        // oracle objective once per cell, when feasible
        std::optional<double> oracle_obj;
        {
          ojamed_median_opts opts;
          ojamed_median_opts_init(&opts);
          opts.algorithm = OJAMED_ALG_ORACLE;
          opts.max_enum = env_max_enum();
          ojamed_median_result* r = nullptr;
          if (ojamed_median(ds.ds, &opts, &r) == OJAMED_OK) {
            oracle_obj = ojamed_median_result_objective(r);
            ojamed_median_result_free(r);
          }
        }

        for (const std::string& alg : alg_list) {
          ojamed_median_opts opts;
          ojamed_median_opts_init(&opts);
          opts.algorithm = parse_alg(alg);
          opts.seed = seed;
          opts.max_enum = env_max_enum();
          if (opts.algorithm == OJAMED_ALG_EXACT || opts.algorithm == OJAMED_ALG_BOUNDED_EXACT)
            opts.line_sweep = 1;  // the fast line search for timing runs
          ojamed_median_result* r = nullptr;
          const auto t0 = std::chrono::steady_clock::now();
          const ojamed_status s = ojamed_median(ds.ds, &opts, &r);
          const auto t1 = std::chrono::steady_clock::now();
          if (s != OJAMED_OK) die(s);
          const double wall = std::chrono::duration<double>(t1 - t0).count();
          const double obj = ojamed_median_result_objective(r);
          ojamed_median_result_free(r);

          std::string gap;
          if (oracle_obj) gap = fmt(obj - *oracle_obj);
          std::printf("%s,%d,%d,%d,%s,%s\n", alg.c_str(), n, k, rep, fmt(wall).c_str(),
                      gap.c_str());
        }
      }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate medians from simplex volumes: estimates, scores, scatter and "
               "location tests"};
  app.require_subcommand(1);

  // median
  MedianCliOpts mc;
  CLI::App* median = app.add_subcommand("median", "compute a median estimate");
  median->add_option("input", mc.input, "CSV file, one observation per row")->required();
  median->add_option("--alg", mc.alg, "exact|bounded|grid|evolutionary|oracle");
  median->add_option("--sp", mc.sp, "average this many independent runs");
  median->add_option("--seed", mc.seed, "random seed");
  median->add_flag("--raw", mc.raw, "evolutionary: skip the whitening transform");
  median->add_option("--max-rounds", mc.max_rounds, "walk round limit (0: observation count)");
  median->add_flag("--line-sweep", mc.line_sweep, "piecewise-linear sweep line search");
  median->add_option("--volume-ratio", mc.volume_ratio, "bounded region volume target");
  median->add_option("--grid-divisor", mc.grid_divisor, "initial spacing = range / divisor");
  median->add_option("--grid-threshold", mc.grid_threshold, "final spacing (0: 1e-3 x range)");
  median->add_option("--grid-alpha", mc.grid_alpha, "knot test significance level");
  median->add_option("--grid-hyperplanes", mc.grid_hyperplanes, "hyperplanes sampled per round");
  median->add_option("--sigma-init", mc.sigma_init, "initial mutation variance");
  median->add_option("--mutations", mc.mutations, "mutations per step");
  median->add_option("--sigma-ada", mc.sigma_ada, "steps between variance adaptations");
  median->add_option("--ada-factor", mc.ada_factor, "variance adaptation factor");
  median->add_option("--sigma-log10-dec", mc.sigma_log10_dec, "variance decade stop rule");
  median->add_option("--subsets", mc.subsets, "tuple sample size (0: min(1000, total))");
  median->add_flag("--all-subsets", mc.all_subsets, "score candidates on every tuple");
  median->add_option("--max-steps", mc.max_steps, "step limit of the evolutionary run");

  // scores
  std::string sc_input, sc_kind = "sign", sc_family = "oja", sc_center;
  std::uint64_t sc_seed = 0;
  CLI::App* scores = app.add_subcommand("scores", "per-observation score vectors");
  scores->add_option("input", sc_input, "CSV file")->required();
  scores->add_option("--kind", sc_kind, "sign|rank|signedrank");
  scores->add_option("--family", sc_family, "oja|marginal|spatial");
  scores->add_option("--center", sc_center,
                     "ojaMedian|compMedian|spatialMedian|mean|x1,...,xk");
  scores->add_option("--seed", sc_seed, "seed of the center-resolving median run");

  // scm
  std::string cm_input, cm_type = "sign", cm_family = "oja", cm_center;
  std::uint64_t cm_seed = 0;
  CLI::App* scm = app.add_subcommand("scm", "score covariance matrix");
  scm->add_option("input", cm_input, "CSV file")->required();
  scm->add_option("--type", cm_type, "sign|rank");
  scm->add_option("--family", cm_family, "oja|marginal|spatial");
  scm->add_option("--center", cm_center, "ojaMedian|compMedian|spatialMedian|mean|x1,...,xk");
  scm->add_option("--seed", cm_seed, "seed of the center-resolving median run");

  // test1
  std::string t1_input, t1_mu, t1_scores = "sign", t1_method = "approx";
  int t1_b = 1000;
  std::uint64_t t1_seed = 0;
  CLI::App* test1 = app.add_subcommand("test1", "one-sample location test");
  test1->add_option("input", t1_input, "CSV file")->required();
  test1->add_option("--mu", t1_mu, "tested location, comma separated")->required();
  test1->add_option("--scores", t1_scores, "sign|signedrank");
  test1->add_option("--method", t1_method, "approx|permutation");
  test1->add_option("--B", t1_b, "permutation replications");
  test1->add_option("--seed", t1_seed, "permutation seed");

  // testc
  std::string tc_input, tc_group, tc_scores = "sign", tc_method = "approx";
  int tc_b = 1000;
  std::uint64_t tc_seed = 0;
  CLI::App* testc = app.add_subcommand("testc", "C-sample location test");
  testc->add_option("input", tc_input, "CSV file with a group column")->required();
  testc->add_option("--group", tc_group, "group column name (or 1-based index)")->required();
  testc->add_option("--scores", tc_scores, "sign|rank");
  testc->add_option("--method", tc_method, "approx|permutation");
  testc->add_option("--B", tc_b, "permutation replications");
  testc->add_option("--seed", tc_seed, "permutation seed");

  // bench
  std::string be_algs = "exact,bounded", be_n = "20", be_k = "2";
  std::uint64_t be_seed = 0;
  int be_reps = 3;
  CLI::App* bench = app.add_subcommand("bench", "timing table on synthetic normal data (CSV)");
  bench->add_option("--alg", be_algs, "comma-separated algorithm list");
  bench->add_option("--n", be_n, "comma-separated observation counts");
  bench->add_option("--k", be_k, "comma-separated dimensions");
  bench->add_option("--seed", be_seed, "data and algorithm seed");
  bench->add_option("--reps", be_reps, "repetitions per cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (median->parsed()) return cmd_median(mc);
  if (scores->parsed()) return cmd_scores(sc_input, sc_kind, sc_family, sc_center, sc_seed);
  if (scm->parsed()) return cmd_scm(cm_input, cm_type, cm_family, cm_center, cm_seed);
  if (test1->parsed()) return cmd_test1(t1_input, t1_mu, t1_scores, t1_method, t1_b, t1_seed);
  if (testc->parsed()) return cmd_testc(tc_input, tc_group, tc_scores, tc_method, tc_b, tc_seed);
  if (bench->parsed()) return cmd_bench(be_algs, be_n, be_k, be_seed, be_reps);
  return kExitUsage;
}
