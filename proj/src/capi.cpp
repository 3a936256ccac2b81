#include "ojamed.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "approx.hpp"
#include "errors.hpp"
#include "inference.hpp"
#include "scores.hpp"

namespace {

thread_local std::string g_last_error;

ojamed_status fail(ojamed_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// translate the library exceptions into status codes
ojamed_status translate() {
  try {
    throw;
  } catch (const ojamed::EnumerationCapError& e) {
    return fail(OJAMED_ERR_CAP, e.what());
  } catch (const ojamed::GridTooLargeError& e) {
    return fail(OJAMED_ERR_CAP, e.what());
  } catch (const ojamed::SingularScatterError& e) {
    return fail(OJAMED_ERR_NUMERIC, e.what());
  } catch (const ojamed::DegenerateDataError& e) {
    return fail(OJAMED_ERR_NUMERIC, e.what());
  } catch (const ojamed::EmptyInputError& e) {
    return fail(OJAMED_ERR_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(OJAMED_ERR_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(OJAMED_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(OJAMED_ERR_NOMEM, "out of memory");
  } catch (const std::exception& e) {
    return fail(OJAMED_ERR_NUMERIC, e.what());
  }
}

std::uint64_t cap_or_default(std::uint64_t max_enum) {
  return max_enum == 0 ? ojamed::kDefaultEnumCap : max_enum;
}

// diagnostics presented as one flat list: iterations and hyperplanes first,
// then the per-algorithm counters
std::pair<const char*, double> diag_at(const ojamed::MedianResult& r, size_t i) {
  if (i == 0) return {"iterations", static_cast<double>(r.iterations)};
  if (i == 1) return {"hyperplanes", static_cast<double>(r.hyperplanes_used)};
  size_t base = 2;
  if (r.region_volume_ratio) {
    if (i == base) return {"region_volume_ratio", *r.region_volume_ratio};
    ++base;
  }
  if (r.objective_sampled) {
    if (i == base) return {"objective_sampled", 1.0};
    ++base;
  }
  const auto& d = r.diagnostics[i - base];
  return {d.first.c_str(), d.second};
}

ojamed::ScoreFamily to_family(ojamed_score_family f) {
  switch (f) {
    case OJAMED_FAMILY_OJA: return ojamed::ScoreFamily::kOja;
    case OJAMED_FAMILY_MARGINAL: return ojamed::ScoreFamily::kMarginal;
    case OJAMED_FAMILY_SPATIAL: return ojamed::ScoreFamily::kSpatial;
  }
  throw std::invalid_argument("unknown score family");
}

ojamed::ScoreKind to_kind(ojamed_score_kind k) {
  switch (k) {
    case OJAMED_SCORE_SIGN: return ojamed::ScoreKind::kSign;
    case OJAMED_SCORE_RANK: return ojamed::ScoreKind::kRank;
    case OJAMED_SCORE_SIGNED_RANK: return ojamed::ScoreKind::kSignedRank;
  }
  throw std::invalid_argument("unknown score kind");
}

ojamed::CenterSpec to_center(const ojamed_center_spec* c, std::size_t k) {
  ojamed::CenterSpec spec;
  if (!c) return spec;
  switch (c->kind) {
    case OJAMED_CENTER_DEFAULT: spec.kind = ojamed::CenterSpec::Kind::kDefault; break;
    case OJAMED_CENTER_OJA_MEDIAN: spec.kind = ojamed::CenterSpec::Kind::kOjaMedian; break;
    case OJAMED_CENTER_COMP_MEDIAN: spec.kind = ojamed::CenterSpec::Kind::kCompMedian; break;
    case OJAMED_CENTER_SPATIAL_MEDIAN: spec.kind = ojamed::CenterSpec::Kind::kSpatialMedian; break;
    case OJAMED_CENTER_MEAN: spec.kind = ojamed::CenterSpec::Kind::kMean; break;
    case OJAMED_CENTER_EXPLICIT:
      spec.kind = ojamed::CenterSpec::Kind::kExplicit;
      if (!c->point) throw std::invalid_argument("explicit center needs a point");
      spec.point.assign(c->point, c->point + k);
      break;
    default: throw std::invalid_argument("unknown center kind");
  }
  if (c->median_seed != 0) spec.median_seed = c->median_seed;
  return spec;
}

}  // namespace

struct ojamed_dataset {
  ojamed::Matrix values;
};

struct ojamed_median_result {
  ojamed::MedianResult r;
  std::string notes;
};

struct ojamed_scores {
  ojamed::ScoreMatrix s;
};

struct ojamed_test_result {
  ojamed::TestResult t;
};

extern "C" {

const char* ojamed_version(void) { return "1.0.0"; }

const char* ojamed_last_error(void) { return g_last_error.c_str(); }

ojamed_status ojamed_dataset_create(const double* values, size_t n, size_t k,
                                    ojamed_dataset** out) {
  if (!values || !out) return fail(OJAMED_ERR_ARGUMENT, "null argument");
  try {
    auto ds = std::make_unique<ojamed_dataset>();
    ds->values = ojamed::Matrix(n, k);
    std::memcpy(ds->values.data(), values, n * k * sizeof(double));
    ojamed::validate_data(ds->values);
    *out = ds.release();
    return OJAMED_OK;
  } catch (...) {
    return translate();
  }
}

void ojamed_dataset_free(ojamed_dataset* ds) { delete ds; }

size_t ojamed_dataset_rows(const ojamed_dataset* ds) { return ds ? ds->values.rows() : 0; }
size_t ojamed_dataset_cols(const ojamed_dataset* ds) { return ds ? ds->values.cols() : 0; }

void ojamed_median_opts_init(ojamed_median_opts* opts) {
  if (!opts) return;
  std::memset(opts, 0, sizeof(*opts));
  opts->algorithm = OJAMED_ALG_EVOLUTIONARY;
  opts->sp = 1;
  opts->volume_ratio = 1e-8;
  opts->grid_spacing_divisor = 10;
  opts->grid_alpha = 0.05;
  opts->grid_hyperplanes_per_round = 50;
  opts->evo_sigma_init = 1.0;
  opts->evo_mutations = 10;
  opts->evo_sigma_ada = 10;
  opts->evo_ada_factor = 1.5;
  opts->evo_sigma_log10_dec = 4.0;
  opts->evo_max_steps = 10000;
}

ojamed_status ojamed_median(const ojamed_dataset* ds, const ojamed_median_opts* opts,
                            ojamed_median_result** out) {
  if (!ds || !out) return fail(OJAMED_ERR_ARGUMENT, "null argument");
  ojamed_median_opts defaults;
  if (!opts) {
    ojamed_median_opts_init(&defaults);
    opts = &defaults;
  }
  try {
    ojamed::MedianOptions mo;
    switch (opts->algorithm) {
      case OJAMED_ALG_EXACT: mo.algorithm = ojamed::MedianAlg::kExact; break;
      case OJAMED_ALG_BOUNDED_EXACT: mo.algorithm = ojamed::MedianAlg::kBoundedExact; break;
      case OJAMED_ALG_GRID: mo.algorithm = ojamed::MedianAlg::kGrid; break;
      case OJAMED_ALG_EVOLUTIONARY: mo.algorithm = ojamed::MedianAlg::kEvolutionary; break;
      case OJAMED_ALG_ORACLE: mo.algorithm = ojamed::MedianAlg::kOracle; break;
      default: throw std::invalid_argument("unknown algorithm");
    }
    mo.seed = opts->seed;
    if (opts->sp < 1) throw std::invalid_argument("sp must be at least 1");
    mo.sp = opts->sp;
    mo.raw = opts->raw != 0;
    mo.enum_cap = cap_or_default(opts->max_enum);
    mo.max_rounds = opts->max_rounds;
    mo.line_search =
        opts->line_sweep ? ojamed::LineSearch::kPrefixSweep : ojamed::LineSearch::kEvaluateEach;
    if (opts->volume_ratio > 0.0) mo.volume_ratio = opts->volume_ratio;

    if (opts->grid_spacing_divisor > 0) mo.grid.spacing_divisor = opts->grid_spacing_divisor;
    mo.grid.spacing_threshold = opts->grid_spacing_threshold;
    if (opts->grid_alpha > 0.0) mo.grid.alpha = opts->grid_alpha;
    if (opts->grid_hyperplanes_per_round > 0)
      mo.grid.hyperplanes_per_round = opts->grid_hyperplanes_per_round;

    if (opts->evo_sigma_init > 0.0) mo.evo.sigma_init = opts->evo_sigma_init;
    if (opts->evo_mutations > 0) mo.evo.mutations_per_step = opts->evo_mutations;
    if (opts->evo_sigma_ada > 0) mo.evo.sigma_ada = opts->evo_sigma_ada;
    if (opts->evo_ada_factor > 1.0) mo.evo.ada_factor = opts->evo_ada_factor;
    mo.evo.sigma_log10_dec = opts->evo_sigma_log10_dec;
    mo.evo.n_subsets_used = opts->evo_subsets;
    mo.evo.use_all_subsets = opts->evo_use_all_subsets != 0;
    if (opts->evo_max_steps > 0) mo.evo.max_steps = opts->evo_max_steps;

    auto res = std::make_unique<ojamed_median_result>();
    res->r = ojamed::compute_median(ds->values, mo);
    for (std::size_t i = 0; i < res->r.notes.size(); ++i) {
      if (i) res->notes += ';';
      res->notes += res->r.notes[i];
    }
    *out = res.release();
    return OJAMED_OK;
  } catch (...) {
    return translate();
  }
}

size_t ojamed_median_result_dim(const ojamed_median_result* r) { return r->r.point.size(); }

void ojamed_median_result_point(const ojamed_median_result* r, double* out) {
  std::memcpy(out, r->r.point.data(), r->r.point.size() * sizeof(double));
}

double ojamed_median_result_objective(const ojamed_median_result* r) { return r->r.objective; }

const char* ojamed_median_result_algorithm(const ojamed_median_result* r) {
  return r->r.algorithm.c_str();
}

uint64_t ojamed_median_result_seed(const ojamed_median_result* r) { return r->r.seed; }

size_t ojamed_median_result_diag_count(const ojamed_median_result* r) {
  return r->r.diagnostics.size() + 2 + (r->r.region_volume_ratio ? 1 : 0) +
         (r->r.objective_sampled ? 1 : 0);
}

const char* ojamed_median_result_diag_name(const ojamed_median_result* r, size_t i) {
  return diag_at(r->r, i).first;
}

double ojamed_median_result_diag_value(const ojamed_median_result* r, size_t i) {
  return diag_at(r->r, i).second;
}

const char* ojamed_median_result_notes(const ojamed_median_result* r) {
  return r->notes.c_str();
}

void ojamed_median_result_free(ojamed_median_result* r) { delete r; }

ojamed_status ojamed_objective(const ojamed_dataset* ds, const double* point, uint64_t max_enum,
                               double* out) {
  if (!ds || !point || !out) return fail(OJAMED_ERR_ARGUMENT, "null argument");
  try {
    const std::span<const double> x{point, ds->values.cols()};
    *out = ojamed::oja_objective(ds->values, x, cap_or_default(max_enum));
    return OJAMED_OK;
  } catch (...) {
    return translate();
  }
}

ojamed_status ojamed_scores_compute(const ojamed_dataset* ds, ojamed_score_family family,
                                    ojamed_score_kind kind, const ojamed_center_spec* center,
                                    uint64_t max_enum, ojamed_scores** out) {
  if (!ds || !out) return fail(OJAMED_ERR_ARGUMENT, "null argument");
  try {
    auto s = std::make_unique<ojamed_scores>();
    s->s = ojamed::score_matrix(ds->values, to_family(family), to_kind(kind),
                                to_center(center, ds->values.cols()), cap_or_default(max_enum));
    *out = s.release();
    return OJAMED_OK;
  } catch (...) {
    return translate();
  }
}

size_t ojamed_scores_rows(const ojamed_scores* s) { return s->s.scores.rows(); }
size_t ojamed_scores_cols(const ojamed_scores* s) { return s->s.scores.cols(); }

void ojamed_scores_values(const ojamed_scores* s, double* out) {
  std::memcpy(out, s->s.scores.data(), s->s.scores.rows() * s->s.scores.cols() * sizeof(double));
}

int ojamed_scores_center(const ojamed_scores* s, double* out) {
  if (!s->s.center) return 0;
  if (out) std::memcpy(out, s->s.center->data(), s->s.center->size() * sizeof(double));
  return 1;
}

void ojamed_scores_free(ojamed_scores* s) { delete s; }

ojamed_status ojamed_score_cov(const ojamed_dataset* ds, ojamed_score_family family,
                               ojamed_score_kind kind, const ojamed_center_spec* center,
                               uint64_t max_enum, double* out) {
  if (!ds || !out) return fail(OJAMED_ERR_ARGUMENT, "null argument");
  try {
    if (kind == OJAMED_SCORE_SIGNED_RANK)
      throw std::invalid_argument("score covariance supports sign and rank scores");
    const ojamed::ScoreMatrix s =
        ojamed::score_matrix(ds->values, to_family(family), to_kind(kind),
                             to_center(center, ds->values.cols()), cap_or_default(max_enum));
    const ojamed::Matrix cov = ojamed::score_cov(s);
    std::memcpy(out, cov.data(), cov.rows() * cov.cols() * sizeof(double));
    return OJAMED_OK;
  } catch (...) {
    return translate();
  }
}

ojamed_status ojamed_one_sample_test(const ojamed_dataset* ds, const double* mu0,
                                     ojamed_score_kind kind, ojamed_test_method method,
                                     int replications, uint64_t seed, uint64_t max_enum,
                                     ojamed_test_result** out) {
  if (!ds || !mu0 || !out) return fail(OJAMED_ERR_ARGUMENT, "null argument");
  try {
    auto t = std::make_unique<ojamed_test_result>();
    t->t = ojamed::one_sample_test(
        ds->values, std::span<const double>{mu0, ds->values.cols()}, to_kind(kind),
        method == OJAMED_TEST_PERMUTATION ? ojamed::TestMethod::kPermutation
                                          : ojamed::TestMethod::kAsymptotic,
        replications, seed, cap_or_default(max_enum));
    *out = t.release();
    return OJAMED_OK;
  } catch (...) {
    return translate();
  }
}

ojamed_status ojamed_c_sample_test(const ojamed_dataset* ds, const int32_t* labels,
                                   ojamed_score_kind kind, ojamed_test_method method,
                                   int replications, uint64_t seed, uint64_t max_enum,
                                   ojamed_test_result** out) {
  if (!ds || !labels || !out) return fail(OJAMED_ERR_ARGUMENT, "null argument");
  try {
    std::vector<int> l(labels, labels + ds->values.rows());
    auto t = std::make_unique<ojamed_test_result>();
    t->t = ojamed::c_sample_test(ds->values, l, to_kind(kind),
                                 method == OJAMED_TEST_PERMUTATION
                                     ? ojamed::TestMethod::kPermutation
                                     : ojamed::TestMethod::kAsymptotic,
                                 replications, seed, cap_or_default(max_enum));
    *out = t.release();
    return OJAMED_OK;
  } catch (...) {
    return translate();
  }
}

double ojamed_test_result_statistic(const ojamed_test_result* t) { return t->t.statistic; }
int ojamed_test_result_df(const ojamed_test_result* t) { return t->t.df; }
double ojamed_test_result_p_value(const ojamed_test_result* t) { return t->t.p_value; }
int ojamed_test_result_replications(const ojamed_test_result* t) { return t->t.replications; }
uint64_t ojamed_test_result_seed(const ojamed_test_result* t) { return t->t.seed; }
int ojamed_test_result_groups(const ojamed_test_result* t) { return t->t.groups; }
int ojamed_test_result_singular_cov(const ojamed_test_result* t) {
  return t->t.singular_score_cov ? 1 : 0;
}
void ojamed_test_result_free(ojamed_test_result* t) { delete t; }

}  // extern "C"
