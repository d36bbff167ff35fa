#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "geoeig/dense_eig.hpp"
#include "geoeig/distributed.hpp"
#include "geoeig/filters.hpp"
#include "geoeig/io.hpp"
#include "geoeig/metrics.hpp"
#include "geoeig/network_sim.hpp"
#include "geoeig/poly_filter.hpp"
#include "geoeig/preconditioners.hpp"
#include "geoeig/rng.hpp"
#include "geoeig/solvers.hpp"
#include "geoeig/theory.hpp"

namespace geoeig::experiment {

using json = nlohmann::json;

inline constexpr std::array<const char*, 7> algorithm_names{"pgda",     "spgda",     "pgda1h", "spgda1h",
                                                            "gdaschur", "sgdaschur", "power"};

inline bool is_algorithm(const std::string& name) {
  return std::find(algorithm_names.begin(), algorithm_names.end(), name) != algorithm_names.end();
}

// Orders up to this size get per-trial oracle limits under reference "auto".
inline constexpr std::size_t auto_oracle_max_order = 128;

struct GraphSource {
  std::optional<std::string> file;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;  // defaults to the root seed's graph substream
};

struct FilterSpec {
  std::string type = "spline";  // spline | hyperlink | laplacian | polyfilter | matrix
  int m = 2;
  std::string path;
};

struct ExperimentConfig {
  GraphSource graph;
  FilterSpec filter;
  std::optional<cplx> lambda;
  std::optional<extremal> selector;
  std::vector<std::string> algorithms;
  double c = 0.01;
  std::size_t iterations = 4000;
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  std::string output = "curves.csv";
  std::optional<std::size_t> range;
  unsigned threads = 1;
  std::string engine = "centralized";  // centralized | distributed
  std::string reference = "auto";      // auto | analytic | oracle | extended
};

namespace detail {

inline std::string resolve(const std::string& path, const std::string& base_dir) {
  if (base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).string();
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw invalid_parameter(std::string("config field '") + key + "' is missing or has the wrong type");
  }
}

}  // namespace detail

// Reads a config object. Relative file paths resolve against base_dir.
inline ExperimentConfig parse_config(const json& j, const std::string& base_dir = {}) {
  if (!j.is_object()) throw invalid_parameter("config must be a JSON object");
  static const std::vector<std::string> known{"graph",  "filter", "lambda", "extremal", "algorithms",
                                              "c",      "M",      "trials", "seed",     "output",
                                              "range",  "threads", "engine", "reference"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw invalid_parameter("unknown config field '" + key + "'");

  ExperimentConfig cfg;
  if (!j.contains("graph")) throw invalid_parameter("config needs a graph");
  const json& gj = j["graph"];
  if (gj.contains("file")) {
    cfg.graph.file = detail::resolve(detail::field<std::string>(gj, "file"), base_dir);
  } else {
    if (gj.contains("generator") && detail::field<std::string>(gj, "generator") != "rgg")
      throw invalid_parameter("unknown graph generator");
    cfg.graph.n = detail::field<std::size_t>(gj, "n");
    if (cfg.graph.n == 0) throw invalid_parameter("graph order must be >= 1");
    if (gj.contains("seed")) cfg.graph.seed = detail::field<std::uint64_t>(gj, "seed");
  }

  if (j.contains("filter")) {
    const json& fj = j["filter"];
    cfg.filter.type = detail::field<std::string>(fj, "type");
    if (cfg.filter.type == "spline") {
      if (fj.contains("m")) cfg.filter.m = detail::field<int>(fj, "m");
      if (cfg.filter.m < 1) throw invalid_parameter("spline order must be >= 1");
    } else if (cfg.filter.type == "polyfilter" || cfg.filter.type == "matrix") {
      cfg.filter.path = detail::resolve(detail::field<std::string>(fj, "path"), base_dir);
    } else if (cfg.filter.type != "hyperlink" && cfg.filter.type != "laplacian") {
      throw invalid_parameter("unknown filter type '" + cfg.filter.type + "'");
    }
  }

  if (j.contains("lambda")) {
    try {
      cfg.lambda = io::complex_from_json(j["lambda"]);
    } catch (const std::exception&) {
      throw invalid_parameter("lambda must be a number or [re, im]");
    }
    if (!is_finite(*cfg.lambda)) throw invalid_parameter("lambda must be finite");
  }
  if (j.contains("extremal")) {
    const auto s = detail::field<std::string>(j, "extremal");
    if (s == "min") cfg.selector = extremal::min;
    else if (s == "max") cfg.selector = extremal::max;
    else throw invalid_parameter("extremal must be 'min' or 'max'");
  }

  cfg.algorithms = j.contains("algorithms") ? detail::field<std::vector<std::string>>(j, "algorithms")
                                            : std::vector<std::string>(algorithm_names.begin(), algorithm_names.end());
  if (cfg.algorithms.empty()) throw invalid_parameter("algorithm list is empty");
  for (const auto& a : cfg.algorithms) {
    if (!is_algorithm(a)) throw invalid_parameter("unknown algorithm '" + a + "'");
    if (std::count(cfg.algorithms.begin(), cfg.algorithms.end(), a) > 1)
      throw invalid_parameter("algorithm '" + a + "' listed twice");
  }

  if (j.contains("c")) cfg.c = detail::field<double>(j, "c");
  if (!(cfg.c > 0.0) || !std::isfinite(cfg.c)) throw invalid_parameter("c must be positive");
  if (j.contains("M")) cfg.iterations = detail::field<std::size_t>(j, "M");
  if (j.contains("trials")) cfg.trials = detail::field<std::size_t>(j, "trials");
  if (cfg.trials < 1) throw invalid_parameter("trials must be >= 1");
  if (j.contains("seed")) cfg.seed = detail::field<std::uint64_t>(j, "seed");
  if (j.contains("output")) cfg.output = detail::resolve(detail::field<std::string>(j, "output"), base_dir);
  if (j.contains("range")) cfg.range = detail::field<std::size_t>(j, "range");
  if (j.contains("threads")) cfg.threads = std::max(1u, detail::field<unsigned>(j, "threads"));
  if (j.contains("engine")) cfg.engine = detail::field<std::string>(j, "engine");
  if (cfg.engine != "centralized" && cfg.engine != "distributed")
    throw invalid_parameter("engine must be 'centralized' or 'distributed'");
  if (j.contains("reference")) cfg.reference = detail::field<std::string>(j, "reference");
  if (cfg.reference != "auto" && cfg.reference != "analytic" && cfg.reference != "oracle" &&
      cfg.reference != "extended")
    throw invalid_parameter("reference must be auto, analytic, oracle or extended");
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  return parse_config(io::read_json(path), std::filesystem::path(path).parent_path().string());
}

// The filter H, the target lambda and the shifted matrix A, plus the
// polynomial form of A over width-one shifts when one exists.
struct Problem {
  graph_ptr g;
  GeoMatrix h;
  cplx lambda;
  shift_sign sign = shift_sign::matrix_minus_lambda;
  GeoMatrix a;
  std::optional<PolyFilter> a_poly;
  std::optional<cvec> analytic_kernel;
  bool hermitian = false;
};

inline graph_ptr load_graph(const ExperimentConfig& cfg) {
  if (cfg.graph.file) return share(io::graph_from_json(io::read_json(*cfg.graph.file)));
  const std::uint64_t seed = cfg.graph.seed ? *cfg.graph.seed : substream_seed(cfg.seed, stream::graph, 0);
  return share(random_geometric_graph(cfg.graph.n, seed));
}

inline Problem build_problem(const ExperimentConfig& cfg) {
  const graph_ptr g = load_graph(cfg);
  std::optional<PolyFilter> h_poly;
  GeoMatrix h = zero_matrix(g);
  cplx lambda_default = 0.0;
  std::optional<extremal> selector_default;
  const auto& type = cfg.filter.type;
  if (type == "spline") {
    h_poly = spline_poly_filter(normalized_laplacian(g), cfg.filter.m);
    h = spline_filter(g, cfg.filter.m);
    lambda_default = 1.0;
    selector_default = extremal::max;
  } else if (type == "laplacian") {
    h = normalized_laplacian(g);
    h_poly = PolyFilter::univariate(h, {0.0, 1.0});
    selector_default = extremal::min;
  } else if (type == "hyperlink") {
    h = hyperlink_matrix(g);
    h_poly = PolyFilter::univariate(h, {0.0, 1.0});
    lambda_default = 1.0;
  } else if (type == "polyfilter") {
    h_poly = io::poly_filter_from_json(io::read_json(cfg.filter.path), g);
    h = poly_to_matrix(*h_poly);
  } else {
    h = io::matrix_from_json(io::read_json(cfg.filter.path), g);
    if (h.width() <= 1) h_poly = PolyFilter::univariate(h, {0.0, 1.0});
  }

  Problem p{g, h, cfg.lambda.value_or(lambda_default), shift_sign::matrix_minus_lambda, zero_matrix(g), {}, {}, false};
  const auto selector = cfg.selector ? cfg.selector : (cfg.lambda ? std::nullopt : selector_default);
  if (selector == extremal::max) p.sign = shift_sign::lambda_minus_matrix;
  if (selector) {
    if (p.lambda.imag() != 0.0) throw invalid_parameter("extremal shift needs a real lambda");
    p.a = extremal_shift(h, *selector, p.lambda.real());
  } else {
    p.a = shift_for_eigenvalue(h, p.lambda, p.sign);
  }
  if (h_poly) {
    p.a_poly = p.sign == shift_sign::matrix_minus_lambda ? affine_filter(*h_poly, 1.0, -p.lambda)
                                                          : affine_filter(*h_poly, -1.0, p.lambda);
  }
  p.hermitian = is_hermitian(p.a, 1e-12 * std::max(1.0, max_abs_entry(p.a)));
  const bool degree_kernel = (type == "spline" && p.lambda == cplx(1.0)) || (type == "laplacian" && p.lambda == cplx());
  if (degree_kernel) p.analytic_kernel = sqrt_degree_vector(*g);
  return p;
}

enum class family { gradient, symmetric, power };

// Per-algorithm preconditioner, family and communication width; `error` is
// set when the algorithm cannot run on this problem.
struct AlgorithmSetup {
  std::string name;
  family fam = family::gradient;
  DiagonalMatrix q;
  std::size_t width = 0;
  std::string error;
};

inline AlgorithmSetup setup_algorithm(const std::string& name, const Problem& p, const ExperimentConfig& cfg) {
  AlgorithmSetup s{name, family::gradient, {}, p.a.width(), {}};
  const std::size_t n = p.g->size();
  try {
    auto need_hermitian = [&] {
      if (!p.hermitian) throw invalid_input("needs a Hermitian shifted matrix");
    };
    auto need_poly = [&] {
      if (!p.a_poly) throw invalid_input("needs a polynomial filter over width-one shifts");
    };
    if (name == "pgda") {
      s.q = make_Qc(p.a, cfg.c);
    } else if (name == "spgda") {
      need_hermitian();
      s.fam = family::symmetric;
      s.q = make_Qc_sym(p.a, cfg.c);
    } else if (name == "pgda1h") {
      need_poly();
      s.q = hat_Q(*p.a_poly, cfg.c);
      s.width = 1;
    } else if (name == "spgda1h") {
      need_poly();
      need_hermitian();
      s.fam = family::symmetric;
      s.q = hat_Q_sym(*p.a_poly, cfg.c);
      s.width = 1;
    } else if (name == "gdaschur" || name == "sgdaschur") {
      const double norm = schur_norm(p.a);
      if (!(norm > 0.0)) throw invalid_input("Schur norm is zero");
      if (name == "sgdaschur") {
        need_hermitian();
        s.fam = family::symmetric;
      }
      s.q = DiagonalMatrix::constant(n, norm);
    } else {
      s.fam = family::power;
      s.width = p.h.width();
    }
    if (s.fam != family::power) s.q.require_nonsingular(n);
    if (cfg.range && s.width > *cfg.range)
      throw range_violation("geodesic-width " + std::to_string(s.width) + " exceeds communication range " +
                            std::to_string(*cfg.range));
  } catch (const error& e) {
    s.error = e.what();
  }
  return s;
}

// Per-trial log10 series, length M + 1.
struct Series {
  std::vector<double> ce;
  std::vector<double> nr;
};

namespace detail {

template <class T>
std::vector<T> narrow_vector(std::span<const cplx> x) {
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = geoeig::detail::narrow<T>(x[i]);
  return out;
}

template <class T>
cvec widen(std::span<const T> x) {
  return cvec(x.begin(), x.end());
}

// Advances x in place, leaving A x_n (of the consumed iterate) in ax.
// Returns false on breakdown.
template <class T>
struct Stepper {
  std::function<bool(std::span<T>)> advance;
  std::function<void(std::span<const T>, std::span<T>)> residual_of;
  const std::vector<T>* ax = nullptr;
};

template <class T>
struct PowerWithResidual {
  PowerWithResidual(const GeoMatrix& h, const GeoMatrix& a) : power(h), a(to_csr<T>(a)), ax(h.size()) {}
  PowerStep<T> power;
  Csr<T> a;
  std::vector<T> ax;
};

}  // namespace detail

// Limit of one trial under the chosen reference policy; `extended` is
// handled by the trial runner.
inline cvec oracle_reference(const AlgorithmSetup& s, const Problem& p, std::span<const cplx> x0) {
  switch (s.fam) {
    case family::gradient: return theorem1_limit(p.a, s.q, x0).u;
    case family::symmetric: return theorem2_limit(p.a, s.q, x0).u;
    default: {
      // Orthogonal projection of x0 onto ker A.
      const double w = std::max(1.0, schur_norm(p.a));
      return theorem1_limit(p.a, DiagonalMatrix::constant(p.g->size(), w), x0).u;
    }
  }
}

inline std::string resolved_reference(const ExperimentConfig& cfg, const Problem& p) {
  if (cfg.reference != "auto") return cfg.reference;
  if (p.analytic_kernel) return "analytic";
  return p.g->size() <= auto_oracle_max_order ? "oracle" : "extended";
}

// Runs one algorithm from x0 in the centralized engine and returns its CE/NR
// series against the reference.
template <class T>
Series run_centralized(const AlgorithmSetup& s, const Problem& p, std::span<const cplx> x0, std::size_t iterations,
                       const std::string& reference) {
  const std::size_t n = p.g->size();
  std::optional<PgdaStep<T>> pg;
  std::optional<SpgdaStep<T>> sp;
  std::optional<detail::PowerWithResidual<T>> pw;
  detail::Stepper<T> st;
  switch (s.fam) {
    case family::gradient:
      pg.emplace(p.a, s.q);
      st = {[&](std::span<T> x) { (*pg)(x); return true; },
            [&](std::span<const T> x, std::span<T> out) { pg->residual_of(x, out); }, &pg->residual()};
      break;
    case family::symmetric:
      sp.emplace(p.a, s.q);
      st = {[&](std::span<T> x) { (*sp)(x); return true; },
            [&](std::span<const T> x, std::span<T> out) { sp->residual_of(x, out); }, &sp->residual()};
      break;
    case family::power:
      pw.emplace(p.h, p.a);
      st = {[&](std::span<T> x) {
              pw->a.apply(x, pw->ax);
              return pw->power(x);
            },
            [&](std::span<const T> x, std::span<T> out) { pw->a.apply(x, out); }, &pw->ax};
      break;
  }

  Series out{std::vector<double>(iterations + 1, NAN), std::vector<double>(iterations + 1, NAN)};
  std::vector<std::vector<T>> stored;
  stored.reserve(iterations + 1);
  std::vector<T> x = detail::narrow_vector<T>(x0);
  std::vector<T> buf(n);
  bool broken = false;
  auto nr_of = [](std::span<const T> xn, std::span<const T> axn) {
    const double nx = norm2<T>(xn);
    return nx > breakdown_norm ? clamped_log10(norm2<T>(axn) / nx) : NAN;
  };
  for (std::size_t it = 0; it <= iterations; ++it) {
    stored.push_back(x);
    if (it == iterations) {
      st.residual_of(x, buf);
      out.nr[it] = nr_of(x, buf);
      break;
    }
    const bool ok = st.advance(x);
    out.nr[it] = nr_of(stored.back(), *st.ax);
    if (!ok) {
      broken = true;
      break;
    }
  }

  cvec u;
  if (reference == "analytic") {
    if (!p.analytic_kernel) throw invalid_parameter("no analytic reference for this filter");
    u = *p.analytic_kernel;
  } else if (reference == "oracle") {
    u = oracle_reference(s, p, x0);
  } else if (!broken) {
    for (std::size_t it = 0; it < 3 * iterations; ++it)
      if (!st.advance(x)) break;
    u = detail::widen<T>(x);
  }
  const bool u_defined = !u.empty() && norm2<cplx>(u) > breakdown_norm;
  if (u_defined)
    for (std::size_t it = 0; it < stored.size(); ++it)
      if (norm2<T>(stored[it]) > breakdown_norm) out.ce[it] = clamped_log10(aligned_distance<T>(stored[it], u));
  return out;
}

// Same series with the iterations executed by the vertex-level runtime on a
// network of range max(width, 1). Power iteration needs a global norm and
// stays centralized.
inline Series run_distributed(const AlgorithmSetup& s, const Problem& p, std::span<const cplx> x0,
                              std::size_t iterations, const std::string& reference, std::size_t range,
                              unsigned threads) {
  if (s.fam == family::power) return run_centralized<cplx>(s, p, x0, iterations, reference);
  NetworkSim sim(p.g, range, threads);
  Trajectory traj;
  const GeoMatrix h_signed = p.sign == shift_sign::matrix_minus_lambda ? p.h : scale(-1.0, p.h);
  const cplx lambda_signed = p.sign == shift_sign::matrix_minus_lambda ? p.lambda : -p.lambda;
  if (s.name == "pgda" || s.name == "gdaschur") traj = run_pgda(sim, h_signed, lambda_signed, s.q, x0, iterations);
  else if (s.name == "spgda" || s.name == "sgdaschur") traj = run_spgda(sim, p.a, s.q, x0, iterations);
  else if (s.name == "pgda1h") traj = run_pgda1h(sim, *p.a_poly, s.q, x0, iterations);
  else traj = run_spgda1h(sim, *p.a_poly, s.q, x0, iterations);

  cvec u;
  if (reference == "analytic") {
    if (!p.analytic_kernel) throw invalid_parameter("no analytic reference for this filter");
    u = *p.analytic_kernel;
  } else if (reference == "oracle") {
    u = oracle_reference(s, p, x0);
  } else {
    // Continue centrally from x_M to 4M iterations.
    const auto tail = s.fam == family::gradient ? pgda_centralized(p.a, s.q, traj.back(), 3 * iterations)
                                                : spgda_centralized(p.a, s.q, traj.back(), 3 * iterations);
    u = tail.back();
  }
  const bool u_defined = norm2<cplx>(u) > breakdown_norm;
  Series out{std::vector<double>(iterations + 1, NAN), std::vector<double>(iterations + 1, NAN)};
  cvec ax(p.g->size());
  for (std::size_t it = 0; it < traj.size(); ++it) {
    matvec(p.a, traj[it], ax);
    const auto m = metric_point<cplx>(it, traj[it], ax, u, u_defined);
    out.ce[it] = m.ce;
    out.nr[it] = m.nr;
  }
  return out;
}

// Communication cost of one algorithm measured on a one-iteration run of the
// vertex-level runtime, plus the preconditioner's construction cost.
struct Metering {
  std::string mode = "distributed";
  std::size_t range = 0;
  std::size_t setup_rounds = 0;
  std::size_t setup_messages = 0;
  std::size_t rounds_per_iteration = 0;
  std::size_t messages_per_iteration = 0;
  std::size_t max_messages_per_vertex_round = 0;
  std::optional<bool> preconditioner_matches;
};

inline Metering meter_algorithm(const AlgorithmSetup& s, const Problem& p, const ExperimentConfig& cfg,
                                std::span<const cplx> x0) {
  Metering m;
  if (s.fam == family::power) {
    m.mode = "centralized";
    return m;
  }
  m.range = cfg.range.value_or(std::max<std::size_t>(s.width, 1));
  NetworkSim sim(p.g, m.range, cfg.threads);
  if (s.name == "pgda") {
    const auto pa = distributed_P(sim, p.a);
    std::vector<double> q(pa.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::max(pa[i], cfg.c);
    m.preconditioner_matches = DiagonalMatrix(std::move(q)) == s.q;
  } else if (s.name == "pgda1h" || s.name == "spgda1h") {
    const auto hat = construct_hatQ_distributed(sim, *p.a_poly, cfg.c);
    m.preconditioner_matches = (s.name == "pgda1h" ? hat.q : hat.q_sym) == s.q;
  }
  m.setup_rounds = sim.rounds();
  m.setup_messages = sim.total_messages();
  sim.reset_meters();
  {
    const GeoMatrix h_signed = p.sign == shift_sign::matrix_minus_lambda ? p.h : scale(-1.0, p.h);
    const cplx lambda_signed = p.sign == shift_sign::matrix_minus_lambda ? p.lambda : -p.lambda;
    if (s.name == "pgda" || s.name == "gdaschur") run_pgda(sim, h_signed, lambda_signed, s.q, x0, 1);
    else if (s.name == "spgda" || s.name == "sgdaschur") run_spgda(sim, p.a, s.q, x0, 1);
    else if (s.name == "pgda1h") run_pgda1h(sim, *p.a_poly, s.q, x0, 1);
    else run_spgda1h(sim, *p.a_poly, s.q, x0, 1);
  }
  m.rounds_per_iteration = sim.rounds();
  m.messages_per_iteration = sim.total_messages();
  m.max_messages_per_vertex_round = sim.max_messages_per_vertex_round();
  return m;
}

struct AlgorithmResult {
  AlgorithmSetup setup;
  std::vector<double> mean_ce;
  std::vector<double> mean_nr;
  double wall_seconds = 0.0;
  std::optional<Metering> metering;
};

struct RunResult {
  std::vector<AlgorithmResult> algorithms;
  std::string reference;
  std::size_t n = 0;
  std::size_t edges = 0;
  std::size_t width = 0;
  double total_seconds = 0.0;

  bool all_ok() const {
    return std::all_of(algorithms.begin(), algorithms.end(), [](const auto& a) { return a.setup.error.empty(); });
  }
};

// Mean of the non-NaN values; NaN when there are none.
inline double mean_skipping_nan(std::span<const double> v) {
  double s = 0.0;
  std::size_t k = 0;
  for (double x : v)
    if (!std::isnan(x)) {
      s += x;
      ++k;
    }
  return k ? s / static_cast<double>(k) : NAN;
}

inline cvec trial_initial_vector(const ExperimentConfig& cfg, std::size_t n, std::size_t trial) {
  auto rng = make_rng(substream_seed(cfg.seed, stream::initial_vector, trial));
  return to_complex(random_unit_interval(n, rng));
}

// Runs every configured algorithm on every trial and averages the per-trial
// log values. Trials are distributed over cfg.threads workers; results are
// aggregated in trial order, so output does not depend on the thread count.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  const Problem p = build_problem(cfg);
  const std::size_t n = p.g->size();
  RunResult res;
  res.n = n;
  res.edges = p.g->edge_count();
  res.width = p.a.width();
  res.reference = resolved_reference(cfg, p);
  if (res.reference == "analytic" && !p.analytic_kernel)
    throw invalid_parameter("no analytic reference for this filter");
  if (res.reference == "oracle" && n > oracle_max_order)
    throw invalid_parameter("oracle reference needs n <= " + std::to_string(oracle_max_order));

  for (const auto& name : cfg.algorithms) res.algorithms.push_back({setup_algorithm(name, p, cfg), {}, {}, 0.0, {}});
  const bool real = p.a.is_real() && p.h.is_real() && cfg.engine == "centralized";
  const std::size_t k_alg = res.algorithms.size();
  const std::size_t len = cfg.iterations + 1;

  // series[t][k]; seconds[t][k]
  std::vector<std::vector<Series>> series(cfg.trials, std::vector<Series>(k_alg));
  std::vector<std::vector<double>> seconds(cfg.trials, std::vector<double>(k_alg, 0.0));
  std::vector<std::exception_ptr> errors(cfg.trials);
  auto run_trial = [&](std::size_t t) {
    try {
      const cvec x0 = trial_initial_vector(cfg, n, t);
      for (std::size_t k = 0; k < k_alg; ++k) {
        const auto& s = res.algorithms[k].setup;
        if (!s.error.empty()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        if (cfg.engine == "distributed")
          series[t][k] = run_distributed(s, p, x0, cfg.iterations, res.reference,
                                         cfg.range.value_or(std::max<std::size_t>(s.width, 1)), 1);
        else if (real)
          series[t][k] = run_centralized<double>(s, p, x0, cfg.iterations, res.reference);
        else
          series[t][k] = run_centralized<cplx>(s, p, x0, cfg.iterations, res.reference);
        seconds[t][k] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(cfg.threads, cfg.trials));
  if (workers <= 1) {
    for (std::size_t t = 0; t < cfg.trials; ++t) run_trial(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < cfg.trials; t = next++) run_trial(t);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const cvec x0_probe = trial_initial_vector(cfg, n, 0);
  std::vector<double> column(cfg.trials);
  for (std::size_t k = 0; k < k_alg; ++k) {
    auto& ar = res.algorithms[k];
    if (!ar.setup.error.empty()) continue;
    ar.mean_ce.resize(len);
    ar.mean_nr.resize(len);
    for (std::size_t it = 0; it < len; ++it) {
      for (std::size_t t = 0; t < cfg.trials; ++t) column[t] = series[t][k].ce[it];
      ar.mean_ce[it] = mean_skipping_nan(column);
      for (std::size_t t = 0; t < cfg.trials; ++t) column[t] = series[t][k].nr[it];
      ar.mean_nr[it] = mean_skipping_nan(column);
    }
    for (std::size_t t = 0; t < cfg.trials; ++t) ar.wall_seconds += seconds[t][k];
    ar.metering = meter_algorithm(ar.setup, p, cfg, x0_probe);
  }
  res.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

// Shortest round-trip decimal form; locale independent.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

// CSV with header algo,n,ce,nr: one row per algorithm and iteration, in
// configuration order.
inline std::string curves_csv(const RunResult& res) {
  std::string out = "algo,n,ce,nr\n";
  for (const auto& a : res.algorithms) {
    if (!a.setup.error.empty()) continue;
    for (std::size_t it = 0; it < a.mean_nr.size(); ++it) {
      out += a.setup.name;
      out += ',';
      out += std::to_string(it);
      out += ',';
      out += format_number(a.mean_ce[it]);
      out += ',';
      out += format_number(a.mean_nr[it]);
      out += '\n';
    }
  }
  return out;
}

// Wall time and communication metering; kept apart from the CSV so that the
// curves stay byte-identical across runs.
inline json summary_json(const RunResult& res, const ExperimentConfig& cfg) {
  json algs = json::array();
  for (const auto& a : res.algorithms) {
    json j{{"algorithm", a.setup.name}, {"status", a.setup.error.empty() ? "ok" : "rejected"}};
    if (!a.setup.error.empty()) {
      j["error"] = a.setup.error;
      algs.push_back(std::move(j));
      continue;
    }
    j["width"] = a.setup.width;
    j["wall_seconds"] = a.wall_seconds;
    if (a.setup.fam != family::power) {
      j["preconditioner_min"] = a.setup.q.min();
      j["preconditioner_max"] = a.setup.q.max();
    }
    j["final_mean_nr"] = std::isnan(a.mean_nr.back()) ? json(nullptr) : json(a.mean_nr.back());
    j["final_mean_ce"] = std::isnan(a.mean_ce.back()) ? json(nullptr) : json(a.mean_ce.back());
    if (a.metering) {
      const auto& m = *a.metering;
      json mj{{"mode", m.mode}};
      if (m.mode == "distributed") {
        mj["range"] = m.range;
        mj["setup_rounds"] = m.setup_rounds;
        mj["setup_messages"] = m.setup_messages;
        mj["rounds_per_iteration"] = m.rounds_per_iteration;
        mj["messages_per_iteration"] = m.messages_per_iteration;
        mj["max_messages_per_vertex_round"] = m.max_messages_per_vertex_round;
        if (m.preconditioner_matches) mj["preconditioner_matches"] = *m.preconditioner_matches;
      }
      j["metering"] = std::move(mj);
    }
    algs.push_back(std::move(j));
  }
  return {{"n", res.n},
          {"edges", res.edges},
          {"width", res.width},
          {"trials", cfg.trials},
          {"M", cfg.iterations},
          {"engine", cfg.engine},
          {"reference", res.reference},
          {"total_seconds", res.total_seconds},
          {"algorithms", std::move(algs)}};
}

}  // namespace geoeig::experiment
