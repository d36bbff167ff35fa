#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoeig/dense_eig.hpp"
#include "geoeig/distributed.hpp"
#include "geoeig/filters.hpp"
#include "geoeig/network_sim.hpp"
#include "geoeig/poly_filter.hpp"
#include "geoeig/preconditioners.hpp"
#include "geoeig/random_instances.hpp"
#include "geoeig/solvers.hpp"
#include "geoeig/theory.hpp"

namespace geoeig::checks {

// One property evaluated on one instance. margin = tolerance - measured, so a
// nonnegative margin passes.
struct PropertyResult {
  std::string property;
  std::uint64_t instance_seed = 0;
  double margin = 0.0;
  bool passed = false;
};

struct CheckReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;

  bool passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.passed; });
  }

  void add(std::string name, std::uint64_t instance_seed, double tolerance, double measured) {
    const double margin = tolerance - measured;
    properties.push_back({std::move(name), instance_seed, margin, margin >= 0.0});
  }

  nlohmann::json to_json() const {
    nlohmann::json props = nlohmann::json::array();
    for (const auto& p : properties)
      props.push_back({{"property", p.property},
                       {"instance_seed", p.instance_seed},
                       {"margin", std::isfinite(p.margin) ? nlohmann::json(p.margin) : nlohmann::json(nullptr)},
                       {"passed", p.passed}});
    return {{"suite", suite}, {"seed", seed}, {"passed", passed()}, {"properties", std::move(props)}};
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"theorem1", "theorem2", "alg4", "oracle", "equivalence"};
  return names;
}

// Relative distance of two trajectories: max_n ||x_n - y_n|| / ||y_n||
// (absolute where ||y_n|| = 0). Infinite when lengths differ.
inline double trajectory_distance(const Trajectory& x, const Trajectory& y) {
  if (x.size() != y.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    double diff = 0.0;
    for (std::size_t i = 0; i < x[n].size(); ++i) diff += std::norm(x[n][i] - y[n][i]);
    const double ref = norm2(y[n]);
    const double rel = ref > 0.0 ? std::sqrt(diff) / ref : std::sqrt(diff);
    worst = std::max(worst, std::isnan(rel) ? INFINITY : rel);
  }
  return worst;
}

// Distance of the spectrum to the interval [0, 1].
inline double spectrum_excess(const std::vector<double>& spectrum) {
  double e = 0.0;
  for (double g : spectrum) e = std::max({e, -g, g - 1.0});
  return e;
}

namespace detail {

inline std::size_t pick_order(rng_engine& rng, std::initializer_list<std::size_t> orders) {
  return *(orders.begin() + uniform_index(rng, orders.size()));
}

inline cvec initial_vector(std::size_t n, rng_engine& rng) { return random::unit_interval_vector(n, rng); }

// An eigenvalue of a Hermitian matrix from the dense oracle.
inline double oracle_eigenvalue(const GeoMatrix& h, std::size_t k) {
  const auto eig = dense_hermitian_eig(h);
  return eig.values[std::min(k, eig.size() - 1)];
}

// Shared tail of the two convergence suites.
inline void convergence_properties(CheckReport& rep, std::uint64_t s, const GeoMatrix& a, const Trajectory& traj,
                                   const IterationLimit& lim) {
  rep.add("spectrum_in_unit_interval", s, 1e-12, spectrum_excess(lim.spectrum));
  const auto bound = rate_bound_check(traj, lim);
  rep.add("rate_bound", s, 0.0, -bound.worst_margin);
  const double nu = norm2(lim.u);
  if (nu > breakdown_norm) {
    const double nau = norm2(matvec(a, lim.u));
    rep.add("limit_in_kernel", s, 1e-8 * schur_norm(a) * nu, nau);
  }
}

}  // namespace detail

// PGDA with Q = Q_c on general complex A: spectral containment of
// I - Q^-1 A* A Q^-1, the rate bound and A u = 0. Instances cycle through a
// generic local matrix (u = 0), a planted-kernel matrix and a Hermitian
// matrix shifted by one of its oracle eigenvalues (u != 0).
inline CheckReport theorem1_suite(std::uint64_t seed, std::size_t instances = 20, std::size_t iterations = 200,
                                  double c = 0.01) {
  CheckReport rep{"theorem1", seed, {}};
  for (std::size_t k = 0; k < instances; ++k) {
    const std::uint64_t s = substream_seed(seed, stream::instance, k);
    auto rng = make_rng(s);
    const std::size_t n = detail::pick_order(rng, {8, 16, 32});
    const auto g = random::geometric_graph(n, rng());
    GeoMatrix a = zero_matrix(g);
    switch (k % 3) {
      case 0: a = random::local_matrix(g, 1 + uniform_index(rng, 2), rng); break;
      case 1: a = random::planted_kernel_matrix(g, rng); break;
      default: {
        const GeoMatrix h = random::local_matrix(g, 1 + uniform_index(rng, 2), rng, true);
        a = shift_for_eigenvalue(h, detail::oracle_eigenvalue(h, uniform_index(rng, n)));
      }
    }
    const cvec x0 = detail::initial_vector(n, rng);
    const auto q = make_Qc(a, c);
    const auto traj = pgda_centralized(a, q, x0, iterations);
    detail::convergence_properties(rep, s, a, traj, theorem1_limit(a, q, x0));
  }
  return rep;
}

// SPGDA with Q = Q_c^sym on positive semidefinite A: a magnetic Laplacian,
// the normalized Laplacian and lambda_max I - H for Hermitian H.
inline CheckReport theorem2_suite(std::uint64_t seed, std::size_t instances = 20, std::size_t iterations = 200,
                                  double c = 0.01) {
  CheckReport rep{"theorem2", seed, {}};
  for (std::size_t k = 0; k < instances; ++k) {
    const std::uint64_t s = substream_seed(seed, stream::instance, k);
    auto rng = make_rng(s);
    const std::size_t n = detail::pick_order(rng, {8, 16, 32});
    const auto g = random::geometric_graph(n, rng());
    GeoMatrix a = zero_matrix(g);
    switch (k % 3) {
      case 0: a = random::magnetic_laplacian(g, rng); break;
      case 1: a = normalized_laplacian(g); break;
      default: {
        const GeoMatrix h = random::local_matrix(g, 1 + uniform_index(rng, 2), rng, true);
        a = extremal_shift(h, extremal::max, detail::oracle_eigenvalue(h, n - 1));
      }
    }
    const cvec x0 = detail::initial_vector(n, rng);
    const auto q = make_Qc_sym(a, c);
    const auto traj = spgda_centralized(a, q, x0, iterations);
    detail::convergence_properties(rep, s, a, traj, theorem2_limit(a, q, x0));
  }
  return rep;
}

// Vertex-level Q-hat against the centralized construction (bitwise), against
// the independent ball maximum of A-hat row and column sums, and entrywise
// dominance |A| <= A-hat.
inline CheckReport alg4_suite(std::uint64_t seed, std::size_t instances = 20, double c = 0.01) {
  CheckReport rep{"alg4", seed, {}};
  for (std::size_t k = 0; k < instances; ++k) {
    const std::uint64_t s = substream_seed(seed, stream::instance, k);
    auto rng = make_rng(s);
    const std::size_t n = detail::pick_order(rng, {8, 16, 32});
    const auto g = random::geometric_graph(n, rng());
    const PolyFilter f = random::poly_filter(g, rng);

    NetworkSim sim(g, 1);
    const auto dist = construct_hatQ_distributed(sim, f, c);
    const auto q = hat_Q(f, c);
    const auto q_sym = hat_Q_sym(f, c);
    rep.add("hatQ_bitwise", s, 0.0, dist.q == q ? 0.0 : 1.0);
    rep.add("hatQsym_bitwise", s, 0.0, dist.q_sym == q_sym ? 0.0 : 1.0);

    const GeoMatrix a = poly_to_matrix(f);
    const GeoMatrix a_hat = abs_poly_matrix(f);
    double excess = 0.0;
    for (vertex i = 0; i < n; ++i)
      for (const auto& e : a.row(i))
        excess = std::max(excess, (std::abs(e.value) - a_hat.at(i, e.index).real()) / std::max(1.0, a_hat.at(i, e.index).real()));
    rep.add("hat_dominance", s, 1e-12, excess);

    double q_gap = 0.0;
    for (vertex i = 0; i < n; ++i) {
      double m = 0.0;
      for (vertex j : ball(*g, i, f.total_degree()))
        m = std::max({m, a_hat.row_abs_sum(j), a_hat.col_abs_sum(j), c});
      q_gap = std::max(q_gap, std::abs(m - q[i]) / m);
    }
    rep.add("hatQ_matches_ball_max", s, 1e-12, q_gap);
  }
  return rep;
}

// EigenDecomposition invariants on random Hermitian matrices, n <= 32.
inline CheckReport oracle_suite(std::uint64_t seed, std::size_t instances = 20) {
  CheckReport rep{"oracle", seed, {}};
  for (std::size_t k = 0; k < instances; ++k) {
    const std::uint64_t s = substream_seed(seed, stream::instance, k);
    auto rng = make_rng(s);
    const std::size_t n = 1 + uniform_index(rng, 32);
    dense_matrix b(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      b(i, i) = uniform(rng, -1.0, 1.0);
      for (Eigen::Index j = i + 1; j < b.cols(); ++j) {
        b(i, j) = random::complex_in_box(rng);
        b(j, i) = std::conj(b(i, j));
      }
    }
    const auto eig = dense_hermitian_eig(b);
    const auto res = eigen_residuals(b, eig);
    const double scale = std::max(spectral_norm(eig), 1e-300);
    rep.add("eigen_residual", s, 1e-9 * scale, res.max_residual);
    rep.add("orthonormality", s, 1e-9, res.max_orthogonality);
    rep.add("reconstruction", s, 1e-9, res.reconstruction);
    rep.add("ascending", s, 0.0, std::is_sorted(eig.values.begin(), eig.values.end()) ? 0.0 : 1.0);
  }
  return rep;
}

// run_pgda / run_spgda against the centralized iterations on random complex
// H with width 1 or 2 and random complex lambda.
inline CheckReport equivalence_suite(std::uint64_t seed, std::size_t instances = 20, std::size_t iterations = 200,
                                     double c = 0.01) {
  CheckReport rep{"equivalence", seed, {}};
  for (std::size_t k = 0; k < instances; ++k) {
    const std::uint64_t s = substream_seed(seed, stream::instance, k);
    auto rng = make_rng(s);
    const std::size_t n = detail::pick_order(rng, {8, 16, 64});
    const auto g = random::geometric_graph(n, rng());
    const std::size_t width = 1 + uniform_index(rng, 2);
    const GeoMatrix h = random::local_matrix(g, width, rng);
    const cplx lambda = random::complex_in_box(rng);
    const GeoMatrix a = shift_for_eigenvalue(h, lambda);
    const cvec x0 = detail::initial_vector(n, rng);

    const auto q = make_Qc(a, c);
    NetworkSim sim(g, a.width());
    const auto dist = run_pgda(sim, h, lambda, q, x0, iterations);
    rep.add("pgda_matches_centralized", s, 1e-10, trajectory_distance(dist, pgda_centralized(a, q, x0, iterations)));

    const auto q_sym = make_Qc_sym(a, c);
    NetworkSim sim2(g, a.width());
    const auto dist2 = run_spgda(sim2, a, q_sym, x0, iterations);
    rep.add("spgda_matches_centralized", s, 1e-10,
            trajectory_distance(dist2, spgda_centralized(a, q_sym, x0, iterations)));
  }
  return rep;
}

inline CheckReport run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "theorem1") return theorem1_suite(seed);
  if (name == "theorem2") return theorem2_suite(seed);
  if (name == "alg4") return alg4_suite(seed);
  if (name == "oracle") return oracle_suite(seed);
  if (name == "equivalence") return equivalence_suite(seed);
  throw invalid_parameter("unknown suite '" + name + "'");
}

}  // namespace geoeig::checks
