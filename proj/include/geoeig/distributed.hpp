#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geoeig/diagonal.hpp"
#include "geoeig/geo_matrix.hpp"
#include "geoeig/network_sim.hpp"
#include "geoeig/poly_filter.hpp"
#include "geoeig/preconditioners.hpp"
#include "geoeig/trajectory.hpp"

namespace geoeig {

// Vertex-level realizations of the preconditioned gradient iterations on a
// NetworkSim. Each vertex holds only its own row and column of the matrix
// (entries within its width-ball), its own preconditioner entry, and its own
// iterate component; everything else arrives through the mailbox.

namespace detail {

enum tag : int {
  tag_x = 1,
  tag_x_tilde = 2,
  tag_partial_max = 3,
  tag_lattice = 4,
};

// sum_j coeff(j) value(j) over `entries` (ascending j), where value(j) is the
// vertex's own `self` for j == id and otherwise the payload sent by j.
inline cplx local_sum(vertex id, std::span<const Entry> entries, cplx self, std::span<const Message> inbox,
                      int tag) {
  cplx s{};
  std::size_t p = 0;
  for (const auto& e : entries) {
    cplx value;
    if (e.index == id) {
      value = self;
    } else {
      while (p < inbox.size() && (inbox[p].sender < e.index || inbox[p].tag != tag)) ++p;
      if (p == inbox.size() || inbox[p].sender != e.index)
        throw invalid_input("vertex " + std::to_string(id) + " is missing a value from vertex " +
                            std::to_string(e.index));
      value = inbox[p].payload;
    }
    s += e.value * value;
  }
  return s;
}

inline void require_range(const NetworkSim& sim, std::size_t width, const char* what) {
  if (width > sim.range())
    throw range_violation(std::string(what) + ": geodesic-width " + std::to_string(width) +
                          " exceeds communication range " + std::to_string(sim.range()));
}

inline void require_length(const NetworkSim& sim, std::size_t len) {
  if (len != sim.size()) throw dimension_mismatch("vector length differs from network order");
}

struct PgdaVertex {
  std::vector<Entry> row;      // A(i,j) = H(i,j) - lambda delta(i,j)
  std::vector<Entry> adjoint;  // (j, Q(i,i)^-2 conj(A(j,i)))
  cplx x{};
  cplx x_tilde{};
};

}  // namespace detail

// Preconditioned gradient descent x_{n+1} = (I - Q^-2 A* A) x_n with
// A = H - lambda I. Two exchange rounds per iteration: x, then A x.
inline Trajectory run_pgda(NetworkSim& sim, const GeoMatrix& h, cplx lambda, const DiagonalMatrix& q,
                           std::span<const cplx> x0, std::size_t iterations, const iterate_observer& observe = {}) {
  const std::size_t n = sim.size();
  detail::require_range(sim, h.width(), "run_pgda");
  detail::require_length(sim, x0.size());
  q.require_nonsingular(n);
  const std::size_t w = h.width();

  std::vector<detail::PgdaVertex> state(n);
  // Pre-iteration: each vertex shifts its own row and column.
  sim.step([&](VertexContext& ctx) {
    const vertex i = ctx.id();
    auto& s = state[i];
    bool diag_seen = false;
    for (const auto& e : h.row(i)) {
      cplx v = e.value;
      if (e.index == i) {
        v -= lambda;
        diag_seen = true;
      }
      if (v != cplx{}) s.row.push_back({e.index, v});
    }
    if (!diag_seen && lambda != cplx{}) {
      s.row.push_back({i, -lambda});
      std::sort(s.row.begin(), s.row.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    }
    const double q2 = inverse_square(q[i]);
    diag_seen = false;
    for (const auto& e : h.col(i)) {
      cplx v = e.value;
      if (e.index == i) {
        v -= lambda;
        diag_seen = true;
      }
      if (v != cplx{}) s.adjoint.push_back({e.index, q2 * std::conj(v)});
    }
    if (!diag_seen && lambda != cplx{}) {
      s.adjoint.push_back({i, q2 * std::conj(-lambda)});
      std::sort(s.adjoint.begin(), s.adjoint.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    }
    s.x = x0[i];
  });

  Trajectory traj{"pgda", {lambda, 0.0, iterations, 0}, {}, false};
  cvec gathered(n);
  auto gather = [&](std::size_t it) {
    for (vertex i = 0; i < n; ++i) gathered[i] = state[i].x;
    if (observe) observe(it, gathered);
    else traj.iterates.push_back(gathered);
  };
  gather(0);
  for (std::size_t it = 0; it < iterations; ++it) {
    sim.step([&](VertexContext& ctx) { ctx.send_to_ball(w, detail::tag_x, state[ctx.id()].x); });
    sim.exchange();
    sim.step([&](VertexContext& ctx) {
      auto& s = state[ctx.id()];
      s.x_tilde = detail::local_sum(ctx.id(), s.row, s.x, ctx.inbox(), detail::tag_x);
      ctx.send_to_ball(w, detail::tag_x_tilde, s.x_tilde);
    });
    sim.exchange();
    sim.step([&](VertexContext& ctx) {
      auto& s = state[ctx.id()];
      s.x -= detail::local_sum(ctx.id(), s.adjoint, s.x_tilde, ctx.inbox(), detail::tag_x_tilde);
    });
    gather(it + 1);
  }
  return traj;
}

// Symmetric iteration x_{n+1} = (I - Qsym^-1 A) x_n; one exchange round per
// iteration. Positive semidefiniteness of A cannot be verified locally and is
// the caller's responsibility.
inline Trajectory run_spgda(NetworkSim& sim, const GeoMatrix& a, const DiagonalMatrix& q_sym,
                            std::span<const cplx> x0, std::size_t iterations, const iterate_observer& observe = {}) {
  const std::size_t n = sim.size();
  detail::require_range(sim, a.width(), "run_spgda");
  detail::require_length(sim, x0.size());
  q_sym.require_nonsingular(n);
  const std::size_t w = a.width();

  struct VertexState {
    std::vector<Entry> scaled_row;  // Qsym(i,i)^-1 A(i,j)
    cplx x{};
  };
  std::vector<VertexState> state(n);
  sim.step([&](VertexContext& ctx) {
    const vertex i = ctx.id();
    const double qi = inverse(q_sym[i]);
    for (const auto& e : a.row(i)) state[i].scaled_row.push_back({e.index, qi * e.value});
    state[i].x = x0[i];
  });

  Trajectory traj{"spgda", {}, {}, false};
  traj.params.iterations = iterations;
  cvec gathered(n);
  auto gather = [&](std::size_t it) {
    for (vertex i = 0; i < n; ++i) gathered[i] = state[i].x;
    if (observe) observe(it, gathered);
    else traj.iterates.push_back(gathered);
  };
  gather(0);
  for (std::size_t it = 0; it < iterations; ++it) {
    sim.step([&](VertexContext& ctx) { ctx.send_to_ball(w, detail::tag_x, state[ctx.id()].x); });
    sim.exchange();
    sim.step([&](VertexContext& ctx) {
      auto& s = state[ctx.id()];
      s.x -= detail::local_sum(ctx.id(), s.scaled_row, s.x, ctx.inbox(), detail::tag_x);
    });
    gather(it + 1);
  }
  return traj;
}

namespace detail {

// Max-consensus cascade: `rounds` one-hop neighbor-max rounds, leaving each
// vertex with the maximum of `values` over its `rounds`-ball.
inline std::vector<double> neighbor_max_cascade(NetworkSim& sim, std::vector<double> values, std::size_t rounds) {
  if (rounds > 0 && sim.range() < 1) throw range_violation("neighbor-max cascade needs range >= 1");
  for (std::size_t r = 0; r < rounds; ++r) {
    sim.step([&](VertexContext& ctx) { ctx.send_to_neighbors(tag_partial_max, values[ctx.id()]); });
    sim.exchange();
    sim.step([&](VertexContext& ctx) {
      double m = values[ctx.id()];
      for (const auto& msg : ctx.inbox())
        if (msg.tag == tag_partial_max) m = std::max(m, msg.payload.real());
      values[ctx.id()] = m;
    });
  }
  return values;
}

}  // namespace detail

// Vertex-level construction of P_A: each vertex k forms
// max(sum_j |A(j,k)|, sum_j |A(k,j)|) from its own row and column, then
// w(A) one-hop neighbor-max rounds spread the maximum over each w-ball.
inline DiagonalMatrix distributed_P(NetworkSim& sim, const GeoMatrix& a) {
  detail::require_range(sim, a.width(), "distributed_P");
  std::vector<double> s(sim.size());
  sim.step([&](VertexContext& ctx) {
    const vertex k = ctx.id();
    double col = 0.0, row = 0.0;
    for (const auto& e : a.col(k)) col += std::abs(e.value);
    for (const auto& e : a.row(k)) row += std::abs(e.value);
    s[k] = std::max(col, row);
  });
  return DiagonalMatrix(detail::neighbor_max_cascade(sim, std::move(s), a.width()));
}

// y = h(S_1..S_d) x using only one-hop exchanges. Every vertex walks the
// monomial lattice in storage order; each lattice point costs one exchange of
// its predecessor's component followed by a local row product with the shift
// that was applied. Constant filters need no communication.
inline cvec poly_apply_distributed(NetworkSim& sim, const PolyFilter& f, std::span<const cplx> x) {
  const std::size_t n = sim.size();
  detail::require_length(sim, x.size());
  for (const auto& s : f.shifts())
    if (s.width() > 1) throw invalid_shift("polynomial filter shift has geodesic-width above one");
  if (f.lattice_size() > 1 && sim.range() < 1) throw range_violation("polynomial filtering needs range >= 1");

  const std::size_t lattice = f.lattice_size();
  // v[i][l]: vertex i's component of S^l x.
  std::vector<cvec> v(n, cvec(lattice));
  cvec y(n);
  sim.step([&](VertexContext& ctx) {
    const vertex i = ctx.id();
    v[i][0] = x[i];
    y[i] += f.coeffs()[0] * v[i][0];
  });
  for (std::size_t idx = 1; idx < lattice; ++idx) {
    const auto [k, pred] = f.predecessor(idx);
    const GeoMatrix& shift = f.shifts()[k];
    sim.step([&, pred = pred](VertexContext& ctx) { ctx.send_to_neighbors(detail::tag_lattice, v[ctx.id()][pred]); });
    sim.exchange();
    sim.step([&, pred = pred](VertexContext& ctx) {
      const vertex i = ctx.id();
      v[i][idx] = detail::local_sum(i, shift.row(i), v[i][pred], ctx.inbox(), detail::tag_lattice);
      y[i] += f.coeffs()[idx] * v[i][idx];
    });
  }
  return y;
}

struct PolyStep {
  cvec x_next;        // x_n - Q^-2 A* A x_n
  cvec x_tilde_next;  // x_n - Q^-1 A x_n
};

// One iteration for a polynomial filter on a range-1 network: x-hat = A x_n,
// x-check = A* x-hat, then both local updates.
inline PolyStep run_poly_iteration(NetworkSim& sim, const PolyFilter& f, const PolyFilter& f_adjoint,
                                   const DiagonalMatrix& q, std::span<const cplx> x) {
  const std::size_t n = sim.size();
  q.require_nonsingular(n);
  const cvec x_hat = poly_apply_distributed(sim, f, x);
  const cvec x_check = poly_apply_distributed(sim, f_adjoint, x_hat);
  PolyStep out{cvec(n), cvec(n)};
  sim.step([&](VertexContext& ctx) {
    const vertex i = ctx.id();
    out.x_next[i] = x[i] - inverse_square(q[i]) * x_check[i];
    out.x_tilde_next[i] = x[i] - inverse(q[i]) * x_hat[i];
  });
  return out;
}

inline PolyStep run_poly_iteration(NetworkSim& sim, const PolyFilter& f, const DiagonalMatrix& q,
                                   std::span<const cplx> x) {
  return run_poly_iteration(sim, f, adjoint_filter(f), q, x);
}

// Iterates the x branch (PGDA1h) of the one-hop realization M times.
inline Trajectory run_pgda1h(NetworkSim& sim, const PolyFilter& f, const DiagonalMatrix& q, std::span<const cplx> x0,
                             std::size_t iterations, const iterate_observer& observe = {}) {
  const PolyFilter adj = adjoint_filter(f);
  Trajectory traj{"pgda1h", {}, {}, false};
  traj.params.iterations = iterations;
  cvec x(x0.begin(), x0.end());
  auto emit = [&](std::size_t it) {
    if (observe) observe(it, x);
    else traj.iterates.push_back(x);
  };
  emit(0);
  for (std::size_t it = 0; it < iterations; ++it) {
    x = run_poly_iteration(sim, f, adj, q, x).x_next;
    emit(it + 1);
  }
  return traj;
}

// Iterates the x-tilde branch (SPGDA1h). That branch needs only A x_n, so the
// adjoint pass is skipped.
inline Trajectory run_spgda1h(NetworkSim& sim, const PolyFilter& f, const DiagonalMatrix& q_sym,
                              std::span<const cplx> x0, std::size_t iterations, const iterate_observer& observe = {}) {
  const std::size_t n = sim.size();
  q_sym.require_nonsingular(n);
  Trajectory traj{"spgda1h", {}, {}, false};
  traj.params.iterations = iterations;
  cvec x(x0.begin(), x0.end());
  auto emit = [&](std::size_t it) {
    if (observe) observe(it, x);
    else traj.iterates.push_back(x);
  };
  emit(0);
  for (std::size_t it = 0; it < iterations; ++it) {
    const cvec x_hat = poly_apply_distributed(sim, f, x);
    sim.step([&](VertexContext& ctx) {
      const vertex i = ctx.id();
      x[i] = x[i] - inverse(q_sym[i]) * x_hat[i];
    });
    emit(it + 1);
  }
  return traj;
}

struct HatPreconditioners {
  DiagonalMatrix q;      // Q-hat_c
  DiagonalMatrix q_sym;  // Q-hat_c^sym
};

// Vertex-level construction of Q-hat_c and Q-hat_c^sym with one-hop exchanges:
// a_1 = A-hat 1 and a_2 = A-hat^T 1 by lattice filtering, then
// L_1+..+L_d neighbor-max rounds on max(a_1, a_2, c).
inline HatPreconditioners construct_hatQ_distributed(NetworkSim& sim, const PolyFilter& f, double c) {
  require_positive(c, "c");
  const std::size_t n = sim.size();
  const cvec ones(n, 1.0);
  const cvec a1 = poly_apply_distributed(sim, abs_filter(f), ones);
  const cvec a2 = poly_apply_distributed(sim, abs_transpose_filter(f), ones);
  std::vector<double> q0(n), q_sym(n);
  sim.step([&](VertexContext& ctx) {
    const vertex i = ctx.id();
    q0[i] = std::max({a1[i].real(), a2[i].real(), c});
    q_sym[i] = std::max(a1[i].real(), c);
  });
  return {DiagonalMatrix(detail::neighbor_max_cascade(sim, std::move(q0), f.total_degree())),
          DiagonalMatrix(std::move(q_sym))};
}

}  // namespace geoeig
