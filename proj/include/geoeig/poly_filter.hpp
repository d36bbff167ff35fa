#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geoeig/diagonal.hpp"
#include "geoeig/geo_matrix.hpp"
#include "geoeig/preconditioners.hpp"

namespace geoeig {

// Entrywise tolerance for shift commutativity and dominance checks.
inline constexpr double commute_tolerance = 1e-12;

// Multivariate polynomial h(S_1, ..., S_d) in commuting graph shifts
//
//   A = sum_{l_1..l_d} h_{l_1..l_d} S_1^{l_1} ... S_d^{l_d},  0 <= l_k <= L_k.
//
// Coefficients are stored row-major over the degree lattice with the last
// shift varying fastest. Every shift has geodesic-width at most one and all
// pairs commute to within commute_tolerance; both are checked on
// construction. A filter with no shifts is the constant h * I.
class PolyFilter {
 public:
  using multi_index = std::vector<unsigned>;

  PolyFilter(graph_ptr g, std::vector<GeoMatrix> shifts, std::vector<unsigned> degrees, cvec coeffs)
      : PolyFilter(std::move(g), std::move(shifts), std::move(degrees), std::move(coeffs), true) {}

  // Skips the commutativity check. Monomials are then the ordered products
  // S_d^{l_d} ... S_1^{l_1}, the order in which the lattice recursion applies
  // them.
  static PolyFilter unchecked(graph_ptr g, std::vector<GeoMatrix> shifts, std::vector<unsigned> degrees,
                              cvec coeffs) {
    return PolyFilter(std::move(g), std::move(shifts), std::move(degrees), std::move(coeffs), false);
  }

 private:
  PolyFilter(graph_ptr g, std::vector<GeoMatrix> shifts, std::vector<unsigned> degrees, cvec coeffs,
             bool check_commute)
      : g_(std::move(g)), shifts_(std::move(shifts)), degrees_(std::move(degrees)), coeffs_(std::move(coeffs)) {
    if (!g_) throw invalid_input("polynomial filter needs a graph");
    if (shifts_.size() != degrees_.size()) throw dimension_mismatch("one degree bound per shift is required");
    std::size_t expected = 1;
    for (unsigned deg : degrees_) expected *= deg + 1;
    if (coeffs_.size() != expected)
      throw dimension_mismatch("coefficient count " + std::to_string(coeffs_.size()) + " differs from lattice size " +
                               std::to_string(expected));
    for (cplx h : coeffs_)
      if (!is_finite(h)) throw invalid_input("non-finite polynomial coefficient");
    for (std::size_t k = 0; k < shifts_.size(); ++k) {
      if (shifts_[k].graph_handle() != g_ && !(shifts_[k].graph() == *g_))
        throw dimension_mismatch("shift " + std::to_string(k) + " lives on a different graph");
      if (shifts_[k].width() > 1)
        throw invalid_shift("shift " + std::to_string(k) + " has geodesic-width " +
                            std::to_string(shifts_[k].width()));
    }
    for (std::size_t k = 0; check_commute && k < shifts_.size(); ++k)
      for (std::size_t k2 = k + 1; k2 < shifts_.size(); ++k2)
        if (max_abs_diff(shifts_[k] * shifts_[k2], shifts_[k2] * shifts_[k]) > commute_tolerance)
          throw invalid_shift("shifts " + std::to_string(k) + " and " + std::to_string(k2) + " do not commute");
    strides_.assign(shifts_.size(), 1);
    for (std::size_t k = shifts_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * (degrees_[k] + 1);
  }

 public:
  // h(S) = sum_l coeffs[l] S^l.
  static PolyFilter univariate(GeoMatrix shift, cvec coeffs) {
    if (coeffs.empty()) throw invalid_input("univariate polynomial needs at least one coefficient");
    auto g = shift.graph_handle();
    const auto deg = static_cast<unsigned>(coeffs.size() - 1);
    return PolyFilter(std::move(g), {std::move(shift)}, {deg}, std::move(coeffs));
  }

  static PolyFilter constant(graph_ptr g, cplx h) { return PolyFilter(std::move(g), {}, {}, {h}); }

  const Graph& graph() const { return *g_; }
  const graph_ptr& graph_handle() const { return g_; }
  std::size_t dimension() const { return shifts_.size(); }
  const std::vector<GeoMatrix>& shifts() const { return shifts_; }
  const std::vector<unsigned>& degrees() const { return degrees_; }
  const cvec& coeffs() const { return coeffs_; }
  std::size_t lattice_size() const { return coeffs_.size(); }

  // L_1 + ... + L_d, an upper bound on the geodesic-width of the filter.
  std::size_t total_degree() const { return std::accumulate(degrees_.begin(), degrees_.end(), std::size_t{0}); }

  std::size_t flat_index(std::span<const unsigned> l) const {
    if (l.size() != degrees_.size()) throw dimension_mismatch("multi-index length differs from shift count");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < l.size(); ++k) {
      if (l[k] > degrees_[k]) throw invalid_parameter("multi-index exceeds degree bound");
      idx += l[k] * strides_[k];
    }
    return idx;
  }

  multi_index unflatten(std::size_t idx) const {
    multi_index l(degrees_.size());
    for (std::size_t k = 0; k < l.size(); ++k) {
      l[k] = static_cast<unsigned>(idx / strides_[k]);
      idx %= strides_[k];
    }
    return l;
  }

  cplx coeff(std::span<const unsigned> l) const { return coeffs_[flat_index(l)]; }

  // For lattice point idx > 0: the shift k that was applied last (the highest
  // index with l_k > 0) and the flat index of l - e_k. Walking the lattice in
  // storage order visits every predecessor before its successors.
  std::pair<std::size_t, std::size_t> predecessor(std::size_t idx) const {
    const auto l = unflatten(idx);
    for (std::size_t k = l.size(); k-- > 0;)
      if (l[k] > 0) return {k, idx - strides_[k]};
    throw invalid_parameter("the zero multi-index has no predecessor");
  }

 private:
  graph_ptr g_;
  std::vector<GeoMatrix> shifts_;
  std::vector<unsigned> degrees_;
  cvec coeffs_;
  std::vector<std::size_t> strides_;
};

// Filter with coefficients |h| and shifts |S_k|; its matrix is A-hat. The
// shifts |S_k| need not commute.
inline PolyFilter abs_filter(const PolyFilter& f) {
  std::vector<GeoMatrix> shifts;
  for (const auto& s : f.shifts()) shifts.push_back(abs_entries(s));
  cvec h(f.coeffs().size());
  std::transform(f.coeffs().begin(), f.coeffs().end(), h.begin(), [](cplx v) { return cplx(std::abs(v)); });
  return PolyFilter::unchecked(f.graph_handle(), std::move(shifts), f.degrees(), std::move(h));
}

// Filter whose lattice recursion evaluates A-hat^T x exactly: shifts
// |S_k|^T in reverse order, degrees and coefficients permuted to match.
// Differs from abs_filter(adjoint_filter(f)) only when the |S_k| do not
// commute.
inline PolyFilter abs_transpose_filter(const PolyFilter& f) {
  const std::size_t d = f.dimension();
  std::vector<GeoMatrix> shifts;
  std::vector<unsigned> degrees;
  for (std::size_t k = d; k-- > 0;) {
    shifts.push_back(abs_entries(hermitian_transpose(f.shifts()[k])));
    degrees.push_back(f.degrees()[k]);
  }
  cvec h(f.lattice_size());
  auto out = PolyFilter::unchecked(f.graph_handle(), shifts, degrees, h);
  std::vector<unsigned> rev(d);
  for (std::size_t idx = 0; idx < f.lattice_size(); ++idx) {
    const auto l = f.unflatten(idx);
    std::reverse_copy(l.begin(), l.end(), rev.begin());
    h[out.flat_index(rev)] = std::abs(f.coeffs()[idx]);
  }
  return PolyFilter::unchecked(f.graph_handle(), std::move(shifts), std::move(degrees), std::move(h));
}

// A* as a filter: conjugated coefficients over the adjoint shifts S_k*.
inline PolyFilter adjoint_filter(const PolyFilter& f) {
  std::vector<GeoMatrix> shifts;
  for (const auto& s : f.shifts()) shifts.push_back(hermitian_transpose(s));
  cvec h(f.coeffs().size());
  std::transform(f.coeffs().begin(), f.coeffs().end(), h.begin(), [](cplx v) { return std::conj(v); });
  return PolyFilter::unchecked(f.graph_handle(), std::move(shifts), f.degrees(), std::move(h));
}

// Filter for alpha * h + beta (beta added to the constant coefficient).
inline PolyFilter affine_filter(const PolyFilter& f, cplx alpha, cplx beta) {
  cvec h = f.coeffs();
  for (auto& v : h) v *= alpha;
  h[0] += beta;
  return PolyFilter::unchecked(f.graph_handle(), f.shifts(), f.degrees(), std::move(h));
}

// Matrix of the filter, built from the monomial lattice: each monomial matrix
// is its predecessor's left-multiplied by one shift.
inline GeoMatrix poly_to_matrix(const PolyFilter& f) {
  const graph_ptr& g = f.graph_handle();
  std::vector<GeoMatrix> monomial;
  monomial.reserve(f.lattice_size());
  monomial.push_back(identity(g));
  GeoMatrix acc = scale(f.coeffs()[0], monomial[0]);
  for (std::size_t idx = 1; idx < f.lattice_size(); ++idx) {
    const auto [k, pred] = f.predecessor(idx);
    monomial.push_back(multiply(f.shifts()[k], monomial[pred]));
    acc = combine(1.0, acc, f.coeffs()[idx], monomial.back());
  }
  return acc;
}

// A-hat = sum |h_l| |S_d|^{l_d} ... |S_1|^{l_1}, the product order of the
// lattice recursion; dominates |A| entrywise.
inline GeoMatrix abs_poly_matrix(const PolyFilter& f) { return poly_to_matrix(abs_filter(f)); }

// y = h(S) x evaluated by the monomial-lattice recursion with one sparse
// matvec per lattice step: v_0 = x, v_l = S_k v_{l - e_k}, y = sum_l h_l v_l
// accumulated in storage order.
inline cvec poly_apply(const PolyFilter& f, std::span<const cplx> x) {
  const std::size_t n = f.graph().size();
  if (x.size() != n) throw dimension_mismatch("filter input length differs from n");
  std::vector<cvec> v(f.lattice_size());
  v[0].assign(x.begin(), x.end());
  cvec y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] += f.coeffs()[0] * v[0][i];
  for (std::size_t idx = 1; idx < f.lattice_size(); ++idx) {
    const auto [k, pred] = f.predecessor(idx);
    v[idx] = matvec(f.shifts()[k], v[pred]);
    for (std::size_t i = 0; i < n; ++i) y[i] += f.coeffs()[idx] * v[idx][i];
  }
  return y;
}

struct HatSums {
  std::vector<double> row;  // a_1 = A-hat 1
  std::vector<double> col;  // a_2 = A-hat^T 1
};

// Row and column sums of A-hat via the lattice recursion on the all-one
// vector (the summation order the vertex-level construction also uses).
inline HatSums hat_sums(const PolyFilter& f) {
  const cvec ones(f.graph().size(), 1.0);
  const cvec a1 = poly_apply(abs_filter(f), ones);
  const cvec a2 = poly_apply(abs_transpose_filter(f), ones);
  HatSums out{std::vector<double>(a1.size()), std::vector<double>(a2.size())};
  for (std::size_t i = 0; i < a1.size(); ++i) {
    out.row[i] = a1[i].real();
    out.col[i] = a2[i].real();
  }
  return out;
}

// Q-hat_c(i,i) = max over j with rho(j,i) <= L_1+..+L_d of
// max(sum_k Ahat(j,k), sum_k Ahat(k,j), c).
inline DiagonalMatrix hat_Q(const PolyFilter& f, double c) {
  require_positive(c, "c");
  const auto sums = hat_sums(f);
  const Graph& g = f.graph();
  std::vector<double> q0(g.size());
  for (vertex j = 0; j < g.size(); ++j) q0[j] = std::max({sums.row[j], sums.col[j], c});
  std::vector<double> q(g.size(), 0.0);
  for (vertex i = 0; i < g.size(); ++i)
    for (vertex j : ball(g, i, f.total_degree())) q[i] = std::max(q[i], q0[j]);
  return DiagonalMatrix(std::move(q));
}

// Q-hat_c^sym(i,i) = max(sum_k Ahat(i,k), c).
inline DiagonalMatrix hat_Q_sym(const PolyFilter& f, double c) {
  require_positive(c, "c");
  const auto sums = hat_sums(f);
  std::vector<double> q(sums.row.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::max(sums.row[i], c);
  return DiagonalMatrix(std::move(q));
}

// (1 - t/2)^m as a polynomial in the normalized Laplacian: the spline
// filter (I - L/2)^m.
inline PolyFilter spline_poly_filter(const GeoMatrix& laplacian, int m) {
  if (m < 1) throw invalid_parameter("spline order must be >= 1");
  cvec h(static_cast<std::size_t>(m) + 1, 0.0);
  double binom = 1.0;
  h[0] = 1.0;
  for (int l = 1; l <= m; ++l) {
    binom = binom * (m - l + 1) / l;
    h[static_cast<std::size_t>(l)] = binom * std::pow(-0.5, l);
  }
  return PolyFilter::univariate(laplacian, std::move(h));
}

}  // namespace geoeig
