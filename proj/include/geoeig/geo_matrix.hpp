#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geoeig/errors.hpp"
#include "geoeig/graph.hpp"

namespace geoeig {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

struct Entry {
  vertex index;
  cplx value;
};

inline bool is_finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Geodesic-width of a sparse pattern given as per-row (column, value) lists:
// the largest hop distance between a row and any column holding a nonzero.
// Zero for diagonal or empty patterns.
inline std::size_t geodesic_width(const std::vector<std::vector<Entry>>& rows, const Graph& g) {
  if (rows.size() != g.size()) throw dimension_mismatch("row count differs from graph order");
  std::size_t width = 0;
  std::vector<std::size_t> dist(g.size(), unreachable);
  std::vector<char> target(g.size(), 0);
  std::vector<vertex> queue;
  for (vertex i = 0; i < rows.size(); ++i) {
    std::size_t pending = 0;
    for (const auto& e : rows[i])
      if (e.index != i && e.value != cplx{} && !target[e.index]) {
        target[e.index] = 1;
        ++pending;
      }
    if (pending == 0) continue;
    // Breadth-first search from i, stopping once every column is reached.
    queue.assign(1, i);
    dist[i] = 0;
    for (std::size_t head = 0; head < queue.size() && pending > 0; ++head) {
      const vertex v = queue[head];
      for (vertex w : g.neighbors(v)) {
        if (dist[w] != unreachable) continue;
        dist[w] = dist[v] + 1;
        queue.push_back(w);
        if (target[w]) {
          width = std::max(width, dist[w]);
          --pending;
        }
      }
    }
    for (vertex v : queue) dist[v] = unreachable;
    for (const auto& e : rows[i]) target[e.index] = 0;
  }
  return width;
}

// Complex matrix on the vertices of a graph, stored row- and column-wise with
// ascending indices. Explicit zeros are dropped and the geodesic-width is
// computed once when the matrix is frozen. Instances are immutable.
class GeoMatrix {
 public:
  class Builder {
   public:
    explicit Builder(graph_ptr g) : g_(std::move(g)), rows_(g_->size()) {}

    // Accumulates v into entry (i, j).
    Builder& add(vertex i, vertex j, cplx v) {
      g_->check(i);
      g_->check(j);
      if (!is_finite(v)) throw invalid_input("non-finite matrix entry");
      rows_[i].push_back({j, v});
      return *this;
    }

    GeoMatrix freeze() && { return GeoMatrix(std::move(g_), std::move(rows_)); }
    GeoMatrix freeze() const& { return GeoMatrix(g_, rows_); }

   private:
    graph_ptr g_;
    std::vector<std::vector<Entry>> rows_;
  };

  // Rows may be unsorted and may repeat a column; repeats are summed in the
  // order given.
  GeoMatrix(graph_ptr g, std::vector<std::vector<Entry>> rows) : g_(std::move(g)) {
    if (!g_) throw invalid_input("matrix needs a graph");
    const std::size_t n = g_->size();
    if (rows.size() != n) throw dimension_mismatch("row count differs from graph order");
    for (auto& row : rows) {
      std::stable_sort(row.begin(), row.end(),
                       [](const Entry& a, const Entry& b) { return a.index < b.index; });
      std::size_t out = 0;
      for (std::size_t k = 0; k < row.size();) {
        Entry merged = row[k++];
        while (k < row.size() && row[k].index == merged.index) merged.value += row[k++].value;
        if (merged.index >= n) throw invalid_vertex("column index out of range");
        if (!is_finite(merged.value)) throw invalid_input("non-finite matrix entry");
        if (merged.value != cplx{}) row[out++] = merged;
      }
      row.resize(out);
    }
    width_ = geodesic_width(rows, *g_);

    row_ptr_.assign(1, 0);
    std::vector<std::size_t> col_count(n + 1, 0);
    for (const auto& row : rows) {
      row_entries_.insert(row_entries_.end(), row.begin(), row.end());
      row_ptr_.push_back(row_entries_.size());
      for (const auto& e : row) ++col_count[e.index + 1];
    }
    col_ptr_.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) col_ptr_[j + 1] = col_ptr_[j] + col_count[j + 1];
    col_entries_.resize(row_entries_.size());
    std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
    for (vertex i = 0; i < n; ++i)
      for (const auto& e : row(i)) col_entries_[fill[e.index]++] = {i, e.value};
  }

  const Graph& graph() const { return *g_; }
  const graph_ptr& graph_handle() const { return g_; }
  std::size_t size() const { return g_->size(); }
  std::size_t width() const { return width_; }
  std::size_t nnz() const { return row_entries_.size(); }

  // Nonzero entries A(i, .) with ascending column index.
  std::span<const Entry> row(vertex i) const {
    g_->check(i);
    return {row_entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  // Nonzero entries A(., i) with ascending row index; Entry::index is the row.
  std::span<const Entry> col(vertex i) const {
    g_->check(i);
    return {col_entries_.data() + col_ptr_[i], col_ptr_[i + 1] - col_ptr_[i]};
  }

  cplx at(vertex i, vertex j) const {
    g_->check(j);
    const auto r = row(i);
    const auto it = std::lower_bound(r.begin(), r.end(), j,
                                     [](const Entry& e, vertex c) { return e.index < c; });
    return (it != r.end() && it->index == j) ? it->value : cplx{};
  }

  double row_abs_sum(vertex i) const {
    double s = 0.0;
    for (const auto& e : row(i)) s += std::abs(e.value);
    return s;
  }

  double col_abs_sum(vertex i) const {
    double s = 0.0;
    for (const auto& e : col(i)) s += std::abs(e.value);
    return s;
  }

  bool is_real() const {
    return std::all_of(row_entries_.begin(), row_entries_.end(),
                       [](const Entry& e) { return e.value.imag() == 0.0; });
  }

  std::vector<std::vector<Entry>> rows() const {
    std::vector<std::vector<Entry>> out(size());
    for (vertex i = 0; i < size(); ++i) out[i].assign(row(i).begin(), row(i).end());
    return out;
  }

 private:
  graph_ptr g_;
  std::size_t width_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Entry> row_entries_;
  std::vector<std::size_t> col_ptr_;
  std::vector<Entry> col_entries_;
};

inline void require_same_graph(const GeoMatrix& a, const GeoMatrix& b) {
  if (a.graph_handle() != b.graph_handle() && !(a.graph() == b.graph()))
    throw dimension_mismatch("matrices live on different graphs");
}

// y = A x, each row summed in ascending column order.
inline void matvec(const GeoMatrix& a, std::span<const cplx> x, std::span<cplx> y) {
  const std::size_t n = a.size();
  if (x.size() != n || y.size() != n) throw dimension_mismatch("matvec: vector length differs from n");
  for (vertex i = 0; i < n; ++i) {
    cplx s{};
    for (const auto& e : a.row(i)) s += e.value * x[e.index];
    y[i] = s;
  }
}

inline cvec matvec(const GeoMatrix& a, std::span<const cplx> x) {
  cvec y(a.size());
  matvec(a, x, y);
  return y;
}

inline GeoMatrix identity(const graph_ptr& g) {
  std::vector<std::vector<Entry>> rows(g->size());
  for (vertex i = 0; i < g->size(); ++i) rows[i].push_back({i, 1.0});
  return {g, std::move(rows)};
}

inline GeoMatrix zero_matrix(const graph_ptr& g) { return {g, std::vector<std::vector<Entry>>(g->size())}; }

inline GeoMatrix diagonal(const graph_ptr& g, std::span<const cplx> d) {
  if (d.size() != g->size()) throw dimension_mismatch("diagonal length differs from n");
  std::vector<std::vector<Entry>> rows(g->size());
  for (vertex i = 0; i < g->size(); ++i) rows[i].push_back({i, d[i]});
  return {g, std::move(rows)};
}

inline GeoMatrix adjacency_matrix(const graph_ptr& g) {
  std::vector<std::vector<Entry>> rows(g->size());
  for (vertex i = 0; i < g->size(); ++i)
    for (vertex j : g->neighbors(i)) rows[i].push_back({j, 1.0});
  return {g, std::move(rows)};
}

// A*: entry (i, j) is the conjugate of A(j, i).
inline GeoMatrix hermitian_transpose(const GeoMatrix& a) {
  std::vector<std::vector<Entry>> rows(a.size());
  for (vertex i = 0; i < a.size(); ++i)
    for (const auto& e : a.col(i)) rows[i].push_back({e.index, std::conj(e.value)});
  return {a.graph_handle(), std::move(rows)};
}

// Entrywise modulus |A|.
inline GeoMatrix abs_entries(const GeoMatrix& a) {
  std::vector<std::vector<Entry>> rows(a.size());
  for (vertex i = 0; i < a.size(); ++i)
    for (const auto& e : a.row(i)) rows[i].push_back({e.index, std::abs(e.value)});
  return {a.graph_handle(), std::move(rows)};
}

inline GeoMatrix scale(cplx alpha, const GeoMatrix& a) {
  std::vector<std::vector<Entry>> rows(a.size());
  for (vertex i = 0; i < a.size(); ++i)
    for (const auto& e : a.row(i)) rows[i].push_back({e.index, alpha * e.value});
  return {a.graph_handle(), std::move(rows)};
}

// alpha A + beta B, entry by entry.
inline GeoMatrix combine(cplx alpha, const GeoMatrix& a, cplx beta, const GeoMatrix& b) {
  require_same_graph(a, b);
  std::vector<std::vector<Entry>> rows(a.size());
  for (vertex i = 0; i < a.size(); ++i) {
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    std::size_t p = 0, q = 0;
    while (p < ra.size() || q < rb.size()) {
      if (q == rb.size() || (p < ra.size() && ra[p].index < rb[q].index)) {
        rows[i].push_back({ra[p].index, alpha * ra[p].value});
        ++p;
      } else if (p == ra.size() || rb[q].index < ra[p].index) {
        rows[i].push_back({rb[q].index, beta * rb[q].value});
        ++q;
      } else {
        rows[i].push_back({ra[p].index, alpha * ra[p].value + beta * rb[q].value});
        ++p;
        ++q;
      }
    }
  }
  return {a.graph_handle(), std::move(rows)};
}

// Sparse product A B. Row i accumulates A(i,k) B(k,.) for ascending k.
inline GeoMatrix multiply(const GeoMatrix& a, const GeoMatrix& b) {
  require_same_graph(a, b);
  const std::size_t n = a.size();
  std::vector<std::vector<Entry>> rows(n);
  cvec acc(n);
  std::vector<char> touched(n, 0);
  std::vector<vertex> cols;
  for (vertex i = 0; i < n; ++i) {
    cols.clear();
    for (const auto& ea : a.row(i)) {
      for (const auto& eb : b.row(ea.index)) {
        if (!touched[eb.index]) {
          touched[eb.index] = 1;
          cols.push_back(eb.index);
          acc[eb.index] = cplx{};
        }
        acc[eb.index] += ea.value * eb.value;
      }
    }
    std::sort(cols.begin(), cols.end());
    rows[i].reserve(cols.size());
    for (vertex j : cols) {
      rows[i].push_back({j, acc[j]});
      touched[j] = 0;
    }
  }
  return {a.graph_handle(), std::move(rows)};
}

inline GeoMatrix operator+(const GeoMatrix& a, const GeoMatrix& b) { return combine(1.0, a, 1.0, b); }
inline GeoMatrix operator-(const GeoMatrix& a, const GeoMatrix& b) { return combine(1.0, a, -1.0, b); }
inline GeoMatrix operator*(const GeoMatrix& a, const GeoMatrix& b) { return multiply(a, b); }
inline GeoMatrix operator*(cplx alpha, const GeoMatrix& a) { return scale(alpha, a); }

inline GeoMatrix power(const GeoMatrix& a, unsigned k) {
  GeoMatrix out = identity(a.graph_handle());
  for (unsigned p = 0; p < k; ++p) out = multiply(out, a);
  return out;
}

// max_{i,j} |A(i,j) - B(i,j)|.
inline double max_abs_diff(const GeoMatrix& a, const GeoMatrix& b) {
  const GeoMatrix d = a - b;
  double m = 0.0;
  for (vertex i = 0; i < d.size(); ++i)
    for (const auto& e : d.row(i)) m = std::max(m, std::abs(e.value));
  return m;
}

inline double max_abs_entry(const GeoMatrix& a) {
  double m = 0.0;
  for (vertex i = 0; i < a.size(); ++i)
    for (const auto& e : a.row(i)) m = std::max(m, std::abs(e.value));
  return m;
}

inline bool is_hermitian(const GeoMatrix& a, double tol = 1e-12) {
  for (vertex i = 0; i < a.size(); ++i)
    for (const auto& e : a.row(i))
      if (std::abs(e.value - std::conj(a.at(e.index, i))) > tol) return false;
  return true;
}

}  // namespace geoeig
