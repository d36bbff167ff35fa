#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "geoeig/errors.hpp"
#include "geoeig/geo_matrix.hpp"
#include "geoeig/graph.hpp"
#include "geoeig/poly_filter.hpp"

namespace geoeig::io {

using json = nlohmann::json;

// Graph file: {"n": int, "edges": [[i, j], ...], "coords": [[x, y], ...]}
// with each edge listed once, i < j, ascending; "coords" optional.
inline json graph_to_json(const Graph& g) {
  json j;
  j["n"] = g.size();
  json edges = json::array();
  for (auto [a, b] : g.edges()) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  if (g.has_coords()) {
    json coords = json::array();
    for (const auto& p : g.coords()) coords.push_back({p[0], p[1]});
    j["coords"] = std::move(coords);
  }
  return j;
}

inline Graph graph_from_json(const json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<std::pair<vertex, vertex>> edges;
    for (const auto& e : j.at("edges")) {
      if (e.size() != 2) throw invalid_input("graph edge must have two endpoints");
      edges.emplace_back(e[0].get<vertex>(), e[1].get<vertex>());
    }
    std::optional<std::vector<point2>> coords;
    if (j.contains("coords")) {
      coords.emplace();
      for (const auto& p : j["coords"]) coords->push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    return Graph::from_edges(n, edges, std::move(coords));
  } catch (const json::exception& e) {
    throw invalid_input(std::string("malformed graph file: ") + e.what());
  }
}

// Matrix file: {"n": int, "triplets": [[i, j, re, im], ...]}.
inline json matrix_to_json(const GeoMatrix& a) {
  json j;
  j["n"] = a.size();
  json t = json::array();
  for (vertex i = 0; i < a.size(); ++i)
    for (const auto& e : a.row(i)) t.push_back({i, e.index, e.value.real(), e.value.imag()});
  j["triplets"] = std::move(t);
  return j;
}

inline GeoMatrix matrix_from_json(const json& j, const graph_ptr& g) {
  try {
    if (j.at("n").get<std::size_t>() != g->size()) throw dimension_mismatch("matrix order differs from graph order");
    GeoMatrix::Builder b(g);
    for (const auto& t : j.at("triplets")) {
      if (t.size() != 4) throw invalid_input("matrix triplet must be [i, j, re, im]");
      b.add(t[0].get<vertex>(), t[1].get<vertex>(), {t[2].get<double>(), t[3].get<double>()});
    }
    return std::move(b).freeze();
  } catch (const json::exception& e) {
    throw invalid_input(std::string("malformed matrix file: ") + e.what());
  }
}

// Polynomial filter file:
//   {"n": int, "degrees": [L_1, ...], "shifts": [{"triplets": [...]}, ...],
//    "coeffs": [c, ...]}
// with coefficients row-major over the degree lattice (last shift fastest);
// each coefficient is a number or a pair [re, im].
inline json poly_filter_to_json(const PolyFilter& f) {
  json j;
  j["n"] = f.graph().size();
  j["degrees"] = f.degrees();
  json shifts = json::array();
  for (const auto& s : f.shifts()) shifts.push_back({{"triplets", matrix_to_json(s)["triplets"]}});
  j["shifts"] = std::move(shifts);
  json coeffs = json::array();
  for (cplx h : f.coeffs()) coeffs.push_back({h.real(), h.imag()});
  j["coeffs"] = std::move(coeffs);
  return j;
}

inline cplx complex_from_json(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  throw invalid_input("complex value must be a number or [re, im]");
}

inline PolyFilter poly_filter_from_json(const json& j, const graph_ptr& g) {
  try {
    if (j.at("n").get<std::size_t>() != g->size()) throw dimension_mismatch("filter order differs from graph order");
    std::vector<GeoMatrix> shifts;
    for (const auto& s : j.at("shifts")) shifts.push_back(matrix_from_json({{"n", g->size()}, {"triplets", s.at("triplets")}}, g));
    auto degrees = j.at("degrees").get<std::vector<unsigned>>();
    cvec coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(complex_from_json(c));
    return PolyFilter(g, std::move(shifts), std::move(degrees), std::move(coeffs));
  } catch (const json::exception& e) {
    throw invalid_input(std::string("malformed polynomial filter file: ") + e.what());
  }
}

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw invalid_input("cannot parse " + path + ": " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write " + path);
  out << text;
  if (!out) throw invalid_input("write failed for " + path);
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump() + "\n"); }

}  // namespace geoeig::io
