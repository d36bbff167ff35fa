#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "geoeig/geo_matrix.hpp"

namespace geoeig {

struct IterationParams {
  cplx lambda{};
  double c = 0.0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

// Iterates x_0 .. x_M of one run. `breakdown` marks a run that stopped early
// (power iteration hitting a vanishing norm), in which case fewer than M+1
// iterates are present.
struct Trajectory {
  std::string algorithm;
  IterationParams params;
  std::vector<cvec> iterates;
  bool breakdown = false;

  std::size_t size() const { return iterates.size(); }
  const cvec& operator[](std::size_t n) const { return iterates[n]; }
  const cvec& back() const { return iterates.back(); }
};

// Called with (n, x_n) for n = 0..M.
using iterate_observer = std::function<void(std::size_t, std::span<const cplx>)>;

inline iterate_observer record_into(Trajectory& t) {
  return [&t](std::size_t, std::span<const cplx> x) { t.iterates.emplace_back(x.begin(), x.end()); };
}

inline cvec to_complex(std::span<const double> x) { return cvec(x.begin(), x.end()); }

}  // namespace geoeig
