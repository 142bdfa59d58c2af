#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "higherspin/multivector.hpp"
#include "higherspin/poly.hpp"

namespace testing {

inline higherspin::Multivector random_mv(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  higherspin::Multivector a(m);
  for (std::size_t i = 0; i < a.size(); ++i) a[static_cast<std::uint32_t>(i)] = normal(rng);
  return a;
}

inline std::vector<double> random_point(int m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal;
  std::vector<double> x(m);
  for (auto& t : x) t = scale * normal(rng);
  return x;
}

/// Random Clifford-valued polynomial in one group, every monomial up to `degree`.
inline higherspin::CliffordPoly random_poly(int m, higherspin::Group g, int degree,
                                            std::mt19937_64& rng) {
  higherspin::CliffordPoly p(m);
  for (int d = 0; d <= degree; ++d)
    for (const auto& e : higherspin::homogeneous_exponents(m, d)) {
      higherspin::Monomial mono;
      for (int i = 0; i < m; ++i) mono.set(g, i, e[i]);
      p.add_term(mono, random_mv(m, rng));
    }
  return p;
}

/// Inner product int_S Sc(conj(f) g) dS for polynomials in u.
inline double real_inner(const higherspin::CliffordPoly& f, const higherspin::CliffordPoly& g) {
  return higherspin::pairing_u(higherspin::conjugation(f), g).scalar_part();
}

inline double max_diff(const higherspin::Multivector& a, const higherspin::Multivector& b) {
  return (a - b).max_abs();
}

}  // namespace testing
