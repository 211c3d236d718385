#pragma once

// Reference implementations used only by the tests. Each one takes the
// dumbest correct route so it stays independent of the library's own
// computation path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "dirrep/normal.hpp"
#include "dirrep/partial_conjunction.hpp"

namespace oracle {

// Invert norm_cdf by bisection; shares nothing with the quantile's rational
// approximation or its Newton refinement.
inline double quantile_bisect(double u) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (dirrep::norm_cdf(mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Exhaustive 2^m enumeration of the Poisson-binomial PMF.
inline std::vector<double> poisbin_brute(const std::vector<double>& probs) {
  const std::size_t m = probs.size();
  std::vector<double> pmf(m + 1, 0.0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double pr = 1.0;
    int successes = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) {
        pr *= probs[i];
        ++successes;
      } else {
        pr *= 1.0 - probs[i];
      }
    }
    pmf[successes] += pr;
  }
  return pmf;
}

inline double poisbin_brute_tail(const std::vector<double>& probs, int k) {
  const auto pmf = poisbin_brute(probs);
  double sum = 0.0;
  for (std::size_t j = k; j < pmf.size(); ++j) sum += pmf[j];
  return sum;
}

// Upper chi-square tail for even dof = 2m via the finite series
// Q = e^{-y} sum_{j<m} y^j / j!  with y = x/2; an algebraic route disjoint
// from the library's series/continued-fraction evaluation.
inline double chi2_sf_even_dof(double x, int m) {
  const double y = 0.5 * x;
  double term = std::exp(-y);
  double sum = term;
  for (int j = 1; j < m; ++j) {
    term *= y / j;
    sum += term;
  }
  return sum;
}

// Straight-line combiner formulas written directly from the definitions.
inline double combine_reference(std::vector<double> p, int r, dirrep::Combiner c) {
  std::sort(p.begin(), p.end());
  const int n = static_cast<int>(p.size());
  const int m = n - r + 1;
  switch (c) {
    case dirrep::Combiner::Bonferroni:
      return std::min(1.0, m * p[r - 1]);
    case dirrep::Combiner::Sidak:
      return 1.0 - std::pow(1.0 - p[r - 1], m);
    case dirrep::Combiner::Simes: {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= m; ++i)
        best = std::min(best, static_cast<double>(m) / i * p[r - 2 + i]);
      return std::min(1.0, best);
    }
    case dirrep::Combiner::Fisher: {
      double stat = 0.0;
      for (int i = r - 1; i < n; ++i) {
        if (p[i] <= 0.0) return 0.0;
        stat += -2.0 * std::log(p[i]);
      }
      return chi2_sf_even_dof(stat, m);
    }
  }
  return -1.0;
}

}  // namespace oracle
