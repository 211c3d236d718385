#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirrep/incomplete_gamma.hpp"
#include "dirrep/normal.hpp"

namespace dirrep {

// z-scores T_i from n independent studies, each a unit-variance normal
// estimator of its study effect.
class StudyVector {
 public:
  explicit StudyVector(std::vector<double> z) : z_(std::move(z)) {
    if (z_.empty()) throw std::domain_error("StudyVector: needs at least one study");
    for (double v : z_)
      if (!std::isfinite(v)) throw std::domain_error("StudyVector: entries must be finite");
  }

  int size() const { return static_cast<int>(z_.size()); }
  const std::vector<double>& values() const { return z_; }

 private:
  std::vector<double> z_;
};

enum class Combiner { Bonferroni, Sidak, Simes, Fisher };

inline const char* to_string(Combiner c) {
  switch (c) {
    case Combiner::Bonferroni: return "bonferroni";
    case Combiner::Sidak: return "sidak";
    case Combiner::Simes: return "simes";
    case Combiner::Fisher: return "fisher";
  }
  return "?";
}

inline Combiner combiner_from_string(const std::string& s) {
  if (s == "bonferroni") return Combiner::Bonferroni;
  if (s == "sidak") return Combiner::Sidak;
  if (s == "simes") return Combiner::Simes;
  if (s == "fisher") return Combiner::Fisher;
  throw std::invalid_argument("unknown combiner '" + s + "'");
}

// Right-sided per-study p-values p_i = 1 - Phi(z_i).
inline std::vector<double> right_pvalues(const StudyVector& s) {
  std::vector<double> p;
  p.reserve(s.values().size());
  for (double z : s.values()) p.push_back(norm_sf(z));
  return p;
}

// Left-sided counterparts q_i = Phi(z_i) = 1 - p_i. Evaluated through the
// mirrored tail rather than literally as 1 - p_i so that negating every z
// swaps the two vectors bit for bit.
inline std::vector<double> left_pvalues(const StudyVector& s) {
  std::vector<double> q;
  q.reserve(s.values().size());
  for (double z : s.values()) q.push_back(norm_cdf(z));
  return q;
}

// Partial-conjunction combination: sort ascending, set aside the r-1
// smallest, combine the remaining m = n-r+1 with the chosen function.
// Reported values are capped into [0,1]; the Bonferroni product before the
// cap is available separately for identity checks.
inline double combine(std::vector<double> p, int r, Combiner combiner) {
  const int n = static_cast<int>(p.size());
  if (n < 1) throw std::domain_error("combine: empty p-value vector");
  if (r < 1 || r > n) throw std::domain_error("combine: r out of range");
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("combine: p-values must lie in [0,1]");
  std::stable_sort(p.begin(), p.end());
  const int m = n - r + 1;
  switch (combiner) {
    case Combiner::Bonferroni:
      return std::min(1.0, m * p[r - 1]);
    case Combiner::Sidak:
      // 1 - (1 - p_(r))^m
      return -std::expm1(m * std::log1p(-p[r - 1]));
    case Combiner::Simes: {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= m; ++i)
        best = std::min(best, static_cast<double>(m) / i * p[r - 2 + i]);
      return std::min(1.0, best);
    }
    case Combiner::Fisher: {
      double stat = 0.0;
      for (int i = r - 1; i < n; ++i) {
        if (p[i] == 0.0) return 0.0;  // -2 log 0 = +inf: tail mass is exactly 0
        stat -= 2.0 * std::log(p[i]);
      }
      return chi_squared_sf(stat, 2.0 * m);
    }
  }
  throw std::logic_error("combine: unhandled combiner");
}

// Uncapped Bonferroni product (n-r+1) * p_(r) over an already-sorted vector.
inline double bonferroni_uncapped(const std::vector<double>& sorted_p, int r) {
  const int n = static_cast<int>(sorted_p.size());
  if (r < 1 || r > n) throw std::domain_error("bonferroni_uncapped: r out of range");
  return (n - r + 1) * sorted_p[r - 1];
}

struct PcPValuePair {
  double p_plus;
  double p_minus;
  int r;
  int n;
  Combiner combiner;
};

// Combined p-values for the right- and left-sided r-of-n hypotheses.
// r >= 2 in replicability use; r = 1 is the global-null special case.
// For Bonferroni, p_minus is identically min(1, (n-r+1) * p_(n-r+1)) over the
// sorted right-sided p-values, which the tests cross-check.
inline PcPValuePair pc_pair(const StudyVector& s, int r, Combiner combiner) {
  const int n = s.size();
  if (r < 1 || r > n) throw std::domain_error("pc_pair: r out of range");
  return {combine(right_pvalues(s), r, combiner), combine(left_pvalues(s), r, combiner), r, n,
          combiner};
}

}  // namespace dirrep
