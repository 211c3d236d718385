#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dirrep/directional.hpp"
#include "dirrep/extended_real.hpp"
#include "dirrep/normal.hpp"
#include "dirrep/poisson_binomial.hpp"
#include "dirrep/rng.hpp"

namespace dirrep {

// A point of the composite-null parameter space; entries may sit at the
// -inf/+inf limits where per-study rejection indicators become
// deterministic.
class ThetaPoint {
 public:
  explicit ThetaPoint(std::vector<ExtendedReal> theta) : theta_(std::move(theta)) {
    if (theta_.empty()) throw std::domain_error("ThetaPoint: needs at least one entry");
  }

  int size() const { return static_cast<int>(theta_.size()); }
  const std::vector<ExtendedReal>& entries() const { return theta_; }

  int n_plus() const { return count_sign(+1); }
  int n_minus() const { return count_sign(-1); }

  // The r-of-n directional null holds iff n+ < r and n- < r.
  bool in_null(int r) const { return n_plus() < r && n_minus() < r; }

 private:
  int count_sign(int s) const {
    int c = 0;
    for (const auto& th : theta_) c += th.sign() == s;
    return c;
  }

  std::vector<ExtendedReal> theta_;
};

struct TypeOneRow {
  int r;
  double c_concordant;
  double c_discordant;
};

struct TypeOneCurve {
  int n;
  double alpha;
  std::vector<TypeOneRow> rows;
};

struct McEstimate {
  double estimate;
  double std_error;  // sqrt(estimate * (1 - estimate) / reps)
  long long reps;
  std::uint64_t seed;
};

// Per-study threshold t = Phi^{-1}(1 - alpha/(n-r+1)) behind the Bonferroni
// partial-conjunction rejection events [T_(n-r+1) >= t] and [T_(r) <= -t].
inline double threshold_t(int n, int r, double alpha) {
  if (r < 2 || r > n) throw std::domain_error("threshold_t: need 2 <= r <= n");
  if (!(alpha > 0.0 && alpha < 0.5))
    throw std::domain_error("threshold_t: alpha must lie in (0, 0.5)");
  // -Phi^{-1}(u) = Phi^{-1}(1-u) exactly, and alpha/m keeps tail precision
  // that forming 1 - alpha/m first would lose.
  return -norm_quantile(alpha / (n - r + 1));
}

namespace detail {

// P(T <= -t) and P(T >= t) for T ~ N(theta, 1); infinite theta resolves to
// exact 0/1 without touching floating-point infinity arithmetic.
inline double lower_tail_prob(const ExtendedReal& theta, double t) {
  if (theta.is_pos_inf()) return 0.0;
  if (theta.is_neg_inf()) return 1.0;
  return norm_sf(t + theta.finite_value());
}

inline double upper_tail_prob(const ExtendedReal& theta, double t) {
  if (theta.is_pos_inf()) return 1.0;
  if (theta.is_neg_inf()) return 0.0;
  return norm_sf(t - theta.finite_value());
}

inline void require_disjoint_regime(int n, int r, const char* who) {
  if (2 * r <= n + 1)
    throw std::domain_error(std::string(who) + ": needs the disjoint-events regime 2r > n+1");
}

inline void require_overlap_regime(int n, int r, const char* who) {
  if (r < 2 || 2 * r > n + 1)
    throw std::domain_error(std::string(who) + ": needs 2 <= r <= (n+1)/2");
}

inline double binomial_coeff(int m, int k) {
  if (k < 0 || k > m) return 0.0;
  if (k > m - k) k = m - k;
  if (m <= 60) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (m - k + i) / i;
    return c;
  }
  // log-space keeps large-m coefficients finite
  return std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0));
}

}  // namespace detail

// Exact Type I error of the min rule in the disjoint-events regime
// 2r > n+1:  c(theta) = P(X >= r) + P(Y >= r), where X and Y count the
// per-study exceedances T_i <= -t and T_i >= t.
inline double c_exact_disjoint(const ThetaPoint& theta, int r, double alpha) {
  const int n = theta.size();
  detail::require_disjoint_regime(n, r, "c_exact_disjoint");
  const double t = threshold_t(n, r, alpha);
  std::vector<double> lower, upper;
  lower.reserve(theta.entries().size());
  upper.reserve(theta.entries().size());
  for (const auto& th : theta.entries()) {
    lower.push_back(detail::lower_tail_prob(th, t));
    upper.push_back(detail::upper_tail_prob(th, t));
  }
  return PoissonBinomial(lower).tail(r) + PoissonBinomial(upper).tail(r);
}

// Supremum of c(theta) over the boundary set Theta_0^b in the disjoint
// regime: 1 - (1 - alpha/(n-r+1))^{n-r+1}. Always <= alpha, with equality
// exactly at r = n.
inline double sup_boundary(int n, int r, double alpha) {
  if (r < 2 || r > n) throw std::domain_error("sup_boundary: need 2 <= r <= n");
  if (!(alpha > 0.0 && alpha < 0.5))
    throw std::domain_error("sup_boundary: alpha must lie in (0, 0.5)");
  detail::require_disjoint_regime(n, r, "sup_boundary");
  const double m = n - r + 1;
  return -std::expm1(m * std::log1p(-alpha / m));
}

// Type I error at the concordant evaluation point (r-1 effects at +inf,
// rest 0) of the overlapping-events regime 2 <= r <= (n+1)/2:
//   [1 - Phi(t)^{n-r+1}]
//     + sum_{k=r}^{n-r+1} C(n-r+1, k) (1-Phi(t))^k (2 Phi(t)-1)^{n-r+1-k}.
// The first term is the chance that the maximum of n-r+1 standard normals
// exceeds t. The source display prints 1 - {1-Phi(t)}^{n-r+1} there, which
// contradicts its own plotted values; the corrected term reproduces them.
inline double c_concordant(int n, int r, double alpha) {
  detail::require_overlap_regime(n, r, "c_concordant");
  const double t = threshold_t(n, r, alpha);
  const int m = n - r + 1;
  const double tail = norm_sf(t);              // 1 - Phi(t)
  const double mid = 1.0 - 2.0 * tail;         // 2 Phi(t) - 1
  const double first = -std::expm1(m * std::log1p(-tail));  // 1 - Phi(t)^m
  double sum = 0.0;
  for (int k = r; k <= m; ++k)
    sum += detail::binomial_coeff(m, k) * std::pow(tail, k) * std::pow(mid, m - k);
  return first + sum;
}

// Type I error at the discordant evaluation point (r-1 effects at +inf, r-1
// at -inf, rest 0): 1 - (2 Phi(t) - 1)^{n-2r+2}.
inline double c_discordant(int n, int r, double alpha) {
  detail::require_overlap_regime(n, r, "c_discordant");
  const double t = threshold_t(n, r, alpha);
  const int exponent = n - 2 * r + 2;
  return -std::expm1(exponent * std::log1p(-2.0 * norm_sf(t)));
}

// Both closed-form curves over r = 2..floor((n+1)/2); beyond that the
// discordant configuration cannot exist and the disjoint regime takes over.
inline TypeOneCurve type1_curve(int n, double alpha) {
  if (n < 4) throw std::domain_error("type1_curve: needs n >= 4");
  TypeOneCurve curve{n, alpha, {}};
  for (int r = 2; 2 * r <= n + 1; ++r)
    curve.rows.push_back({r, c_concordant(n, r, alpha), c_discordant(n, r, alpha)});
  return curve;
}

namespace detail {

// Right-tail per-study cutoff u with combined p-value <= level, i.e. the
// exact order-statistic form of the event [p_(r) <= u]. Only Bonferroni and
// Sidak reduce to a per-study threshold this way; for Simes/Fisher no such
// form exists and simulation through these cutoffs would be wrong.
inline double per_study_cutoff(double level, int m, Combiner combiner) {
  switch (combiner) {
    case Combiner::Bonferroni:
      return level / m;
    case Combiner::Sidak:
      return -std::expm1(std::log1p(-level) / m);
    default:
      throw std::invalid_argument(
          "Monte Carlo rejection events support the bonferroni and sidak combiners only");
  }
}

// The simulated event is the min rule at level alpha; Double runs the same
// event at alpha/2. Auto maps to Min here: the error curves being estimated
// are the min rule's, also in regimes where its validity is unproven.
inline double mc_level(const ReplicabilityQuery& q) {
  return q.rule == Rule::Double ? q.alpha / 2.0 : q.alpha;
}

// Fixed simulation block size; every block draws from its own stream
// (stream_id = block index), so the estimate depends on (seed, reps) only,
// never on how blocks are scheduled.
inline constexpr long long kMcBlock = 1 << 16;

struct SplitTheta {
  int forced_low = 0;   // -inf entries: T_i <= -t always
  int forced_high = 0;  // +inf entries: T_i >= t always
  std::vector<double> finite;
};

inline SplitTheta split_theta(const ThetaPoint& theta) {
  SplitTheta s;
  for (const auto& th : theta.entries()) {
    if (th.is_neg_inf())
      ++s.forced_low;
    else if (th.is_pos_inf())
      ++s.forced_high;
    else
      s.finite.push_back(th.finite_value());
  }
  return s;
}

template <typename RejectFn>
McEstimate run_mc(long long reps, std::uint64_t seed, RejectFn&& rejects) {
  long long hits = 0;
  long long done = 0;
  for (std::uint64_t block = 0; done < reps; ++block) {
    NormalStream stream(seed, block);
    const long long todo = std::min(kMcBlock, reps - done);
    for (long long i = 0; i < todo; ++i) hits += rejects(stream) ? 1 : 0;
    done += todo;
  }
  const double estimate = static_cast<double>(hits) / static_cast<double>(reps);
  return {estimate, std::sqrt(estimate * (1.0 - estimate) / static_cast<double>(reps)), reps,
          seed};
}

}  // namespace detail

// Monte Carlo estimate of the min-rule Type I error at theta: simulates
// T_i = theta_i + Z_i and applies the rejection event
// [T_(n-r+1) >= t] u [T_(r) <= -t], counted as per-study tail exceedances.
// Infinite theta entries force their indicator instead of being sampled.
inline McEstimate mc_type1(const ThetaPoint& theta, const ReplicabilityQuery& q, long long reps,
                           std::uint64_t seed) {
  q.validate();
  if (theta.size() != q.n) throw std::domain_error("mc_type1: theta length differs from query n");
  if (reps < 1) throw std::domain_error("mc_type1: reps must be >= 1");
  const double cutoff = detail::per_study_cutoff(detail::mc_level(q), q.n - q.r + 1, q.combiner);
  const double t = -norm_quantile(cutoff);
  const detail::SplitTheta split = detail::split_theta(theta);
  const int r = q.r;
  return detail::run_mc(reps, seed, [&](NormalStream& stream) {
    int below = split.forced_low;
    int above = split.forced_high;
    for (double th : split.finite) {
      const double obs = th + stream.next();
      below += obs <= -t;
      above += obs >= t;
    }
    return below >= r || above >= r;
  });
}

// Monte Carlo estimate of the Type III (wrong-direction) error: with
// n+ >= r true positives it estimates P(T_(r) < -t), symmetrically
// P(T_(n-r+1) > t) when n- >= r.
inline McEstimate mc_type3(const ThetaPoint& theta, const ReplicabilityQuery& q, long long reps,
                           std::uint64_t seed) {
  q.validate();
  if (theta.size() != q.n) throw std::domain_error("mc_type3: theta length differs from query n");
  if (reps < 1) throw std::domain_error("mc_type3: reps must be >= 1");
  const bool positive_truth = theta.n_plus() >= q.r;
  if (!positive_truth && theta.n_minus() < q.r)
    throw std::domain_error("mc_type3: theta must have n+ >= r or n- >= r");
  const double cutoff = detail::per_study_cutoff(detail::mc_level(q), q.n - q.r + 1, q.combiner);
  const double t = -norm_quantile(cutoff);
  const detail::SplitTheta split = detail::split_theta(theta);
  const int r = q.r;
  if (positive_truth) {
    return detail::run_mc(reps, seed, [&](NormalStream& stream) {
      int wrong = split.forced_low;
      for (double th : split.finite) wrong += th + stream.next() < -t;
      return wrong >= r;
    });
  }
  return detail::run_mc(reps, seed, [&](NormalStream& stream) {
    int wrong = split.forced_high;
    for (double th : split.finite) wrong += th + stream.next() > t;
    return wrong >= r;
  });
}

// h(u) = Phi(t) + Phi(t+u) - 2 Phi(t) Phi(t+u): the chance that exactly one
// of two independent events with probabilities Phi(t) and Phi(t+u) occurs.
// Appears in the stationarity system of the n=3, r=2 fixed-point scan.
inline double fixed_point_h(double u, double t) {
  const double a = norm_cdf(t);
  const double b = norm_cdf(t + u);
  return a + b - 2.0 * a * b;
}

// g(u) = -log(h(-u)/h(u)) / (2t); a stationary point of c(theta) for n=3,
// r=2 would have to satisfy theta_1 = g(g(theta_1)).
inline double fixed_point_g(double u, double t) {
  return -std::log(fixed_point_h(-u, t) / fixed_point_h(u, t)) / (2.0 * t);
}

// g(g(.)) evaluated on a grid, with t = Phi^{-1}(1 - alpha/2) as fixed by
// n=3, r=2. The absence of a fixed point in (0, inf) - every grid value
// staying below the identity - is what rules out interior stationary points.
inline std::vector<std::pair<double, double>> gg_curve(const std::vector<double>& grid,
                                                       double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::domain_error("gg_curve: alpha must lie in (0, 0.5)");
  const double t = -norm_quantile(alpha / 2.0);
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double theta1 : grid)
    out.emplace_back(theta1, fixed_point_g(fixed_point_g(theta1, t), t));
  return out;
}

}  // namespace dirrep
