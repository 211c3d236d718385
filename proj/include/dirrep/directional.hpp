#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirrep/partial_conjunction.hpp"

namespace dirrep {

// Min: reject when min(p+, p-) <= alpha, no factor-of-two correction.
// Double: the classical corrected rule, 2 * min(p+, p-).
// Auto: Min where its validity is proven, Double otherwise.
enum class Rule { Auto, Min, Double };

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::Auto: return "auto";
    case Rule::Min: return "min";
    case Rule::Double: return "double";
  }
  return "?";
}

inline Rule rule_from_string(const std::string& s) {
  if (s == "auto") return Rule::Auto;
  if (s == "min") return Rule::Min;
  if (s == "double") return Rule::Double;
  throw std::invalid_argument("unknown rule '" + s + "'");
}

enum class Sign { Positive, Negative, None };

inline const char* to_string(Sign s) {
  switch (s) {
    case Sign::Positive: return "positive";
    case Sign::Negative: return "negative";
    case Sign::None: return "none";
  }
  return "?";
}

// One r-of-n directional replicability test.
struct ReplicabilityQuery {
  int n = 0;
  int r = 0;
  double alpha = 0.0;
  Combiner combiner = Combiner::Bonferroni;
  Rule rule = Rule::Auto;

  // alpha >= 0.5 is rejected outright rather than clamped: the min rule's
  // validity argument needs alpha in (0, 1/2).
  void validate() const {
    if (n < 2) throw std::domain_error("query: need n >= 2");
    if (r < 2 || r > n) throw std::domain_error("query: need 2 <= r <= n");
    if (!(alpha > 0.0 && alpha < 0.5)) throw std::domain_error("query: alpha must lie in (0, 0.5)");
  }
};

// True when dropping the factor-of-two correction is proven safe: 2r > n+1
// under Bonferroni or Sidak combination, plus the one proven small-r case
// n=3, r=2 under Bonferroni. r in {8,9,10} at n=20 and the Simes/Fisher
// extensions are open, so they stay out.
inline bool min_rule_is_valid(int n, int r, Combiner combiner) {
  const bool bonf_or_sidak = combiner == Combiner::Bonferroni || combiner == Combiner::Sidak;
  if (2 * r > n + 1 && bonf_or_sidak) return true;
  return n == 3 && r == 2 && combiner == Combiner::Bonferroni;
}

struct DirectionalResult {
  double p_plus = 1.0;
  double p_minus = 1.0;
  double p_final = 1.0;
  Rule rule_applied = Rule::Double;  // Min or Double, never Auto
  bool reject = false;
  Sign sign = Sign::None;
  // Set when the min rule was forced in a regime where its validity is
  // unproven (rule = Min with min_rule_is_valid false).
  bool unproven_min_rule = false;
};

// The directional replicability test. On rejection the sign is inferred
// post hoc: positive when p+ < p-, negative otherwise (ties have probability
// zero under continuous inputs).
inline DirectionalResult directional_test(const StudyVector& s, const ReplicabilityQuery& q) {
  q.validate();
  if (s.size() != q.n)
    throw std::domain_error("directional_test: study vector length differs from query n");
  const PcPValuePair pc = pc_pair(s, q.r, q.combiner);
  const bool proven = min_rule_is_valid(q.n, q.r, q.combiner);
  const Rule applied =
      (q.rule == Rule::Min || (q.rule == Rule::Auto && proven)) ? Rule::Min : Rule::Double;
  const double smaller = std::min(pc.p_plus, pc.p_minus);
  const double p_final = applied == Rule::Min ? smaller : std::min(1.0, 2.0 * smaller);
  const bool reject = p_final <= q.alpha;
  DirectionalResult out;
  out.p_plus = pc.p_plus;
  out.p_minus = pc.p_minus;
  out.p_final = p_final;
  out.rule_applied = applied;
  out.reject = reject;
  out.sign = reject ? (pc.p_plus < pc.p_minus ? Sign::Positive : Sign::Negative) : Sign::None;
  out.unproven_min_rule = applied == Rule::Min && !proven;
  return out;
}

struct AdaptiveStep {
  int r;
  double p_final;
  bool reject;
};

// k: the first r tested; l: lower confidence bound (0 when the first step
// already fails to reject); per_step: only hypotheses actually tested, in
// order. Untested hypotheses are simply absent, never reported as accepted.
struct AdaptiveResult {
  int k = 0;
  int l = 0;
  std::vector<AdaptiveStep> per_step;
};

// Sequential data-adaptive choice of r: starting at k = ceil((n+2)/2), test
// H_{k/n}, H_{k+1/n}, ... each at level alpha and stop at the first
// non-rejection. Every r in this range has 2r > n+1, so rule Auto applies the
// min rule under Bonferroni/Sidak. The returned l is a (1-alpha) lower
// confidence bound for max(n+, n-).
inline AdaptiveResult adaptive_r(const StudyVector& s, double alpha, Combiner combiner) {
  const int n = s.size();
  if (n < 2) throw std::domain_error("adaptive_r: needs n >= 2");
  AdaptiveResult out;
  out.k = (n + 3) / 2;  // ceil((n+2)/2)
  for (int r = out.k; r <= n; ++r) {
    const DirectionalResult step = directional_test(s, {n, r, alpha, combiner, Rule::Auto});
    out.per_step.push_back({r, step.p_final, step.reject});
    if (!step.reject) break;
    out.l = r;
  }
  return out;
}

}  // namespace dirrep
