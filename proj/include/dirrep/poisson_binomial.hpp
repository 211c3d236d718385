#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dirrep {

// Sum of independent Bernoulli(p_i) trials with unequal success
// probabilities. The PMF comes from the exact O(m^2) convolution recurrence;
// m is a study count here (tens, not thousands), so nothing fancier is
// warranted. An empty trial list is the unit distribution at 0.
class PoissonBinomial {
 public:
  explicit PoissonBinomial(std::vector<double> probs) : probs_(std::move(probs)) {
    for (double p : probs_)
      if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("PoissonBinomial: probabilities must lie in [0,1]");
    pmf_.assign(probs_.size() + 1, 0.0);
    pmf_[0] = 1.0;
    std::size_t used = 0;
    for (double p : probs_) {
      ++used;
      for (std::size_t k = used; k >= 1; --k) pmf_[k] = pmf_[k] * (1.0 - p) + pmf_[k - 1] * p;
      pmf_[0] *= 1.0 - p;
    }
  }

  int trial_count() const { return static_cast<int>(probs_.size()); }
  const std::vector<double>& probs() const { return probs_; }

  // P(S = k) for k = 0..m.
  const std::vector<double>& pmf() const { return pmf_; }

  // P(S >= k) for 0 <= k <= m+1; the endpoints give 1 and 0.
  double tail(int k) const {
    if (k < 0 || k > trial_count() + 1)
      throw std::domain_error("PoissonBinomial::tail: k out of range");
    if (k == 0) return 1.0;
    double sum = 0.0;
    for (std::size_t j = pmf_.size(); j-- > static_cast<std::size_t>(k);) sum += pmf_[j];
    return sum < 1.0 ? sum : 1.0;
  }

 private:
  std::vector<double> probs_;
  std::vector<double> pmf_;
};

}  // namespace dirrep
