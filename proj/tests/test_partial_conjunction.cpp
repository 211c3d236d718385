#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dirrep/partial_conjunction.hpp"
#include "dirrep/rng.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using dirrep::Combiner;
using dirrep::StudyVector;

namespace {

constexpr Combiner kAllCombiners[] = {Combiner::Bonferroni, Combiner::Sidak, Combiner::Simes,
                                      Combiner::Fisher};

std::vector<double> random_z(std::mt19937& gen, int n, double spread = 3.0) {
  std::normal_distribution<double> normal(0.0, spread);
  std::vector<double> z(n);
  for (auto& v : z) v = normal(gen);
  return z;
}

}  // namespace

TEST_CASE("study vectors validate their entries", "[pc]") {
  CHECK_THROWS_AS(StudyVector(std::vector<double>{}), std::domain_error);
  CHECK_THROWS_AS(StudyVector({1.0, std::nan("")}), std::domain_error);
  CHECK_THROWS_AS(StudyVector({std::numeric_limits<double>::infinity()}), std::domain_error);
  CHECK(StudyVector({0.0}).size() == 1);
}

TEST_CASE("per-study p-values", "[pc]") {
  CHECK(dirrep::right_pvalues(StudyVector({0.0})) == std::vector<double>{0.5});
  CHECK_THAT(dirrep::right_pvalues(StudyVector({1.6448536269514722}))[0], WithinAbs(0.05, 1e-12));

  // z and -z give p and 1-p elementwise (up to rounding), and the left-sided
  // vector is the bitwise mirror.
  std::mt19937 gen(11);
  const auto z = random_z(gen, 9);
  auto neg = z;
  for (auto& v : neg) v = -v;
  const auto p = dirrep::right_pvalues(StudyVector(z));
  const auto p_neg = dirrep::right_pvalues(StudyVector(neg));
  const auto q = dirrep::left_pvalues(StudyVector(z));
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK_THAT(p_neg[i], WithinAbs(1.0 - p[i], 1e-15));
    CHECK(p_neg[i] == q[i]);
  }
}

TEST_CASE("combine: worked examples", "[pc]") {
  CHECK(dirrep::combine({0.4, 0.4}, 2, Combiner::Bonferroni) == 0.4);
  // global null r=1 reduces to the plain factor-n correction
  CHECK_THAT(dirrep::combine({0.01, 0.5, 0.9}, 1, Combiner::Bonferroni), WithinAbs(0.03, 1e-15));
  CHECK_THAT(dirrep::combine({0.02, 0.03, 0.8}, 2, Combiner::Sidak),
             WithinAbs(1.0 - (1.0 - 0.03) * (1.0 - 0.03), 1e-15));
  CHECK_THAT(dirrep::combine({0.02, 0.03, 0.8}, 2, Combiner::Sidak), WithinAbs(0.0591, 1e-12));

  CHECK_THROWS_AS(dirrep::combine({0.1, 0.2}, 0, Combiner::Bonferroni), std::domain_error);
  CHECK_THROWS_AS(dirrep::combine({0.1, 0.2}, 3, Combiner::Bonferroni), std::domain_error);
  CHECK_THROWS_AS(dirrep::combine({}, 1, Combiner::Bonferroni), std::domain_error);
  CHECK_THROWS_AS(dirrep::combine({0.1, 1.2}, 1, Combiner::Bonferroni), std::domain_error);
  CHECK_THROWS_AS(dirrep::combine({-0.1}, 1, Combiner::Bonferroni), std::domain_error);

  // a zero p-value sends the Fisher statistic to +inf: tail mass 0
  CHECK(dirrep::combine({0.0, 0.3, 0.4}, 1, Combiner::Fisher) == 0.0);
  CHECK(dirrep::combine({0.0, 0.3, 0.4}, 2, Combiner::Simes) <= 1.0);
}

TEST_CASE("combine agrees with the straight-line formula oracle", "[pc]") {
  std::mt19937 gen(20240810);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> pick_n(1, 12);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = pick_n(gen);
    std::uniform_int_distribution<int> pick_r(1, n);
    const int r = pick_r(gen);
    std::vector<double> p(n);
    for (auto& v : p) v = unif(gen);
    if (rep % 7 == 0 && n > 1) p[1] = p[0];  // ties
    for (Combiner c : kAllCombiners)
      CHECK_THAT(dirrep::combine(p, r, c), WithinAbs(oracle::combine_reference(p, r, c), 1e-12));
  }
}

TEST_CASE("pc_pair: worked examples and the Bonferroni duality", "[pc]") {
  const StudyVector s({3.0, 3.0, 3.0});
  const auto pair = dirrep::pc_pair(s, 2, Combiner::Bonferroni);
  CHECK_THAT(pair.p_plus, WithinAbs(0.0026997960632601926, 1e-14));  // 2(1 - Phi(3))
  CHECK(pair.p_minus == 1.0);                                        // min(1, 2 Phi(3))

  // identical zero inputs: the construction is symmetric
  const auto zero = dirrep::pc_pair(StudyVector(std::vector<double>(5, 0.0)), 3, Combiner::Fisher);
  CHECK(zero.p_plus == zero.p_minus);

  CHECK_THROWS_AS(dirrep::pc_pair(s, 4, Combiner::Bonferroni), std::domain_error);

  // duality: combine(left, r) equals min(1, (n-r+1) (1 - p_(n-r+1))) from
  // the sorted right-sided p-values, since q_(r) = 1 - p_(n-r+1)
  std::mt19937 gen(5);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 10;
    const StudyVector sv(random_z(gen, n));
    const int r = 2 + rep % (n - 1);
    const auto pp = dirrep::pc_pair(sv, r, Combiner::Bonferroni);
    auto sorted_right = dirrep::right_pvalues(sv);
    std::sort(sorted_right.begin(), sorted_right.end());
    const double direct = std::min(1.0, (n - r + 1) * (1.0 - sorted_right[n - r]));
    CHECK_THAT(pp.p_minus, WithinAbs(direct, 1e-12));

    // the uncapped product agrees between the two routes as well
    auto sorted_left = dirrep::left_pvalues(sv);
    std::sort(sorted_left.begin(), sorted_left.end());
    const double uncapped = dirrep::bonferroni_uncapped(sorted_left, r);
    CHECK(std::min(1.0, uncapped) == pp.p_minus);
    CHECK_THAT(uncapped, WithinAbs((n - r + 1) * (1.0 - sorted_right[n - r]), 1e-12));
  }
}

TEST_CASE("pc_pair swaps exactly under sign flips", "[pc]") {
  std::mt19937 gen(17);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 12;
    const auto z = random_z(gen, n);
    auto neg = z;
    for (auto& v : neg) v = -v;
    const int r = 2 + rep % (n - 1);
    for (Combiner c : kAllCombiners) {
      const auto a = dirrep::pc_pair(StudyVector(z), r, c);
      const auto b = dirrep::pc_pair(StudyVector(neg), r, c);
      CHECK(a.p_plus == b.p_minus);
      CHECK(a.p_minus == b.p_plus);
    }
  }
}

TEST_CASE("combined p-values ignore the order of studies", "[pc]") {
  std::mt19937 gen(23);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + rep % 10;
    const auto z = random_z(gen, n);
    auto shuffled = z;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    const int r = 2 + rep % (n - 1);
    for (Combiner c : kAllCombiners) {
      const auto a = dirrep::pc_pair(StudyVector(z), r, c);
      const auto b = dirrep::pc_pair(StudyVector(shuffled), r, c);
      CHECK(a.p_plus == b.p_plus);
      CHECK(a.p_minus == b.p_minus);
    }
  }
}

TEST_CASE("raising any z weakly moves the combined pair", "[pc]") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> bump(0.01, 2.0);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 2 + rep % 10;
    auto z = random_z(gen, n);
    const int r = 2 + rep % (n - 1);
    const int i = rep % n;
    for (Combiner c : kAllCombiners) {
      const auto before = dirrep::pc_pair(StudyVector(z), r, c);
      auto raised = z;
      raised[i] += bump(gen);
      const auto after = dirrep::pc_pair(StudyVector(raised), r, c);
      CHECK(after.p_plus <= before.p_plus + 1e-12);
      CHECK(after.p_minus >= before.p_minus - 1e-12);
    }
  }
}

TEST_CASE("combined p-values are stochastically no smaller than uniform under the null",
          "[pc][sim]") {
  // theta = 0, ECDF at {0.01, 0.05, 0.1} must stay within Monte Carlo noise
  // of the uniform line for every combiner.
  const long long reps = 100000;
  const double points[] = {0.01, 0.05, 0.1};
  for (int n : {3, 10, 20}) {
    const int r = (n + 3) / 2;
    long long below_plus[4][3] = {};
    long long below_minus[4][3] = {};
    dirrep::NormalStream stream(777, static_cast<std::uint64_t>(n));
    std::vector<double> z(n);
    for (long long rep = 0; rep < reps; ++rep) {
      for (auto& v : z) v = stream.next();
      const StudyVector s(z);
      for (int ci = 0; ci < 4; ++ci) {
        const auto pair = dirrep::pc_pair(s, r, kAllCombiners[ci]);
        for (int pi = 0; pi < 3; ++pi) {
          below_plus[ci][pi] += pair.p_plus <= points[pi];
          below_minus[ci][pi] += pair.p_minus <= points[pi];
        }
      }
    }
    for (int ci = 0; ci < 4; ++ci) {
      for (int pi = 0; pi < 3; ++pi) {
        const double x = points[pi];
        const double bound = x + 3.0 * std::sqrt(x * (1.0 - x) / reps);
        CHECK(static_cast<double>(below_plus[ci][pi]) / reps <= bound);
        CHECK(static_cast<double>(below_minus[ci][pi]) / reps <= bound);
      }
    }
  }
}
