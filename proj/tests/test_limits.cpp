#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "genhankel/error.hpp"
#include "genhankel/laws.hpp"
#include "genhankel/limits.hpp"
#include "genhankel/rng.hpp"

using namespace genhankel;

namespace {

// Catalan words: every non-generating vertex j_s sits in the residue class of
// vertex i_s - 1, so the circuit splits into independent groups, one per
// generating vertex g, and the word limit is the product of f(m_g) with m_g
// the number of interior vertices hanging off g.
double catalan_product_oracle(const Word& w, double theta) {
  const double F = std::floor(theta + 1e-12);
  const auto f = [&](int m) {
    return (1.0 - F / theta) * std::pow(F + 1.0, m + 1) + ((F + 1.0) / theta - 1.0) * std::pow(F, m + 1);
  };
  const int len = w.length();
  std::vector<int> root(static_cast<std::size_t>(len + 1));
  std::map<int, int> hanging;
  root[0] = 0;
  hanging[0] = 0;
  for (int v = 1; v <= len; ++v) {
    const auto [first, second] = w.matches()[static_cast<std::size_t>(w.at(v))];
    if (v == first) {
      root[static_cast<std::size_t>(v)] = v;
      hanging[v] = 0;
    } else {
      root[static_cast<std::size_t>(v)] = root[static_cast<std::size_t>(first - 1)];
      if (v < len) ++hanging[root[static_cast<std::size_t>(v)]];
    }
  }
  double p = 1.0;
  for (const auto& [g, m] : hanging) p *= f(m);
  return p;
}

class ThreadCount {
 public:
  explicit ThreadCount(int n) {
#ifdef _OPENMP
    saved_ = omp_get_max_threads();
    omp_set_num_threads(n);
#else
    (void)n;
#endif
  }
  ~ThreadCount() {
#ifdef _OPENMP
    omp_set_num_threads(saved_);
#endif
  }

 private:
  int saved_ = 1;
};

}  // namespace

TEST_SUITE("limits") {

TEST_CASE("gamma range helpers") {
  CHECK(gamma_bound(0.5) == 1);
  CHECK(gamma_bound(0.3) == 0);
  CHECK(gamma_bound(1.3) == 2);
  CHECK(gamma_bound(2.5) == 5);
  CHECK(theta_floor(2.0) == 2);
  CHECK(theta_floor(1.9999999999999998) == 2);
  CHECK(theta_floor(0.75) == 0);
  CHECK(is_integer_theta(3.0));
  CHECK_FALSE(is_integer_theta(0.5));
  CHECK_FALSE(is_integer_theta(2.5));
  CHECK(std::string(to_string(LimitMethod::catalan_recursion)) == "catalan-recursion");
  CHECK(std::string(to_string(LimitMethod::finite_n)) == "finite-n");
}

TEST_CASE("only gamma = 0 survives in the Hankel regime") {
  for (double theta : {0.2, 0.4, 0.5}) {
    for (int k = 1; k <= 4; ++k) {
      for (const auto& w : enumerate_pair_matched(k)) {
        for (const auto& g : admissible_gammas(linear_representation(w), theta))
          for (auto x : g) CHECK(x == 0);
        const auto n = count_admissible_gammas(linear_representation(w), theta);
        CHECK(n == (is_symmetric(w) ? 1 : 0));
      }
    }
  }
}

TEST_CASE("admissible gammas close the circuit") {
  for (double theta : {1.3, 2.5}) {
    for (const auto& w : enumerate_pair_matched(3)) {
      const auto rep = linear_representation(w);
      const auto gs = admissible_gammas(rep, theta);
      CHECK(static_cast<std::int64_t>(gs.size()) == count_admissible_gammas(rep, theta));
      for (const auto& g : gs) {
        std::int64_t a = 0;
        for (std::size_t s = 0; s < g.size(); ++s) {
          a += rep.vertex.back().gamma[s] * g[s];
          CHECK(std::abs(g[s]) <= gamma_bound(theta));
        }
        CHECK(a == 0);
      }
    }
  }
}

TEST_CASE("word limit MC examples") {
  const auto aa = word_limit_mc(parse_word("aa"), 1.7, 1000, 1);
  CHECK(aa.value == 1.0);
  CHECK(aa.std_error == 0.0);
  CHECK(aa.gamma_admissible_count == 1);

  const auto one = word_limit_mc(parse_word("abba"), 1.0, 1'000'000, 2);
  CHECK(std::abs(one.value - 1.0) <= 3.0 * one.std_error + 1e-12);

  const auto r = word_limit_mc(parse_word("abba"), 1.5, 1'000'000, 3);
  CHECK(std::abs(r.value - 5.0 / 3.0) <= 3.0 * r.std_error);
  CHECK(r.samples == 1'000'000);
  CHECK(r.method == LimitMethod::mc);

  const auto ab = word_limit_mc(parse_word("abab"), 2.5, 1000, 4);
  CHECK(ab.value == 0.0);
  CHECK(ab.closure == Closure::inconsistent);

  CHECK_THROWS_AS(word_limit_mc(parse_word("aa"), 1.0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(word_limit_mc(parse_word("aa"), 0.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(word_limit_mc(parse_word("aa"), -1.0, 10, 1), std::invalid_argument);
}

TEST_CASE("MC agrees with the gamma-by-gamma reference") {
  for (double theta : {0.75, 1.3, 2.5}) {
    for (const char* s : {"aabb", "abba", "abcabc", "abccba", "aabccb"}) {
      const auto w = parse_word(s);
      const auto a = word_limit_mc(w, theta, 200'000, 10);
      const auto b = word_limit_mc_reference(w, theta, 200'000, 11);
      CAPTURE(s);
      CAPTURE(theta);
      CHECK(a.gamma_admissible_count == b.gamma_admissible_count);
      CHECK(std::abs(a.value - b.value) <= 4.0 * std::hypot(a.std_error, b.std_error));
    }
  }
}

TEST_CASE("MC result does not depend on thread count") {
  const auto w = parse_word("abcabc");
  WordLimitEstimate one, many;
  {
    ThreadCount t(1);
    one = word_limit_mc(w, 2.5, 100'000, 5);
  }
  {
    ThreadCount t(4);
    many = word_limit_mc(w, 2.5, 100'000, 5);
  }
  CHECK(one.value == many.value);
  CHECK(one.std_error == many.std_error);
}

TEST_CASE("dependence count and alpha") {
  // abba -> aa at i0 = 2; the pivot vertex 1 governs vertex 3 only.
  const auto rep = linear_representation(parse_word("aa"));
  CHECK(dependence_count(rep, 0) == 0);
  CHECK(dependence_count(rep, 1) == 0);
  const auto rep2 = linear_representation(parse_word("abba"));
  CHECK(dependence_count(rep2, 1) == 1);
  CHECK(dependence_count(rep2, 0) == 0);
  CHECK(dependence_count(rep2, 3) == 1);
  CHECK(catalan_alpha(0.7, 3) == 1.0);
  CHECK(catalan_alpha(2.0, 1) == 0.0);
  // theta = 1.5, m = 0: (2 * 1/3) / (2 * 1/3 + 1/3)
  CHECK(catalan_alpha(1.5, 0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("Catalan recursion examples") {
  CHECK(word_limit_catalan(parse_word("aabb"), 1.5).estimate.value == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(word_limit_catalan(parse_word("abba"), 1.5).estimate.value == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(word_limit_catalan(parse_word("abba"), 2.0).estimate.value == 2.0);
  for (int k = 1; k <= 4; ++k)
    for (const auto& w : enumerate_pair_matched(k))
      if (is_catalan(w)) CHECK(word_limit_catalan(w, 0.7).estimate.value == 1.0);
  CHECK_THROWS_AS(word_limit_catalan(parse_word("abab"), 1.5), std::invalid_argument);
  CHECK_THROWS_AS(word_limit_catalan(parse_word("abcabc"), 1.5), std::invalid_argument);
  const auto r = word_limit_catalan(parse_word("abbcca"), 2.5);
  CHECK(r.estimate.method == LimitMethod::catalan_recursion);
  CHECK(r.estimate.std_error == 0.0);
  CHECK(r.state.alpha_trace.size() == 2);
  CHECK(r.state.m_trace.size() == 2);
  CHECK(r.state.pivot_trace.size() == 2);
}

TEST_CASE("Catalan recursion matches the per-group product formula") {
  for (double theta : {0.6, 1.0, 1.2, 1.5, 1.9, 2.0, 2.3, 2.5, 3.0, 3.7, 5.25}) {
    for (int k = 1; k <= 6; ++k) {
      for (const auto& w : enumerate_pair_matched(k)) {
        if (!is_catalan(w)) continue;
        const auto r = word_limit_catalan(w, theta);
        CAPTURE(w.str());
        CAPTURE(theta);
        const double oracle = catalan_product_oracle(w, theta);
        CHECK(r.recursion_value == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(r.estimate.value == doctest::Approx(oracle).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("Catalan table of length-4 words") {
  for (double theta = 0.1; theta < 5.0; theta += 0.1) {
    CHECK(word_limit_catalan(parse_word("aabb"), theta).estimate.value ==
          doctest::Approx(catalan4_word_limit(theta)).epsilon(1e-12));
    CHECK(word_limit_catalan(parse_word("abba"), theta).estimate.value ==
          doctest::Approx(catalan4_word_limit(theta)).epsilon(1e-12));
  }
}

TEST_CASE("Catalan coefficients, bounds and regimes") {
  for (double theta : {0.5, 1.0, 1.3, 2.0, 2.5, 3.0, 4.2}) {
    const double F = static_cast<double>(theta_floor(theta));
    for (int k = 1; k <= 5; ++k) {
      for (const auto& w : enumerate_pair_matched(k)) {
        if (!is_catalan(w)) continue;
        const auto r = word_limit_catalan(w, theta);
        double sum = 0.0;
        for (double a : r.state.coefficients) {
          CHECK(a >= 0.0);
          CHECK(a <= 1.0);
          sum += a;
        }
        CHECK(r.state.coefficients.size() == static_cast<std::size_t>(k));
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        const double p = r.estimate.value;
        CHECK(p >= std::pow(F, k - 1) * (1 - 1e-12));
        CHECK(p <= std::pow(F + 1.0, k - 1) * (1 + 1e-12));
        if (theta <= 1.0) CHECK(p == 1.0);
        if (theta > 1.0 && k > 1) CHECK(p > 1.0);
        if (is_integer_theta(theta)) {
          CHECK(p == doctest::Approx(std::pow(theta, k - 1)).epsilon(1e-14));
          CHECK(r.recursion_value == doctest::Approx(std::pow(theta, k - 1)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("exact counter examples") {
  const auto link1 = LinkSpec::theta_link(1.0);
  const auto aa = count_pi_star_exact(parse_word("aa"), 10, link1);
  CHECK(aa.count == 100);
  CHECK(aa.normalized == 1.0);
  const auto abab = count_pi_star_exact(parse_word("abab"), 24, link1);
  CHECK(abab.normalized <= 3.0 / 24);

  double prev = 1e9;
  for (std::int64_t n : {24, 48, 96}) {
    const auto c = word_limit_finite_n(parse_word("abba"), n, 1.5);
    const double err = std::abs(c.value - 5.0 / 3.0);
    CHECK(err <= prev);
    CHECK(err <= 8.0 / n);
    CHECK(c.samples == n);
    CHECK(c.method == LimitMethod::finite_n);
    prev = err;
  }
  CHECK_THROWS_AS(count_pi_star_exact(parse_word("abcabc"), 500, link1, 1000), BudgetExceeded);
  CHECK(exact_count_work(parse_word("abba"), 10, link1) == 1000 * 1);
}

TEST_CASE("exact counter agrees with brute force") {
  for (double theta : {0.5, 1.0, 1.3, 2.0, 2.5}) {
    for (std::int64_t n : {5, 7, 9}) {
      const auto link = LinkSpec::theta_link(theta);
      for (int k = 1; k <= 3; ++k) {
        for (const auto& w : enumerate_pair_matched(k)) {
          CAPTURE(w.str());
          CAPTURE(n);
          CAPTURE(theta);
          CHECK(count_pi_star_exact(w, n, link).count == count_pi_star_reference(w, n, link).count);
        }
      }
    }
  }
  const auto custom = LinkSpec::custom_modulus([](std::int64_t n) { return n / 2 + 1; }, "n/2+1");
  for (const auto& w : enumerate_pair_matched(3))
    CHECK(count_pi_star_exact(w, 8, custom).count == count_pi_star_reference(w, 8, custom).count);
}

TEST_CASE("exact counter does not depend on thread count") {
  const auto link = LinkSpec::theta_link(1.3);
  const auto w = parse_word("abcabc");
  std::int64_t one, many;
  {
    ThreadCount t(1);
    one = count_pi_star_exact(w, 30, link).count;
  }
  {
    ThreadCount t(3);
    many = count_pi_star_exact(w, 30, link).count;
  }
  CHECK(one == many);
}

TEST_CASE("finite-n counts approach the MC limit monotonically") {
  struct Case {
    const char* word;
    double theta;
  };
  std::vector<Case> cases;
  for (double theta : {0.5, 1.0, 1.3, 2.0, 2.5})
    for (const char* s : {"aa", "aabb", "abab", "abba"}) cases.push_back({s, theta});
  for (double theta : {1.3, 2.5})
    for (const char* s : {"aabbcc", "abcabc", "abccba", "abacbc"}) cases.push_back({s, theta});

  for (const auto& c : cases) {
    const auto w = parse_word(c.word);
    const auto mc = word_limit_mc(w, c.theta, 400'000, 21);
    const double four_sigma = 4.0 * mc.std_error;
    const std::int64_t grid[] = {24, 48, 96};
    double err[3];
    double C = 0.0;
    for (int i = 0; i < 3; ++i) {
      err[i] = std::abs(word_limit_finite_n(w, grid[i], c.theta).value - mc.value);
      C = std::max(C, static_cast<double>(grid[i]) * std::max(0.0, err[i] - four_sigma));
    }
    CAPTURE(std::string(c.word));
    CAPTURE(c.theta);
    CAPTURE(err[0]);
    CAPTURE(err[1]);
    CAPTURE(err[2]);
    CAPTURE(C);
    CHECK(err[1] <= err[0] + four_sigma);
    CHECK(err[2] <= err[1] + four_sigma);
  }
}

TEST_CASE("on theta-multiple sizes symmetric words sit on the limit and the rest decay like C/n") {
  struct Case {
    double theta;
    std::int64_t n1, n2;
  };
  for (const Case c : {Case{1.3, 26, 52}, Case{2.5, 20, 40}}) {
    const auto link = LinkSpec::theta_link(c.theta);
    for (int k = 1; k <= 3; ++k) {
      const auto words = enumerate_pair_matched(k);
      for (std::size_t i = 0; i < words.size(); ++i) {
        const Word& w = words[i];
        CAPTURE(w.str());
        CAPTURE(c.theta);
        const double v1 = count_pi_star_exact(w, c.n1, link).normalized;
        const double v2 = count_pi_star_exact(w, c.n2, link).normalized;
        if (is_symmetric(w)) {
          const auto mc = word_limit_mc(w, c.theta, 1'000'000, derive_seed(31, i + 100 * k));
          CHECK(std::abs(v1 - mc.value) <= 4.0 * mc.std_error + 1e-12);
          CHECK(std::abs(v2 - mc.value) <= 4.0 * mc.std_error + 1e-12);
        } else {
          CHECK(v2 > 0.0);
          CHECK(static_cast<double>(c.n2) * v2 == doctest::Approx(static_cast<double>(c.n1) * v1).epsilon(1e-3));
        }
      }
    }
  }
}

TEST_CASE("moment sums") {
  const auto m1 = lsd_moment(1.0, 2, MomentMethod::mixed, 200'000, 1);
  CHECK(m1.value == doctest::Approx(2.0));
  CHECK(m1.words.size() == 3);

  const auto m2 = lsd_moment(2.0, 3, MomentMethod::mc, 400'000, 2);
  // Integer theta: every sample hits exactly theta^(k-1) gamma vectors per symmetric word.
  CHECK(m2.value == 24.0);
  CHECK(m2.std_error == 0.0);

  const auto m3 = lsd_moment(1.5, 2, MomentMethod::mc, 1'000'000, 3);
  CHECK(std::abs(m3.value - 10.0 / 3.0) <= 4.0 * m3.std_error);
  const auto m3x = lsd_moment(1.5, 2, MomentMethod::mixed, 1000, 3);
  CHECK(m3x.value == doctest::Approx(beta4_closed_form(1.5)).epsilon(1e-12));
  CHECK(m3x.std_error == 0.0);

  for (double theta : {0.5, 1.3, 2.5}) CHECK(lsd_moment(theta, 1, MomentMethod::mc, 1000, 1).value == 1.0);
  CHECK_THROWS_AS(lsd_moment(1.0, 5, MomentMethod::mc, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(lsd_moment(1.0, 0, MomentMethod::mc, 10, 1), std::invalid_argument);
}

TEST_CASE("moment order relations") {
  for (int k = 1; k <= 3; ++k) {
    const auto hankel = lsd_moment(0.5, k, MomentMethod::mc, 200'000, 100);
    for (double theta : {0.75, 1.0, 1.5, 2.0}) {
      const auto m = lsd_moment(theta, k, MomentMethod::mc, 200'000, 200);
      CHECK(m.value >= hankel.value - 4.0 * std::hypot(m.std_error, hankel.std_error));
    }
    for (double theta : {0.6, 0.75, 0.9}) {
      const auto m = lsd_moment(theta, k, MomentMethod::mc, 200'000, 300);
      CHECK(m.value <= static_cast<double>(factorial(k)) + 4.0 * m.std_error);
    }
  }
}

}  // TEST_SUITE
