#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "genhankel/link.hpp"
#include "genhankel/linear_rep.hpp"
#include "genhankel/words.hpp"

namespace genhankel {

enum class LimitMethod { mc, catalan_recursion, finite_n, closed_form };

const char* to_string(LimitMethod m);

/// An estimate of the word limit p_theta(w).
struct WordLimitEstimate {
  Word word;
  double theta = 0.0;
  LimitMethod method = LimitMethod::mc;
  double value = 0.0;
  double std_error = 0.0;  // 0 for exact methods
  std::int64_t samples = 0;
  std::int64_t gamma_admissible_count = 0;
  Closure closure = Closure::consistent;
};

/// floor(2 theta): the largest |gamma_s| in A_theta.
std::int64_t gamma_bound(double theta);

/// floor(theta), exact when theta is an integer up to rounding.
std::int64_t theta_floor(double theta);

bool is_integer_theta(double theta);

/// Number of gamma in A_theta^k with a_{2k}(gamma) = 0 that survive interval
/// pruning: every interior vertex nu_i = L_i(nu) + a_i(gamma) must be able
/// to land in (0, theta) for some nu in (0, theta)^{k+1}. Returns 0 for
/// inconsistent closure.
std::int64_t count_admissible_gammas(const LinearRep& rep, double theta);

/// The admissible gamma vectors themselves (indexed by letter id).
std::vector<std::vector<std::int64_t>> admissible_gammas(const LinearRep& rep, double theta);

inline constexpr std::int64_t kDefaultMcSamples = 1'000'000;

/// Monte Carlo evaluation of the word-limit integral. Every admissible gamma
/// shares the same nu samples: each sample contributes the number of gamma
/// vectors whose interior vertices all fall in (0, theta). Blocks of samples
/// use derived RNG streams and are reduced in block order, so the result does
/// not depend on the thread count.
WordLimitEstimate word_limit_mc(const Word& w, double theta,
                                std::int64_t samples = kDefaultMcSamples,
                                std::uint64_t seed = 0);

/// Single-threaded evaluation of the same integral done gamma by gamma: one
/// independent sample stream per admissible gamma, binomial errors added in
/// quadrature. Statistically equivalent to word_limit_mc, numerically not.
WordLimitEstimate word_limit_mc_reference(const Word& w, double theta, std::int64_t samples,
                                          std::uint64_t seed);

struct CatalanRecursionState {
  std::vector<double> coefficients;  // A_j, j = 0..k-1
  std::vector<double> alpha_trace;   // alpha used when growing to length 4, 6, ..., 2k
  std::vector<int> m_trace;          // dependence counts used at each step
  std::vector<int> pivot_trace;      // 1-based position i0 of the inserted double letter
};

struct CatalanResult {
  WordLimitEstimate estimate;
  CatalanRecursionState state;
  double recursion_value = 0.0;  // the polynomial, before any regime shortcut
};

/// Number of non-generating vertices of `w` (closing vertex excluded) whose
/// nu-part involves the generating variable behind vertex `pivot_vertex`.
int dependence_count(const LinearRep& rep, int pivot_vertex);

/// alpha from the dependence count m.
double catalan_alpha(double theta, int m);

/// p_theta(w) for Catalan w via the coefficient recursion. theta <= 1 returns 1
/// and integer theta returns theta^{k-1}; the recursion state is filled in
/// every case. Throws for non-Catalan words.
CatalanResult word_limit_catalan(const Word& w, double theta);

inline constexpr std::int64_t kDefaultCountBudget = 1'000'000'000;

struct ExactCount {
  std::int64_t count = 0;
  double normalized = 0.0;  // count / n^{k+1}
  std::int64_t work_estimate = 0;
};

/// Work bound used by the budget check: n^{k+1} choices of generating
/// vertices times ceil(n / a_n) per interior non-generating vertex.
std::int64_t exact_count_work(const Word& w, std::int64_t n, const LinkSpec& link);

/// |Pi*(w)| at dimension n: circuits whose link values agree wherever w's
/// letters agree. Generating vertices range over [1, n]; each non-generating
/// vertex branches over its residue class; the circuit closes when pi(2k)
/// = pi(0) satisfies the last match. Parallel over pi(0).
/// Throws BudgetExceeded when exact_count_work exceeds `budget`.
ExactCount count_pi_star_exact(const Word& w, std::int64_t n, const LinkSpec& link,
                               std::int64_t budget = kDefaultCountBudget);

/// Naive enumeration of all n^{2k} circuits, checking every match with
/// link_value. Small n only.
ExactCount count_pi_star_reference(const Word& w, std::int64_t n, const LinkSpec& link,
                                   std::int64_t budget = 200'000'000);

WordLimitEstimate word_limit_finite_n(const Word& w, std::int64_t n, double theta,
                                      std::int64_t budget = kDefaultCountBudget);

enum class MomentMethod { mc, mixed };

struct MomentEstimate {
  double theta = 0.0;
  int k = 0;
  double value = 0.0;
  double std_error = 0.0;
  std::vector<WordLimitEstimate> words;
};

inline constexpr int kMaxMcMomentK = 4;

/// beta_{2k} = sum of p_theta(w) over pair-matched words of length 2k.
/// Word i uses seed stream i. mixed evaluates Catalan words by recursion.
MomentEstimate lsd_moment(double theta, int k, MomentMethod method,
                          std::int64_t samples = kDefaultMcSamples, std::uint64_t seed = 0);

}  // namespace genhankel
