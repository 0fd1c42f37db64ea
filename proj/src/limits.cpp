#include "genhankel/limits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "genhankel/error.hpp"
#include "genhankel/rng.hpp"

namespace genhankel {

const char* to_string(LimitMethod m) {
  switch (m) {
    case LimitMethod::mc: return "mc";
    case LimitMethod::catalan_recursion: return "catalan-recursion";
    case LimitMethod::finite_n: return "finite-n";
    case LimitMethod::closed_form: return "closed-form";
  }
  return "unknown";
}

namespace {

std::int64_t snapped_floor(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

void check_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("theta must be a positive finite number");
}

// One letter per entry, ordered by the position of its second occurrence.
// gamma coefficients refer to earlier entries of the same order.
struct ClosingStep {
  int vertex = 0;
  bool closing = false;  // vertex == 2k
  std::vector<std::int64_t> nu;
  std::vector<std::int64_t> gamma;  // over closing-order slots 0..idx-1
  double nu_lo = 0.0;               // range of the nu-part over (0, theta)^{k+1}
  double nu_hi = 0.0;
};

std::vector<ClosingStep> closing_order(const LinearRep& rep, double theta) {
  const Word& w = rep.word;
  std::vector<int> letters(static_cast<std::size_t>(w.k()));
  std::iota(letters.begin(), letters.end(), 0);
  std::sort(letters.begin(), letters.end(), [&](int a, int b) {
    return w.matches()[static_cast<std::size_t>(a)].second < w.matches()[static_cast<std::size_t>(b)].second;
  });
  std::vector<ClosingStep> steps;
  for (std::size_t idx = 0; idx < letters.size(); ++idx) {
    ClosingStep st;
    st.vertex = w.matches()[static_cast<std::size_t>(letters[idx])].second;
    st.closing = st.vertex == w.length();
    const auto& vr = rep.vertex[static_cast<std::size_t>(st.vertex)];
    st.nu = vr.nu;
    for (std::size_t t = 0; t < idx; ++t) st.gamma.push_back(vr.gamma[static_cast<std::size_t>(letters[t])]);
    // The letter's own offset always enters with coefficient -1.
    if (vr.gamma[static_cast<std::size_t>(letters[idx])] != -1)
      throw std::logic_error("linear representation: unexpected own-gamma coefficient");
    for (std::size_t t = idx + 1; t < letters.size(); ++t)
      if (vr.gamma[static_cast<std::size_t>(letters[t])] != 0)
        throw std::logic_error("linear representation: depends on a later gamma");
    for (auto c : st.nu) {
      if (c < 0) st.nu_lo += static_cast<double>(c) * theta;
      if (c > 0) st.nu_hi += static_cast<double>(c) * theta;
    }
    steps.push_back(std::move(st));
  }
  return steps;
}

std::int64_t partial_offset(const ClosingStep& st, const std::vector<std::int64_t>& gamma) {
  std::int64_t a = 0;
  for (std::size_t t = 0; t < st.gamma.size(); ++t) a += st.gamma[t] * gamma[t];
  return a;
}

// Interval feasibility of nu = L(nu) + a in (0, theta).
bool interval_feasible(const ClosingStep& st, double a, double theta) {
  if (st.nu_lo == st.nu_hi) return a + st.nu_lo > 0.0 && a + st.nu_lo < theta;
  return st.nu_lo + a < theta && st.nu_hi + a > 0.0;
}

template <typename Visit>
void enumerate_gammas(const std::vector<ClosingStep>& steps, double theta, std::int64_t bound,
                      std::vector<std::int64_t>& gamma, std::size_t idx, Visit&& visit) {
  const ClosingStep& st = steps[idx];
  const std::int64_t rest = partial_offset(st, gamma);
  if (st.closing) {
    // a_{2k}(gamma) = rest - gamma_s must vanish.
    if (std::abs(rest) <= bound) {
      gamma[idx] = rest;
      visit(gamma);
    }
    return;
  }
  for (std::int64_t g = -bound; g <= bound; ++g) {
    if (!interval_feasible(st, static_cast<double>(rest - g), theta)) continue;
    gamma[idx] = g;
    enumerate_gammas(steps, theta, bound, gamma, idx + 1, visit);
  }
}

// Number of gamma vectors for which every interior vertex lands in (0, theta),
// for the nu-parts `base` (one per closing step) of a single sample.
std::int64_t count_hits(const std::vector<ClosingStep>& steps, const double* base, double theta,
                        std::int64_t bound, std::int64_t* gamma, std::size_t idx) {
  const ClosingStep& st = steps[idx];
  std::int64_t rest = 0;
  for (std::size_t t = 0; t < st.gamma.size(); ++t) rest += st.gamma[t] * gamma[t];
  if (st.closing) return std::abs(rest) <= bound ? 1 : 0;
  // Need 0 < x - g < theta with x = base + rest.
  const double x = base[idx] + static_cast<double>(rest);
  const auto g_lo = std::max<std::int64_t>(-bound, static_cast<std::int64_t>(std::floor(x - theta)) + 1);
  const auto g_hi = std::min<std::int64_t>(bound, static_cast<std::int64_t>(std::ceil(x)) - 1);
  std::int64_t total = 0;
  for (std::int64_t g = g_lo; g <= g_hi; ++g) {
    const double y = x - static_cast<double>(g);
    if (!(y > 0.0 && y < theta)) continue;
    gamma[idx] = g;
    total += count_hits(steps, base, theta, bound, gamma, idx + 1);
  }
  return total;
}

constexpr std::int64_t kMcBlock = 1 << 14;

}  // namespace

std::int64_t gamma_bound(double theta) { return snapped_floor(2.0 * theta); }

std::int64_t theta_floor(double theta) { return snapped_floor(theta); }

bool is_integer_theta(double theta) {
  return theta >= 1.0 && std::abs(theta - std::round(theta)) <= 1e-12 * theta;
}

std::vector<std::vector<std::int64_t>> admissible_gammas(const LinearRep& rep, double theta) {
  check_theta(theta);
  std::vector<std::vector<std::int64_t>> out;
  if (closure_type(rep) == Closure::inconsistent) return out;
  const auto steps = closing_order(rep, theta);
  std::vector<std::int64_t> gamma(steps.size(), 0);
  enumerate_gammas(steps, theta, gamma_bound(theta), gamma, 0,
                   [&](const std::vector<std::int64_t>& g) {
                     // Reindex from closing order to letter ids.
                     std::vector<std::int64_t> by_letter(g.size());
                     for (std::size_t i = 0; i < steps.size(); ++i) {
                       const int letter = rep.word.at(steps[i].vertex);
                       by_letter[static_cast<std::size_t>(letter)] = g[i];
                     }
                     out.push_back(std::move(by_letter));
                   });
  return out;
}

std::int64_t count_admissible_gammas(const LinearRep& rep, double theta) {
  check_theta(theta);
  if (closure_type(rep) == Closure::inconsistent) return 0;
  const auto steps = closing_order(rep, theta);
  std::vector<std::int64_t> gamma(steps.size(), 0);
  std::int64_t count = 0;
  enumerate_gammas(steps, theta, gamma_bound(theta), gamma, 0,
                   [&](const std::vector<std::int64_t>&) { ++count; });
  return count;
}

WordLimitEstimate word_limit_mc(const Word& w, double theta, std::int64_t samples,
                                std::uint64_t seed) {
  check_theta(theta);
  if (samples <= 0) throw std::invalid_argument("word_limit_mc: samples must be > 0");
  const LinearRep rep = linear_representation(w);
  WordLimitEstimate est;
  est.word = w;
  est.theta = theta;
  est.method = LimitMethod::mc;
  est.samples = samples;
  est.closure = closure_type(rep);
  if (est.closure == Closure::inconsistent) return est;
  est.gamma_admissible_count = count_admissible_gammas(rep, theta);

  const auto steps = closing_order(rep, theta);
  const std::int64_t bound = gamma_bound(theta);
  const std::size_t gens = rep.generating.size();
  const std::int64_t blocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<double> block_sum(static_cast<std::size_t>(blocks), 0.0);
  std::vector<double> block_sq(static_cast<std::size_t>(blocks), 0.0);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < blocks; ++b) {
    Engine eng = make_engine(seed, static_cast<std::uint64_t>(b));
    const std::int64_t begin = b * kMcBlock;
    const std::int64_t end = std::min(samples, begin + kMcBlock);
    std::vector<double> nu(gens), base(steps.size());
    std::vector<std::int64_t> gamma(steps.size(), 0);
    std::int64_t sum = 0, sq = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      for (auto& x : nu) x = theta * uniform_open(eng);
      for (std::size_t s = 0; s < steps.size(); ++s) {
        double v = 0.0;
        for (std::size_t g = 0; g < gens; ++g) v += static_cast<double>(steps[s].nu[g]) * nu[g];
        base[s] = v;
      }
      const std::int64_t hits = count_hits(steps, base.data(), theta, bound, gamma.data(), 0);
      sum += hits;
      sq += hits * hits;
    }
    block_sum[static_cast<std::size_t>(b)] = static_cast<double>(sum);
    block_sq[static_cast<std::size_t>(b)] = static_cast<double>(sq);
  }

  double sum = 0.0, sq = 0.0;
  for (std::int64_t b = 0; b < blocks; ++b) {
    sum += block_sum[static_cast<std::size_t>(b)];
    sq += block_sq[static_cast<std::size_t>(b)];
  }
  const double N = static_cast<double>(samples);
  const double mean = sum / N;
  const double var = samples > 1 ? std::max(0.0, (sq - N * mean * mean) / (N - 1.0)) : 0.0;
  est.value = mean;
  est.std_error = std::sqrt(var / N);
  return est;
}

WordLimitEstimate word_limit_mc_reference(const Word& w, double theta, std::int64_t samples,
                                          std::uint64_t seed) {
  check_theta(theta);
  if (samples <= 0) throw std::invalid_argument("word_limit_mc_reference: samples must be > 0");
  const LinearRep rep = linear_representation(w);
  WordLimitEstimate est;
  est.word = w;
  est.theta = theta;
  est.method = LimitMethod::mc;
  est.samples = samples;
  est.closure = closure_type(rep);
  if (est.closure == Closure::inconsistent) return est;

  const auto gammas = admissible_gammas(rep, theta);
  est.gamma_admissible_count = static_cast<std::int64_t>(gammas.size());
  std::vector<int> interior;
  for (int v = 1; v < w.length(); ++v)
    if (!rep.is_generating(v)) interior.push_back(v);

  const std::size_t gens = rep.generating.size();
  std::vector<double> nu(gens);
  double var_total = 0.0;
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    const auto& gamma = gammas[gi];
    std::vector<double> offset;
    for (int v : interior) {
      const auto& vr = rep.vertex[static_cast<std::size_t>(v)];
      std::int64_t a = 0;
      for (std::size_t s = 0; s < gamma.size(); ++s) a += vr.gamma[s] * gamma[s];
      offset.push_back(static_cast<double>(a));
    }
    Engine eng = make_engine(seed, gi);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < samples; ++i) {
      for (auto& x : nu) x = theta * uniform_open(eng);
      bool inside = true;
      for (std::size_t q = 0; q < interior.size() && inside; ++q) {
        const auto& vr = rep.vertex[static_cast<std::size_t>(interior[q])];
        double y = offset[q];
        for (std::size_t g = 0; g < gens; ++g) y += static_cast<double>(vr.nu[g]) * nu[g];
        inside = y > 0.0 && y < theta;
      }
      hits += inside ? 1 : 0;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    est.value += p;
    var_total += p * (1.0 - p) / static_cast<double>(samples);
  }
  est.std_error = std::sqrt(var_total);
  return est;
}

int dependence_count(const LinearRep& rep, int pivot_vertex) {
  const auto& pivot = rep.vertex[static_cast<std::size_t>(pivot_vertex)].nu;
  int slot = -1;
  for (std::size_t g = 0; g < pivot.size(); ++g) {
    if (pivot[g] == 0) continue;
    if (slot >= 0 || pivot[g] != 1)
      throw std::invalid_argument("dependence_count: pivot is not a single generating variable");
    slot = static_cast<int>(g);
  }
  if (slot < 0) throw std::invalid_argument("dependence_count: pivot has no generating variable");
  // Vertex 2k is vertex 0 of the circuit, never a separate choice.
  int m = 0;
  for (int v = 1; v < rep.word.length(); ++v) {
    if (rep.is_generating(v)) continue;
    if (rep.vertex[static_cast<std::size_t>(v)].nu[static_cast<std::size_t>(slot)] != 0) ++m;
  }
  return m;
}

double catalan_alpha(double theta, int m) {
  const double f = static_cast<double>(theta_floor(theta));
  const double rich = std::pow(f + 1.0, m + 1) * (1.0 - f / theta);
  const double poor = std::pow(f, m + 1) * ((f + 1.0) / theta - 1.0);
  return rich / (rich + poor);
}

CatalanResult word_limit_catalan(const Word& w, double theta) {
  check_theta(theta);
  if (!is_catalan(w))
    throw std::invalid_argument("word_limit_catalan: '" + w.str() + "' is not a Catalan word");
  const int k = w.k();

  // Reduction chain w = w_k -> ... -> w_1 = aa, with the deleted positions.
  std::vector<Word> chain{w};
  std::vector<int> removed;
  while (chain.back().k() > 1) {
    auto red = reduce_double(chain.back());
    removed.push_back(red.position);
    chain.push_back(std::move(red.word));
  }

  CatalanResult res;
  auto& st = res.state;
  std::vector<double> A{1.0};
  // Grow from aa back to w: step l inserts a double into w_{l-1}.
  for (int l = 2; l <= k; ++l) {
    const Word& hat = chain[static_cast<std::size_t>(k - l + 1)];
    const int i0 = removed[static_cast<std::size_t>(k - l)];
    const LinearRep rep = linear_representation(hat);
    const int m = dependence_count(rep, i0 - 1);
    const double alpha = catalan_alpha(theta, m);
    st.alpha_trace.push_back(alpha);
    st.m_trace.push_back(m);
    st.pivot_trace.push_back(i0);

    std::vector<double> next(static_cast<std::size_t>(l), 0.0);
    for (int j = 0; j < l; ++j) {
      double v = 0.0;
      if (j <= l - 2) v += alpha * A[static_cast<std::size_t>(j)];
      if (j >= 1) v += (1.0 - alpha) * A[static_cast<std::size_t>(j - 1)];
      next[static_cast<std::size_t>(j)] = v;
    }
    A = std::move(next);
  }
  st.coefficients = A;

  const double f = static_cast<double>(theta_floor(theta));
  double poly = 0.0;
  for (int j = 0; j < k; ++j)
    poly += A[static_cast<std::size_t>(j)] * std::pow(f, j) * std::pow(f + 1.0, k - 1 - j);
  res.recursion_value = poly;

  auto& est = res.estimate;
  est.word = w;
  est.theta = theta;
  est.method = LimitMethod::catalan_recursion;
  est.closure = Closure::consistent;
  if (theta <= 1.0) {
    est.value = 1.0;
  } else if (is_integer_theta(theta)) {
    est.value = std::pow(std::round(theta), k - 1);
  } else {
    est.value = poly;
  }
  return res;
}

std::int64_t exact_count_work(const Word& w, std::int64_t n, const LinkSpec& link) {
  const std::int64_t a = link.modulus(n);
  const std::int64_t per_class = (n + a - 1) / a;
  const long double work = std::pow(static_cast<long double>(n), w.k() + 1) *
                           std::pow(static_cast<long double>(per_class), std::max(0, w.k() - 1));
  if (work > 9.0e18L) return INT64_MAX;
  return static_cast<std::int64_t>(work);
}

namespace {

struct CountPlan {
  int len = 0;
  std::int64_t n = 0;
  std::int64_t a = 0;
  std::vector<int> first;  // per position: first occurrence of its letter, or -1 if generating
};

std::int64_t mod_pos(std::int64_t x, std::int64_t a) {
  const std::int64_t r = x % a;
  return r < 0 ? r + a : r;
}

// Number of v in [1, n] with v = r (mod a), 0 <= r < a.
std::int64_t class_size(const CountPlan& plan, std::int64_t r) {
  if (r == 0) return plan.n / plan.a;
  return r <= plan.n ? (plan.n - r) / plan.a + 1 : 0;
}

std::int64_t count_from(const CountPlan& plan, std::int64_t* pi, int pos) {
  if (pos == plan.len) {
    const int i = plan.first[static_cast<std::size_t>(pos)];
    const std::int64_t r = mod_pos(pi[i - 1] + pi[i] - pi[pos - 1], plan.a);
    return mod_pos(pi[0], plan.a) == r ? 1 : 0;
  }
  std::int64_t total = 0;
  const int i = plan.first[static_cast<std::size_t>(pos)];
  if (i < 0 && pos == plan.len - 1) {
    // Last free vertex: the closing match fixes its residue (or drops it).
    const int c = plan.first[static_cast<std::size_t>(plan.len)];
    if (c == pos) return mod_pos(pi[0], plan.a) == mod_pos(pi[c - 1], plan.a) ? plan.n : 0;
    return class_size(plan, mod_pos(pi[c - 1] + pi[c] - pi[0], plan.a));
  }
  if (pos == plan.len - 1) {
    // Forced last vertex: the closing check no longer depends on its value.
    const std::int64_t r = mod_pos(pi[i - 1] + pi[i] - pi[pos - 1], plan.a);
    const int c = plan.first[static_cast<std::size_t>(plan.len)];
    return mod_pos(pi[0], plan.a) == mod_pos(pi[c - 1] + pi[c] - r, plan.a) ? class_size(plan, r)
                                                                              : 0;
  }
  if (i < 0) {
    for (std::int64_t v = 1; v <= plan.n; ++v) {
      pi[pos] = v;
      total += count_from(plan, pi, pos + 1);
    }
  } else {
    const std::int64_t r = mod_pos(pi[i - 1] + pi[i] - pi[pos - 1], plan.a);
    for (std::int64_t v = r == 0 ? plan.a : r; v <= plan.n; v += plan.a) {
      pi[pos] = v;
      total += count_from(plan, pi, pos + 1);
    }
  }
  return total;
}

ExactCount finish(std::int64_t count, std::int64_t n, int k, std::int64_t work) {
  ExactCount out;
  out.count = count;
  out.normalized = static_cast<double>(count) / std::pow(static_cast<double>(n), k + 1);
  out.work_estimate = work;
  return out;
}

}  // namespace

ExactCount count_pi_star_exact(const Word& w, std::int64_t n, const LinkSpec& link,
                               std::int64_t budget) {
  const std::int64_t work = exact_count_work(w, n, link);
  if (work > budget) {
    std::ostringstream os;
    os << "exact circuit count for '" << w.str() << "' at n=" << n << " needs ~" << work
       << " steps, budget is " << budget;
    throw BudgetExceeded(os.str());
  }
  CountPlan plan;
  plan.len = w.length();
  plan.n = n;
  plan.a = link.modulus(n);
  plan.first.assign(static_cast<std::size_t>(plan.len + 1), -1);
  for (const auto& [first, second] : w.matches()) plan.first[static_cast<std::size_t>(second)] = first;

  std::int64_t count = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : count)
  for (std::int64_t p0 = 1; p0 <= n; ++p0) {
    std::array<std::int64_t, 2 * kMaxEnumerationK + 2> pi{};
    pi[0] = p0;
    count += count_from(plan, pi.data(), 1);
  }
  return finish(count, n, w.k(), work);
}

ExactCount count_pi_star_reference(const Word& w, std::int64_t n, const LinkSpec& link,
                                   std::int64_t budget) {
  const int len = w.length();
  const long double work = std::pow(static_cast<long double>(n), len);
  if (work > static_cast<long double>(budget))
    throw BudgetExceeded("reference circuit count exceeds its budget");
  std::vector<std::int64_t> pi(static_cast<std::size_t>(len + 1), 1);
  std::vector<std::int64_t> L(static_cast<std::size_t>(len + 1));
  std::int64_t count = 0;
  while (true) {
    pi[static_cast<std::size_t>(len)] = pi[0];
    for (int i = 1; i <= len; ++i)
      L[static_cast<std::size_t>(i)] = link_value(pi[static_cast<std::size_t>(i - 1)],
                                                  pi[static_cast<std::size_t>(i)], link, n);
    bool ok = true;
    for (const auto& [first, second] : w.matches())
      ok = ok && L[static_cast<std::size_t>(first)] == L[static_cast<std::size_t>(second)];
    count += ok ? 1 : 0;
    // Odometer over pi(0..len-1).
    int d = 0;
    while (d < len && pi[static_cast<std::size_t>(d)] == n) pi[static_cast<std::size_t>(d++)] = 1;
    if (d == len) break;
    ++pi[static_cast<std::size_t>(d)];
  }
  return finish(count, n, w.k(), static_cast<std::int64_t>(work));
}

WordLimitEstimate word_limit_finite_n(const Word& w, std::int64_t n, double theta,
                                      std::int64_t budget) {
  const auto link = LinkSpec::theta_link(theta);
  const auto c = count_pi_star_exact(w, n, link, budget);
  WordLimitEstimate est;
  est.word = w;
  est.theta = theta;
  est.method = LimitMethod::finite_n;
  est.value = c.normalized;
  est.samples = n;
  est.closure = closure_type(linear_representation(w));
  return est;
}

MomentEstimate lsd_moment(double theta, int k, MomentMethod method, std::int64_t samples,
                          std::uint64_t seed) {
  check_theta(theta);
  if (k < 1 || k > kMaxMcMomentK)
    throw std::invalid_argument("lsd_moment: k must be in [1, 4] for word-sum methods");
  MomentEstimate out;
  out.theta = theta;
  out.k = k;
  const auto words = enumerate_pair_matched(k);
  double var = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word& w = words[i];
    WordLimitEstimate est;
    if (method == MomentMethod::mixed && is_catalan(w)) {
      est = word_limit_catalan(w, theta).estimate;
    } else {
      est = word_limit_mc(w, theta, samples, derive_seed(seed, i));
    }
    out.value += est.value;
    var += est.std_error * est.std_error;
    out.words.push_back(std::move(est));
  }
  out.std_error = std::sqrt(var);
  return out;
}

}  // namespace genhankel
