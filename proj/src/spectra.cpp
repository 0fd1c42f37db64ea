#include "genhankel/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "genhankel/eigen.hpp"

namespace genhankel {

namespace {

double ipow(double x, int h) {
  double r = 1.0;
  for (int i = 0; i < h; ++i) r *= x;
  return r;
}

}  // namespace

double empirical_moment(std::span<const double> eigs, int h) {
  if (eigs.empty()) throw std::invalid_argument("empirical_moment: empty eigenvalue list");
  if (h < 1) throw std::invalid_argument("empirical_moment: order must be >= 1");
  double s = 0.0;
  for (double x : eigs) s += ipow(x, h);
  return s / static_cast<double>(eigs.size());
}

double default_zero_tol(std::span<const double> eigs) {
  double m = 0.0;
  for (double x : eigs) m = std::max(m, std::abs(x));
  return 1e-6 * (1.0 + m);
}

double zero_proportion(std::span<const double> eigs, double zero_tol) {
  if (eigs.empty()) throw std::invalid_argument("zero_proportion: empty eigenvalue list");
  if (!(zero_tol > 0.0)) throw std::invalid_argument("zero_proportion: zero tolerance must be > 0");
  const auto zeros = std::count_if(eigs.begin(), eigs.end(),
                                   [&](double x) { return std::abs(x) <= zero_tol; });
  return static_cast<double>(zeros) / static_cast<double>(eigs.size());
}

double Histogram::bin_left(std::size_t b) const {
  return lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(counts.size());
}

double Histogram::bin_right(std::size_t b) const {
  return lo + (hi - lo) * static_cast<double>(b + 1) / static_cast<double>(counts.size());
}

Histogram histogram(std::span<const double> eigs, int bins, double lo, double hi,
                    bool exclude_zero, double zero_tol) {
  if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("histogram: invalid range");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double x : eigs) {
    if (exclude_zero && std::abs(x) <= zero_tol) {
      ++h.dropped;
      continue;
    }
    if (x < lo) {
      ++h.underflow;
    } else if (x > hi) {
      ++h.overflow;
    } else {
      auto b = static_cast<std::int64_t>((x - lo) / width);
      b = std::clamp<std::int64_t>(b, 0, bins - 1);
      ++h.counts[static_cast<std::size_t>(b)];
    }
  }
  return h;
}

SpectralSummary summarize(std::vector<double> eigenvalues, int max_order, double zero_tol) {
  std::sort(eigenvalues.begin(), eigenvalues.end());
  SpectralSummary s;
  s.zero_tol = zero_tol > 0.0 ? zero_tol : default_zero_tol(eigenvalues);
  for (int h = 1; h <= max_order; ++h) s.moments.push_back(empirical_moment(eigenvalues, h));
  s.zero_proportion = zero_proportion(eigenvalues, s.zero_tol);
  s.eigenvalues = std::move(eigenvalues);
  return s;
}

double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  const auto n = sorted.size();
  if (n == 0) return 0.0;
  const double inv = 1.0 / static_cast<double>(n);
  double d = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double x = sorted[i];
    std::size_t j = i;
    while (j < n && sorted[j] == x) ++j;
    const double below = static_cast<double>(i) * inv;  // F_emp(x-)
    const double at = static_cast<double>(j) * inv;     // F_emp(x)
    const double left = cdf(std::nextafter(x, -std::numeric_limits<double>::infinity()));
    d = std::max({d, std::abs(below - left), std::abs(at - cdf(x))});
    i = j;
  }
  return d;
}

void snap_zeros(std::vector<double>& eigs, double zero_tol) {
  for (double& x : eigs)
    if (std::abs(x) <= zero_tol) x = 0.0;
}

std::vector<std::vector<double>> ensemble_spectra(const EnsembleConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("ensemble: reps must be >= 1");
  cfg.link.modulus(cfg.n);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(cfg.reps));
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < cfg.reps; ++r) {
    const auto m = build_matrix(cfg.n, cfg.link, cfg.dist, cfg.seed, static_cast<std::uint64_t>(r));
    out[static_cast<std::size_t>(r)] = eigenvalues_symmetric(m.entries);
  }
  return out;
}

std::vector<std::vector<double>> ensemble_spectra_serial(const EnsembleConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("ensemble: reps must be >= 1");
  cfg.link.modulus(cfg.n);
  std::vector<std::vector<double>> out;
  for (int r = 0; r < cfg.reps; ++r) {
    const auto m = build_matrix(cfg.n, cfg.link, cfg.dist, cfg.seed, static_cast<std::uint64_t>(r));
    out.push_back(eigenvalues_symmetric(m.entries));
  }
  return out;
}

EnsembleMoments moments_from_spectra(const std::vector<std::vector<double>>& spectra,
                                     int max_order) {
  if (spectra.empty()) throw std::invalid_argument("ensemble: no spectra");
  if (max_order < 1) throw std::invalid_argument("ensemble: moment order must be >= 1");
  EnsembleMoments em;
  em.reps = static_cast<int>(spectra.size());
  const auto H = static_cast<std::size_t>(max_order);
  em.mean.assign(H, 0.0);
  em.std_error.assign(H, 0.0);
  std::vector<std::vector<double>> per(H);
  for (const auto& eigs : spectra) {
    for (std::size_t h = 0; h < H; ++h) per[h].push_back(empirical_moment(eigs, static_cast<int>(h + 1)));
    em.zero_proportion.push_back(zero_proportion(eigs, default_zero_tol(eigs)));
  }
  const double r = static_cast<double>(em.reps);
  for (std::size_t h = 0; h < H; ++h) {
    double s = 0.0;
    for (double v : per[h]) s += v;
    const double mean = s / r;
    double ss = 0.0;
    for (double v : per[h]) ss += (v - mean) * (v - mean);
    em.mean[h] = mean;
    em.std_error[h] = em.reps > 1 ? std::sqrt(ss / (r - 1.0) / r) : 0.0;
  }
  return em;
}

EnsembleMoments ensemble_moments(const EnsembleConfig& cfg) {
  return moments_from_spectra(ensemble_spectra(cfg), cfg.max_order);
}

EnsembleMoments ensemble_moments_serial(const EnsembleConfig& cfg) {
  return moments_from_spectra(ensemble_spectra_serial(cfg), cfg.max_order);
}

}  // namespace genhankel
