#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "genhankel/link.hpp"
#include "genhankel/matrix.hpp"
#include "genhankel/rng.hpp"

namespace genhankel {

/// (1/n) sum lambda_i^h. Throws on empty input or h < 1.
double empirical_moment(std::span<const double> eigs, int h);

/// Default zero tolerance 1e-6 * (1 + max |lambda|).
double default_zero_tol(std::span<const double> eigs);

/// Fraction of eigenvalues with |lambda| <= zero_tol.
double zero_proportion(std::span<const double> eigs, double zero_tol);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::int64_t> counts;
  std::int64_t underflow = 0;  // values < lo
  std::int64_t overflow = 0;   // values > hi
  std::int64_t dropped = 0;    // zeros removed in exclude-zero mode

  double bin_left(std::size_t b) const;
  double bin_right(std::size_t b) const;
};

/// Equal-width bins over [lo, hi]; the top edge belongs to the last bin.
Histogram histogram(std::span<const double> eigs, int bins, double lo, double hi,
                    bool exclude_zero = false, double zero_tol = 0.0);

struct SpectralSummary {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> moments;      // moments[h-1] = beta_h, h = 1..H
  double zero_tol = 0.0;
  double zero_proportion = 0.0;
};

SpectralSummary summarize(std::vector<double> eigenvalues, int max_order, double zero_tol = 0.0);

/// sup_x |F_emp(x) - cdf(x)| evaluated on both sides of every sample point.
/// `sorted` must be ascending. Left limits of `cdf` are taken at the next
/// representable double below each point, so atoms in `cdf` are respected.
double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Replaces |x| <= zero_tol by exactly 0 (numerical zeros of rank-deficient spectra).
void snap_zeros(std::vector<double>& eigs, double zero_tol);

struct EnsembleMoments {
  std::vector<double> mean;       // mean[h-1] over replicates
  std::vector<double> std_error;  // sample std / sqrt(reps); 0 when reps == 1
  std::vector<double> zero_proportion;  // per replicate
  int reps = 0;
};

struct EnsembleConfig {
  LinkSpec link = LinkSpec::theta_link(1.0);
  std::int64_t n = 100;
  int reps = 1;
  InputDistribution dist = InputDistribution::gaussian;
  std::uint64_t seed = 0;
  int max_order = 4;
};

/// Spectra of `reps` independent matrices; replicate r uses stream r of the
/// seed. Parallel over replicates; the result does not depend on thread count.
std::vector<std::vector<double>> ensemble_spectra(const EnsembleConfig& cfg);
std::vector<std::vector<double>> ensemble_spectra_serial(const EnsembleConfig& cfg);

EnsembleMoments ensemble_moments(const EnsembleConfig& cfg);
EnsembleMoments ensemble_moments_serial(const EnsembleConfig& cfg);
EnsembleMoments moments_from_spectra(const std::vector<std::vector<double>>& spectra,
                                     int max_order);

}  // namespace genhankel
