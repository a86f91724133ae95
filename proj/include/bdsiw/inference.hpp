#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdsiw/bivmax.hpp"

namespace bdsiw {

// A list of nonnegative pairs together with its ordering partition:
// how many observations have x1 < x2, x1 > x2, and x1 = x2. Observations
// are also grouped into distinct cells with counts, which keeps repeated
// likelihood evaluations linear in the number of distinct values.
struct PairedSample {
  std::vector<PairObs> observations;
  int n_lower = 0;  // x1 < x2
  int n_upper = 0;  // x1 > x2
  int n_tied = 0;   // x1 = x2
  std::vector<std::pair<PairObs, int>> cells;

  static PairedSample from_pairs(std::vector<PairObs> obs);

  int size() const { return static_cast<int>(observations.size()); }
};

struct InfoCriteria {
  double aic = 0.0;
  double bic = 0.0;
  double hqic = 0.0;
  std::optional<double> caic;  // empty when n <= k + 1
};

// aic  = 2k + 2 nll
// caic = aic + 2k(k+1)/(n-k-1)
// bic  = 2 nll + k ln n
// hqic = 2 nll + 2k ln(ln n)
InfoCriteria info_criteria(double neg_log_lik, int k, int n);

struct FitReport {
  BivMaxParams params;
  double neg_log_lik = 0.0;
  InfoCriteria criteria;
  bool converged = false;
  int iterations = 0;  // simplex iterations of the winning start
  int n_starts = 0;
  std::optional<double> fixed_shape;
  std::vector<std::string> warnings;
};

struct UnivariateFitReport {
  Family family;
  double neg_log_lik = 0.0;
  InfoCriteria criteria;
  bool converged = false;
  int iterations = 0;
  int n_starts = 0;
  std::vector<std::string> warnings;
};

struct LrtReport {
  double lambda = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::vector<std::string> warnings;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& msg, FitReport best)
      : std::runtime_error(msg), best_(std::move(best)) {}
  const FitReport& best() const { return best_; }

 private:
  FitReport best_;
};

// Sum of log joint masses over the sample. Returns -infinity when any
// observed cell has zero (or underflowed) mass, so optimizers can retreat
// from that region instead of aborting.
double log_likelihood(const BivMaxParams& params, const PairedSample& data);

// Central-difference gradient of the log-likelihood in the unconstrained
// coordinates (logit theta1..3, ln zeta), with relative step h. Steps are
// shrunk automatically if an evaluation lands on a zero-mass region.
std::array<double, 4> score_numeric(const BivMaxParams& params, const PairedSample& data,
                                    double h = 1e-6);

struct FitOptions {
  int n_starts = 8;
  std::uint64_t seed = 0;
  int max_iterations = 2000;  // per simplex run
  double f_tol = 1e-8;
  double x_tol = 1e-6;
};

// Maximum-likelihood fit of the max-construction model. The search runs in
// unconstrained coordinates (logit/log) from n_starts initial points: one
// frequency-based heuristic seed plus seeded quasi-random starts, each
// polished by a simplex restart. `fixed_shape` pins zeta (1 and 2 give the
// pinned-shape variants of either family). Throws NonConvergenceError,
// carrying the best point found, if no start converges.
FitReport fit_mle(const PairedSample& data, FamilyTag family, std::optional<double> fixed_shape,
                  const FitOptions& options);
FitReport fit_mle(const PairedSample& data, FamilyTag family,
                  std::optional<double> fixed_shape = std::nullopt, int n_starts = 8,
                  std::uint64_t seed = 0);

// Same optimizer contract for a single margin.
UnivariateFitReport fit_univariate(std::span<const std::int64_t> xs, FamilyTag family,
                                   const FitOptions& options = {});

// Likelihood-ratio test of a nested pair of fits; df is the number of
// pinned parameters. Nestedness is the caller's responsibility. A slightly
// negative statistic (optimizer noise) is clamped to zero with a warning.
LrtReport lrt(const FitReport& full, const FitReport& restricted, int df);

// Upper tail of the chi-squared distribution via the regularized
// incomplete gamma function (series for small argument, continued fraction
// otherwise). Absolute accuracy ~1e-10 or better.
double chi2_sf(double x, int df);

}  // namespace bdsiw
