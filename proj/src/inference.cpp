#include "bdsiw/inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace bdsiw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logit(double p) { return std::log(p / (1.0 - p)); }

double sigmoid(double u) {
  double p;
  if (u >= 0.0) {
    const double e = std::exp(-u);
    p = 1.0 / (1.0 + e);
  } else {
    const double e = std::exp(u);
    p = e / (1.0 + e);
  }
  return std::clamp(p, 1e-15, 1.0 - 1e-15);
}

double exp_clamped(double v) { return std::exp(std::clamp(v, -30.0, 30.0)); }

// ---------------------------------------------------------------------------
// Nelder-Mead simplex minimizer. Deterministic: ties in the vertex ordering
// resolve by index, so identical inputs walk identical paths.

struct SimplexRun {
  std::vector<double> x;
  double fval = kInf;
  int iterations = 0;
  bool converged = false;
};

SimplexRun nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<double>& start, double step, int max_iter, double f_tol,
                       double x_tol) {
  const std::size_t d = start.size();
  std::vector<std::vector<double>> pts(d + 1, start);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = f(pts[i]);

  std::vector<std::size_t> order(d + 1);
  SimplexRun run;
  for (; run.iterations < max_iter; ++run.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (fv[a] != fv[b]) return fv[a] < fv[b];
      return a < b;
    });
    const std::size_t best = order[0], worst = order[d], second = order[d - 1];

    double x_spread = 0.0;
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        x_spread = std::max(x_spread, std::abs(pts[i][k] - pts[best][k]));
    const double f_spread = fv[worst] - fv[best];
    if (f_spread < f_tol && x_spread < x_tol) {
      run.converged = true;
      break;
    }

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    auto blend = [&](double t) {
      std::vector<double> p(d);
      for (std::size_t k = 0; k < d; ++k) p[k] = centroid[k] + t * (pts[worst][k] - centroid[k]);
      return p;
    };

    const std::vector<double> xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fv[order[0]]) {
      const std::vector<double> xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const std::vector<double> xc = fr < fv[worst] ? blend(-0.5) : blend(0.5);
    const double fc = f(xc);
    if (fc < std::min(fr, fv[worst])) {
      pts[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {  // shrink toward the best vertex
      if (i == best) continue;
      for (std::size_t k = 0; k < d; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
      fv[i] = f(pts[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= d; ++i)
    if (fv[i] < fv[best]) best = i;
  run.x = pts[best];
  run.fval = fv[best];
  return run;
}

// one simplex descent plus a tighter restart from its endpoint
SimplexRun descend(const std::function<double(const std::vector<double>&)>& f,
                   const std::vector<double>& start, double step, const FitOptions& opt) {
  SimplexRun first = nelder_mead(f, start, step, opt.max_iterations, opt.f_tol, opt.x_tol);
  SimplexRun second = nelder_mead(f, first.x, 0.05, opt.max_iterations, opt.f_tol, opt.x_tol);
  second.iterations += first.iterations;
  second.converged = second.converged || first.converged;
  if (first.fval < second.fval) {
    second.x = first.x;
    second.fval = first.fval;
  }
  return second;
}

double frequency(int count, int n) {
  const double lo = std::max(0.02, 0.5 / n);
  return std::clamp(static_cast<double>(count) / n, lo, 1.0 - lo);
}

double shape_from_ratio(double f_at_0, double f_at_1) {
  // F(1)/F(0) relation under the inverse orientation: F(1) = F(0)^{2^{-zeta}}
  const double ratio = std::log(f_at_1) / std::log(f_at_0);
  if (!(ratio > 0.0 && ratio < 1.0)) return 1.5;
  const double zeta = -std::log2(ratio);
  return std::clamp(zeta, 0.3, 5.0);
}

}  // namespace

// ---------------------------------------------------------------------------

PairedSample PairedSample::from_pairs(std::vector<PairObs> obs) {
  PairedSample s;
  for (const PairObs& o : obs)
    if (o.x1 < 0 || o.x2 < 0)
      throw std::invalid_argument("observations must be nonnegative integer pairs");
  s.observations = std::move(obs);
  std::map<PairObs, int> grouped;
  for (const PairObs& o : s.observations) {
    if (o.x1 < o.x2)
      ++s.n_lower;
    else if (o.x1 > o.x2)
      ++s.n_upper;
    else
      ++s.n_tied;
    ++grouped[o];
  }
  s.cells.assign(grouped.begin(), grouped.end());
  return s;
}

InfoCriteria info_criteria(double neg_log_lik, int k, int n) {
  if (n < 1 || k < 0) throw std::invalid_argument("need n >= 1 and k >= 0");
  InfoCriteria c;
  c.aic = 2.0 * k + 2.0 * neg_log_lik;
  c.bic = 2.0 * neg_log_lik + k * std::log(static_cast<double>(n));
  c.hqic = k == 0 ? 2.0 * neg_log_lik
                  : 2.0 * neg_log_lik + 2.0 * k * std::log(std::log(static_cast<double>(n)));
  if (n > k + 1) c.caic = c.aic + 2.0 * k * (k + 1.0) / (n - k - 1.0);
  return c;
}

double log_likelihood(const BivMaxParams& params, const PairedSample& data) {
  const BivMaxModel model(params);
  double acc = 0.0;
  for (const auto& [obs, count] : data.cells) {
    const double p = model.joint_pmf(obs.x1, obs.x2);
    if (!(p > 0.0)) return -kInf;
    acc += count * std::log(p);
  }
  return acc;
}

std::array<double, 4> score_numeric(const BivMaxParams& params, const PairedSample& data,
                                    double h) {
  const std::array<double, 4> u{logit(params.theta1), logit(params.theta2), logit(params.theta3),
                                std::log(params.zeta)};
  auto eval = [&](const std::array<double, 4>& v) {
    return log_likelihood({sigmoid(v[0]), sigmoid(v[1]), sigmoid(v[2]), exp_clamped(v[3]),
                           params.family},
                          data);
  };
  std::array<double, 4> grad{};
  for (int i = 0; i < 4; ++i) {
    double step = h * std::max(1.0, std::abs(u[i]));
    grad[i] = std::numeric_limits<double>::quiet_NaN();
    for (int attempt = 0; attempt < 4; ++attempt) {
      std::array<double, 4> up = u, dn = u;
      up[i] += step;
      dn[i] -= step;
      const double fp = eval(up), fm = eval(dn);
      if (std::isfinite(fp) && std::isfinite(fm)) {
        grad[i] = (fp - fm) / (2.0 * step);
        break;
      }
      step /= 10.0;  // too close to a zero-mass boundary; shrink
    }
  }
  return grad;
}

FitReport fit_mle(const PairedSample& data, FamilyTag family, std::optional<double> fixed_shape,
                  const FitOptions& options) {
  if (data.size() < 1) throw std::invalid_argument("empty sample");
  if (options.n_starts < 1) throw std::invalid_argument("need at least one start");

  // pinned-shape family names are aliases for the base family plus a pin
  if (family == FamilyTag::DsE || family == FamilyTag::DsR) {
    const double pinned = family == FamilyTag::DsE ? 1.0 : 2.0;
    if (fixed_shape && *fixed_shape != pinned)
      throw std::invalid_argument("conflicting shape restriction for a pinned-shape family");
    fixed_shape = pinned;
    family = FamilyTag::DsW;
  }
  if (fixed_shape && !(*fixed_shape > 0.0))
    throw std::invalid_argument("fixed shape must be positive");

  std::vector<std::string> warnings;
  if (data.size() < 4) warnings.push_back("sample has fewer than 4 pairs; estimates are fragile");
  if (std::all_of(data.observations.begin(), data.observations.end(),
                  [&](const PairObs& o) { return o == data.observations.front(); }))
    warnings.push_back("degenerate sample: all pairs identical; fit may sit on a boundary");

  const std::size_t dim = fixed_shape ? 3 : 4;
  auto unpack = [&](const std::vector<double>& u) {
    return BivMaxParams{sigmoid(u[0]), sigmoid(u[1]), sigmoid(u[2]),
                        fixed_shape ? *fixed_shape : exp_clamped(u[3]), family};
  };
  auto objective = [&](const std::vector<double>& u) {
    const double ll = log_likelihood(unpack(u), data);
    return std::isfinite(ll) ? -ll : kInf;
  };

  // frequency-based seed: under the inverse orientation the zero-cell
  // frequencies estimate the scale products directly
  const int n = data.size();
  std::vector<double> heuristic(dim, 0.0);
  if (family == FamilyTag::DsIW) {
    int c00 = 0, c0x = 0, cx0 = 0, c1le = 0;
    for (const PairObs& o : data.observations) {
      c00 += o.x1 == 0 && o.x2 == 0;
      c0x += o.x1 == 0;
      cx0 += o.x2 == 0;
      c1le += o.x1 <= 1;
    }
    const double p00 = frequency(c00, n), a1 = frequency(c0x, n), a2 = frequency(cx0, n);
    heuristic[0] = logit(std::clamp(p00 / a2, 0.02, 0.98));
    heuristic[1] = logit(std::clamp(p00 / a1, 0.02, 0.98));
    heuristic[2] = logit(std::clamp(a1 * a2 / p00, 0.02, 0.98));
    if (!fixed_shape) heuristic[3] = std::log(shape_from_ratio(a1, frequency(c1le, n)));
  }

  Rng rng(options.seed);
  SimplexRun best;
  int best_start = -1;
  bool any_converged = false;
  for (int s = 0; s < options.n_starts; ++s) {
    std::vector<double> start(dim);
    if (s == 0) {
      start = heuristic;
    } else {
      for (int i = 0; i < 3; ++i) start[i] = rng.uniform(-2.5, 2.5);
      if (!fixed_shape) start[3] = rng.uniform(-1.0, 1.5);
    }
    SimplexRun run = descend(objective, start, 0.5, options);
    any_converged = any_converged || (run.converged && std::isfinite(run.fval));
    if (best_start < 0 || run.fval < best.fval) {
      best = std::move(run);
      best_start = s;
    }
  }

  FitReport report;
  report.params = unpack(best.x);
  report.neg_log_lik = best.fval;
  report.criteria = info_criteria(best.fval, static_cast<int>(dim), n);
  report.converged = best.converged && std::isfinite(best.fval);
  report.iterations = best.iterations;
  report.n_starts = options.n_starts;
  report.fixed_shape = fixed_shape;
  report.warnings = std::move(warnings);
  if (!any_converged)
    throw NonConvergenceError("no optimizer start converged", std::move(report));
  return report;
}

FitReport fit_mle(const PairedSample& data, FamilyTag family, std::optional<double> fixed_shape,
                  int n_starts, std::uint64_t seed) {
  FitOptions options;
  options.n_starts = n_starts;
  options.seed = seed;
  return fit_mle(data, family, fixed_shape, options);
}

UnivariateFitReport fit_univariate(std::span<const std::int64_t> xs, FamilyTag family,
                                   const FitOptions& options) {
  if (xs.empty()) throw std::invalid_argument("empty sample");
  for (std::int64_t x : xs)
    if (x < 0) throw std::invalid_argument("observations must be nonnegative");

  std::map<std::int64_t, int> cells;
  for (std::int64_t x : xs) ++cells[x];

  const bool free_shape = family == FamilyTag::DsIW || family == FamilyTag::DsW;
  const std::size_t dim = free_shape ? 2 : 1;
  auto unpack = [&](const std::vector<double>& u) {
    return Family::make(family, sigmoid(u[0]), free_shape ? exp_clamped(u[1]) : 0.0);
  };
  auto objective = [&](const std::vector<double>& u) {
    const Family f = unpack(u);
    double acc = 0.0;
    for (const auto& [x, count] : cells) {
      const double p = f.pmf(x);
      if (!(p > 0.0)) return kInf;
      acc -= count * std::log(p);
    }
    return acc;
  };

  const int n = static_cast<int>(xs.size());
  int c0 = 0, c1 = 0;
  for (std::int64_t x : xs) {
    c0 += x == 0;
    c1 += x <= 1;
  }
  std::vector<double> heuristic(dim, 0.0);
  const double p0 = frequency(c0, n);
  heuristic[0] = logit(family == FamilyTag::DsIW ? p0 : 1.0 - p0);
  if (free_shape && family == FamilyTag::DsIW)
    heuristic[1] = std::log(shape_from_ratio(p0, frequency(c1, n)));

  Rng rng(options.seed);
  SimplexRun best;
  bool any_converged = false;
  for (int s = 0; s < options.n_starts; ++s) {
    std::vector<double> start(dim);
    if (s == 0) {
      start = heuristic;
    } else {
      start[0] = rng.uniform(-2.5, 2.5);
      if (free_shape) start[1] = rng.uniform(-1.0, 1.5);
    }
    SimplexRun run = descend(objective, start, 0.5, options);
    any_converged = any_converged || (run.converged && std::isfinite(run.fval));
    if (s == 0 || run.fval < best.fval) best = std::move(run);
  }

  UnivariateFitReport report{unpack(best.x),
                             best.fval,
                             info_criteria(best.fval, static_cast<int>(dim), n),
                             best.converged && std::isfinite(best.fval),
                             best.iterations,
                             options.n_starts,
                             {}};
  if (n < 4) report.warnings.push_back("sample smaller than 4 observations");
  if (!any_converged) throw std::runtime_error("no optimizer start converged");
  return report;
}

LrtReport lrt(const FitReport& full, const FitReport& restricted, int df) {
  if (df < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
  LrtReport r;
  r.df = df;
  r.lambda = 2.0 * (restricted.neg_log_lik - full.neg_log_lik);
  if (r.lambda < 0.0) {
    r.warnings.push_back("negative statistic clamped to zero (optimizer tolerance)");
    r.lambda = 0.0;
  }
  r.p_value = chi2_sf(r.lambda, df);
  return r;
}

// ---------------------------------------------------------------------------
// regularized incomplete gamma

namespace {

double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int k = 1; k < 2000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_continued_fraction(double a, double x) {
  // modified Lentz evaluation of the standard continued fraction
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 2000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi2_sf(double x, int df) {
  if (df < 1) throw std::domain_error("degrees of freedom must be >= 1");
  if (!(x >= 0.0)) throw std::domain_error("statistic must be nonnegative");
  if (x == 0.0) return 1.0;
  const double a = 0.5 * df;
  const double s = 0.5 * x;
  return s < a + 1.0 ? 1.0 - gamma_p_series(a, s) : gamma_q_continued_fraction(a, s);
}

}  // namespace bdsiw
