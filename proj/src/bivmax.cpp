#include "bdsiw/bivmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bdsiw {

namespace {

constexpr std::int64_t kMaxSeriesTerms = 20'000'000;

BivMaxParams checked(BivMaxParams p) {
  p.validate();
  return p;
}

}  // namespace

void BivMaxParams::validate() const {
  for (double t : {theta1, theta2, theta3})
    if (!(t > 0.0 && t < 1.0))
      throw std::invalid_argument("each scale theta_i must lie in (0,1)");
  if (!(zeta > 0.0) || !std::isfinite(zeta))
    throw std::invalid_argument("shared shape zeta must be positive");
  if (family == FamilyTag::DsE && zeta != 1.0)
    throw std::invalid_argument("the DsE family pins zeta = 1");
  if (family == FamilyTag::DsR && zeta != 2.0)
    throw std::invalid_argument("the DsR family pins zeta = 2");
}

BivMaxParams BivMaxParams::swapped() const {
  return BivMaxParams{theta2, theta1, theta3, zeta, family};
}

BivMaxModel::BivMaxModel(BivMaxParams params)
    : params_(checked(params)),
      f1_(Family::make(params.family, params.theta1, params.zeta)),
      f2_(Family::make(params.family, params.theta2, params.zeta)),
      f3_(Family::make(params.family, params.theta3, params.zeta)) {}

Family BivMaxModel::scaled(double theta_product) const {
  return Family::dsiw(theta_product, params_.zeta);
}

void BivMaxModel::require_dsiw(const char* what) const {
  if (params_.family != FamilyTag::DsIW)
    throw std::logic_error(std::string(what) + " is only defined for the DsIW family");
}

double BivMaxModel::joint_cdf(std::int64_t x1, std::int64_t x2) const {
  if (x1 < 0 || x2 < 0) return 0.0;
  return f1_.cdf(x1) * f2_.cdf(x2) * f3_.cdf(std::min(x1, x2));
}

double BivMaxModel::marginal_cdf(int which, std::int64_t x) const {
  if (which != 1 && which != 2) throw std::invalid_argument("marginal index must be 1 or 2");
  if (x < 0) return 0.0;
  return (which == 1 ? f1_ : f2_).cdf(x) * f3_.cdf(x);
}

double BivMaxModel::marginal_pmf(int which, std::int64_t x) const {
  if (x < 0) return 0.0;
  return marginal_cdf(which, x) - marginal_cdf(which, x - 1);
}

std::int64_t BivMaxModel::marginal_quantile(int which, double u) const {
  if (which != 1 && which != 2) throw std::invalid_argument("marginal index must be 1 or 2");
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile level must lie in (0,1)");
  if (params_.family == FamilyTag::DsIW) {
    const double td = which == 1 ? params_.theta1 : params_.theta2;
    return scaled(td * params_.theta3).quantile(u);
  }
  // product CDF: each component quantile is a lower bound, then bracket up
  const Family& fd = which == 1 ? f1_ : f2_;
  std::int64_t lo = std::max(fd.quantile(u), f3_.quantile(u));
  if (marginal_cdf(which, lo) >= u) return lo;
  std::int64_t hi = lo, step = 1;
  while (marginal_cdf(which, hi) < u) {
    lo = hi;
    hi += step;
    step *= 2;
  }
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (marginal_cdf(which, mid) < u ? lo : hi) = mid;
  }
  return hi;
}

double BivMaxModel::joint_pmf(std::int64_t x1, std::int64_t x2) const {
  if (x1 < 0 || x2 < 0) return 0.0;
  return joint_cdf(x1, x2) - joint_cdf(x1 - 1, x2) - joint_cdf(x1, x2 - 1) +
         joint_cdf(x1 - 1, x2 - 1);
}

double BivMaxModel::joint_pmf_by_region(std::int64_t x1, std::int64_t x2) const {
  require_dsiw("joint_pmf_by_region");
  if (x1 < 0 || x2 < 0) return 0.0;
  const Family f13 = scaled(params_.theta1 * params_.theta3);
  const Family f23 = scaled(params_.theta2 * params_.theta3);
  if (x1 < x2) return f13.pmf(x1) * f2_.pmf(x2);
  if (x2 < x1) return f1_.pmf(x1) * f23.pmf(x2);
  return f2_.cdf(x1) * f13.pmf(x1) - f23.cdf(x1 - 1) * f1_.pmf(x1);
}

double BivMaxModel::joint_reliability(std::int64_t x1, std::int64_t x2) const {
  return 1.0 - marginal_cdf(1, x1) - marginal_cdf(2, x2) + joint_cdf(x1, x2);
}

double BivMaxModel::bhrf(std::int64_t x1, std::int64_t x2) const {
  const double r = joint_reliability(x1, x2);
  if (!(r > 0.0)) throw UndefinedHazardError("joint reliability vanishes at the requested point");
  return joint_pmf(x1, x2) / r;
}

double BivMaxModel::cond_hazard(CondHazard which, std::int64_t x1, std::int64_t x2) const {
  require_dsiw("cond_hazard");
  const double t1 = params_.theta1, t2 = params_.theta2, t3 = params_.theta3;
  const double z = params_.zeta;
  const Family f13 = scaled(t1 * t3);
  const Family f23 = scaled(t2 * t3);

  const bool lower_region = which == CondHazard::X1WhileX1Below || which == CondHazard::X2WhileX1Below;
  if (lower_region && !(x1 < x2))
    throw std::domain_error("this conditional hazard is defined on the region x1 < x2");
  if (!lower_region && !(x2 < x1))
    throw std::domain_error("this conditional hazard is defined on the region x2 < x1");

  // region reliability with the dependence folded into the smaller coordinate
  const double denom =
      lower_region ? 1.0 - f13.cdf(x1) - f23.cdf(x2) + f13.cdf(x1) * f2_.cdf(x2)
                   : 1.0 - f13.cdf(x1) - f23.cdf(x2) + f1_.cdf(x1) * f23.cdf(x2);
  if (!(denom > 0.0)) throw UndefinedHazardError("region reliability vanishes");

  auto deriv_weight = [z](std::int64_t x) {
    return z * std::exp(-(z + 1.0) * std::log(static_cast<double>(x) + 1.0));
  };

  switch (which) {
    case CondHazard::X1WhileX1Below:
      return deriv_weight(x1) / denom * (f2_.cdf(x2) - 1.0) * f13.cdf(x1) * std::log(t1 * t3);
    case CondHazard::X2WhileX1Below:
      return deriv_weight(x2) * f2_.cdf(x2) / denom *
             (f13.cdf(x1) * std::log(t2) - f3_.cdf(x2) * std::log(t2 * t3));
    case CondHazard::X1WhileX2Below:
      return deriv_weight(x1) * f1_.cdf(x1) / denom *
             (f23.cdf(x2) * std::log(t1) - f3_.cdf(x1) * std::log(t1 * t3));
    case CondHazard::X2WhileX2Below:
      return deriv_weight(x2) / denom * (f1_.cdf(x1) - 1.0) * f23.cdf(x2) * std::log(t2 * t3);
  }
  throw std::invalid_argument("unknown conditional hazard variant");
}

double BivMaxModel::hazard_tie(std::int64_t x) const {
  require_dsiw("hazard_tie");
  if (x < 0) throw std::domain_error("hazard_tie requires x >= 0");
  const Family f12 = scaled(params_.theta1 * params_.theta2);
  const Family f13 = scaled(params_.theta1 * params_.theta3);
  const Family f23 = scaled(params_.theta2 * params_.theta3);
  const Family f123 = scaled(params_.theta1 * params_.theta2 * params_.theta3);
  const double r3 = 1.0 - f13.cdf(x) - f23.cdf(x) + f123.cdf(x);
  if (!(r3 > 0.0)) throw UndefinedHazardError("tie-region reliability vanishes");
  return f3_.cdf(x - 1) / r3 * (-f1_.cdf(x - 1) - f2_.cdf(x - 1) + f12.cdf(x - 1)) +
         f3_.cdf(x) / r3 * (f1_.cdf(x) + f2_.cdf(x) - f12.cdf(x));
}

double BivMaxModel::hazard_survivor1(std::int64_t x1) const {
  require_dsiw("hazard_survivor1");
  if (x1 < 0) throw std::domain_error("hazard_survivor1 requires x1 >= 0");
  const double z = params_.zeta;
  const double a = std::exp(-z * std::log(static_cast<double>(x1) + 1.0));
  const double survival = -std::expm1(a * std::log(params_.theta1));  // 1 - F(x1; theta1)
  if (!(survival > 0.0)) throw UndefinedHazardError("component survival vanishes");
  return z * std::exp(-(z + 1.0) * std::log(static_cast<double>(x1) + 1.0)) / survival *
         std::log(params_.theta1);
}

double BivMaxModel::hazard_survivor2(std::int64_t x2) const {
  BivMaxModel mirrored(params_.swapped());
  return mirrored.hazard_survivor1(x2);
}

double BivMaxModel::conditional_pmf(std::int64_t x1, std::int64_t given_x2) const {
  const double denom = marginal_pmf(2, given_x2);
  if (!(denom > 0.0)) throw std::domain_error("conditioning value has zero probability");
  return joint_pmf(x1, given_x2) / denom;
}

double BivMaxModel::conditional_cdf(std::int64_t x1, std::int64_t given_le_x2) const {
  const double denom = marginal_cdf(2, given_le_x2);
  if (!(denom > 0.0)) throw std::domain_error("conditioning event has zero probability");
  return joint_cdf(x1, given_le_x2) / denom;
}

Family BivMaxModel::max_marginal() const {
  require_dsiw("max_marginal");
  return scaled(params_.theta1 * params_.theta2 * params_.theta3);
}

double BivMaxModel::stress_strength(double tol) const {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  // P[X1 < X2] = P[W2 > max(W1, W3)] = sum_x f_{max(W1,W3)}(x) * (1 - F2(x)).
  // Both tail factors shrink, so the remainder past x is bounded by
  // (1 - F1(x) F3(x)) * (1 - F2(x)).
  double acc = 0.0;
  double f13_prev = 0.0;
  for (std::int64_t x = 0; x < kMaxSeriesTerms; ++x) {
    const double f13 = f1_.cdf(x) * f3_.cdf(x);
    const double s2 = 1.0 - f2_.cdf(x);
    acc += (f13 - f13_prev) * s2;
    f13_prev = f13;
    if ((1.0 - f13) * s2 < tol) break;
  }
  return acc;
}

double BivMaxModel::median_correlation() const {
  const std::int64_t m1 = marginal_quantile(1, 0.5);
  const std::int64_t m2 = marginal_quantile(2, 0.5);
  return 4.0 * joint_cdf(m1, m2) - 1.0;
}

double BivMaxModel::pgf(double y1, double y2, double tol) const {
  if (!(std::abs(y1) < 1.0 && std::abs(y2) < 1.0))
    throw std::domain_error("pgf arguments must satisfy |y| < 1");
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");

  const double ymax = std::max(std::abs(y1), std::abs(y2));
  if (ymax == 0.0) return joint_pmf(0, 0);

  // Everything outside [0,N]^2 has i + j >= N + 1, so its contribution is
  // bounded by (1 - F(N,N)) * ymax^{N+1}.
  auto bound = [&](std::int64_t n) {
    return (1.0 - joint_cdf(n, n)) * std::exp((static_cast<double>(n) + 1.0) * std::log(ymax));
  };
  std::int64_t n = 16;
  constexpr std::int64_t kMaxGrid = 1 << 22;
  while (bound(n) > tol && n < kMaxGrid) n *= 2;
  std::int64_t lo = n / 2, hi = n;
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (bound(mid) > tol ? lo : hi) = mid;
  }
  n = hi;

  // cached component CDFs with a -1 slot so differencing stays branch-free
  const std::size_t sz = static_cast<std::size_t>(n) + 2;
  std::vector<double> a(sz), b(sz), c(sz), p1(sz), p2(sz);
  for (std::int64_t i = -1; i <= n; ++i) {
    a[i + 1] = f1_.cdf(i);
    b[i + 1] = f2_.cdf(i);
    c[i + 1] = f3_.cdf(i);
  }
  p1[0] = p2[0] = 0.0;  // unused (-1 slot)
  p1[1] = p2[1] = 1.0;
  for (std::int64_t i = 2; i < static_cast<std::int64_t>(sz); ++i) {
    p1[i] = p1[i - 1] * y1;
    p2[i] = p2[i - 1] * y2;
  }

  auto F = [&](std::int64_t i, std::int64_t j) {
    return a[i + 1] * b[j + 1] * c[std::min(i, j) + 1];
  };
  double acc = 0.0;
  for (std::int64_t i = 0; i <= n; ++i) {
    double row = 0.0;
    for (std::int64_t j = 0; j <= n; ++j) {
      const double mass = F(i, j) - F(i - 1, j) - F(i, j - 1) + F(i - 1, j - 1);
      row += mass * p2[j + 1];
    }
    acc += row * p1[i + 1];
  }
  return acc;
}

GridCheckResult BivMaxModel::pqd_check(std::int64_t grid_max) const {
  if (grid_max < 0) throw std::invalid_argument("grid_max must be >= 0");
  GridCheckResult result{true, std::numeric_limits<double>::infinity(), {}};
  for (std::int64_t x1 = 0; x1 <= grid_max; ++x1) {
    for (std::int64_t x2 = 0; x2 <= grid_max; ++x2) {
      const double slack = joint_cdf(x1, x2) - marginal_cdf(1, x1) * marginal_cdf(2, x2);
      if (slack < result.worst) result = {slack >= 0.0, slack, {x1, x2}};
    }
  }
  result.holds = result.worst >= 0.0;
  return result;
}

GridCheckResult BivMaxModel::tp2_check(std::int64_t grid_max) const {
  if (grid_max < 1) throw std::invalid_argument("grid_max must be >= 1");
  const std::size_t g = static_cast<std::size_t>(grid_max) + 1;
  std::vector<double> rel(g * g);
  for (std::int64_t i = 0; i <= grid_max; ++i)
    for (std::int64_t j = 0; j <= grid_max; ++j)
      rel[static_cast<std::size_t>(i) * g + static_cast<std::size_t>(j)] = joint_reliability(i, j);

  auto at = [&](std::int64_t i, std::int64_t j) {
    return rel[static_cast<std::size_t>(i) * g + static_cast<std::size_t>(j)];
  };
  GridCheckResult result{true, std::numeric_limits<double>::infinity(), {}};
  for (std::int64_t x11 = 0; x11 <= grid_max; ++x11)
    for (std::int64_t x12 = x11; x12 <= grid_max; ++x12)
      for (std::int64_t x21 = 0; x21 <= grid_max; ++x21)
        for (std::int64_t x22 = x21; x22 <= grid_max; ++x22) {
          const double denom = at(x12, x21) * at(x11, x22);
          if (!(denom > 0.0)) continue;  // reliability underflowed in the far tail
          const double ratio = at(x11, x21) * at(x12, x22) / denom;
          if (ratio < result.worst) result.worst = ratio, result.at = {x11, x21};
        }
  result.holds = result.worst >= 1.0 - 1e-12;
  return result;
}

PairObs BivMaxModel::sample_pair(Rng& rng) const {
  const std::int64_t w1 = f1_.sample(rng);
  const std::int64_t w2 = f2_.sample(rng);
  const std::int64_t w3 = f3_.sample(rng);
  return {std::max(w1, w3), std::max(w2, w3)};
}

}  // namespace bdsiw
