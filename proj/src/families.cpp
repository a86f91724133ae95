#include "bdsiw/families.hpp"

#include <cmath>
#include <stdexcept>

namespace bdsiw {

namespace {

// Support values are capped well inside int64 so arithmetic on quantile
// brackets cannot overflow. The cap is only reachable for uniforms within
// ~1e-16 of 1 combined with very heavy tails.
constexpr std::int64_t kMaxSupport = std::int64_t(1) << 62;

}  // namespace

std::string to_string(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::DsIW: return "dsiw";
    case FamilyTag::DsW: return "dsw";
    case FamilyTag::DsE: return "dse";
    case FamilyTag::DsR: return "dsr";
  }
  return "?";
}

Family::Family(FamilyTag tag, double theta, double zeta) : tag_(tag), theta_(theta), zeta_(zeta) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("family scale theta must lie in (0,1)");
  if (!(zeta > 0.0) || !std::isfinite(zeta))
    throw std::invalid_argument("family shape zeta must be positive");
  log_theta_ = std::log(theta_);
}

Family Family::make(FamilyTag tag, double theta, double zeta) {
  switch (tag) {
    case FamilyTag::DsIW: return dsiw(theta, zeta);
    case FamilyTag::DsW: return dsw(theta, zeta);
    case FamilyTag::DsE: return dse(theta);
    case FamilyTag::DsR: return dsr(theta);
  }
  throw std::invalid_argument("unknown family tag");
}

double Family::cdf(std::int64_t x) const {
  if (x < 0) return 0.0;
  const double lx1 = std::log(static_cast<double>(x) + 1.0);
  if (tag_ == FamilyTag::DsIW) {
    const double a = std::exp(-zeta_ * lx1);  // (x+1)^{-zeta}
    return std::exp(a * log_theta_);
  }
  const double a = std::exp(zeta_ * lx1);  // (x+1)^{zeta}
  return -std::expm1(a * log_theta_);
}

double Family::pmf(std::int64_t x) const {
  if (x < 0) return 0.0;
  return cdf(x) - cdf(x - 1);
}

std::int64_t Family::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile level must lie in (0,1)");

  double est;
  if (tag_ == FamilyTag::DsIW) {
    // F(x) >= u  <=>  x >= (ln theta / ln u)^{1/zeta} - 1
    est = std::pow(log_theta_ / std::log(u), 1.0 / zeta_) - 1.0;
  } else {
    // F(x) >= u  <=>  x >= (ln(1-u) / ln theta)^{1/zeta} - 1
    est = std::pow(std::log1p(-u) / log_theta_, 1.0 / zeta_) - 1.0;
  }

  std::int64_t x;
  if (!(est > 0.0)) {
    x = 0;
  } else if (est >= static_cast<double>(kMaxSupport)) {
    x = kMaxSupport;
  } else {
    x = static_cast<std::int64_t>(std::ceil(est));
  }

  if (cdf(x) < u) {
    // estimate fell short: bracket upward, then take the smallest point
    std::int64_t lo = x;  // cdf(lo) < u
    std::int64_t hi = x;
    std::int64_t step = 1;
    while (hi < kMaxSupport) {
      hi = (hi > kMaxSupport - step) ? kMaxSupport : hi + step;
      if (cdf(hi) >= u) break;
      lo = hi;
      if (step <= kMaxSupport / 2) step *= 2;
    }
    while (lo + 1 < hi) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      (cdf(mid) < u ? lo : hi) = mid;
    }
    x = hi;
  } else {
    while (x > 0 && cdf(x - 1) >= u) --x;
  }
  return x;
}

}  // namespace bdsiw
