#pragma once

#include <cstdint>
#include <string>

#include "bdsiw/rng.hpp"

namespace bdsiw {

enum class FamilyTag { DsIW, DsW, DsE, DsR };

std::string to_string(FamilyTag tag);

// A one-parameter-scale, one-parameter-shape lifetime distribution on the
// nonnegative integers. Two CDF orientations are covered:
//
//   inverse (DsIW):  F(x) = theta^{(x+1)^{-zeta}}
//   direct  (DsW):   F(x) = 1 - theta^{(x+1)^{zeta}}
//
// DsE and DsR are DsW with the shape pinned to 1 and 2; they carry no free
// shape parameter. Parameters are validated at construction; evaluation
// assumes a valid object and never throws.
class Family {
 public:
  static Family dsiw(double theta, double zeta) { return Family(FamilyTag::DsIW, theta, zeta); }
  static Family dsw(double theta, double zeta) { return Family(FamilyTag::DsW, theta, zeta); }
  static Family dse(double theta) { return Family(FamilyTag::DsE, theta, 1.0); }
  static Family dsr(double theta) { return Family(FamilyTag::DsR, theta, 2.0); }

  // Generic factory; `zeta` is ignored for the pinned-shape tags.
  static Family make(FamilyTag tag, double theta, double zeta);

  FamilyTag tag() const { return tag_; }
  double theta() const { return theta_; }
  double zeta() const { return zeta_; }
  bool inverse_orientation() const { return tag_ == FamilyTag::DsIW; }

  // F(x); 0 for x < 0, monotone to 1. All probabilities go through
  // exp(a * ln theta) with a = exp(+-zeta * ln(x+1)), keeping the CDF and
  // PMF paths on one rounding route.
  double cdf(std::int64_t x) const;

  // cdf(x) - cdf(x-1). The x = 0 mass comes out as cdf(0) exactly, which
  // realizes theta^{0^{-zeta}} = 0 without evaluating the overflow.
  double pmf(std::int64_t x) const;

  // Smallest x >= 0 with cdf(x) >= u, for u in (0,1). Closed-form inversion
  // plus a bracketed correction against cdf for floating-point edge cases.
  std::int64_t quantile(double u) const;

  std::int64_t median() const { return quantile(0.5); }

  // Inverse-transform draw; consumes exactly one uniform from `rng`.
  std::int64_t sample(Rng& rng) const { return quantile(rng.uniform01()); }

 private:
  Family(FamilyTag tag, double theta, double zeta);

  FamilyTag tag_;
  double theta_;
  double zeta_;
  double log_theta_;
};

}  // namespace bdsiw
