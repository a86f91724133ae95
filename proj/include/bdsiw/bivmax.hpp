#pragma once

#include <cstdint>
#include <stdexcept>

#include "bdsiw/families.hpp"
#include "bdsiw/rng.hpp"

namespace bdsiw {

// One observation of the dependent pair. min(x1, x2) shows up throughout
// the model algebra, hence the accessor.
struct PairObs {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;

  std::int64_t x3() const { return x1 < x2 ? x1 : x2; }

  friend auto operator<=>(const PairObs&, const PairObs&) = default;
};

// Parameters of the pair built from three independent latent lifetimes
// sharing one shape:
//
//   X1 = max(W1, W3),  X2 = max(W2, W3),  W_i ~ family(theta_i, zeta).
//
// With the DsIW family this is the BDsIW model; the DsW family gives the
// BDsW model and its pinned-shape variants.
struct BivMaxParams {
  double theta1 = 0.5;
  double theta2 = 0.5;
  double theta3 = 0.5;
  double zeta = 1.0;
  FamilyTag family = FamilyTag::DsIW;

  void validate() const;
  BivMaxParams swapped() const;  // theta1 <-> theta2
};

// Requested hazard value sits on a point of zero (or underflowed)
// reliability.
class UndefinedHazardError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The four conditional hazard rates, split by which coordinate is smaller
// and which component the hazard refers to.
enum class CondHazard {
  X1WhileX1Below,  // hazard of X1 given X2 > x2, on the region x1 < x2
  X2WhileX1Below,  // hazard of X2 given X1 > x1, on the region x1 < x2
  X1WhileX2Below,  // hazard of X1 given X2 > x2, on the region x2 < x1
  X2WhileX2Below,  // hazard of X2 given X1 > x1, on the region x2 < x1
};

struct GridCheckResult {
  bool holds = false;
  double worst = 0.0;  // minimum slack (pqd) or minimum ratio (tp2)
  PairObs at;          // a grid point attaining the extreme
};

class BivMaxModel {
 public:
  explicit BivMaxModel(BivMaxParams params);

  const BivMaxParams& params() const { return params_; }

  // P[X1 <= x1, X2 <= x2] = F1(x1) F2(x2) F3(min(x1,x2)).
  double joint_cdf(std::int64_t x1, std::int64_t x2) const;

  // P[X_which <= x] = F_which(x) F3(x). For the DsIW family this equals the
  // DsIW CDF at scale theta_which * theta3.
  double marginal_cdf(int which, std::int64_t x) const;
  double marginal_pmf(int which, std::int64_t x) const;
  std::int64_t marginal_quantile(int which, double u) const;

  // Authoritative mass: four-corner differencing of the joint CDF. Sums
  // telescope exactly, so mass accounting holds by construction.
  double joint_pmf(std::int64_t x1, std::int64_t x2) const;

  // Region closed forms of the mass (x1<x2 / x2<x1 / tie); mirrors
  // joint_pmf and exists as an independent cross-check route.
  // DsIW family only.
  double joint_pmf_by_region(std::int64_t x1, std::int64_t x2) const;

  // P[X1 > x1, X2 > x2].
  double joint_reliability(std::int64_t x1, std::int64_t x2) const;

  // Discrete hazard surface joint_pmf / joint_reliability.
  double bhrf(std::int64_t x1, std::int64_t x2) const;

  // Conditional hazard rates in their derivative-style closed form (the
  // ln-theta weighted expressions). These are not the same quantity as the
  // exact discrete ratio bhrf(); both are exposed. DsIW family only.
  double cond_hazard(CondHazard which, std::int64_t x1, std::int64_t x2) const;

  // Hazard vector components for a two-component parallel system.
  // hazard_tie: both components survived past x (evaluated at x1 = x2 = x);
  // hazard_survivor1/2: the surviving component after the other failed.
  // The survivor components depend only on their own scale and the shape.
  // DsIW family only.
  double hazard_tie(std::int64_t x) const;
  double hazard_survivor1(std::int64_t x1) const;
  double hazard_survivor2(std::int64_t x2) const;

  // P[X1 = x1 | X2 = given_x2] and P[X1 <= x1 | X2 <= given_le_x2].
  double conditional_pmf(std::int64_t x1, std::int64_t given_x2) const;
  double conditional_cdf(std::int64_t x1, std::int64_t given_le_x2) const;

  // Distribution of max(X1, X2); closed under the construction for the
  // DsIW family: DsIW(theta1 theta2 theta3, zeta). DsIW family only.
  Family max_marginal() const;

  // P[X1 < X2], summed until the truncation error bound falls below tol.
  double stress_strength(double tol = 1e-9) const;

  // 4 F(M1, M2) - 1 with M_d the marginal medians.
  double median_correlation() const;

  // E[y1^X1 y2^X2] for |y1|, |y2| < 1, truncated when the remaining mass
  // times the largest |y| power falls below tol.
  double pgf(double y1, double y2, double tol = 1e-9) const;

  // Positive quadrant dependence: joint_cdf >= product of marginal CDFs on
  // [0, grid_max]^2. Returns the minimum slack.
  GridCheckResult pqd_check(std::int64_t grid_max) const;

  // Total positivity of order two of the reliability surface over ordered
  // grid pairs in [0, grid_max]. Returns the minimum cross ratio.
  GridCheckResult tp2_check(std::int64_t grid_max) const;

  // Draws W1, W2, W3 (three uniforms, in that order) and returns
  // (max(W1,W3), max(W2,W3)).
  PairObs sample_pair(Rng& rng) const;

 private:
  Family scaled(double theta_product) const;  // DsIW at a product scale
  void require_dsiw(const char* what) const;

  BivMaxParams params_;
  Family f1_, f2_, f3_;
};

}  // namespace bdsiw
