#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bdsiw/datasets.hpp"
#include "bdsiw/inference.hpp"

using namespace bdsiw;

namespace {

const PairedSample& football() { return football_dataset().pairs; }
const PairedSample& nasal() { return nasal_dataset().pairs; }

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("paired sample partition counts") {
  CHECK(football().size() == 26);
  CHECK(football().n_lower == 12);
  CHECK(football().n_upper == 3);
  CHECK(football().n_tied == 11);
  CHECK(nasal().size() == 30);
  CHECK(nasal().n_lower == 5);
  CHECK(nasal().n_upper == 8);
  CHECK(nasal().n_tied == 17);
  CHECK_THROWS_AS(PairedSample::from_pairs({{1, -2}}), std::invalid_argument);
}

TEST_CASE("log likelihood at published optima") {
  CHECK(std::abs(-log_likelihood({0.420, 0.141, 0.587, 2.738, FamilyTag::DsIW}, football()) -
                 61.96058076503434) <= 1e-9);
  CHECK(std::abs(-log_likelihood({0.192, 0.337, 0.360, 2.453, FamilyTag::DsIW}, nasal()) -
                 76.51371306227982) <= 1e-9);

  SUBCASE("single observation at the origin") {
    const PairedSample one = PairedSample::from_pairs({{0, 0}});
    const BivMaxParams p{0.3, 0.4, 0.5, 1.7, FamilyTag::DsIW};
    CHECK(std::abs(log_likelihood(p, one) - std::log(0.3 * 0.4 * 0.5)) <= 1e-12);
  }

  SUBCASE("an underflowed cell yields the minus-infinity sentinel") {
    const PairedSample far = PairedSample::from_pairs({{1000000000, 1000000000}});
    CHECK(log_likelihood({0.5, 0.5, 0.5, 3.0, FamilyTag::DsIW}, far) ==
          -std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("numeric score") {
  SUBCASE("one observation at the origin has a closed-form gradient") {
    const PairedSample one = PairedSample::from_pairs({{0, 0}});
    const BivMaxParams p{0.3, 0.4, 0.5, 1.7, FamilyTag::DsIW};
    // log mass is ln t1 + ln t2 + ln t3; in logit coordinates the slope in
    // coordinate i is 1 - theta_i, and the shape has no effect
    const std::array<double, 4> g = score_numeric(p, one);
    CHECK(std::abs(g[0] - (1.0 - 0.3)) <= 1e-6);
    CHECK(std::abs(g[1] - (1.0 - 0.4)) <= 1e-6);
    CHECK(std::abs(g[2] - (1.0 - 0.5)) <= 1e-6);
    CHECK(std::abs(g[3]) <= 1e-6);
  }

  SUBCASE("mirrors when both data and scales swap roles") {
    const BivMaxParams p{0.35, 0.6, 0.5, 1.4, FamilyTag::DsIW};
    std::vector<PairObs> swapped;
    for (const PairObs& o : football().observations) swapped.push_back({o.x2, o.x1});
    const std::array<double, 4> g = score_numeric(p, football());
    const std::array<double, 4> h =
        score_numeric(p.swapped(), PairedSample::from_pairs(swapped));
    CHECK(std::abs(g[0] - h[1]) <= 1e-7);
    CHECK(std::abs(g[1] - h[0]) <= 1e-7);
    CHECK(std::abs(g[2] - h[2]) <= 1e-7);
    CHECK(std::abs(g[3] - h[3]) <= 1e-7);
  }
}

TEST_CASE("information criteria") {
  SUBCASE("published three-parameter row") {
    const InfoCriteria c = info_criteria(75.35, 3, 26);
    CHECK(std::abs(c.aic - 156.70) <= 0.005);
    CHECK(c.caic.has_value());
    CHECK(std::abs(*c.caic - 157.79) <= 0.005);
    CHECK(std::abs(c.bic - 160.47) <= 0.005);
    CHECK(std::abs(c.hqic - 157.79) <= 0.005);
  }
  SUBCASE("another published row") {
    const InfoCriteria c = info_criteria(92.48, 3, 30);
    CHECK(std::abs(c.aic - 190.96) <= 0.005);
    CHECK(std::abs(c.bic - 195.16) <= 0.005);
  }
  SUBCASE("degenerate zero case") {
    const InfoCriteria c = info_criteria(0.0, 0, 3);
    CHECK(c.aic == 0.0);
    CHECK(c.bic == 0.0);
    CHECK(c.hqic == 0.0);
    CHECK(c.caic.has_value());
    CHECK(*c.caic == 0.0);
  }
  SUBCASE("small-sample correction becomes undefined") {
    CHECK_FALSE(info_criteria(10.0, 3, 4).caic.has_value());
    CHECK(info_criteria(10.0, 3, 5).caic.has_value());
  }
  CHECK_THROWS_AS(info_criteria(1.0, -1, 10), std::invalid_argument);
  CHECK_THROWS_AS(info_criteria(1.0, 2, 0), std::invalid_argument);
}

TEST_CASE("chi squared survival function") {
  CHECK(chi2_sf(0.0, 1) == 1.0);

  SUBCASE("erfc identity for one degree of freedom") {
    for (double x : {0.1, 1.0, 4.288, 33.152, 4.3, 12.5})
      CHECK(std::abs(chi2_sf(x, 1) - std::erfc(std::sqrt(x / 2.0))) <= 1e-10);
  }

  SUBCASE("closed form for two degrees of freedom") {
    for (double x : {0.2, 1.0, 3.7, 25.0})
      CHECK(std::abs(chi2_sf(x, 2) - std::exp(-x / 2.0)) <= 1e-12);
  }

  SUBCASE("published p values") {
    CHECK(std::abs(chi2_sf(4.288, 1) - 0.0384) <= 2e-4);
    CHECK(std::abs(chi2_sf(4.3, 1) - 0.0381) <= 2e-4);
    CHECK(chi2_sf(33.152, 1) < 0.01);
  }

  SUBCASE("monotone in x and complement of the lower tail") {
    for (int df : {1, 3, 7}) {
      double prev = 1.0;
      for (double x = 0.25; x < 30.0; x += 0.25) {
        const double s = chi2_sf(x, df);
        CHECK(s <= prev);
        CHECK(s >= 0.0);
        prev = s;
      }
    }
  }

  CHECK_THROWS_AS(chi2_sf(-1.0, 1), std::domain_error);
  CHECK_THROWS_AS(chi2_sf(1.0, 0), std::domain_error);
}

TEST_CASE("bivariate fits recover the published optima") {
  SUBCASE("football free shape") {
    const FitReport fit = fit_mle(football(), FamilyTag::DsIW, std::nullopt, 8, 0);
    CHECK(fit.converged);
    CHECK(std::abs(fit.neg_log_lik - 61.96058) <= 5e-3);
    CHECK(std::abs(fit.params.theta1 - 0.4202) <= 0.01);
    CHECK(std::abs(fit.params.theta2 - 0.1410) <= 0.01);
    CHECK(std::abs(fit.params.theta3 - 0.5872) <= 0.01);
    CHECK(std::abs(fit.params.zeta - 2.7380) <= 0.02);
    CHECK_FALSE(fit.fixed_shape.has_value());

    SUBCASE("score vanishes at the fitted optimum") {
      const std::array<double, 4> g = score_numeric(fit.params, football());
      for (double gi : g) CHECK(std::abs(gi) < 1e-2);
    }
  }

  SUBCASE("football pinned shapes") {
    CHECK(std::abs(fit_mle(football(), FamilyTag::DsIW, 2.0, 8, 0).neg_log_lik - 64.10402) <= 5e-3);
    CHECK(std::abs(fit_mle(football(), FamilyTag::DsIW, 1.0, 8, 0).neg_log_lik - 78.53655) <= 5e-3);
  }

  SUBCASE("nasal fits") {
    CHECK(std::abs(fit_mle(nasal(), FamilyTag::DsIW, std::nullopt, 8, 0).neg_log_lik - 76.51370) <=
          5e-3);
    CHECK(std::abs(fit_mle(nasal(), FamilyTag::DsIW, 2.0, 8, 0).neg_log_lik - 77.66446) <= 5e-3);
    CHECK(std::abs(fit_mle(nasal(), FamilyTag::DsIW, 1.0, 8, 0).neg_log_lik - 92.47669) <= 5e-3);
  }

  SUBCASE("score at the fitted nasal optimum") {
    const FitReport fit = fit_mle(nasal(), FamilyTag::DsIW, std::nullopt, 8, 0);
    const std::array<double, 4> g = score_numeric(fit.params, nasal());
    for (double gi : g) CHECK(std::abs(gi) < 1e-2);
  }
}

TEST_CASE("the restriction never beats the free fit") {
  for (const PairedSample* data : {&football(), &nasal()}) {
    const double free_fit = fit_mle(*data, FamilyTag::DsIW, std::nullopt, 6, 1).neg_log_lik;
    for (double shape : {1.0, 2.0})
      CHECK(free_fit <= fit_mle(*data, FamilyTag::DsIW, shape, 6, 1).neg_log_lik + 1e-6);
  }
}

TEST_CASE("fits agree across optimizer seeds") {
  for (const PairedSample* data : {&football(), &nasal()}) {
    std::vector<double> optima;
    for (std::uint64_t seed = 1; seed <= 8; ++seed)
      optima.push_back(fit_mle(*data, FamilyTag::DsIW, std::nullopt, 4, seed).neg_log_lik);
    const auto [lo, hi] = std::minmax_element(optima.begin(), optima.end());
    CHECK(*hi - *lo <= 1e-4);
  }
}

TEST_CASE("estimates concentrate with sample size") {
  const BivMaxParams truth{0.6, 0.3, 0.4, 1.2, FamilyTag::DsIW};
  const BivMaxModel model(truth);
  int good = 0;
  constexpr int kReps = 20;
  for (int rep = 0; rep < kReps; ++rep) {
    Rng rng = Rng::substream(2024, 0, static_cast<std::uint64_t>(rep));
    std::vector<PairObs> pairs(2000);
    for (PairObs& p : pairs) p = model.sample_pair(rng);
    FitOptions opt;
    opt.n_starts = 3;
    opt.seed = static_cast<std::uint64_t>(rep);
    const FitReport fit = fit_mle(PairedSample::from_pairs(std::move(pairs)), FamilyTag::DsIW,
                                  std::nullopt, opt);
    const bool close = std::abs(fit.params.theta1 - truth.theta1) < 0.05 &&
                       std::abs(fit.params.theta2 - truth.theta2) < 0.05 &&
                       std::abs(fit.params.theta3 - truth.theta3) < 0.05 &&
                       std::abs(fit.params.zeta - truth.zeta) < 0.05;
    good += close;
  }
  CHECK(good >= 18);  // at least 90%
}

TEST_CASE("univariate fits recover the published margins") {
  std::vector<std::int64_t> x1s, x2s, mins;
  for (const PairObs& o : football().observations) {
    x1s.push_back(o.x1);
    x2s.push_back(o.x2);
    mins.push_back(o.x3());
  }

  const UnivariateFitReport f1 = fit_univariate(x1s, FamilyTag::DsIW);
  CHECK(f1.converged);
  CHECK(std::abs(f1.neg_log_lik - 30.86499) <= 5e-3);
  CHECK(std::abs(f1.family.theta() - 0.2375) <= 0.01);
  CHECK(std::abs(f1.family.zeta() - 2.7987) <= 0.02);

  CHECK(std::abs(fit_univariate(x2s, FamilyTag::DsIW).neg_log_lik - 33.72890) <= 5e-3);
  CHECK(std::abs(fit_univariate(mins, FamilyTag::DsIW).neg_log_lik - 28.02256) <= 5e-3);

  SUBCASE("pinned-shape variant carries no free shape") {
    const UnivariateFitReport fe = fit_univariate(x1s, FamilyTag::DsE);
    CHECK(fe.family.zeta() == 1.0);
    CHECK(fe.converged);
  }

  CHECK_THROWS_AS(fit_univariate(std::vector<std::int64_t>{}, FamilyTag::DsIW),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_univariate(std::vector<std::int64_t>{1, -3}, FamilyTag::DsIW),
                  std::invalid_argument);
}

TEST_CASE("likelihood ratio tests") {
  const FitReport full = fit_mle(football(), FamilyTag::DsIW, std::nullopt, 8, 0);
  const FitReport pinned1 = fit_mle(football(), FamilyTag::DsIW, 1.0, 8, 0);
  const FitReport pinned2 = fit_mle(football(), FamilyTag::DsIW, 2.0, 8, 0);

  const LrtReport t1 = lrt(full, pinned1, 1);
  CHECK(std::abs(t1.lambda - 33.152) <= 0.05);
  CHECK(t1.p_value < 0.01);

  const LrtReport t2 = lrt(full, pinned2, 1);
  CHECK(std::abs(t2.lambda - 4.2869) <= 0.02);
  CHECK(std::abs(t2.p_value - 0.0384) <= 5e-4);

  SUBCASE("identical fits give a unit p value") {
    const LrtReport same = lrt(full, full, 1);
    CHECK(same.lambda == 0.0);
    CHECK(same.p_value == 1.0);
  }

  SUBCASE("a better restricted value is clamped with a warning") {
    const LrtReport odd = lrt(pinned2, full, 1);
    CHECK(odd.lambda == 0.0);
    CHECK_FALSE(odd.warnings.empty());
  }

  CHECK_THROWS_AS(lrt(full, pinned1, 0), std::invalid_argument);
}

TEST_CASE("fit warnings and failure modes") {
  SUBCASE("tiny samples warn") {
    const PairedSample tiny = PairedSample::from_pairs({{0, 1}, {2, 1}});
    const FitReport fit = fit_mle(tiny, FamilyTag::DsIW, 1.0, 3, 1);
    bool warned = false;
    for (const std::string& w : fit.warnings) warned = warned || w.find("fewer than 4") != std::string::npos;
    CHECK(warned);
  }

  SUBCASE("constant samples are flagged as degenerate") {
    const PairedSample flat =
        PairedSample::from_pairs({{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
    std::vector<std::string> warnings;
    try {
      warnings = fit_mle(flat, FamilyTag::DsIW, 1.0, 2, 1).warnings;
    } catch (const NonConvergenceError& e) {
      warnings = e.best().warnings;
    }
    bool flagged = false;
    for (const std::string& w : warnings) flagged = flagged || w.find("degenerate") != std::string::npos;
    CHECK(flagged);
  }

  SUBCASE("an impossible tolerance raises non-convergence with the best point") {
    FitOptions opt;
    opt.n_starts = 2;
    opt.max_iterations = 3;
    opt.f_tol = 0.0;  // unappeasable
    opt.x_tol = 0.0;
    CHECK_THROWS_AS(fit_mle(football(), FamilyTag::DsIW, std::nullopt, opt), NonConvergenceError);
    try {
      fit_mle(football(), FamilyTag::DsIW, std::nullopt, opt);
    } catch (const NonConvergenceError& e) {
      CHECK(std::isfinite(e.best().neg_log_lik));
      CHECK_FALSE(e.best().converged);
    }
  }

  SUBCASE("pinned-shape family names alias the base family") {
    const FitReport viaTag = fit_mle(football(), FamilyTag::DsE, std::nullopt, 4, 2);
    const FitReport viaPin = fit_mle(football(), FamilyTag::DsW, 1.0, 4, 2);
    CHECK(viaTag.neg_log_lik == doctest::Approx(viaPin.neg_log_lik).epsilon(1e-9));
    CHECK(viaTag.params.family == FamilyTag::DsW);
    CHECK(viaTag.fixed_shape == 1.0);
    CHECK_THROWS_AS(fit_mle(football(), FamilyTag::DsE, 2.0, 4, 2), std::invalid_argument);
  }
}

}  // TEST_SUITE
