// Acceptance suite: end-to-end checks of the fitted values, tests, and
// distributional properties the library commits to reproduce. Prints one
// PASS/FAIL line per criterion and exits with the number of failures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "bdsiw/datasets.hpp"
#include "bdsiw/inference.hpp"
#include "bdsiw/montecarlo.hpp"

using namespace bdsiw;

namespace {

struct Criterion {
  int id;
  std::string label;
  bool pass = true;
  std::vector<std::string> details;
};

std::vector<Criterion> g_criteria;

Criterion& criterion(int id, const std::string& label) {
  g_criteria.push_back({id, label});
  return g_criteria.back();
}

void expect(Criterion& c, bool ok, const std::string& what) {
  if (!ok) {
    c.pass = false;
    c.details.push_back(what);
  }
}

void expect_near(Criterion& c, const std::string& what, double actual, double target,
                 double tol) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s: got %.6g, want %.6g +/- %.2g", what.c_str(), actual,
                target, tol);
  expect(c, std::abs(actual - target) <= tol, buf);
}

std::vector<std::int64_t> column(const PairedSample& s, int which) {
  std::vector<std::int64_t> xs;
  for (const PairObs& o : s.observations)
    xs.push_back(which == 1 ? o.x1 : which == 2 ? o.x2 : o.x3());
  return xs;
}

std::vector<BivMaxParams> random_params(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BivMaxParams> out;
  for (int i = 0; i < count; ++i)
    out.push_back({rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95),
                   rng.uniform(0.4, 3.5), FamilyTag::DsIW});
  return out;
}

// ---------------------------------------------------------------------------

void criterion_univariate_fits() {
  Criterion& c = criterion(1, "univariate marginal fits");
  const PairedSample& fb = football_dataset().pairs;
  const PairedSample& ns = nasal_dataset().pairs;

  struct Case {
    const char* name;
    std::vector<std::int64_t> xs;
    double theta, zeta, nll;
  };
  const std::vector<Case> cases = {
      {"football x1", column(fb, 1), 0.237, 2.798, 30.86},
      {"football x2", column(fb, 2), 0.095, 2.601, 33.73},
      {"football min", column(fb, 3), 0.310, 3.103, 28.02},
      {"nasal x1", column(ns, 1), 0.065, 2.505, 40.99},
  };
  for (const Case& k : cases) {
    const UnivariateFitReport fit = fit_univariate(k.xs, FamilyTag::DsIW);
    expect(c, fit.converged, std::string(k.name) + ": fit did not converge");
    expect_near(c, std::string(k.name) + " theta", fit.family.theta(), k.theta, 0.02);
    expect_near(c, std::string(k.name) + " zeta", fit.family.zeta(), k.zeta, 0.02);
    expect_near(c, std::string(k.name) + " -logL", fit.neg_log_lik, k.nll, 0.05);
  }
}

struct DatasetFits {
  FitReport free_shape;
  FitReport pinned1;
  FitReport pinned2;
};

DatasetFits fit_all(const PairedSample& data) {
  return {fit_mle(data, FamilyTag::DsIW, std::nullopt, 8, 0),
          fit_mle(data, FamilyTag::DsIW, 1.0, 8, 0), fit_mle(data, FamilyTag::DsIW, 2.0, 8, 0)};
}

void criterion_football_fit(const DatasetFits& fb) {
  Criterion& c = criterion(2, "football model fits");
  expect(c, fb.free_shape.converged, "free-shape fit did not converge");
  expect_near(c, "-logL", fb.free_shape.neg_log_lik, 61.96, 0.1);
  expect_near(c, "theta1", fb.free_shape.params.theta1, 0.420, 0.05);
  expect_near(c, "theta2", fb.free_shape.params.theta2, 0.141, 0.05);
  expect_near(c, "theta3", fb.free_shape.params.theta3, 0.587, 0.05);
  expect_near(c, "zeta", fb.free_shape.params.zeta, 2.738, 0.05);
  expect_near(c, "BIC", fb.free_shape.criteria.bic, 136.95, 0.3);
  expect_near(c, "shape=2 -logL", fb.pinned2.neg_log_lik, 64.10, 0.1);
  expect_near(c, "shape=1 -logL", fb.pinned1.neg_log_lik, 78.54, 0.1);
}

void criterion_nasal_fit(const DatasetFits& ns) {
  Criterion& c = criterion(3, "nasal model fits");
  expect(c, ns.free_shape.converged, "free-shape fit did not converge");
  expect_near(c, "-logL", ns.free_shape.neg_log_lik, 76.51, 0.1);
  expect_near(c, "theta1", ns.free_shape.params.theta1, 0.192, 0.05);
  expect_near(c, "theta2", ns.free_shape.params.theta2, 0.337, 0.05);
  expect_near(c, "theta3", ns.free_shape.params.theta3, 0.360, 0.05);
  expect_near(c, "zeta", ns.free_shape.params.zeta, 2.453, 0.05);
  expect_near(c, "shape=2 -logL", ns.pinned2.neg_log_lik, 78.66, 0.1);
  expect_near(c, "shape=1 -logL", ns.pinned1.neg_log_lik, 92.48, 0.1);
}

void criterion_lrt(const DatasetFits& fb, const DatasetFits& ns) {
  Criterion& c = criterion(4, "likelihood-ratio tests and chi-squared tail");
  const LrtReport fb1 = lrt(fb.free_shape, fb.pinned1, 1);
  const LrtReport fb2 = lrt(fb.free_shape, fb.pinned2, 1);
  const LrtReport ns1 = lrt(ns.free_shape, ns.pinned1, 1);
  const LrtReport ns2 = lrt(ns.free_shape, ns.pinned2, 1);
  expect_near(c, "football lambda (shape=1)", fb1.lambda, 33.152, 0.3);
  expect_near(c, "football lambda (shape=2)", fb2.lambda, 4.288, 0.3);
  expect_near(c, "nasal lambda (shape=1)", ns1.lambda, 31.94, 0.3);
  expect_near(c, "nasal lambda (shape=2)", ns2.lambda, 4.3, 0.3);
  expect_near(c, "football p (shape=2)", fb2.p_value, 0.0384, 0.002);
  expect_near(c, "nasal p (shape=2)", ns2.p_value, 0.0381, 0.002);
  for (double x : {0.1, 1.0, 4.288, 33.152}) {
    const double ref = std::erfc(std::sqrt(x / 2.0));
    expect_near(c, "sf(" + std::to_string(x) + ",1) vs erfc", chi2_sf(x, 1), ref, 1e-10);
  }
}

void criterion_info_criteria(const DatasetFits& fb, const DatasetFits& ns) {
  Criterion& c = criterion(5, "information criteria");
  const InfoCriteria row = info_criteria(75.35, 3, 26);
  expect_near(c, "AIC", row.aic, 156.70, 0.005);
  expect(c, row.caic.has_value(), "CAIC undefined");
  if (row.caic) expect_near(c, "CAIC", *row.caic, 157.79, 0.005);
  expect_near(c, "BIC", row.bic, 160.47, 0.005);
  expect_near(c, "HQIC", row.hqic, 157.79, 0.005);

  const InfoCriteria& f = fb.free_shape.criteria;
  expect_near(c, "football AIC", f.aic, 131.82, 0.3);
  if (f.caic) expect_near(c, "football CAIC", *f.caic, 133.82, 0.3);
  expect_near(c, "football BIC", f.bic, 136.95, 0.3);
  expect_near(c, "football HQIC", f.hqic, 133.37, 0.3);

  const InfoCriteria& n = ns.free_shape.criteria;
  expect_near(c, "nasal AIC", n.aic, 161.02, 0.3);
  if (n.caic) expect_near(c, "nasal CAIC", *n.caic, 162.62, 0.3);
  expect_near(c, "nasal BIC", n.bic, 166.62, 0.3);
  expect_near(c, "nasal HQIC", n.hqic, 162.81, 0.3);
}

void criterion_dual_path() {
  Criterion& c = criterion(6, "mass differencing vs region closed forms");
  for (const BivMaxParams& p : random_params(20, 20260809)) {
    const BivMaxModel m(p);
    double worst = 0.0;
    double total = 0.0;
    for (std::int64_t a = 0; a <= 50; ++a)
      for (std::int64_t b = 0; b <= 50; ++b) {
        const double mass = m.joint_pmf(a, b);
        worst = std::max(worst, std::abs(mass - m.joint_pmf_by_region(a, b)));
        total += mass;
      }
    expect(c, worst <= 1e-12, "route disagreement " + std::to_string(worst));
    expect(c, std::abs(total - m.joint_cdf(50, 50)) <= 1e-12,
           "mass accounting off by " + std::to_string(std::abs(total - m.joint_cdf(50, 50))));
  }
}

void criterion_dependence() {
  Criterion& c = criterion(7, "quadrant dependence and total positivity");
  for (const BivMaxParams& p : random_params(20, 424242)) {
    const BivMaxModel m(p);
    const GridCheckResult pqd = m.pqd_check(20);
    expect(c, pqd.holds && pqd.worst >= 0.0, "pqd slack " + std::to_string(pqd.worst));
    const GridCheckResult tp2 = m.tp2_check(20);
    expect(c, tp2.holds && tp2.worst >= 1.0 - 1e-12, "tp2 ratio " + std::to_string(tp2.worst));
  }
}

void criterion_sampler() {
  Criterion& c = criterion(8, "sampler fidelity");
  const BivMaxParams p{0.8, 0.4, 0.4, 0.5, FamilyTag::DsIW};
  const BivMaxModel m(p);
  constexpr int kDraws = 100000;

  const std::vector<std::pair<std::int64_t, std::int64_t>> grid = {
      {0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}, {1, 3}, {4, 2}, {5, 5}, {13, 13}, {40, 40}};
  std::vector<int> hits(grid.size(), 0);
  const std::vector<std::int64_t> max_grid = {0, 1, 2, 3, 5, 8, 12, 20, 40, 80};
  std::vector<int> max_hits(max_grid.size(), 0);

  Rng rng(8080);
  for (int i = 0; i < kDraws; ++i) {
    const PairObs o = m.sample_pair(rng);
    for (std::size_t g = 0; g < grid.size(); ++g)
      hits[g] += o.x1 <= grid[g].first && o.x2 <= grid[g].second;
    const std::int64_t mx = std::max(o.x1, o.x2);
    for (std::size_t g = 0; g < max_grid.size(); ++g) max_hits[g] += mx <= max_grid[g];
  }

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double expected = m.joint_cdf(grid[g].first, grid[g].second);
    const double se = std::sqrt(expected * (1.0 - expected) / kDraws);
    char what[96];
    std::snprintf(what, sizeof(what), "joint cdf at (%lld,%lld)",
                  static_cast<long long>(grid[g].first), static_cast<long long>(grid[g].second));
    expect_near(c, what, hits[g] / double(kDraws), expected, 3.0 * se);
  }

  const Family mx = m.max_marginal();
  for (std::size_t g = 0; g < max_grid.size(); ++g) {
    const double expected = mx.cdf(max_grid[g]);
    const double se = std::sqrt(expected * (1.0 - expected) / kDraws);
    char what[64];
    std::snprintf(what, sizeof(what), "max cdf at %lld", static_cast<long long>(max_grid[g]));
    expect_near(c, what, max_hits[g] / double(kDraws), expected, 3.0 * se);
  }
}

void criterion_study() {
  Criterion& c = criterion(9, "replication study trends");
  struct Design {
    BivMaxParams truth;
    std::array<double, 4> ave_at_400;
  };
  const std::vector<Design> designs = {
      {{0.8, 0.4, 0.4, 0.5, FamilyTag::DsIW}, {0.788, 0.410, 0.401, 0.499}},
      {{0.6, 0.25, 0.3, 0.9, FamilyTag::DsIW}, {0.653, 0.279, 0.290, 0.890}},
  };
  static const char* kNames[4] = {"theta1", "theta2", "theta3", "zeta"};
  int design_index = 0;
  for (const Design& d : designs) {
    StudyConfig cfg;
    cfg.true_params = d.truth;
    cfg.sample_sizes = {50, 400};
    cfg.replications = 100;
    cfg.seed = 1337;
    cfg.fit.n_starts = 8;
    cfg.threads = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, 8);
    const StudyReport report = run_study(cfg);
    const StudyCell& at50 = report.cells[0];
    const StudyCell& at400 = report.cells[1];
    const std::string tag = "design " + std::to_string(++design_index) + " ";
    for (int k = 0; k < 4; ++k) {
      char what[96];
      std::snprintf(what, sizeof(what), "%smse(%s) shrinks (%g -> %g)", tag.c_str(), kNames[k],
                    at50.mse[k], at400.mse[k]);
      expect(c, at400.mse[k] < at50.mse[k], what);
      expect_near(c, tag + "ave(" + kNames[k] + ") at n=400", at400.ave[k], d.ave_at_400[k],
                  0.07);
    }
    expect(c, at50.failures * 5 <= cfg.replications,
           tag + "too many dropped replications at n=50");
  }
}

}  // namespace

int main() {
  const PairedSample& fb = football_dataset().pairs;
  const PairedSample& ns = nasal_dataset().pairs;

  criterion_univariate_fits();
  const DatasetFits fb_fits = fit_all(fb);
  const DatasetFits ns_fits = fit_all(ns);
  criterion_football_fit(fb_fits);
  criterion_nasal_fit(ns_fits);
  criterion_lrt(fb_fits, ns_fits);
  criterion_info_criteria(fb_fits, ns_fits);
  criterion_dual_path();
  criterion_dependence();
  criterion_sampler();
  criterion_study();

  int failures = 0;
  for (const Criterion& c : g_criteria) {
    std::printf("[%s] criterion %d: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.label.c_str());
    for (const std::string& d : c.details) std::printf("        %s\n", d.c_str());
    failures += !c.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_criteria.size()) - failures,
              g_criteria.size());
  return failures;
}
