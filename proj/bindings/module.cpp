#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bdsiw/datasets.hpp"
#include "bdsiw/inference.hpp"
#include "bdsiw/montecarlo.hpp"

namespace py = pybind11;
using namespace bdsiw;

namespace {

PairedSample sample_from_list(const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs) {
  std::vector<PairObs> obs;
  obs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) obs.push_back({a, b});
  return PairedSample::from_pairs(std::move(obs));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "bivariate discrete inverse Weibull distribution: model, inference, simulation";

  py::enum_<FamilyTag>(m, "FamilyTag")
      .value("DsIW", FamilyTag::DsIW)
      .value("DsW", FamilyTag::DsW)
      .value("DsE", FamilyTag::DsE)
      .value("DsR", FamilyTag::DsR);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform01", &Rng::uniform01);

  py::class_<Family>(m, "Family")
      .def_static("dsiw", &Family::dsiw, py::arg("theta"), py::arg("zeta"))
      .def_static("dsw", &Family::dsw, py::arg("theta"), py::arg("zeta"))
      .def_static("dse", &Family::dse, py::arg("theta"))
      .def_static("dsr", &Family::dsr, py::arg("theta"))
      .def_property_readonly("theta", &Family::theta)
      .def_property_readonly("zeta", &Family::zeta)
      .def("cdf", &Family::cdf)
      .def("pmf", &Family::pmf)
      .def("quantile", &Family::quantile)
      .def("median", &Family::median)
      .def("sample", &Family::sample);

  py::class_<PairObs>(m, "PairObs")
      .def(py::init<std::int64_t, std::int64_t>(), py::arg("x1"), py::arg("x2"))
      .def_readonly("x1", &PairObs::x1)
      .def_readonly("x2", &PairObs::x2)
      .def("x3", &PairObs::x3);

  py::class_<BivMaxParams>(m, "BivMaxParams")
      .def(py::init([](double t1, double t2, double t3, double z, FamilyTag family) {
             BivMaxParams p{t1, t2, t3, z, family};
             p.validate();
             return p;
           }),
           py::arg("theta1"), py::arg("theta2"), py::arg("theta3"), py::arg("zeta"),
           py::arg("family") = FamilyTag::DsIW)
      .def_readonly("theta1", &BivMaxParams::theta1)
      .def_readonly("theta2", &BivMaxParams::theta2)
      .def_readonly("theta3", &BivMaxParams::theta3)
      .def_readonly("zeta", &BivMaxParams::zeta)
      .def_readonly("family", &BivMaxParams::family);

  py::class_<BivMaxModel>(m, "BivMaxModel")
      .def(py::init<BivMaxParams>())
      .def("joint_cdf", &BivMaxModel::joint_cdf)
      .def("joint_pmf", &BivMaxModel::joint_pmf)
      .def("joint_reliability", &BivMaxModel::joint_reliability)
      .def("marginal_cdf", &BivMaxModel::marginal_cdf)
      .def("marginal_pmf", &BivMaxModel::marginal_pmf)
      .def("bhrf", &BivMaxModel::bhrf)
      .def("conditional_pmf", &BivMaxModel::conditional_pmf)
      .def("conditional_cdf", &BivMaxModel::conditional_cdf)
      .def("max_marginal", &BivMaxModel::max_marginal)
      .def("stress_strength", &BivMaxModel::stress_strength, py::arg("tol") = 1e-9)
      .def("median_correlation", &BivMaxModel::median_correlation)
      .def("pgf", &BivMaxModel::pgf, py::arg("y1"), py::arg("y2"), py::arg("tol") = 1e-9)
      .def("sample_pair", &BivMaxModel::sample_pair);

  py::class_<PairedSample>(m, "PairedSample")
      .def(py::init(&sample_from_list))
      .def_property_readonly("n", &PairedSample::size)
      .def_readonly("n_lower", &PairedSample::n_lower)
      .def_readonly("n_upper", &PairedSample::n_upper)
      .def_readonly("n_tied", &PairedSample::n_tied);

  py::class_<InfoCriteria>(m, "InfoCriteria")
      .def_readonly("aic", &InfoCriteria::aic)
      .def_readonly("bic", &InfoCriteria::bic)
      .def_readonly("hqic", &InfoCriteria::hqic)
      .def_readonly("caic", &InfoCriteria::caic);

  py::class_<FitReport>(m, "FitReport")
      .def_readonly("params", &FitReport::params)
      .def_readonly("neg_log_lik", &FitReport::neg_log_lik)
      .def_readonly("criteria", &FitReport::criteria)
      .def_readonly("converged", &FitReport::converged)
      .def_readonly("n_starts", &FitReport::n_starts)
      .def_readonly("warnings", &FitReport::warnings);

  py::class_<UnivariateFitReport>(m, "UnivariateFitReport")
      .def_readonly("family", &UnivariateFitReport::family)
      .def_readonly("neg_log_lik", &UnivariateFitReport::neg_log_lik)
      .def_readonly("converged", &UnivariateFitReport::converged);

  py::class_<LrtReport>(m, "LrtReport")
      .def_readonly("lambda_", &LrtReport::lambda)
      .def_readonly("df", &LrtReport::df)
      .def_readonly("p_value", &LrtReport::p_value);

  m.def("log_likelihood", &log_likelihood);
  m.def(
      "fit_mle",
      [](const PairedSample& data, FamilyTag family, std::optional<double> fixed_shape,
         int n_starts, std::uint64_t seed) {
        return fit_mle(data, family, fixed_shape, n_starts, seed);
      },
      py::arg("data"), py::arg("family") = FamilyTag::DsIW,
      py::arg("fixed_shape") = std::nullopt, py::arg("n_starts") = 8, py::arg("seed") = 0);
  m.def(
      "fit_univariate",
      [](const std::vector<std::int64_t>& xs, FamilyTag family, int n_starts,
         std::uint64_t seed) {
        FitOptions opt;
        opt.n_starts = n_starts;
        opt.seed = seed;
        return fit_univariate(xs, family, opt);
      },
      py::arg("xs"), py::arg("family") = FamilyTag::DsIW, py::arg("n_starts") = 8,
      py::arg("seed") = 0);
  m.def("info_criteria", &info_criteria, py::arg("neg_log_lik"), py::arg("k"), py::arg("n"));
  m.def("lrt", &lrt, py::arg("full"), py::arg("restricted"), py::arg("df"));
  m.def("chi2_sf", &chi2_sf, py::arg("x"), py::arg("df"));

  m.def(
      "football_pairs",
      [] {
        std::vector<std::pair<std::int64_t, std::int64_t>> out;
        for (const PairObs& o : football_dataset().pairs.observations)
          out.emplace_back(o.x1, o.x2);
        return out;
      },
      "embedded football score pairs");
  m.def(
      "nasal_pairs",
      [] {
        std::vector<std::pair<std::int64_t, std::int64_t>> out;
        for (const PairObs& o : nasal_dataset().pairs.observations) out.emplace_back(o.x1, o.x2);
        return out;
      },
      "embedded nasal severity pairs");

  py::class_<StudyCell>(m, "StudyCell")
      .def_readonly("sample_size", &StudyCell::sample_size)
      .def_readonly("ave", &StudyCell::ave)
      .def_readonly("mse", &StudyCell::mse)
      .def_readonly("failures", &StudyCell::failures)
      .def_readonly("flagged", &StudyCell::flagged);

  m.def(
      "run_study",
      [](const BivMaxParams& truth, const std::vector<int>& sizes, int replications,
         std::uint64_t seed, int n_starts, int threads) {
        StudyConfig cfg;
        cfg.true_params = truth;
        cfg.sample_sizes = sizes;
        cfg.replications = replications;
        cfg.seed = seed;
        cfg.fit.n_starts = n_starts;
        cfg.threads = threads;
        return run_study(cfg).cells;
      },
      py::arg("truth"), py::arg("sizes"), py::arg("replications"), py::arg("seed") = 0,
      py::arg("n_starts") = 8, py::arg("threads") = 1);
}
