#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdsiw/datasets.hpp"
#include "bdsiw/inference.hpp"
#include "bdsiw/montecarlo.hpp"
#include "bdsiw/report.hpp"

namespace {

using namespace bdsiw;

// exit codes: 0 success, 2 usage, 3 data/parse, 4 non-convergence, 1 other
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNonConvergence = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelSpec {
  std::string name;
  FamilyTag family;
  std::optional<double> fixed_shape;
};

ModelSpec parse_model(const std::string& name) {
  static const std::map<std::string, ModelSpec> table = {
      {"bdsiw", {"bdsiw", FamilyTag::DsIW, std::nullopt}},
      {"bdsie", {"bdsie", FamilyTag::DsIW, 1.0}},
      {"bdsir", {"bdsir", FamilyTag::DsIW, 2.0}},
      {"bdsw", {"bdsw", FamilyTag::DsW, std::nullopt}},
      {"bdse", {"bdse", FamilyTag::DsW, 1.0}},
      {"bdsr", {"bdsr", FamilyTag::DsW, 2.0}},
  };
  const auto it = table.find(name);
  if (it == table.end())
    throw UsageError("unknown model '" + name +
                     "' (expected one of bdsiw, bdsie, bdsir, bdsw, bdse, bdsr)");
  return it->second;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Dataset resolve_dataset(const std::string& spec, int col1, int col2) {
  if (const Dataset* embedded = find_embedded(spec)) return *embedded;
  return load_csv(spec, col1, col2);
}

std::string p_value_display(double p) {
  return p < 0.01 ? "<0.01" : format_double(p);
}

void emit(const ReportDocument& doc, const std::string& format, const std::string& table) {
  if (format == "structured")
    std::cout << doc.serialize();
  else
    std::cout << table;
}

void describe_dataset(const Dataset& d, ReportDocument& doc, std::ostream& table) {
  doc.add("dataset", d.name);
  doc.add("provenance", d.provenance);
  doc.add("n", d.pairs.size());
  doc.add("n_lower", d.pairs.n_lower);
  doc.add("n_upper", d.pairs.n_upper);
  doc.add("n_tied", d.pairs.n_tied);
  for (const std::string& note : d.notes) doc.add("note", note);
  table << "dataset: " << d.name << "  (n=" << d.pairs.size() << "; x1<x2: " << d.pairs.n_lower
        << ", x1>x2: " << d.pairs.n_upper << ", ties: " << d.pairs.n_tied << ")\n";
  for (const std::string& note : d.notes) table << "note: " << note << "\n";
}

void add_fit(const std::string& prefix, const ModelSpec& model, const FitReport& fit,
             ReportDocument& doc, std::ostream& table) {
  doc.add(prefix + "model", model.name);
  doc.add(prefix + "family", to_string(fit.params.family));
  if (fit.fixed_shape) doc.add(prefix + "fixed_shape", *fit.fixed_shape);
  doc.add(prefix + "theta1", fit.params.theta1);
  doc.add(prefix + "theta2", fit.params.theta2);
  doc.add(prefix + "theta3", fit.params.theta3);
  doc.add(prefix + "zeta", fit.params.zeta);
  doc.add(prefix + "neg_log_lik", fit.neg_log_lik);
  doc.add(prefix + "aic", fit.criteria.aic);
  if (fit.criteria.caic) doc.add(prefix + "caic", *fit.criteria.caic);
  doc.add(prefix + "bic", fit.criteria.bic);
  doc.add(prefix + "hqic", fit.criteria.hqic);
  doc.add(prefix + "converged", fit.converged ? "1" : "0");
  doc.add(prefix + "starts", fit.n_starts);
  doc.add(prefix + "iterations", fit.iterations);
  for (const std::string& w : fit.warnings) doc.add(prefix + "warning", w);

  char line[256];
  std::snprintf(line, sizeof(line),
                "model %-6s theta=(%.4f, %.4f, %.4f) zeta=%.4f%s\n"
                "  -log L = %.4f\n  AIC=%.2f  CAIC=%s  BIC=%.2f  HQIC=%.2f\n"
                "  converged: %s (%d starts)\n",
                model.name.c_str(), fit.params.theta1, fit.params.theta2, fit.params.theta3,
                fit.params.zeta, fit.fixed_shape ? " [shape pinned]" : "", fit.neg_log_lik,
                fit.criteria.aic,
                fit.criteria.caic ? format_double(*fit.criteria.caic).c_str() : "n/a",
                fit.criteria.bic, fit.criteria.hqic, fit.converged ? "yes" : "NO", fit.n_starts);
  table << line;
  for (const std::string& w : fit.warnings) table << "  warning: " << w << "\n";
}

void add_univariate(const std::string& prefix, const UnivariateFitReport& fit,
                    ReportDocument& doc, std::ostream& table) {
  doc.add(prefix + "family", to_string(fit.family.tag()));
  doc.add(prefix + "theta", fit.family.theta());
  doc.add(prefix + "zeta", fit.family.zeta());
  doc.add(prefix + "neg_log_lik", fit.neg_log_lik);
  doc.add(prefix + "converged", fit.converged ? "1" : "0");
  char line[160];
  std::snprintf(line, sizeof(line), "  %-12s theta=%.4f zeta=%.4f  -log L = %.4f\n",
                prefix.c_str(), fit.family.theta(), fit.family.zeta(), fit.neg_log_lik);
  table << line;
}

// --------------------------------------------------------------------------

struct GlobalFlags {
  std::uint64_t seed = 0;
  std::string format = "table";
  double tol = 1e-9;
};

int cmd_datasets(const GlobalFlags& g) {
  ReportDocument doc;
  std::ostringstream table;
  doc.add("kind", "datasets");
  for (const std::string& name : embedded_dataset_names()) {
    const Dataset& d = *find_embedded(name);
    doc.add("name", name);
    doc.add(name + ".n", d.pairs.size());
    table << name << "  n=" << d.pairs.size() << "  (x1<x2: " << d.pairs.n_lower
          << ", x1>x2: " << d.pairs.n_upper << ", ties: " << d.pairs.n_tied << ")\n";
  }
  emit(doc, g.format, table.str());
  return 0;
}

int cmd_fit(const GlobalFlags& g, const std::string& data, int col1, int col2,
            const std::string& family, std::optional<double> fix_shape, int starts,
            bool marginals) {
  ModelSpec model = parse_model(family);
  if (fix_shape) {
    if (model.fixed_shape && *model.fixed_shape != *fix_shape)
      throw UsageError("--fix-shape conflicts with the pinned shape of model " + model.name);
    model.fixed_shape = fix_shape;
  }
  const Dataset dataset = resolve_dataset(data, col1, col2);

  ReportDocument doc;
  std::ostringstream table;
  doc.add("kind", "fit");
  describe_dataset(dataset, doc, table);

  const FitReport fit =
      fit_mle(dataset.pairs, model.family, model.fixed_shape, starts, g.seed);
  add_fit("", model, fit, doc, table);

  if (marginals) {
    std::vector<std::int64_t> x1s, x2s, mins;
    for (const PairObs& o : dataset.pairs.observations) {
      x1s.push_back(o.x1);
      x2s.push_back(o.x2);
      mins.push_back(o.x3());
    }
    FitOptions opt;
    opt.n_starts = starts;
    opt.seed = g.seed;
    table << "marginal fits (" << to_string(model.family) << "):\n";
    add_univariate("marginal.x1.", fit_univariate(x1s, model.family, opt), doc, table);
    add_univariate("marginal.x2.", fit_univariate(x2s, model.family, opt), doc, table);
    add_univariate("marginal.min.", fit_univariate(mins, model.family, opt), doc, table);
  }
  emit(doc, g.format, table.str());
  return 0;
}

int cmd_compare(const GlobalFlags& g, const std::string& data, int col1, int col2,
                const std::string& models_csv, int starts) {
  const std::vector<std::string> names = split_list(models_csv);
  if (names.size() < 2) throw UsageError("compare needs at least two models");
  const Dataset dataset = resolve_dataset(data, col1, col2);

  ReportDocument doc;
  std::ostringstream table;
  doc.add("kind", "compare");
  describe_dataset(dataset, doc, table);

  struct Row {
    ModelSpec model;
    FitReport fit;
  };
  std::vector<Row> rows;
  for (const std::string& name : names) {
    const ModelSpec model = parse_model(name);
    rows.push_back({model, fit_mle(dataset.pairs, model.family, model.fixed_shape, starts,
                                   g.seed)});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.fit.criteria.aic < b.fit.criteria.aic; });

  table << "models (sorted by AIC):\n";
  for (const Row& row : rows) add_fit(row.model.name + ".", row.model, row.fit, doc, table);

  // likelihood-ratio tests: each pinned-shape model against its free-shape
  // parent, when both were fitted
  table << "likelihood-ratio tests:\n";
  bool any_lrt = false;
  for (const Row& restricted : rows) {
    if (!restricted.model.fixed_shape) continue;
    for (const Row& full : rows) {
      if (full.model.fixed_shape || full.model.family != restricted.model.family) continue;
      const LrtReport test = lrt(full.fit, restricted.fit, 1);
      any_lrt = true;
      const std::string prefix = "lrt." + restricted.model.name + ".";
      doc.add(prefix + "h0", "zeta=" + format_double(*restricted.model.fixed_shape));
      doc.add(prefix + "lambda", test.lambda);
      doc.add(prefix + "df", test.df);
      doc.add(prefix + "p_value", test.p_value);
      doc.add(prefix + "p_value_display", p_value_display(test.p_value));
      for (const std::string& w : test.warnings) doc.add(prefix + "warning", w);
      char line[160];
      std::snprintf(line, sizeof(line),
                    "  %-6s H0: zeta=%g  Lambda=%.4f  df=%d  p=%s (exact %.6g)\n",
                    restricted.model.name.c_str(), *restricted.model.fixed_shape, test.lambda,
                    test.df, p_value_display(test.p_value).c_str(), test.p_value);
      table << line;
    }
  }
  if (!any_lrt) table << "  (none: no nested pair among the fitted models)\n";
  emit(doc, g.format, table.str());
  return 0;
}

int cmd_simulate(const GlobalFlags& g, const std::string& truth_csv, const std::string& sizes_csv,
                 int reps, int starts, int threads, const std::string& family) {
  if (reps < 1) throw UsageError("--reps must be at least 1");
  const std::vector<std::string> truth_parts = split_list(truth_csv);
  if (truth_parts.size() != 4)
    throw UsageError("--truth expects four comma-separated values: theta1,theta2,theta3,zeta");
  const ModelSpec model = parse_model(family);
  if (model.fixed_shape) throw UsageError("simulate uses the free-shape models (bdsiw or bdsw)");

  StudyConfig cfg;
  cfg.true_params = {std::stod(truth_parts[0]), std::stod(truth_parts[1]),
                     std::stod(truth_parts[2]), std::stod(truth_parts[3]), model.family};
  for (const std::string& s : split_list(sizes_csv)) cfg.sample_sizes.push_back(std::stoi(s));
  cfg.replications = reps;
  cfg.seed = g.seed;
  cfg.fit.n_starts = starts;
  cfg.threads = threads;

  const StudyReport study = run_study(cfg);

  ReportDocument doc;
  std::ostringstream table;
  doc.add("kind", "simulate");
  doc.add("family", to_string(model.family));
  doc.add("truth.theta1", cfg.true_params.theta1);
  doc.add("truth.theta2", cfg.true_params.theta2);
  doc.add("truth.theta3", cfg.true_params.theta3);
  doc.add("truth.zeta", cfg.true_params.zeta);
  doc.add("replications", reps);
  doc.add("seed", static_cast<std::int64_t>(g.seed));

  table << "replication study: truth theta=(" << cfg.true_params.theta1 << ", "
        << cfg.true_params.theta2 << ", " << cfg.true_params.theta3 << ") zeta=" << cfg.true_params.zeta
        << ", N=" << reps << "\n";
  table << "   n   |   AvE(t1)  MSE(t1) |   AvE(t2)  MSE(t2) |   AvE(t3)  MSE(t3) |"
           "   AvE(z)   MSE(z)  | dropped\n";
  static const char* kParams[4] = {"theta1", "theta2", "theta3", "zeta"};
  for (const StudyCell& cell : study.cells) {
    const std::string prefix = "cell." + std::to_string(cell.sample_size) + ".";
    for (int i = 0; i < 4; ++i) {
      doc.add(prefix + "ave." + kParams[i], cell.ave[i]);
      doc.add(prefix + "mse." + kParams[i], cell.mse[i]);
    }
    doc.add(prefix + "failures", cell.failures);
    doc.add(prefix + "flagged", cell.flagged ? "1" : "0");
    char line[200];
    std::snprintf(line, sizeof(line),
                  " %5d | %9.4f %8.4f | %9.4f %8.4f | %9.4f %8.4f | %9.4f %8.4f | %d%s\n",
                  cell.sample_size, cell.ave[0], cell.mse[0], cell.ave[1], cell.mse[1],
                  cell.ave[2], cell.mse[2], cell.ave[3], cell.mse[3], cell.failures,
                  cell.flagged ? " (flagged)" : "");
    table << line;
  }
  emit(doc, g.format, table.str());
  return 0;
}

int cmd_tabulate(const GlobalFlags& g, const std::string& params_csv, const std::string& from_fit,
                 int col1, int col2, const std::string& family, int starts, std::int64_t grid_max,
                 const std::string& quantity) {
  if (grid_max < 0) throw UsageError("--grid-max must be nonnegative");
  if (quantity != "pmf" && quantity != "cdf" && quantity != "bhrf" && quantity != "reliability")
    throw UsageError("--quantity must be one of pmf, cdf, bhrf, reliability");
  if (params_csv.empty() == from_fit.empty())
    throw UsageError("tabulate needs exactly one of --params or --from-fit");

  const ModelSpec model = parse_model(family);
  BivMaxParams params;
  if (!params_csv.empty()) {
    const std::vector<std::string> parts = split_list(params_csv);
    if (parts.size() != 4)
      throw UsageError("--params expects four comma-separated values: theta1,theta2,theta3,zeta");
    params = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3]),
              model.family};
  } else {
    const Dataset dataset = resolve_dataset(from_fit, col1, col2);
    params = fit_mle(dataset.pairs, model.family, model.fixed_shape, starts, g.seed).params;
  }
  const BivMaxModel m(params);

  ReportDocument doc;
  std::ostringstream table;
  doc.add("kind", "tabulate");
  doc.add("quantity", quantity);
  doc.add("theta1", params.theta1);
  doc.add("theta2", params.theta2);
  doc.add("theta3", params.theta3);
  doc.add("zeta", params.zeta);
  doc.add("family", to_string(params.family));
  doc.add("grid_max", grid_max);

  table << "x1 x2 " << quantity << "\n";
  for (std::int64_t x1 = 0; x1 <= grid_max; ++x1) {
    for (std::int64_t x2 = 0; x2 <= grid_max; ++x2) {
      double v;
      if (quantity == "pmf")
        v = m.joint_pmf(x1, x2);
      else if (quantity == "cdf")
        v = m.joint_cdf(x1, x2);
      else if (quantity == "reliability")
        v = m.joint_reliability(x1, x2);
      else
        v = m.bhrf(x1, x2);
      doc.add("v." + std::to_string(x1) + "." + std::to_string(x2), v);
      table << x1 << ' ' << x2 << ' ' << format_double(v) << "\n";
    }
  }
  emit(doc, g.format, table.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bivariate discrete inverse Weibull models: fitting, comparison, simulation"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "random seed for every stochastic step");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"table", "structured"}));
  app.add_option("--tol", g.tol, "series truncation tolerance");

  std::string data, family = "bdsiw", models = "bdsiw,bdsie,bdsir";
  std::string truth, sizes, params_csv, from_fit, quantity = "pmf";
  int col1 = 0, col2 = 1, starts = 8, reps = 0, threads = 1;
  std::int64_t grid_max = 10;
  std::optional<double> fix_shape;
  bool marginals = false;

  CLI::App* c_datasets = app.add_subcommand("datasets", "list embedded datasets");

  CLI::App* c_fit = app.add_subcommand("fit", "fit one model to a dataset");
  c_fit->add_option("--data", data, "embedded dataset name or CSV path")->required();
  c_fit->add_option("--x1-col", col1, "CSV column of x1 (0-based)");
  c_fit->add_option("--x2-col", col2, "CSV column of x2 (0-based)");
  c_fit->add_option("--family", family, "model name");
  double fix_shape_value = 0.0;
  CLI::Option* fix_opt = c_fit->add_option("--fix-shape", fix_shape_value, "pin zeta");
  c_fit->add_option("--starts", starts, "optimizer starts");
  c_fit->add_flag("--marginals", marginals, "also fit x1, x2 and min(x1,x2) margins");

  CLI::App* c_compare = app.add_subcommand("compare", "fit several models and run nested tests");
  c_compare->add_option("--data", data, "embedded dataset name or CSV path")->required();
  c_compare->add_option("--x1-col", col1, "CSV column of x1 (0-based)");
  c_compare->add_option("--x2-col", col2, "CSV column of x2 (0-based)");
  c_compare->add_option("--models", models, "comma-separated model names");
  c_compare->add_option("--starts", starts, "optimizer starts");

  CLI::App* c_simulate = app.add_subcommand("simulate", "replication study of the estimator");
  c_simulate->add_option("--truth", truth, "theta1,theta2,theta3,zeta")->required();
  c_simulate->add_option("--sizes", sizes, "comma-separated sample sizes")->required();
  c_simulate->add_option("--reps", reps, "replications per sample size")->required();
  c_simulate->add_option("--starts", starts, "optimizer starts per fit");
  c_simulate->add_option("--threads", threads, "worker threads");
  c_simulate->add_option("--family", family, "model name (free shape)");

  CLI::App* c_tabulate = app.add_subcommand("tabulate", "emit a model surface on a grid");
  c_tabulate->add_option("--params", params_csv, "theta1,theta2,theta3,zeta");
  c_tabulate->add_option("--from-fit", from_fit, "fit this dataset and tabulate the fit");
  c_tabulate->add_option("--x1-col", col1, "CSV column of x1 (0-based)");
  c_tabulate->add_option("--x2-col", col2, "CSV column of x2 (0-based)");
  c_tabulate->add_option("--family", family, "model name");
  c_tabulate->add_option("--starts", starts, "optimizer starts");
  c_tabulate->add_option("--grid-max", grid_max, "grid upper bound per coordinate");
  c_tabulate->add_option("--quantity", quantity, "pmf, cdf, bhrf or reliability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (fix_opt->count() > 0) fix_shape = fix_shape_value;

  try {
    if (c_datasets->parsed()) return cmd_datasets(g);
    if (c_fit->parsed()) return cmd_fit(g, data, col1, col2, family, fix_shape, starts, marginals);
    if (c_compare->parsed()) return cmd_compare(g, data, col1, col2, models, starts);
    if (c_simulate->parsed()) return cmd_simulate(g, truth, sizes, reps, starts, threads, family);
    if (c_tabulate->parsed())
      return cmd_tabulate(g, params_csv, from_fit, col1, col2, family, starts, grid_max, quantity);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CsvError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NonConvergenceError& e) {
    std::cerr << "fit did not converge: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
