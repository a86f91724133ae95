#include "bdsiw/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

namespace bdsiw {

void StudyConfig::validate() const {
  true_params.validate();
  if (replications < 1) throw std::invalid_argument("need at least one replication");
  if (sample_sizes.empty()) throw std::invalid_argument("need at least one sample size");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < 1) throw std::invalid_argument("sample sizes must be positive");
    if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1])
      throw std::invalid_argument("sample sizes must be strictly increasing");
  }
  if (threads < 1) throw std::invalid_argument("thread count must be positive");
}

namespace {

using Estimate = std::array<double, 4>;

std::optional<Estimate> run_replication(const StudyConfig& cfg, int n, int r) {
  Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r));
  const BivMaxModel model(cfg.true_params);
  std::vector<PairObs> pairs(static_cast<std::size_t>(n));
  for (PairObs& p : pairs) p = model.sample_pair(rng);

  FitOptions fit = cfg.fit;
  fit.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r));
  try {
    const FitReport report =
        fit_mle(PairedSample::from_pairs(std::move(pairs)), cfg.true_params.family,
                std::nullopt, fit);
    if (!report.converged) return std::nullopt;
    return Estimate{report.params.theta1, report.params.theta2, report.params.theta3,
                    report.params.zeta};
  } catch (const NonConvergenceError&) {
    return std::nullopt;
  }
}

}  // namespace

StudyReport run_study(const StudyConfig& config) {
  config.validate();
  StudyReport report;
  report.config = config;

  const Estimate truth{config.true_params.theta1, config.true_params.theta2,
                       config.true_params.theta3, config.true_params.zeta};

  for (int n : config.sample_sizes) {
    const int reps = config.replications;
    std::vector<std::optional<Estimate>> results(static_cast<std::size_t>(reps));

    if (config.threads == 1) {
      for (int r = 0; r < reps; ++r) results[r] = run_replication(config, n, r);
    } else {
      const int workers = std::min(config.threads, reps);
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (int r = w; r < reps; r += workers) results[r] = run_replication(config, n, r);
        });
      }
      for (std::thread& t : pool) t.join();
    }

    StudyCell cell;
    cell.sample_size = n;
    int kept = 0;
    for (const auto& est : results) {
      if (!est) {
        ++cell.failures;
        continue;
      }
      ++kept;
      for (int i = 0; i < 4; ++i) {
        cell.ave[i] += (*est)[i];
        const double dev = (*est)[i] - truth[i];
        cell.mse[i] += dev * dev;
      }
    }
    if (kept > 0)
      for (int i = 0; i < 4; ++i) {
        cell.ave[i] /= kept;
        cell.mse[i] /= kept;
      }
    cell.flagged = cell.failures * 5 > reps;  // over 20% dropped
    report.cells.push_back(cell);
  }
  return report;
}

}  // namespace bdsiw
