#pragma once

/**
 * Exact-solution path sampling of the SL process. Each grid step composes the
 * closed-form solution over the subinterval,
 *
 *   X(t_{k+1}) = X(t_k) (t_{k+1}/t_k)^2  [sin u(t_{k+1}) / sin u(t_k)]
 *                exp(-lambda dt - (sigma^2/2) dt + sigma sqrt(dt) Z_k),
 *
 * so there is no discretization bias: endpoints have exactly the lognormal
 * law of the process regardless of the step count.
 */

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "sldiff/estimation.hpp"
#include "sldiff/model.hpp"
#include "sldiff/rng.hpp"

namespace sldiff {

struct SimulationSpec {
    double lambda;      // nonzero
    double sigma;       // >= 0; zero gives the deterministic trend path
    double t1;          // > 0
    double x1;          // > 0
    double dt;          // > 0
    int n_steps;        // >= 1
    int n_paths;        // >= 1
    std::uint64_t seed = 0;

    void validate() const;  // throws InvalidInput / DomainError
    double t_end() const { return t1 + n_steps * dt; }
};

struct PathEnsemble {
    SimulationSpec spec;
    Eigen::ArrayXd times;                   // n_steps + 1 grid times
    Eigen::MatrixXd paths;                  // n_paths rows, n_steps + 1 columns
    std::vector<std::uint64_t> stream_ids;  // per-path RNG stream id
};

/// One exact path on the spec's grid, drawn from the (seed, path_index) stream.
Eigen::ArrayXd sample_path(const SimulationSpec& spec, int path_index);

/// All n_paths paths. Pure function of the spec.
PathEnsemble simulate_ensemble(const SimulationSpec& spec);

struct EnsembleStat {
    double t;
    double mean;
    double std_error;  // sd / sqrt(n_paths); zero for a single path
};

/// Pointwise sample mean and standard error across paths at each grid time.
std::vector<EnsembleStat> ensemble_mean(const PathEnsemble& ensemble);
std::vector<EnsembleStat> ensemble_mean(const SimulationSpec& spec);

struct RecoveryDesign {
    double t1;
    double x1;
    double dt;
    int n_steps;
    int n_replicates;
    std::uint64_t seed = 0;
};

struct RecoveryRow {
    int replicate;
    bool ok;
    double lambda_hat;  // NaN when the replicate failed
    double sigma_hat;
    std::string error;  // failure reason when !ok
};

struct RecoverySummary {
    double mean;
    double bias;
    double sd;
    double rmse;
};

struct RecoveryTable {
    SlParams truth;
    std::vector<RecoveryRow> rows;
    RecoverySummary lambda;
    RecoverySummary sigma;
    int n_failed;
};

/**
 * Simulate-and-refit experiment: one exact path per replicate, fitted by
 * fit_sl; per-parameter mean, bias, sd and RMSE over the successful
 * replicates. Fit failures are recorded per row, not fatal.
 */
RecoveryTable recovery_experiment(const SlParams& truth, const RecoveryDesign& design,
                                  const FitOptions& fit_options = {});

}  // namespace sldiff
