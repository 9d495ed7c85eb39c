#include "sldiff/simulate.hpp"

#include <cmath>

namespace sldiff {

void SimulationSpec::validate() const {
    if (!std::isfinite(lambda) || lambda == 0.0) {
        throw InvalidInput("SimulationSpec: lambda must be a nonzero finite real");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InvalidInput("SimulationSpec: sigma must be nonnegative");
    }
    if (!(t1 > 0.0) || !(x1 > 0.0) || !(dt > 0.0)) {
        throw InvalidInput("SimulationSpec: t1, x1, dt must be positive");
    }
    if (n_steps < 1 || n_paths < 1) {
        throw InvalidInput("SimulationSpec: need n_steps >= 1 and n_paths >= 1");
    }
    if (!domain_guard_holds(lambda, TimeWindow(t1, t_end()))) {
        throw DomainError("SimulationSpec: domain guard fails over the simulation window");
    }
}

Eigen::ArrayXd sample_path(const SimulationSpec& spec, int path_index) {
    spec.validate();
    if (path_index < 0) {
        throw InvalidInput("sample_path: path_index must be nonnegative");
    }
    CounterRng rng(spec.seed);
    const double half_var_dt = 0.5 * spec.sigma * spec.sigma * spec.dt;
    const double vol_step = spec.sigma * std::sqrt(spec.dt);

    Eigen::ArrayXd x(spec.n_steps + 1);
    x[0] = spec.x1;
    double t_prev = spec.t1;
    double lnsin_prev = detail::log_sin_phase(spec.lambda, t_prev);
    for (int k = 0; k < spec.n_steps; ++k) {
        double t_next = spec.t1 + (k + 1) * spec.dt;
        double lnsin_next = detail::log_sin_phase(spec.lambda, t_next);
        double z = spec.sigma > 0.0
                       ? rng.normal(static_cast<std::uint64_t>(path_index),
                                    static_cast<std::uint64_t>(k))
                       : 0.0;
        double log_step = 2.0 * std::log(t_next / t_prev) + (lnsin_next - lnsin_prev) -
                          spec.lambda * spec.dt - half_var_dt + vol_step * z;
        x[k + 1] = x[k] * std::exp(log_step);
        t_prev = t_next;
        lnsin_prev = lnsin_next;
    }
    return x;
}

PathEnsemble simulate_ensemble(const SimulationSpec& spec) {
    spec.validate();
    PathEnsemble ensemble;
    ensemble.spec = spec;
    ensemble.times.resize(spec.n_steps + 1);
    for (int k = 0; k <= spec.n_steps; ++k) {
        ensemble.times[k] = spec.t1 + k * spec.dt;
    }
    ensemble.paths.resize(spec.n_paths, spec.n_steps + 1);
    CounterRng rng(spec.seed);
    ensemble.stream_ids.reserve(spec.n_paths);
    for (int p = 0; p < spec.n_paths; ++p) {
        ensemble.paths.row(p) = sample_path(spec, p).transpose();
        ensemble.stream_ids.push_back(rng.stream_id(static_cast<std::uint64_t>(p)));
    }
    return ensemble;
}

std::vector<EnsembleStat> ensemble_mean(const PathEnsemble& ensemble) {
    const Eigen::Index n_paths = ensemble.paths.rows();
    std::vector<EnsembleStat> stats;
    stats.reserve(static_cast<std::size_t>(ensemble.times.size()));
    for (Eigen::Index k = 0; k < ensemble.times.size(); ++k) {
        Eigen::ArrayXd col = ensemble.paths.col(k).array();
        double mean = col.mean();
        double se = 0.0;
        if (n_paths > 1) {
            double var = (col - mean).square().sum() / static_cast<double>(n_paths - 1);
            se = std::sqrt(var / static_cast<double>(n_paths));
        }
        stats.push_back({ensemble.times[k], mean, se});
    }
    return stats;
}

std::vector<EnsembleStat> ensemble_mean(const SimulationSpec& spec) {
    return ensemble_mean(simulate_ensemble(spec));
}

RecoveryTable recovery_experiment(const SlParams& truth, const RecoveryDesign& design,
                                  const FitOptions& fit_options) {
    if (design.n_replicates < 1) {
        throw InvalidInput("recovery_experiment: need at least one replicate");
    }
    SimulationSpec spec{truth.lambda, truth.sigma, design.t1,         design.x1,
                        design.dt,    design.n_steps, 1,              design.seed};
    spec.n_paths = design.n_replicates;
    spec.validate();

    RecoveryTable table{truth, {}, {}, {}, 0};
    std::vector<double> lambdas, sigmas;
    for (int r = 0; r < design.n_replicates; ++r) {
        Eigen::ArrayXd path = sample_path(spec, r);
        Eigen::ArrayXd times(spec.n_steps + 1);
        for (int k = 0; k <= spec.n_steps; ++k) {
            times[k] = spec.t1 + k * spec.dt;
        }
        RecoveryRow row{r, false, std::nan(""), std::nan(""), ""};
        try {
            TimeSeries series(times, path, "replicate");
            FitReport fit = fit_sl(series, fit_options);
            row.ok = true;
            row.lambda_hat = fit.params.lambda;
            row.sigma_hat = fit.params.sigma;
            lambdas.push_back(row.lambda_hat);
            sigmas.push_back(row.sigma_hat);
        } catch (const Error& e) {
            row.error = e.what();
            ++table.n_failed;
        }
        table.rows.push_back(row);
    }

    auto summarize = [](const std::vector<double>& v, double truth_value) {
        RecoverySummary s{std::nan(""), std::nan(""), std::nan(""), std::nan("")};
        if (v.empty()) return s;
        double n = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= n;
        double var = 0.0, mse = 0.0;
        for (double x : v) {
            var += (x - mean) * (x - mean);
            mse += (x - truth_value) * (x - truth_value);
        }
        s.mean = mean;
        s.bias = mean - truth_value;
        s.sd = v.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
        s.rmse = std::sqrt(mse / n);
        return s;
    };
    table.lambda = summarize(lambdas, truth.lambda);
    table.sigma = summarize(sigmas, truth.sigma);
    return table;
}

}  // namespace sldiff
