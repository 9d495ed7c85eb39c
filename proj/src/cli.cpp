#include "sldiff/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "sldiff/dataset.hpp"
#include "sldiff/estimation.hpp"
#include "sldiff/gompertz.hpp"
#include "sldiff/metrics.hpp"
#include "sldiff/simulate.hpp"

namespace sldiff {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kToolName = "sldiff";
constexpr const char* kToolVersion = "0.1.0";

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Range {
    double lo;
    double hi;
};

Range parse_range(const std::string& text, const char* flag) {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw InvalidInput(std::string(flag) + ": expected 'lo:hi', got '" + text + "'");
    }
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw InvalidInput(std::string(flag) + ": expected 'lo:hi', got '" + text + "'");
    }
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidInput(std::string(flag) + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) {
        throw InvalidInput(std::string(flag) + ": empty list");
    }
    return out;
}

struct CommonConfig {
    std::string builtin;
    std::string input;
    std::string train;       // "lo:hi" or empty
    double level = 0.95;
    std::string bracket = "-5:5";
    double tol = 1e-12;
    std::uint64_t seed = 0;
    std::string output = "tabular";
    bool no_timestamp = false;
    double time_shift = 0.0;
    double time_scale = 1.0;
};

void add_output_options(CLI::App* cmd, CommonConfig& cfg) {
    cmd->add_option("--output", cfg.output, "Output format")
        ->check(CLI::IsMember({"tabular", "structured"}))
        ->capture_default_str();
    cmd->add_flag("--no-timestamp", cfg.no_timestamp,
                  "Omit the timestamp from structured output");
}

void add_data_options(CLI::App* cmd, CommonConfig& cfg) {
    auto* b = cmd->add_option("--builtin", cfg.builtin, "Builtin dataset id (us-natgas)");
    auto* i = cmd->add_option("--input", cfg.input, "Input file with header 'time,value'");
    b->excludes(i);
    cmd->add_option("--train", cfg.train, "Training range lo:hi (inclusive, raw time units)");
    cmd->add_option("--time-shift", cfg.time_shift,
                    "Subtract this from all times before fitting")
        ->capture_default_str();
    cmd->add_option("--time-scale", cfg.time_scale,
                    "Multiply shifted times by this factor")
        ->capture_default_str();
}

void add_fit_options(CLI::App* cmd, CommonConfig& cfg) {
    cmd->add_option("--bracket", cfg.bracket, "Lambda search bracket lo:hi")
        ->capture_default_str();
    cmd->add_option("--tol", cfg.tol, "Root-solve tolerance in lambda")->capture_default_str();
    cmd->add_option("--level", cfg.level, "Confidence level in (0,1)")->capture_default_str();
}

double transform_time(const CommonConfig& cfg, double t) {
    return (t - cfg.time_shift) * cfg.time_scale;
}

TimeSeries load_configured_series(const CommonConfig& cfg) {
    if (cfg.builtin.empty() && cfg.input.empty()) {
        throw InvalidInput("no data source: pass --builtin <id> or --input <file>");
    }
    TimeSeries raw = cfg.input.empty() ? builtin_series(cfg.builtin)
                                       : load_series_file(cfg.input);
    if (cfg.time_shift == 0.0 && cfg.time_scale == 1.0) {
        return raw;
    }
    Eigen::ArrayXd t = (raw.times() - cfg.time_shift) * cfg.time_scale;
    return TimeSeries(t, raw.values(), raw.label());
}

TimeSeries train_slice(const CommonConfig& cfg, const TimeSeries& series) {
    if (cfg.train.empty()) {
        return series;
    }
    Range r = parse_range(cfg.train, "--train");
    return series.slice(transform_time(cfg, r.lo), transform_time(cfg, r.hi));
}

FitOptions fit_options(const CommonConfig& cfg) {
    Range r = parse_range(cfg.bracket, "--bracket");
    FitOptions opt;
    opt.bracket_lo = r.lo;
    opt.bracket_hi = r.hi;
    opt.tol = cfg.tol;
    return opt;
}

json config_echo(const CommonConfig& cfg) {
    json j;
    if (!cfg.builtin.empty()) j["builtin"] = cfg.builtin;
    if (!cfg.input.empty()) j["input"] = cfg.input;
    if (!cfg.train.empty()) j["train"] = cfg.train;
    j["level"] = cfg.level;
    j["bracket"] = cfg.bracket;
    j["tol"] = cfg.tol;
    j["output"] = cfg.output;
    j["time_shift"] = cfg.time_shift;
    j["time_scale"] = cfg.time_scale;
    return j;
}

json document(const std::string& command, const CommonConfig& cfg, json results) {
    json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = command;
    if (!cfg.no_timestamp) {
        doc["timestamp"] = iso_timestamp();
    }
    doc["seed"] = cfg.seed;
    doc["config"] = config_echo(cfg);
    doc["results"] = std::move(results);
    return doc;
}

json fit_to_json(const FitReport& fit) {
    json j;
    j["lambda"] = fit.params.lambda;
    j["sigma"] = fit.params.sigma;
    j["sigma2"] = fit.params.sigma2();
    j["log_likelihood"] = fit.log_likelihood;
    j["aic"] = fit.aic;
    j["n_transitions"] = fit.n_transitions;
    j["spacing"] = fit.spacing == SpacingMode::uniform ? "uniform" : "general";
    j["anchor"] = {{"t1", fit.t1}, {"x1", fit.x1}};
    j["solver"] = {{"bracket_lo", fit.solver.bracket_lo},
                   {"bracket_hi", fit.solver.bracket_hi},
                   {"iterations", fit.solver.iterations},
                   {"score_residual", fit.solver.score_residual},
                   {"converged", fit.solver.converged}};
    if (fit.std_errors) {
        j["std_errors"] = {{"lambda", (*fit.std_errors)[0]}, {"sigma", (*fit.std_errors)[1]}};
    }
    return j;
}

void print_fit_tabular(std::ostream& out, const FitReport& fit) {
    out << "key,value\n";
    out << "lambda," << num(fit.params.lambda) << "\n";
    out << "sigma," << num(fit.params.sigma) << "\n";
    out << "sigma2," << num(fit.params.sigma2()) << "\n";
    out << "log_likelihood," << num(fit.log_likelihood) << "\n";
    out << "aic," << num(fit.aic) << "\n";
    out << "n_transitions," << fit.n_transitions << "\n";
    out << "spacing," << (fit.spacing == SpacingMode::uniform ? "uniform" : "general") << "\n";
    out << "t1," << num(fit.t1) << "\n";
    out << "x1," << num(fit.x1) << "\n";
    out << "solver_iterations," << fit.solver.iterations << "\n";
    out << "solver_score_residual," << num(fit.solver.score_residual) << "\n";
    out << "solver_converged," << (fit.solver.converged ? 1 : 0) << "\n";
    if (fit.std_errors) {
        out << "se_lambda," << num((*fit.std_errors)[0]) << "\n";
        out << "se_sigma," << num((*fit.std_errors)[1]) << "\n";
    }
}

int cmd_fit(const CommonConfig& cfg, std::ostream& out) {
    TimeSeries series = load_configured_series(cfg);
    TimeSeries train = train_slice(cfg, series);
    FitReport fit = fit_sl(train, fit_options(cfg));
    if (cfg.output == "structured") {
        out << document("fit", cfg, fit_to_json(fit)).dump(2) << "\n";
    } else {
        print_fit_tabular(out, fit);
    }
    return 0;
}

int cmd_forecast(const CommonConfig& cfg, const std::string& horizon_text, std::ostream& out) {
    TimeSeries series = load_configured_series(cfg);
    TimeSeries train = train_slice(cfg, series);
    std::vector<double> horizon = parse_list(horizon_text, "--horizon");
    for (double& t : horizon) {
        t = transform_time(cfg, t);
    }
    FitReport fit = fit_sl(train, fit_options(cfg));
    std::vector<ForecastRow> rows = estimated_trends(fit, series, horizon, cfg.level);
    if (cfg.output == "structured") {
        json results;
        results["fit"] = fit_to_json(fit);
        results["level"] = cfg.level;
        json table = json::array();
        for (const auto& row : rows) {
            table.push_back({{"t", row.t},
                             {"emf", row.emf},
                             {"ecmf", row.ecmf},
                             {"lower", row.lower},
                             {"upper", row.upper}});
        }
        results["forecast"] = std::move(table);
        out << document("forecast", cfg, std::move(results)).dump(2) << "\n";
    } else {
        out << "t,emf,ecmf,lower,upper\n";
        for (const auto& row : rows) {
            out << num(row.t) << ',' << num(row.emf) << ',' << num(row.ecmf) << ','
                << num(row.lower) << ',' << num(row.upper) << "\n";
        }
    }
    return 0;
}

int cmd_compare(const CommonConfig& cfg, std::ostream& out) {
    TimeSeries series = load_configured_series(cfg);
    TimeSeries train = train_slice(cfg, series);
    FitReport sl = fit_sl(train, fit_options(cfg));
    GompertzFitReport gom = fit_gompertz(train);
    const bool sl_wins = sl.aic < gom.aic;
    if (cfg.output == "structured") {
        json results;
        results["sl"] = fit_to_json(sl);
        json g;
        g["lambda"] = gom.params.lambda;
        g["beta"] = gom.params.beta;
        g["sigma"] = gom.params.sigma;
        g["log_likelihood"] = gom.log_likelihood;
        g["aic"] = gom.aic;
        g["n_transitions"] = gom.n_transitions;
        g["rounds"] = gom.rounds;
        g["converged"] = gom.converged;
        g["boundary_warning"] = gom.boundary_warning;
        if (gom.std_errors) {
            g["std_errors"] = {{"lambda", (*gom.std_errors)[0]},
                               {"beta", (*gom.std_errors)[1]},
                               {"sigma", (*gom.std_errors)[2]}};
        }
        results["gompertz"] = std::move(g);
        results["winner"] = sl_wins ? "sl" : "gompertz";
        results["aic_difference"] = gom.aic - sl.aic;
        out << document("compare", cfg, std::move(results)).dump(2) << "\n";
    } else {
        out << "model,lambda,beta,sigma,log_likelihood,aic\n";
        out << "sl," << num(sl.params.lambda) << ",NA," << num(sl.params.sigma) << ','
            << num(sl.log_likelihood) << ',' << num(sl.aic) << "\n";
        out << "gompertz," << num(gom.params.lambda) << ',' << num(gom.params.beta) << ','
            << num(gom.params.sigma) << ',' << num(gom.log_likelihood) << ',' << num(gom.aic)
            << "\n";
        out << "winner," << (sl_wins ? "sl" : "gompertz") << ",,,,\n";
    }
    return 0;
}

int cmd_metrics(const CommonConfig& cfg, std::ostream& out) {
    TimeSeries series = load_configured_series(cfg);
    TimeSeries train = train_slice(cfg, series);
    FitReport fit = fit_sl(train, fit_options(cfg));
    Eigen::ArrayXd predicted = mean_curve(fit.params, fit.t1, fit.x1, train.times());
    AccuracyReport acc = accuracy(train.values(), predicted);
    if (cfg.output == "structured") {
        json results;
        results["fit"] = fit_to_json(fit);
        results["mae"] = acc.mae;
        results["rmse"] = acc.rmse;
        results["mape"] = acc.mape;
        if (acc.mape_vs_predicted) {
            results["mape_vs_predicted"] = *acc.mape_vs_predicted;
        }
        results["n"] = acc.n;
        results["classification"] = to_string(acc.classification);
        out << document("metrics", cfg, std::move(results)).dump(2) << "\n";
    } else {
        out << "key,value\n";
        out << "mae," << num(acc.mae) << "\n";
        out << "rmse," << num(acc.rmse) << "\n";
        out << "mape," << num(acc.mape) << "\n";
        if (acc.mape_vs_predicted) {
            out << "mape_vs_predicted," << num(*acc.mape_vs_predicted) << "\n";
        }
        out << "n," << acc.n << "\n";
        out << "classification," << to_string(acc.classification) << "\n";
    }
    return 0;
}

int cmd_simulate(const CommonConfig& cfg, const SimulationSpec& spec, std::ostream& out) {
    PathEnsemble ensemble = simulate_ensemble(spec);
    std::vector<EnsembleStat> stats = ensemble_mean(ensemble);
    if (cfg.output == "structured") {
        json results;
        results["spec"] = {{"lambda", spec.lambda}, {"sigma", spec.sigma}, {"t1", spec.t1},
                           {"x1", spec.x1},         {"dt", spec.dt},       {"n_steps", spec.n_steps},
                           {"n_paths", spec.n_paths}, {"seed", spec.seed}};
        results["stream_ids"] = ensemble.stream_ids;
        json times = json::array(), mean = json::array(), se = json::array();
        for (const auto& s : stats) {
            times.push_back(s.t);
            mean.push_back(s.mean);
            se.push_back(s.std_error);
        }
        results["times"] = std::move(times);
        results["mean"] = std::move(mean);
        results["std_error"] = std::move(se);
        json paths = json::array();
        for (Eigen::Index p = 0; p < ensemble.paths.rows(); ++p) {
            json path = json::array();
            for (Eigen::Index k = 0; k < ensemble.paths.cols(); ++k) {
                path.push_back(ensemble.paths(p, k));
            }
            paths.push_back(std::move(path));
        }
        results["paths"] = std::move(paths);
        out << document("simulate", cfg, std::move(results)).dump(2) << "\n";
    } else {
        out << "time,mean,stderr";
        for (int p = 0; p < spec.n_paths; ++p) {
            out << ",path_" << p;
        }
        out << "\n";
        for (std::size_t k = 0; k < stats.size(); ++k) {
            out << num(stats[k].t) << ',' << num(stats[k].mean) << ',' << num(stats[k].std_error);
            for (Eigen::Index p = 0; p < ensemble.paths.rows(); ++p) {
                out << ',' << num(ensemble.paths(p, static_cast<Eigen::Index>(k)));
            }
            out << "\n";
        }
    }
    return 0;
}

int cmd_recover(const CommonConfig& cfg, const SlParams& truth, const RecoveryDesign& design,
                std::ostream& out) {
    RecoveryTable table = recovery_experiment(truth, design);
    if (cfg.output == "structured") {
        json results;
        results["truth"] = {{"lambda", truth.lambda}, {"sigma", truth.sigma}};
        results["design"] = {{"t1", design.t1},           {"x1", design.x1},
                             {"dt", design.dt},           {"n_steps", design.n_steps},
                             {"n_replicates", design.n_replicates}, {"seed", design.seed}};
        json rows = json::array();
        for (const auto& row : table.rows) {
            json r;
            r["replicate"] = row.replicate;
            r["ok"] = row.ok;
            if (row.ok) {
                r["lambda_hat"] = row.lambda_hat;
                r["sigma_hat"] = row.sigma_hat;
            } else {
                r["error"] = row.error;
            }
            rows.push_back(std::move(r));
        }
        results["rows"] = std::move(rows);
        auto summary = [](const RecoverySummary& s) {
            return json{{"mean", s.mean}, {"bias", s.bias}, {"sd", s.sd}, {"rmse", s.rmse}};
        };
        results["summary"] = {{"lambda", summary(table.lambda)},
                              {"sigma", summary(table.sigma)},
                              {"n_failed", table.n_failed}};
        out << document("recover", cfg, std::move(results)).dump(2) << "\n";
    } else {
        out << "replicate,ok,lambda_hat,sigma_hat\n";
        for (const auto& row : table.rows) {
            out << row.replicate << ',' << (row.ok ? 1 : 0) << ',' << num(row.lambda_hat) << ','
                << num(row.sigma_hat) << "\n";
        }
        out << "\nparameter,truth,mean,bias,sd,rmse\n";
        out << "lambda," << num(table.truth.lambda) << ',' << num(table.lambda.mean) << ','
            << num(table.lambda.bias) << ',' << num(table.lambda.sd) << ','
            << num(table.lambda.rmse) << "\n";
        out << "sigma," << num(table.truth.sigma) << ',' << num(table.sigma.mean) << ','
            << num(table.sigma.bias) << ',' << num(table.sigma.sd) << ',' << num(table.sigma.rmse)
            << "\n";
    }
    return 0;
}

int error_exit(std::ostream& err, const char* type, const std::string& message, int code) {
    json e;
    e["error"] = {{"type", type}, {"message", message}};
    err << e.dump() << "\n";
    return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sine-like diffusion process: fitting, forecasting, simulation"};
    app.require_subcommand(1);

    CommonConfig cfg;
    std::string horizon_text;

    auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit of (lambda, sigma)");
    add_data_options(fit, cfg);
    add_fit_options(fit, cfg);
    add_output_options(fit, cfg);

    auto* forecast = app.add_subcommand("forecast", "Trend forecasts with confidence bounds");
    add_data_options(forecast, cfg);
    add_fit_options(forecast, cfg);
    add_output_options(forecast, cfg);
    forecast->add_option("--horizon", horizon_text, "Comma-separated forecast times")
        ->required();

    auto* compare = app.add_subcommand("compare", "Fit SL and Gompertz, pick the lower AIC");
    add_data_options(compare, cfg);
    add_fit_options(compare, cfg);
    add_output_options(compare, cfg);

    auto* metrics = app.add_subcommand("metrics", "Trend accuracy over the training range");
    add_data_options(metrics, cfg);
    add_fit_options(metrics, cfg);
    add_output_options(metrics, cfg);

    SimulationSpec spec{-0.03828096, 0.0673062, 1990.0, 11.85815, 0.066, 500, 10, 0};
    auto* simulate = app.add_subcommand("simulate", "Exact-solution path ensemble");
    simulate->add_option("--lambda", spec.lambda, "Drift parameter")->capture_default_str();
    simulate->add_option("--sigma", spec.sigma, "Volatility (0 = deterministic trend)")
        ->capture_default_str();
    simulate->add_option("--t1", spec.t1, "Start time")->capture_default_str();
    simulate->add_option("--x1", spec.x1, "Start value")->capture_default_str();
    simulate->add_option("--dt", spec.dt, "Grid step")->capture_default_str();
    simulate->add_option("--steps", spec.n_steps, "Number of steps")->capture_default_str();
    simulate->add_option("--paths", spec.n_paths, "Number of paths")->capture_default_str();
    simulate->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    add_output_options(simulate, cfg);

    double rec_lambda = -0.03828096, rec_sigma = 0.0673062;
    RecoveryDesign design{1990.0, 11.85815, 0.066, 500, 100, 0};
    auto* recover = app.add_subcommand("recover", "Simulate-and-refit recovery experiment");
    recover->add_option("--lambda", rec_lambda, "True drift parameter")->capture_default_str();
    recover->add_option("--sigma", rec_sigma, "True volatility")->capture_default_str();
    recover->add_option("--t1", design.t1, "Start time")->capture_default_str();
    recover->add_option("--x1", design.x1, "Start value")->capture_default_str();
    recover->add_option("--dt", design.dt, "Grid step")->capture_default_str();
    recover->add_option("--steps", design.n_steps, "Steps per replicate")->capture_default_str();
    recover->add_option("--replicates", design.n_replicates, "Number of replicates")
        ->capture_default_str();
    recover->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    add_output_options(recover, cfg);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back(kToolName);
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) {  // --help
                out << app.help() << "\n";
                return 0;
            }
            return error_exit(err, "UsageError", e.what(), 1);
        }

        if (fit->parsed()) return cmd_fit(cfg, out);
        if (forecast->parsed()) return cmd_forecast(cfg, horizon_text, out);
        if (compare->parsed()) return cmd_compare(cfg, out);
        if (metrics->parsed()) return cmd_metrics(cfg, out);
        if (simulate->parsed()) {
            spec.seed = cfg.seed;
            return cmd_simulate(cfg, spec, out);
        }
        if (recover->parsed()) {
            design.seed = cfg.seed;
            return cmd_recover(cfg, SlParams(rec_lambda, rec_sigma), design, out);
        }
        return error_exit(err, "UsageError", "no subcommand", 1);
    } catch (const DomainError& e) {
        return error_exit(err, "DomainError", e.what(), 3);
    } catch (const NoRootError& e) {
        return error_exit(err, "NoRootError", e.what(), 2);
    } catch (const NoConvergenceError& e) {
        return error_exit(err, "NoConvergenceError", e.what(), 2);
    } catch (const DegenerateError& e) {
        return error_exit(err, "DegenerateError", e.what(), 2);
    } catch (const ParseError& e) {
        return error_exit(err, "ParseError", e.what(), 1);
    } catch (const ValidationError& e) {
        return error_exit(err, "ValidationError", e.what(), 1);
    } catch (const LengthMismatch& e) {
        return error_exit(err, "LengthMismatch", e.what(), 1);
    } catch (const SpacingError& e) {
        return error_exit(err, "SpacingError", e.what(), 1);
    } catch (const InvalidInput& e) {
        return error_exit(err, "InvalidInput", e.what(), 1);
    } catch (const Error& e) {
        return error_exit(err, "Error", e.what(), 2);
    }
}

}  // namespace sldiff
