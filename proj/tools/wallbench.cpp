#include "wallbench/config.hpp"
#include "wallbench/dataset_io.hpp"
#include "wallbench/error.hpp"
#include "wallbench/knn.hpp"
#include "wallbench/metrics.hpp"
#include "wallbench/oracle.hpp"
#include "wallbench/pipeline.hpp"
#include "wallbench/text.hpp"
#include "wallbench/tune.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace wallbench;

namespace {

void log_line(const std::string& msg) {
    std::cerr << "[wallbench] " << msg << "\n";
}

RunConfig load_config(const std::string& path) {
    if (path.empty()) {
        return RunConfig{};
    }
    return RunConfig::from_file(path);
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed reading " + path.string());
    }
    return buf.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

/// Seeds plus the canonical config make a run reproducible from the manifest alone.
void write_manifest(const fs::path& path, const std::string& command, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["seed"] = cfg.get_u64("run", "seed", 0);
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << cfg.hash();
    j["config_hash"] = hex.str();
    j["config"] = cfg.canonical_text();
    write_text_file(path, j.dump(2) + "\n");
}

GasModel gas_from_config(const RunConfig& cfg) {
    GasModel gas = GasModel::air_defaults();
    gas.gamma = cfg.get_double("gas", "gamma", gas.gamma);
    gas.r_gas = cfg.get_double("gas", "r_gas", gas.r_gas);
    gas.t_ref = cfg.get_double("gas", "t_ref", gas.t_ref);
    gas.mu_ref = cfg.get_double("gas", "mu_ref", gas.mu_ref);
    gas.s_suth = cfg.get_double("gas", "s_suth", gas.s_suth);
    gas.t_i = cfg.get_double("gas", "t_i", gas.t_i);
    gas.l_ref = cfg.get_double("gas", "l_ref", gas.l_ref);
    gas.validate();
    return gas;
}

OracleConfig oracle_from_config(const RunConfig& cfg) {
    OracleConfig ocfg;
    ocfg.n_p = static_cast<Eigen::Index>(cfg.get_int("oracle", "n_p", ocfg.n_p));
    ocfg.seed = cfg.get_u64("oracle", "seed", ocfg.seed);
    ocfg.shock_sharpness = cfg.get_double("oracle", "shock_sharpness", ocfg.shock_sharpness);
    ocfg.cf_scale_exponent = cfg.get_double("oracle", "cf_scale_exponent", ocfg.cf_scale_exponent);
    ocfg.noise_amplitude = cfg.get_double("oracle", "noise_amplitude", ocfg.noise_amplitude);
    ocfg.validate();
    return ocfg;
}

const std::vector<std::string> kGasKeys = {"gas.gamma", "gas.r_gas", "gas.t_ref", "gas.mu_ref",
                                           "gas.s_suth", "gas.t_i", "gas.l_ref"};

std::vector<std::string> with_gas_keys(std::vector<std::string> keys) {
    keys.insert(keys.end(), kGasKeys.begin(), kGasKeys.end());
    return keys;
}

int cmd_generate(const RunConfig& cfg) {
    cfg.require_known(with_gas_keys({"run.seed", "run.out", "oracle.n_p", "oracle.seed",
                                     "oracle.shock_sharpness", "oracle.cf_scale_exponent",
                                     "oracle.noise_amplitude"}));
    const std::string out = cfg.get_string("run", "out");
    const GasModel gas = gas_from_config(cfg);
    const OracleConfig ocfg = oracle_from_config(cfg);
    const std::uint64_t seed = cfg.get_u64("run", "seed", 0);
    log_line("generating dataset: n_p=" + std::to_string(ocfg.n_p) +
             ", split seed=" + std::to_string(seed));
    const Dataset ds = generate_dataset(DoeSpec::defaults(), ocfg, gas, seed);
    save_dataset(ds, out);
    write_manifest(fs::path(out) / "manifest.json", "generate", cfg);
    log_line("wrote " + std::to_string(ds.conditions.size()) + " conditions (" +
             std::to_string(ds.train_ids().size()) + " train, " +
             std::to_string(ds.test_ids().size()) + " test) to " + out);
    return 0;
}

int cmd_split(const RunConfig& cfg) {
    cfg.require_known({"run.seed", "run.dataset", "run.out"});
    const std::string dataset_dir = cfg.get_string("run", "dataset");
    const std::string out = cfg.get_string("run", "out", dataset_dir);
    const std::uint64_t seed = cfg.get_u64("run", "seed", 0);
    Dataset ds = load_dataset(dataset_dir);
    ds.split = split_dataset(ds.conditions, seed);
    save_dataset(ds, out);
    write_manifest(fs::path(out) / "manifest.json", "split", cfg);
    log_line("relabeled split with seed " + std::to_string(seed) + ": " +
             std::to_string(ds.train_ids().size()) + " train, " +
             std::to_string(ds.test_ids().size()) + " test");
    return 0;
}

int cmd_train(const RunConfig& cfg) {
    std::vector<std::string> allowed = train_config_keys();
    allowed.push_back("run.dataset");
    allowed.push_back("run.out");
    cfg.require_known(allowed);
    const TrainOptions opts = train_options_from_config(cfg);
    const std::string dataset_dir = cfg.get_string("run", "dataset");
    const std::string out = cfg.get_string("run", "out");
    const Dataset ds = load_dataset(dataset_dir);
    log_line("training " + to_string(opts.kind) + " on " +
             std::to_string(ds.train_ids().size()) + " train flows, seed " +
             std::to_string(opts.seed));
    const auto t0 = std::chrono::steady_clock::now();
    const TrainedRegressor model = train_regressor(ds, opts);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
    save_model(to_model_file(model), out);
    write_manifest(out + ".manifest.json", "train", cfg);
    std::ostringstream secs;
    secs << std::fixed << std::setprecision(1) << elapsed.count();
    log_line("trained in " + secs.str() + " s, model written to " + out);
    return 0;
}

int cmd_predict(const RunConfig& cfg) {
    cfg.require_known({"run.dataset", "run.model", "run.out"});
    const std::string dataset_dir = cfg.get_string("run", "dataset");
    const std::string model_path = cfg.get_string("run", "model");
    const std::string out = cfg.get_string("run", "out");
    const Dataset ds = load_dataset(dataset_dir);
    const TrainedRegressor model = from_model_file(load_model(model_path));
    log_line("predicting " + std::to_string(ds.test_ids().size()) + " test flows with " +
             to_string(kind_of(model)));
    const std::map<std::string, WallField> submission = predict_submission(ds, model);
    save_submission(submission, out);
    write_manifest(fs::path(out) / "manifest.json", "predict", cfg);
    log_line("submission written to " + out);
    return 0;
}

int cmd_evaluate(const RunConfig& cfg) {
    cfg.require_known(
        {"run.dataset", "run.submission", "run.out", "run.seed", "score.weighted_mean"});
    const std::string dataset_dir = cfg.get_string("run", "dataset");
    const std::string submission_dir = cfg.get_string("run", "submission");
    const std::string out = cfg.get_string("run", "out", "");
    const bool weighted_mean = cfg.get_bool("score", "weighted_mean", false);
    const Dataset ds = load_dataset(dataset_dir);
    const std::map<std::string, WallField> submission =
        load_submission(submission_dir, ds.test_ids(), ds.geometry.n_p());
    const ScoreReport report = score_submission(ds, submission, weighted_mean);
    if (!out.empty()) {
        fs::create_directories(out);
        write_text_file(fs::path(out) / "scores.json", render_report_json(report));
        write_text_file(fs::path(out) / "report.txt", render_report_text(report));
        write_manifest(fs::path(out) / "manifest.json", "evaluate", cfg);
        log_line("scores written to " + out);
    }
    std::cout << render_report_text(report);
    return 0;
}

int cmd_report(const std::string& scores_path) {
    const ScoreReport report = report_from_json(read_text_file(scores_path));
    std::cout << render_report_text(report);
    return 0;
}

int cmd_reynolds(const RunConfig& cfg) {
    cfg.require_known(with_gas_keys({}));
    const GasModel gas = gas_from_config(cfg);
    const DoeSpec doe = DoeSpec::defaults();
    std::ostringstream out;
    out << std::left << std::setw(10) << "mach" << std::setw(14) << "p_i" << "re\n";
    for (double mach : doe.mach_list) {
        for (double p_i : doe.p_i_list) {
            FlowCondition cond;
            cond.mach = mach;
            cond.aoa_deg = 0.0;
            cond.p_i = p_i;
            out << std::left << std::setw(10) << format_double(mach, 6) << std::setw(14)
                << format_double(p_i, 6) << format_double(reynolds(cond, gas), 9) << "\n";
        }
    }
    std::cout << out.str();
    return 0;
}

int cmd_tune(const RunConfig& cfg) {
    cfg.require_known({"run.dataset", "run.regressor", "run.seed", "tune.k_lo", "tune.k_hi",
                       "tune.removals", "tune.repeats", "tune.budget", "tune.variable"});
    const RegressorKind kind = regressor_from_string(cfg.get_string("run", "regressor", "knn"));
    const std::string dataset_dir = cfg.get_string("run", "dataset");
    const std::uint64_t seed = cfg.get_u64("run", "seed", 0);
    const Dataset ds = load_dataset(dataset_dir);
    const std::vector<std::string> train_ids = ds.train_ids();
    if (train_ids.empty()) {
        throw ValidationError("tune: dataset has no train flows");
    }

    if (kind == RegressorKind::knn) {
        const int k_lo = static_cast<int>(cfg.get_int("tune", "k_lo", 1));
        const int k_hi = static_cast<int>(cfg.get_int("tune", "k_hi", 10));
        const int removals = static_cast<int>(cfg.get_int("tune", "removals", 5));
        const int repeats = static_cast<int>(cfg.get_int("tune", "repeats", 10));
        const GlobalTensors g = assemble_global(ds, train_ids);
        const Scaler scaler = fit_scaler(g.x_g);
        const Eigen::MatrixXd xs = scaler.apply(g.x_g);
        for (int v = 0; v < 4; ++v) {
            Eigen::MatrixXd snaps(xs.rows(), g.y_g.front().rows());
            for (Eigen::Index i = 0; i < xs.rows(); ++i) {
                snaps.row(i) = g.y_g[static_cast<std::size_t>(i)].col(v).transpose();
            }
            const int k = knn_select_k(xs, snaps, k_lo, k_hi, removals, repeats,
                                       derive_seed(seed, static_cast<std::uint64_t>(v)));
            std::cout << kOutputNames[static_cast<std::size_t>(v)] << ": k=" << k << "\n";
        }
        return 0;
    }

    if (kind == RegressorKind::mlp_global || kind == RegressorKind::mlp_pointwise) {
        const int budget = static_cast<int>(cfg.get_int("tune", "budget", 10));
        const auto [fit_ids, val_ids] = inner_split(train_ids, 0.75, derive_seed(seed, 1));
        Eigen::MatrixXd x_fit;
        Eigen::MatrixXd y_fit;
        Eigen::MatrixXd x_val;
        Eigen::MatrixXd y_val;
        if (kind == RegressorKind::mlp_global) {
            const int variable = static_cast<int>(cfg.get_int("tune", "variable", 0));
            if (variable < 0 || variable > 3) {
                throw ConfigError("tune.variable: expected 0..3");
            }
            const GlobalTensors fit = assemble_global(ds, fit_ids);
            const GlobalTensors val = assemble_global(ds, val_ids);
            const Scaler scaler = fit_scaler(fit.x_g);
            x_fit = scaler.apply(fit.x_g);
            x_val = scaler.apply(val.x_g);
            y_fit.resize(x_fit.rows(), fit.y_g.front().rows());
            for (Eigen::Index i = 0; i < x_fit.rows(); ++i) {
                y_fit.row(i) = fit.y_g[static_cast<std::size_t>(i)].col(variable).transpose();
            }
            y_val.resize(x_val.rows(), val.y_g.front().rows());
            for (Eigen::Index i = 0; i < x_val.rows(); ++i) {
                y_val.row(i) = val.y_g[static_cast<std::size_t>(i)].col(variable).transpose();
            }
        } else {
            const PointwiseTensors fit = assemble_pointwise(ds, fit_ids);
            const PointwiseTensors val = assemble_pointwise(ds, val_ids);
            const Scaler xs = fit_scaler(fit.x);
            const Scaler ys = fit_scaler(fit.y);
            x_fit = xs.apply(fit.x);
            y_fit = ys.apply(fit.y);
            x_val = xs.apply(val.x);
            y_val = ys.apply(val.y);
        }
        const MlpTuneSpace space;
        const TuneResult result = random_search_tune(space, budget, seed, x_fit, y_fit, x_val, y_val);
        std::string hidden;
        for (std::size_t i = 0; i < result.best_spec.hidden_sizes.size(); ++i) {
            if (i > 0) {
                hidden += ",";
            }
            hidden += std::to_string(result.best_spec.hidden_sizes[i]);
        }
        std::cout << "best: hidden=" << hidden << " lr=" << format_double(result.best_spec.lr_schedule.initial, 6)
                  << " dropout=" << format_double(result.best_spec.dropout, 6)
                  << " l2=" << format_double(result.best_spec.l2, 6)
                  << " val_r2=" << format_double(result.best_val_r2, 9) << "\n";
        return 0;
    }

    throw ConfigError("tune supports the knn, mlp_global, and mlp_pointwise regressors");
}

struct SubFlags {
    std::string config;
    std::string dataset;
    std::string out;
    std::string regressor;
    std::string model;
    std::string submission;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

/// Flags override the loaded config so the manifest reflects effective settings.
RunConfig effective_config(const SubFlags& f) {
    RunConfig cfg = load_config(f.config);
    if (f.seed_opt != nullptr && f.seed_opt->count() > 0) {
        cfg.set("run", "seed", std::to_string(f.seed));
    }
    if (!f.dataset.empty()) {
        cfg.set("run", "dataset", f.dataset);
    }
    if (!f.out.empty()) {
        cfg.set("run", "out", f.out);
    }
    if (!f.regressor.empty()) {
        cfg.set("run", "regressor", f.regressor);
    }
    if (!f.model.empty()) {
        cfg.set("run", "model", f.model);
    }
    if (!f.submission.empty()) {
        cfg.set("run", "submission", f.submission);
    }
    return cfg;
}

void add_config_seed(CLI::App* sub, SubFlags& f) {
    sub->add_option("--config", f.config, "run configuration file");
    f.seed_opt = sub->add_option("--seed", f.seed, "seed (overrides [run] seed)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark harness for parametric aerodynamic wall-field regression"};
    app.require_subcommand(1);

    SubFlags gen;
    CLI::App* generate = app.add_subcommand("generate", "write a synthetic benchmark dataset");
    add_config_seed(generate, gen);
    generate->add_option("--out", gen.out, "output dataset directory");

    SubFlags spl;
    CLI::App* split_cmd = app.add_subcommand("split", "relabel the train/test split of a dataset");
    add_config_seed(split_cmd, spl);
    split_cmd->add_option("--dataset", spl.dataset, "dataset directory");
    split_cmd->add_option("--out", spl.out, "output directory (defaults to the dataset)");

    SubFlags trn;
    CLI::App* train_cmd = app.add_subcommand("train", "fit a regressor on the train flows");
    add_config_seed(train_cmd, trn);
    train_cmd->add_option("--dataset", trn.dataset, "dataset directory");
    train_cmd->add_option("--regressor", trn.regressor, "regressor name");
    train_cmd->add_option("--out", trn.out, "output model file");

    SubFlags prd;
    CLI::App* predict_cmd = app.add_subcommand("predict", "write a submission for the test flows");
    predict_cmd->add_option("--config", prd.config, "run configuration file");
    predict_cmd->add_option("--dataset", prd.dataset, "dataset directory");
    predict_cmd->add_option("--model", prd.model, "trained model file");
    predict_cmd->add_option("--out", prd.out, "output submission directory");

    SubFlags evl;
    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "score a submission against the truth");
    add_config_seed(evaluate_cmd, evl);
    evaluate_cmd->add_option("--dataset", evl.dataset, "dataset directory");
    evaluate_cmd->add_option("--submission", evl.submission, "submission directory");
    evaluate_cmd->add_option("--out", evl.out, "output scores directory");
    bool weighted_mean = false;
    evaluate_cmd->add_flag("--weighted-mean", weighted_mean,
                           "use the flow-weighted mean in the R^2 denominator");

    std::string scores_path;
    CLI::App* report_cmd = app.add_subcommand("report", "render a stored scores.json");
    report_cmd->add_option("--scores", scores_path, "scores.json path")->required();

    SubFlags rey;
    CLI::App* reynolds_cmd =
        app.add_subcommand("reynolds", "print Reynolds numbers over the flow grid");
    reynolds_cmd->add_option("--config", rey.config, "run configuration file");

    SubFlags tun;
    CLI::App* tune_cmd = app.add_subcommand("tune", "search hyperparameters on the train flows");
    add_config_seed(tune_cmd, tun);
    tune_cmd->add_option("--dataset", tun.dataset, "dataset directory");
    tune_cmd->add_option("--regressor", tun.regressor, "knn, mlp_global, or mlp_pointwise");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*generate) {
            return cmd_generate(effective_config(gen));
        }
        if (*split_cmd) {
            return cmd_split(effective_config(spl));
        }
        if (*train_cmd) {
            return cmd_train(effective_config(trn));
        }
        if (*predict_cmd) {
            return cmd_predict(effective_config(prd));
        }
        if (*evaluate_cmd) {
            RunConfig cfg = effective_config(evl);
            if (weighted_mean) {
                cfg.set("score", "weighted_mean", "true");
            }
            return cmd_evaluate(cfg);
        }
        if (*report_cmd) {
            return cmd_report(scores_path);
        }
        if (*reynolds_cmd) {
            return cmd_reynolds(effective_config(rey));
        }
        if (*tune_cmd) {
            return cmd_tune(effective_config(tun));
        }
        throw ConfigError("no subcommand selected");
    } catch (const ConfigError& e) {
        log_line(std::string("config error: ") + e.what());
        return 2;
    } catch (const SubmissionError& e) {
        log_line(std::string("submission error: ") + e.what());
        return 4;
    } catch (const IoError& e) {
        log_line(std::string("io error: ") + e.what());
        return 3;
    } catch (const Error& e) {
        log_line(std::string("error: ") + e.what());
        return 1;
    } catch (const std::exception& e) {
        log_line(std::string("unexpected error: ") + e.what());
        return 1;
    }
}
