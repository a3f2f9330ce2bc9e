#include "cogl/cli.hpp"

#include "cogl/errors.hpp"
#include "cogl/gradcheck.hpp"
#include "cogl/report.hpp"
#include "cogl/run_config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace cogl {

namespace fs = std::filesystem;

namespace {

constexpr double kGradTolerance = 1e-4;

/// Shortest decimal text that parses back to exactly `v`.
std::string exact(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

/// Flags shared by the commands that resolve a RunConfig.
struct RunFlags {
    std::string config;
    std::vector<std::string> sets;
    std::optional<double> alpha, beta, lr;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> epochs;
    std::optional<std::string> mode;
    std::optional<std::string> out;

    void attach(CLI::App& cmd, bool hyper) {
        cmd.add_option("-c,--config", config, "INI config file")->check(CLI::ExistingFile);
        cmd.add_option("--set", sets, "Override a config key, e.g. --set train.lr=0.01 (repeatable)");
        if (hyper) {
            cmd.add_option("--alpha", alpha, "Weight of the reconstruction loss");
            cmd.add_option("--beta", beta, "Weight of the adversarial loss");
        }
        cmd.add_option("--lr", lr, "Learning rate");
        cmd.add_option("--seed", seed, "Random seed");
        cmd.add_option("--epochs", epochs, "Maximum outer epochs");
        cmd.add_option("--mode", mode, "cogl or gcn-baseline");
        cmd.add_option("-o,--out", out, "Output directory (overrides " + std::string(kOutputDirEnv) + ")");
    }

    /// Precedence: flag > environment (output dir only) > file > default.
    RunConfig resolve() const {
        RunConfig cfg = config.empty() ? RunConfig{} : load_run_config(config);
        if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
            cfg.output_dir = env;
        }
        for (const std::string& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw config_error("--set expects key=value, got '" + kv + "'");
            }
            cfg.set(std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
        }
        if (alpha) cfg.train.alpha = *alpha;
        if (beta) cfg.train.beta = *beta;
        if (lr) cfg.train.lr = *lr;
        if (seed) cfg.train.seed = *seed;
        if (epochs) cfg.train.outer_epochs = *epochs;
        if (mode) cfg.mode = parse_mode(*mode);
        if (out) cfg.output_dir = *out;
        return cfg;
    }
};

void write_json(const nlohmann::json& j, const fs::path& path) {
    std::ofstream f(path);
    if (!f) {
        throw config_error("cannot write " + path.string());
    }
    f << j.dump(2) << '\n';
}

/// Trains one configuration and writes report.csv, summary.json and
/// checkpoint.json into its output directory.
TrainResult train_to_dir(const Graph& g, const RunConfig& cfg, std::size_t log_every, std::ostream* log) {
    RunConfig resolved = cfg;
    resolved.train = cfg.effective_train();
    resolved.train.validate();

    TrainHooks hooks;
    if (log != nullptr && log_every > 0) {
        hooks.on_epoch = [&](const EpochRecord& r) {
            if (r.epoch % log_every == 0) {
                *log << "epoch " << r.epoch << std::fixed << std::setprecision(4) << " l_gcn=" << r.l_gcn
                     << " l_cont=" << r.l_cont << " d_loss=" << r.d_loss << " g_loss=" << r.g_loss
                     << " train_acc=" << r.train_acc << " val_loss=" << r.val_loss << " val_acc=" << r.val_acc
                     << std::defaultfloat << '\n';
            }
        };
    }
    TrainResult res = train(g, resolved.train, hooks);

    std::error_code ec;
    fs::create_directories(resolved.output_dir, ec);
    if (ec) {
        throw config_error("cannot create output directory " + resolved.output_dir.string() + ": " + ec.message());
    }
    write_report_csv(res.report, resolved.output_dir / "report.csv");
    const TrainReport& r = res.report;
    write_json(
        {
            {"test_accuracy", r.test_accuracy},
            {"best_epoch", r.best_epoch},
            {"best_val_accuracy", r.best_val_acc},
            {"best_val_loss", r.best_val_loss},
            {"epochs_run", r.epochs.size()},
            {"early_stopped", r.early_stopped},
            {"nodes", g.n_nodes()},
            {"config", resolved.to_json()},
        },
        resolved.output_dir / "summary.json");
    save_checkpoint({res.params, resolved.to_json()}, resolved.output_dir / "checkpoint.json");
    return res;
}

int cmd_train(const RunFlags& flags, std::size_t log_every, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = flags.resolve();
    const Graph g = load_dataset(cfg);
    const TrainResult res = train_to_dir(g, cfg, log_every, &err);
    out << "test_accuracy=" << std::fixed << std::setprecision(4) << res.report.test_accuracy << std::defaultfloat
        << " best_epoch=" << res.report.best_epoch << " output=" << cfg.output_dir.string() << '\n';
    return kExitOk;
}

int cmd_eval(const std::string& checkpoint, const std::string& split, std::ostream& out) {
    const Checkpoint ckpt = load_checkpoint(checkpoint);
    const RunConfig cfg = RunConfig::from_json(ckpt.run_config);
    const Graph g = load_dataset(cfg);
    const Mask& mask = split == "train" ? g.train_mask : split == "val" ? g.val_mask : g.test_mask;
    out << split << "_accuracy=" << std::fixed << std::setprecision(4) << evaluate(g, ckpt.params, mask)
        << std::defaultfloat << '\n';
    return kExitOk;
}

int cmd_gradcheck(std::uint64_t seed, bool corrupt, std::ostream& out) {
    ad::GradcheckOptions opts;
    if (corrupt) {
        opts.fault = ad::Fault::relu_backward;
    }
    bool ok = true;
    for (const ad::LossCheck& c : ad::model_gradient_suite(seed, opts)) {
        const bool pass = c.max_rel_error < kGradTolerance;
        ok = ok && pass;
        out << c.name << " max_rel_error=" << std::scientific << std::setprecision(3) << c.max_rel_error
            << std::defaultfloat << " entries=" << c.entries << (pass ? " PASS" : " FAIL") << '\n';
    }
    return ok ? kExitOk : kExitNumerical;
}

struct SweepRow {
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<TrainReport> report;
    std::string error;
    int code = kExitOk;
};

int cmd_sweep(const RunFlags& flags, const std::vector<double>& alphas, const std::vector<double>& betas,
              std::size_t jobs, std::ostream& out, std::ostream& err) {
    const RunConfig base = flags.resolve();
    if (base.mode == RunMode::gcn_baseline) {
        throw config_error("sweep: gcn-baseline mode ignores alpha and beta; use mode = cogl");
    }
    const Graph g = load_dataset(base);

    std::vector<SweepRow> rows;
    for (double a : alphas) {
        for (double b : betas) {
            rows.push_back({a, b, std::nullopt, {}, kExitOk});
        }
    }

    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            SweepRow& row = rows[i];
            RunConfig cfg = base;
            cfg.train.alpha = row.alpha;
            cfg.train.beta = row.beta;
            cfg.output_dir = base.output_dir / ("alpha_" + exact(row.alpha) + "_beta_" + exact(row.beta));
            try {
                row.report = train_to_dir(g, cfg, 0, nullptr).report;
            } catch (const numerical_error& e) {
                row.error = e.what();
                row.code = kExitNumerical;
            } catch (const std::exception& e) {
                row.error = e.what();
                row.code = kExitConfig;
            }
            const std::lock_guard lock(log_mutex);
            err << "alpha=" << exact(row.alpha) << " beta=" << exact(row.beta) << ' '
                << (row.report ? "test_accuracy=" + exact(row.report->test_accuracy) : "error: " + row.error)
                << '\n';
        }
    };
    const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(rows.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();

    std::error_code ec;
    fs::create_directories(base.output_dir, ec);
    std::ofstream csv(base.output_dir / "sweep.csv");
    if (!csv) {
        throw config_error("cannot write " + (base.output_dir / "sweep.csv").string());
    }
    csv << "alpha,beta,test_accuracy,best_val_accuracy,best_epoch,status\n";
    int code = kExitOk;
    for (const SweepRow& row : rows) {
        csv << exact(row.alpha) << ',' << exact(row.beta) << ',';
        if (row.report) {
            csv << exact(row.report->test_accuracy) << ',' << exact(row.report->best_val_acc) << ','
                << row.report->best_epoch << ",ok\n";
        } else {
            std::string msg = row.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            csv << ",,,error: " << msg << '\n';
            code = std::max(code, row.code);
        }
    }
    out << "wrote " << rows.size() << " rows to " << (base.output_dir / "sweep.csv").string() << '\n';
    return code;
}

int cmd_export(const std::string& checkpoint, const std::string& out_path, std::ostream& out) {
    const Checkpoint ckpt = load_checkpoint(checkpoint);
    const RunConfig cfg = RunConfig::from_json(ckpt.run_config);
    const Graph g = load_dataset(cfg);
    const Matrix o = embed(g, ckpt.params);

    std::ostringstream text;
    for (std::size_t j = 0; j < o.cols(); ++j) {
        text << 'o' << j << ',';
    }
    text << "label\n";
    for (std::size_t i = 0; i < o.rows(); ++i) {
        for (std::size_t j = 0; j < o.cols(); ++j) {
            text << exact(o(i, j)) << ',';
        }
        long label = -1;
        for (std::size_t k = 0; k < g.n_classes(); ++k) {
            if (g.labels(i, k) != 0.0) {
                label = static_cast<long>(k);
            }
        }
        text << label << '\n';
    }
    const fs::path path(out_path);
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw config_error("cannot write " + out_path);
    }
    f << text.str();
    out << "wrote " << o.rows() << " embeddings to " << out_path << '\n';
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"CoGL: content/topology co-aligned graph convolution for node classification", "cogl"};
    app.require_subcommand(1);

    RunFlags train_flags;
    std::size_t log_every = 50;
    CLI::App* train_cmd = app.add_subcommand("train", "Train one model and write report.csv, summary.json, checkpoint.json");
    train_flags.attach(*train_cmd, true);
    train_cmd->add_option("--log-every", log_every, "Print metrics every N epochs (0 = silent)");

    std::string eval_ckpt, eval_split = "test";
    CLI::App* eval_cmd = app.add_subcommand("eval", "Accuracy of a checkpoint on one split");
    eval_cmd->add_option("checkpoint", eval_ckpt, "Checkpoint file")->required();
    eval_cmd->add_option("--split", eval_split, "train, val or test")
        ->check(CLI::IsMember({"train", "val", "test"}));

    std::uint64_t gc_seed = 0;
    bool gc_corrupt = false;
    CLI::App* gc_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every loss gradient");
    gc_cmd->add_option("--seed", gc_seed, "Seed of the random instance");
    gc_cmd->add_flag("--corrupt-backward", gc_corrupt)->group("");

    RunFlags sweep_flags;
    std::vector<double> alphas, betas;
    std::size_t jobs = 1;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Train once per (alpha, beta) pair and write sweep.csv");
    sweep_flags.attach(*sweep_cmd, false);
    sweep_cmd->add_option("--alphas", alphas, "Comma-separated alpha values")->delimiter(',')->required();
    sweep_cmd->add_option("--betas", betas, "Comma-separated beta values")->delimiter(',')->required();
    sweep_cmd->add_option("-j,--jobs", jobs, "Worker threads");

    std::string exp_ckpt, exp_out;
    CLI::App* exp_cmd = app.add_subcommand("export-embeddings", "Write topology-branch embeddings O as CSV");
    exp_cmd->add_option("checkpoint", exp_ckpt, "Checkpoint file")->required();
    exp_cmd->add_option("out", exp_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*train_cmd) return cmd_train(train_flags, log_every, out, err);
        if (*eval_cmd) return cmd_eval(eval_ckpt, eval_split, out);
        if (*gc_cmd) return cmd_gradcheck(gc_seed, gc_corrupt, out);
        if (*sweep_cmd) return cmd_sweep(sweep_flags, alphas, betas, jobs, out, err);
        if (*exp_cmd) return cmd_export(exp_ckpt, exp_out, out);
    } catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

} // namespace cogl
