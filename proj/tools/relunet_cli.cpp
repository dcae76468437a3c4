// relunet: construct, train, extract and sweep one-hidden-layer ReLU networks.
//
// Every subcommand writes its artifacts plus manifest.json into --out. The
// manifest's "argv" array reruns the command with all defaults resolved.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relunet/canonical.hpp"
#include "relunet/constructor.hpp"
#include "relunet/io.hpp"
#include "relunet/spectral.hpp"
#include "relunet/targets.hpp"
#include "relunet/trainer.hpp"
#include "relunet/verifier.hpp"

#ifndef RELUNET_VERSION
#define RELUNET_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace relunet;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitDiverged = 3;

// Thrown for user errors that map to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TargetOptions {
    std::string name;
    std::map<std::string, double> params;
    std::vector<double> coeffs;
};

struct Common {
    std::string out = ".";
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::size_t grid = 0;
};

void add_target_options(CLI::App* sub, TargetOptions& t, bool required) {
    auto* opt = sub->add_option("--target", t.name, "Registry target: sin | poly | gauss2 | xy");
    if (required) opt->required();
    for (const char* key : {"M", "L", "a", "x1", "y1", "x2", "y2"}) {
        sub->add_option_function<double>(
            std::string("--") + key, [&t, key](double v) { t.params[key] = v; },
            std::string("Target parameter ") + key);
    }
    sub->add_option("--coeffs", t.coeffs, "Polynomial coefficients c0,c1,... (poly)")->delimiter(',');
}

void add_common_options(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads (1 = bitwise deterministic)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--grid", c.grid, "Evaluation grid points per axis (0 = default)");
}

TargetSpec to_spec(const TargetOptions& t) { return {t.name, t.params, t.coeffs}; }

TargetFunction resolve_target(const TargetOptions& t) {
    try {
        return make_target(to_spec(t));
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

std::string num(double v) { return io::format_double(v); }

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s;
}

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// Resolved target as flags and as a JSON object.
void describe_target(const TargetFunction& f, std::vector<std::string>& argv, json& cfg) {
    argv.insert(argv.end(), {"--target", f.name});
    json params = json::object();
    for (const auto& [k, v] : f.params) {
        argv.insert(argv.end(), {"--" + k, num(v)});
        params[k] = v;
    }
    if (!f.coeffs.empty()) {
        argv.insert(argv.end(), {"--coeffs", join(f.coeffs)});
        params["coeffs"] = f.coeffs;
    }
    cfg["target"] = {{"name", f.name}, {"params", params}};
}

void describe_common(const Common& c, std::size_t grid, std::vector<std::string>& argv, json& cfg) {
    argv.insert(argv.end(), {"--seed", std::to_string(c.seed), "--threads", std::to_string(c.threads), "--grid",
                             std::to_string(grid)});
    cfg["seed"] = c.seed;
    cfg["threads"] = c.threads;
    cfg["grid"] = grid;
}

class Manifest {
public:
    Manifest(std::string command, fs::path dir)
        : command_(std::move(command)), dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {}

    json config = json::object();
    json results = json::object();
    std::vector<std::string> argv;
    std::vector<std::string> files;
    std::string status = "ok";
    std::uint64_t seed = 0;

    void write() const {
        json doc;
        doc["command"] = command_;
        doc["version"] = RELUNET_VERSION;
        doc["seed"] = seed;
        doc["config"] = config;
        doc["argv"] = argv;
        doc["results"] = results;
        doc["status"] = status;
        doc["wall_time_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json outputs = json::object();
        for (const auto& f : files) outputs[f] = io::sha256_file(dir_ / f);
        doc["outputs"] = outputs;
        std::ofstream(dir_ / "manifest.json") << doc.dump(2) << "\n";
    }

private:
    std::string command_;
    fs::path dir_;
    std::chrono::steady_clock::time_point start_;
};

void write_eval_csv(const fs::path& path, const TargetFunction& f, const Network& net, std::size_t grid) {
    const double L = f.domain_length;
    auto axis = [&](std::size_t i) { return i + 1 == grid ? L : L * static_cast<double>(i) / static_cast<double>(grid - 1); };
    if (f.input_dim == 1) {
        io::CsvWriter w(path, {"x", "f", "F", "residual"});
        for (std::size_t i = 0; i < grid; ++i) {
            const double x = axis(i);
            const double fx = f(x), Fx = evaluate(net, x);
            w.row({x, fx, Fx, fx - Fx});
        }
    } else {
        io::CsvWriter w(path, {"x", "y", "f", "F", "residual"});
        std::vector<double> p(2);
        for (std::size_t i = 0; i < grid; ++i) {
            for (std::size_t j = 0; j < grid; ++j) {
                p = {axis(i), axis(j)};
                const double fx = f(p), Fx = evaluate(net, p);
                w.row({p[0], p[1], fx, Fx, fx - Fx});
            }
        }
    }
}

fs::path prepare_out(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
    TargetOptions target;
    Common common;
    std::size_t J = 100;
    double lambda = 1.0;
    bool prune = false;
};

int run_construct(const ConstructArgs& a) {
    const TargetFunction f = resolve_target(a.target);
    if (!f.has_derivatives()) throw UsageError("target '" + f.name + "' cannot be constructed (needs a 1-D target)");
    if (a.J == 0) throw UsageError("--J must be positive");
    if (!(a.lambda >= 0.0 && a.lambda <= 1.0)) throw UsageError("--lambda must lie in [0, 1]");
    const std::size_t grid = a.common.grid ? a.common.grid : 4096;
    if (grid < 2) throw UsageError("--grid must be at least 2");

    const fs::path dir = prepare_out(a.common.out);
    Manifest man("construct", dir);
    man.seed = a.common.seed;
    man.argv = {"construct"};
    describe_target(f, man.argv, man.config);
    man.argv.insert(man.argv.end(), {"--J", std::to_string(a.J), "--lambda", num(a.lambda)});
    if (a.prune) man.argv.push_back("--prune");
    describe_common(a.common, grid, man.argv, man.config);
    man.config["J"] = a.J;
    man.config["lambda"] = a.lambda;
    man.config["prune"] = a.prune;

    const Division d = uniform_division(a.J, f.domain_length);
    const Network net = build_bidirectional(f, d, a.lambda, {.prune = a.prune});
    io::save_checkpoint(net, dir / "checkpoint.json");
    write_eval_csv(dir / "eval.csv", f, net, grid);
    const auto err = sup_error(f, net, grid, a.common.threads);
    const auto eb = error_bound(f, d);
    man.results = {{"units", net.size()},       {"mesh_norm", eb.mesh_norm}, {"c1", eb.c1},
                   {"bound", eb.bound},         {"max_error", err.max_error}, {"mse", err.mse},
                   {"argmax", err.argmax},      {"estimated_norms", eb.estimated_norms}};
    man.files = {"checkpoint.json", "eval.csv"};
    man.write();
    std::cout << "construct: " << net.size() << " units, max_error " << num(err.max_error) << ", bound "
              << num(eb.bound) << "\n";
    return 0;
}

// -------------------------------------------------------------------- train

struct TrainArgs {
    TargetOptions target;
    Common common;
    std::size_t J = 100;
    std::size_t n = 10000;
    std::size_t epochs = 100;
    std::size_t batch = 64;
    std::string optimizer = "adam";
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::string init = "domain";
};

void add_train_options(CLI::App* sub, TrainArgs& a) {
    sub->add_option("--n", a.n, "Training samples")->capture_default_str();
    sub->add_option("--epochs", a.epochs, "Epochs")->capture_default_str();
    sub->add_option("--batch", a.batch, "Mini-batch size")->capture_default_str();
    sub->add_option("--optimizer", a.optimizer, "adam | sgd")->capture_default_str();
    sub->add_option("--lr", a.lr, "Learning rate")->capture_default_str();
    sub->add_option("--beta1", a.beta1, "Adam beta1")->capture_default_str();
    sub->add_option("--beta2", a.beta2, "Adam beta2")->capture_default_str();
    sub->add_option("--eps", a.eps, "Adam epsilon")->capture_default_str();
    sub->add_option("--init", a.init, "Initialization: domain | uniform")->capture_default_str();
}

TrainConfig to_config(const TrainArgs& a) {
    TrainConfig cfg;
    cfg.units = a.J;
    cfg.epochs = a.epochs;
    cfg.batch_size = a.batch;
    try {
        cfg.optimizer = parse_optimizer(a.optimizer);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    cfg.learning_rate = a.lr;
    cfg.beta1 = a.beta1;
    cfg.beta2 = a.beta2;
    cfg.eps = a.eps;
    cfg.init_scheme = a.init;
    cfg.seed = a.common.seed;
    cfg.eval_grid_size = a.common.grid;
    cfg.threads = a.common.threads;
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (a.n == 0) throw UsageError("--n must be positive");
    return cfg;
}

void describe_train(const TrainArgs& a, const TrainConfig& cfg, std::vector<std::string>& argv, json& c) {
    argv.insert(argv.end(), {"--n", std::to_string(a.n), "--epochs", std::to_string(cfg.epochs), "--batch",
                             std::to_string(cfg.batch_size), "--optimizer", to_string(cfg.optimizer), "--lr",
                             num(cfg.learning_rate), "--beta1", num(cfg.beta1), "--beta2", num(cfg.beta2), "--eps",
                             num(cfg.eps), "--init", cfg.init_scheme});
    c["n"] = a.n;
    c["epochs"] = cfg.epochs;
    c["batch"] = cfg.batch_size;
    c["optimizer"] = to_string(cfg.optimizer);
    c["lr"] = cfg.learning_rate;
    c["beta1"] = cfg.beta1;
    c["beta2"] = cfg.beta2;
    c["eps"] = cfg.eps;
    c["init"] = cfg.init_scheme;
}

int run_train(const TrainArgs& a) {
    const TargetFunction f = resolve_target(a.target);
    TrainConfig cfg = to_config(a);
    const std::size_t grid = a.common.grid ? a.common.grid : (f.input_dim == 1 ? 4096 : 256);
    cfg.eval_grid_size = grid;

    const fs::path dir = prepare_out(a.common.out);
    Manifest man("train", dir);
    man.seed = a.common.seed;
    man.argv = {"train"};
    describe_target(f, man.argv, man.config);
    man.argv.insert(man.argv.end(), {"--J", std::to_string(a.J)});
    man.config["J"] = a.J;
    describe_train(a, cfg, man.argv, man.config);
    describe_common(a.common, grid, man.argv, man.config);

    const Dataset data = sample_dataset(to_spec(a.target), a.n, a.common.seed);
    const TrainReport rep = train(data, cfg);

    {
        io::CsvWriter w(dir / "loss.csv", {"epoch", "mse"});
        for (std::size_t e = 0; e < rep.loss_curve.size(); ++e) w.row({static_cast<double>(e + 1), rep.loss_curve[e]});
    }
    man.files = {"loss.csv"};
    man.results = {{"epochs_completed", rep.loss_curve.size()}, {"train_seconds", rep.seconds}};
    if (rep.failed) {
        man.status = "failed";
        man.results["failure"] = rep.failure;
        man.write();
        std::cerr << "train: diverged: " << rep.failure << "\n";
        return kExitDiverged;
    }
    io::save_checkpoint(rep.network, dir / "checkpoint.json");
    write_eval_csv(dir / "eval.csv", f, rep.network, grid);
    man.files = {"checkpoint.json", "loss.csv", "eval.csv"};
    man.results["max_error"] = rep.max_error;
    man.results["mse"] = rep.mse;
    man.results["final_train_mse"] = rep.loss_curve.empty() ? 0.0 : rep.loss_curve.back();
    man.write();
    std::cout << "train: max_error " << num(rep.max_error) << ", mse " << num(rep.mse) << "\n";
    return 0;
}

// ------------------------------------------------------------------ extract

struct ExtractArgs {
    TargetOptions target;
    Common common;
    std::string checkpoint;
    double h = 0.0;
    bool include_bin0 = false;
};

int run_extract(const ExtractArgs& a) {
    Network net(1);
    try {
        net = io::load_checkpoint(a.checkpoint);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (net.input_dim() != 1) throw UsageError("spectrum extraction needs a 1-D checkpoint");

    std::optional<TargetFunction> f;
    if (!a.target.name.empty()) {
        f = resolve_target(a.target);
        if (f->input_dim != 1 || !f->f2) throw UsageError("comparison target must be 1-D with f''");
    }
    double L = 0.0;
    if (const auto it = a.target.params.find("L"); it != a.target.params.end()) {
        L = it->second;
    } else if (f) {
        L = f->domain_length;
    } else {
        throw UsageError("--L is required without --target");
    }
    if (f && std::abs(f->domain_length - L) > 1e-12 * L) throw UsageError("--L disagrees with the target's L");

    BinSpectrum s;
    try {
        s = extract_spectrum(net, a.h, L);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const fs::path dir = prepare_out(a.common.out);
    Manifest man("extract", dir);
    man.seed = a.common.seed;
    man.argv = {"extract", "--checkpoint", a.checkpoint, "--h", num(a.h)};
    if (f) {
        describe_target(*f, man.argv, man.config);  // carries --L
    } else {
        man.argv.insert(man.argv.end(), {"--L", num(L)});
    }
    if (a.include_bin0) man.argv.push_back("--include-bin0");
    man.argv.insert(man.argv.end(), {"--seed", std::to_string(a.common.seed)});
    man.config["checkpoint"] = a.checkpoint;
    man.config["checkpoint_sha256"] = io::sha256_file(a.checkpoint);
    man.config["h"] = a.h;
    man.config["L"] = L;
    man.config["include_bin0"] = a.include_bin0;
    man.config["seed"] = a.common.seed;

    std::optional<SpectrumComparison> cmp;
    if (f) cmp = compare_spectrum(s, *f, !a.include_bin0);
    {
        io::CsvWriter w(dir / "spectrum.csv", {"k", "t", "b_plus", "b_minus", "sum", "f2_theory", "residual"});
        const double nan = std::nan("");
        for (std::size_t k = 0; k < s.bins; ++k) {
            const double t = static_cast<double>(k) * s.h;
            const double sum = s.b_plus[k] + s.b_minus[k];
            const double f2 = cmp ? cmp->rows[k].f2 : nan;
            const double res = cmp ? cmp->rows[k].residual : nan;
            w.row({static_cast<double>(k), t, s.b_plus[k], s.b_minus[k], sum, f2, res});
        }
    }
    json summary = {{"bins", s.bins},
                    {"h", s.h},
                    {"L", s.length},
                    {"out_of_range_mass", s.out_of_range_mass},
                    {"degenerate_count", s.degenerate_count}};
    if (cmp) {
        summary["bin0_excluded"] = cmp->bin0_excluded;
        summary["rms_residual"] = cmp->rms_residual;
        summary["correlation"] = std::isnan(cmp->correlation) ? json(nullptr) : json(cmp->correlation);
    }
    std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";
    man.results = summary;
    man.files = {"spectrum.csv", "summary.json"};
    man.write();
    std::cout << "extract: " << s.bins << " bins";
    if (cmp) std::cout << ", correlation " << num(cmp->correlation) << ", rms " << num(cmp->rms_residual);
    std::cout << "\n";
    return 0;
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
    std::string kind;
    TrainArgs train;  // target, common and training flags
    std::vector<std::size_t> Js;
};

int run_sweep(const SweepArgs& a) {
    const auto& c = a.train.common;
    const TargetFunction f = resolve_target(a.train.target);
    const fs::path dir = prepare_out(c.out);
    Manifest man("sweep", dir);
    man.seed = c.seed;
    man.argv = {"sweep", a.kind};
    describe_target(f, man.argv, man.config);
    man.config["kind"] = a.kind;

    if (a.kind == "convergence") {
        if (!f.has_derivatives()) throw UsageError("convergence sweeps need a 1-D target with derivatives");
        const std::vector<std::size_t> Js = a.Js.empty() ? std::vector<std::size_t>{10, 20, 40, 80, 160, 320, 640} : a.Js;
        for (auto J : Js) {
            if (J == 0) throw UsageError("--J entries must be positive");
        }
        const std::size_t grid = c.grid ? c.grid : 4096;
        if (grid < 2) throw UsageError("--grid must be at least 2");
        man.argv.insert(man.argv.end(), {"--J", join(Js)});
        describe_common(c, grid, man.argv, man.config);
        man.config["J"] = Js;
        const auto table = convergence_sweep(f, Js, grid);
        {
            io::CsvWriter w(dir / "sweep.csv", {"J", "mesh_norm", "max_error", "bound", "ratio", "halving_ratio"});
            for (const auto& r : table.rows) {
                w.row({static_cast<double>(r.J), r.mesh_norm, r.max_error, r.bound, r.ratio, r.halving_ratio});
            }
        }
        double worst = 0.0;
        for (const auto& r : table.rows) worst = std::max(worst, r.ratio);
        man.results = {{"max_ratio", worst}, {"estimated_norms", table.estimated_norms}};
        man.files = {"sweep.csv"};
        man.write();
        std::cout << "sweep convergence: " << table.rows.size() << " rows, max error/bound " << num(worst) << "\n";
        return 0;
    }

    if (f.input_dim != 2) throw UsageError("hardness sweeps need a 2-D target");
    const std::vector<std::size_t> Js = a.Js.empty() ? std::vector<std::size_t>{1, 8, 32, 128} : a.Js;
    TrainArgs ta = a.train;
    ta.J = 1;
    TrainConfig cfg = to_config(ta);
    const std::size_t grid = c.grid ? c.grid : 256;
    cfg.eval_grid_size = grid;
    man.argv.insert(man.argv.end(), {"--J", join(Js)});
    describe_train(ta, cfg, man.argv, man.config);
    describe_common(c, grid, man.argv, man.config);
    man.config["J"] = Js;

    const Dataset data = sample_dataset(to_spec(a.train.target), ta.n, c.seed);
    const auto table = hardness_sweep(data, Js, cfg);
    bool failed = false;
    json timings = json::array();
    {
        io::CsvWriter w(dir / "hardness.csv", {"J", "mse", "max_error"});
        for (const auto& r : table.rows) {
            w.row({static_cast<double>(r.J), r.mse, r.max_error});
            timings.push_back({{"J", r.J}, {"seconds", r.seconds}});
            failed |= r.failed;
        }
    }
    man.results = {{"note", table.note}, {"seconds", timings}};
    man.files = {"hardness.csv"};
    if (failed) man.status = "failed";
    man.write();
    std::cout << "sweep hardness: " << table.rows.size() << " rows\n" << table.note << "\n";
    return failed ? kExitDiverged : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constructive and trained one-hidden-layer ReLU networks"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", RELUNET_VERSION);
    app.require_subcommand(1);

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "Build a network from f(0), f'(0) and f''");
    add_target_options(construct, ca.target, true);
    add_common_options(construct, ca.common);
    construct->add_option("--J", ca.J, "Mesh intervals")->capture_default_str();
    construct->add_option("--lambda", ca.lambda, "Forward share of f'' in [0, 1]")->capture_default_str();
    construct->add_flag("--prune", ca.prune, "Drop units with |b| < 1e-15");

    TrainArgs ta;
    auto* trainc = app.add_subcommand("train", "Train a network by mini-batch gradient descent");
    add_target_options(trainc, ta.target, true);
    add_common_options(trainc, ta.common);
    trainc->add_option("--J", ta.J, "Hidden units")->capture_default_str();
    add_train_options(trainc, ta);

    ExtractArgs ea;
    auto* extract = app.add_subcommand("extract", "Bin a 1-D network into the B+/B- spectrum");
    add_target_options(extract, ea.target, false);
    add_common_options(extract, ea.common);
    extract->add_option("--checkpoint", ea.checkpoint, "Checkpoint JSON")->required();
    extract->add_option("--h", ea.h, "Bin width")->required();
    extract->add_flag("--include-bin0", ea.include_bin0, "Include bin 0 in summary statistics");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "Convergence or hardness sweep");
    sweep->add_option("kind", sa.kind, "convergence | hardness")
        ->required()
        ->check(CLI::IsMember({"convergence", "hardness"}));
    add_target_options(sweep, sa.train.target, true);
    add_common_options(sweep, sa.train.common);
    sweep->add_option("--J", sa.Js, "Comma-separated widths")->delimiter(',');
    add_train_options(sweep, sa.train);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        if (*construct) return run_construct(ca);
        if (*trainc) return run_train(ta);
        if (*extract) return run_extract(ea);
        if (*sweep) return run_sweep(sa);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
