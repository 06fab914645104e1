// softeval: soft/hard multilabel evaluation, threshold search, random baselines and sweeps.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage or configuration error,
// 3 malformed input data, 4 prediction/reference mismatch, 5 file I/O error,
// 6 undefined result (e.g. too few observations for a jackknife).

#include <glob.h>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "softeval/baselines.hpp"
#include "softeval/dataio.hpp"
#include "softeval/errors.hpp"
#include "softeval/kernels.hpp"
#include "softeval/report.hpp"
#include "softeval/sweep.hpp"
#include "softeval/thresholding.hpp"

namespace {

using namespace softeval;

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_parse = 3,
    exit_alignment = 4,
    exit_io = 5,
    exit_domain = 6,
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        while (!item.empty() && (item.back() == '\r' || item.back() == ' ')) {
            item.pop_back();
        }
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// --classes accepts a file (one name per line or comma separated) or an inline comma list.
std::vector<std::string> parse_classes(const std::string& arg) {
    std::string text = arg;
    if (std::filesystem::is_regular_file(arg)) {
        text = read_text(arg);
        std::replace(text.begin(), text.end(), '\n', ',');
    }
    auto names = split_list(text);
    if (names.empty()) {
        throw config_error("--classes lists no class names");
    }
    return names;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<std::string> paths;
    if (rc == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) {
            paths.emplace_back(g.gl_pathv[i]);
        }
    }
    globfree(&g);
    if (paths.empty()) {
        throw io_error("no files match '" + pattern + "'");
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

std::vector<double> parse_grid_list(const std::string& s) {
    std::vector<double> grid;
    for (const auto& item : split_list(s)) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw config_error("grid value '" + item + "' is not a number");
        }
    }
    return grid;
}

void apply_kernel(const std::string& kernel) {
    if (kernel.empty() || kernel == "auto") {
        return;
    }
    const auto b = kernels::parse_backend(kernel);
    if (!b) {
        throw config_error("unknown kernel '" + kernel + "' (expected auto, scalar, avx2 or neon)");
    }
    kernels::set_backend(*b);
}

struct EvaluateArgs {
    std::string pred;
    std::vector<std::string> runs;
    std::string ref;
    std::string modes{"hard,ot,soft"};
    double threshold{0.5};
    std::string classes;
    bool jackknife{false};
    std::string jackknife_unit;  // empty: runs for --runs, items for --pred
    std::vector<std::string> tune_on;
    std::string thresholds_file;
    std::string format{"json"};
    std::string output{"-"};
};

int run_evaluate(const EvaluateArgs& a) {
    if (a.pred.empty() == a.runs.empty()) {
        throw config_error("give exactly one of --pred or --runs");
    }
    std::vector<std::string> pred_paths;
    if (!a.pred.empty()) {
        pred_paths.push_back(a.pred);
    }
    for (const auto& pattern : a.runs) {
        for (auto& p : expand_glob(pattern)) {
            pred_paths.push_back(std::move(p));
        }
    }

    const auto reference = read_matrix(a.ref);
    const ClassSubset subset = a.classes.empty() ? ClassSubset::all_of(reference) : ClassSubset(parse_classes(a.classes));

    EvaluationOptions opt;
    opt.soft = false;
    opt.fixed_threshold.reset();
    for (const auto& m : split_list(a.modes)) {
        if (m == "soft") {
            opt.soft = true;
        } else if (m == "hard") {
            opt.fixed_threshold = a.threshold;
        } else if (m == "ot") {
            opt.optimal = true;
        } else {
            throw config_error("unknown mode '" + m + "' (expected soft, hard, ot)");
        }
    }
    if (!a.tune_on.empty() && !a.thresholds_file.empty()) {
        throw config_error("--tune-on and --thresholds are mutually exclusive");
    }
    if (!a.tune_on.empty()) {
        const auto [tp, tr] = align(read_matrix(a.tune_on[0]), read_matrix(a.tune_on[1]), subset);
        opt.tuned_thresholds = optimal_thresholds(tp, tr, subset);
        opt.ot_tuning_label = "held-out:" + a.tune_on[0] + "," + a.tune_on[1];
    } else if (!a.thresholds_file.empty()) {
        opt.tuned_thresholds = thresholds_from_json(read_text(a.thresholds_file));
        opt.ot_tuning_label = "file:" + a.thresholds_file;
    }
    if (a.jackknife) {
        const std::string unit = !a.jackknife_unit.empty() ? a.jackknife_unit : a.runs.empty() ? "items" : "runs";
        if (unit == "runs") {
            opt.jackknife = JackknifeUnit::runs;
        } else if (unit == "items") {
            opt.jackknife = JackknifeUnit::items;
        } else {
            throw config_error("--jackknife-unit must be runs or items");
        }
    }

    std::vector<SoftLabelMatrix> predictions;
    for (const auto& path : pred_paths) {
        predictions.push_back(align(read_matrix(path), reference, subset).first);
    }
    auto report = evaluate(predictions, reference, subset, opt);
    report.metadata.predictions = pred_paths;
    report.metadata.reference = a.ref;

    if (a.format != "json" && a.format != "csv") {
        throw config_error("--format must be json or csv");
    }
    write_text(a.output, write_report(report, a.format == "json" ? ReportFormat::json : ReportFormat::csv));
    return exit_ok;
}

struct ThresholdsArgs {
    std::string pred;
    std::string ref;
    std::string classes;
    std::string output{"-"};
};

int run_thresholds(const ThresholdsArgs& a) {
    const auto reference = read_matrix(a.ref);
    const ClassSubset subset = a.classes.empty() ? ClassSubset::all_of(reference) : ClassSubset(parse_classes(a.classes));
    const auto [pred, ref] = align(read_matrix(a.pred), reference, subset);
    write_text(a.output, thresholds_to_json(optimal_thresholds(pred, ref, subset)));
    return exit_ok;
}

struct BaselineArgs {
    std::string method;
    std::string train;
    std::string items_from;
    std::string classes;
    std::uint64_t seed{0};
    std::size_t n_items{0};
    double r{1.0};
    double value{0.5};
    std::string output{"-"};
    std::string meta;
};

nlohmann::ordered_json params_json(const BetaParams& params) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : params.entries()) {
        nlohmann::ordered_json j{{"class", e.class_name}, {"mean", e.mean}};
        if (e.shape) {
            j["alpha"] = e.shape->alpha;
            j["beta"] = e.shape->beta;
            j["degenerate"] = false;
        } else {
            j["alpha"] = nullptr;
            j["beta"] = nullptr;
            j["degenerate"] = true;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

int run_baseline(const BaselineArgs& a) {
    std::optional<SoftLabelMatrix> training;
    if (!a.train.empty()) {
        training = read_matrix(a.train);
    }
    std::optional<SoftLabelMatrix> items_source;
    if (!a.items_from.empty()) {
        items_source = read_matrix(a.items_from);
    }

    std::vector<std::string> item_ids;
    if (a.n_items > 0) {
        item_ids = make_item_ids(a.n_items);
    } else if (items_source) {
        item_ids = items_source->item_ids();
    } else {
        throw config_error("give --n-items or --items-from");
    }

    std::vector<std::string> classes;
    if (!a.classes.empty()) {
        classes = parse_classes(a.classes);
    } else if (training) {
        classes = training->class_names();
    } else if (items_source) {
        classes = items_source->class_names();
    }

    const bool needs_training = a.method == "betas" || a.method == "shuffled-betas" || a.method == "rows";
    if (needs_training && !training) {
        throw config_error("method '" + a.method + "' needs --train");
    }
    if (classes.empty()) {
        throw config_error("no classes: give --classes, --train or --items-from");
    }

    SeededGenerator gen(a.seed);
    nlohmann::ordered_json meta{{"tool", "softeval"}, {"command", "baseline"}, {"method", a.method},
                                {"prng", std::string(prng_id)}, {"seed", a.seed}};
    SoftLabelMatrix out;
    if (a.method == "betas" || a.method == "shuffled-betas") {
        auto params = fit_betas(*training, ClassSubset(classes));
        meta["fitted"] = params_json(params);
        if (a.method == "shuffled-betas") {
            auto shuffle_stream = gen.derive(~std::uint64_t{0});
            params = shuffle_assignment(params, shuffle_stream);
            meta["assigned"] = params_json(params);
        }
        out = sample_betas(params, std::move(item_ids), gen);
    } else if (a.method == "rows") {
        SoftLabelMatrix restricted(training->item_ids(), classes);
        const auto idx = ClassSubset(classes).resolve(*training);
        for (std::size_t c = 0; c < idx.size(); ++c) {
            restricted.set_column(c, training->column(idx[c]));
        }
        out = sample_rows(restricted, std::move(item_ids), gen);
    } else if (a.method == "symmetric-r") {
        meta["r"] = a.r;
        out = symmetric_beta_output(a.r, std::move(item_ids), classes, gen);
    } else if (a.method == "constant") {
        meta["value"] = a.value;
        out = constant_output(a.value, std::move(item_ids), classes);
    } else {
        throw config_error("unknown method '" + a.method + "'");
    }
    write_matrix(a.output, out);
    if (!a.meta.empty()) {
        write_text(a.meta, meta.dump(2) + "\n");
    }
    return exit_ok;
}

struct SweepArgs {
    std::string mode{"epsilon"};
    std::string grid;
    std::optional<double> start, stop, step;
    std::string ref;
    std::size_t n_items{10000};
    std::size_t n_classes{10};
    std::uint64_t seed{0};
    bool no_constant{false};
    double constant_value{0.5};
    std::string output{"-"};
    std::string meta;
};

int run_sweep(const SweepArgs& a) {
    std::vector<double> grid;
    const bool range_given = a.start || a.stop || a.step;
    if (!a.grid.empty() && range_given) {
        throw config_error("--grid and --start/--stop/--step are mutually exclusive");
    }
    if (!a.grid.empty()) {
        grid = parse_grid_list(a.grid);
    } else if (a.mode == "epsilon") {
        grid = make_grid(a.start.value_or(-0.2), a.stop.value_or(0.8), a.step.value_or(0.01));
    } else if (range_given) {
        if (!(a.start && a.stop && a.step)) {
            throw config_error("beta_r range needs --start, --stop and --step");
        }
        grid = make_grid(*a.start, *a.stop, *a.step);
    } else {
        grid = {0.01, 0.1, 1.0, 5.0, 20.0};
    }

    nlohmann::ordered_json meta{{"tool", "softeval"}, {"command", "sweep"}, {"mode", a.mode}, {"grid", grid}};
    if (a.mode == "epsilon") {
        write_text(a.output, format_epsilon_csv(epsilon_sweep(grid)));
    } else if (a.mode == "beta_r") {
        SeededGenerator gen(a.seed);
        SoftLabelMatrix reference;
        if (a.ref.empty()) {
            std::vector<std::string> classes;
            for (std::size_t c = 0; c < a.n_classes; ++c) {
                classes.push_back("class_" + std::to_string(c));
            }
            reference = synthetic_reference(a.n_items, std::move(classes), gen.derive(~std::uint64_t{0}));
            meta["reference"] = "synthetic";
        } else {
            reference = read_matrix(a.ref);
            meta["reference"] = a.ref;
        }
        meta["prng"] = std::string(prng_id);
        meta["seed"] = a.seed;
        const std::optional<double> constant =
            a.no_constant ? std::nullopt : std::optional<double>(a.constant_value);
        write_text(a.output, format_beta_r_csv(beta_r_sweep(reference, grid, gen, constant)));
    } else {
        throw config_error("--mode must be epsilon or beta_r");
    }
    if (!a.meta.empty()) {
        write_text(a.meta, meta.dump(2) + "\n");
    }
    return exit_ok;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const config_error& e) {
        std::cerr << "softeval: configuration error: " << e.what() << '\n';
        return exit_config;
    } catch (const parse_error& e) {
        std::cerr << "softeval: invalid input: " << e.what() << '\n';
        return exit_parse;
    } catch (const alignment_error& e) {
        std::cerr << "softeval: alignment error: " << e.what() << '\n';
        return exit_alignment;
    } catch (const io_error& e) {
        std::cerr << "softeval: I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const domain_error& e) {
        std::cerr << "softeval: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        std::cerr << "softeval: unexpected error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Soft and hard precision/recall/F-score evaluation for multilabel soft labels"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string kernel;
    app.add_option("--kernel", kernel, "Arithmetic kernel: auto, scalar, avx2, neon")->envname("SOFTEVAL_KERNEL");

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against a reference");
    evaluate_cmd->add_option("--pred", ev.pred, "Prediction CSV ('-' for stdin)");
    evaluate_cmd->add_option("--runs", ev.runs, "Glob of prediction CSVs, one per run");
    evaluate_cmd->add_option("--ref", ev.ref, "Reference CSV")->required();
    evaluate_cmd->add_option("--modes", ev.modes, "Comma list of soft, hard, ot")->envname("SOFTEVAL_MODES");
    evaluate_cmd->add_option("--threshold", ev.threshold, "Threshold of the hard mode")
        ->envname("SOFTEVAL_THRESHOLD");
    evaluate_cmd->add_option("--classes", ev.classes, "Class subset: file or comma list");
    evaluate_cmd->add_flag("--jackknife", ev.jackknife, "Add jackknife confidence intervals");
    evaluate_cmd->add_option("--jackknife-unit", ev.jackknife_unit, "runs or items (default: runs with --runs, items with --pred)")
        ->envname("SOFTEVAL_JACKKNIFE_UNIT");
    evaluate_cmd->add_option("--tune-on", ev.tune_on, "PRED REF pair used to tune optimal thresholds")
        ->expected(2);
    evaluate_cmd->add_option("--thresholds", ev.thresholds_file, "Threshold JSON for the ot mode");
    evaluate_cmd->add_option("--format", ev.format, "json or csv")->envname("SOFTEVAL_FORMAT");
    evaluate_cmd->add_option("-o,--output", ev.output, "Output path ('-' for stdout)");

    ThresholdsArgs th;
    auto* thresholds_cmd = app.add_subcommand("thresholds", "Class-wise F-optimal thresholds");
    thresholds_cmd->add_option("--pred", th.pred, "Prediction CSV used for tuning")->required();
    thresholds_cmd->add_option("--ref", th.ref, "Reference CSV used for tuning")->required();
    thresholds_cmd->add_option("--classes", th.classes, "Class subset: file or comma list");
    thresholds_cmd->add_option("-o,--output", th.output, "Output path ('-' for stdout)");

    BaselineArgs bl;
    auto* baseline_cmd = app.add_subcommand("baseline", "Generate a random system output");
    baseline_cmd->add_option("--method", bl.method, "betas, shuffled-betas, rows, symmetric-r, constant")
        ->required()
        ->check(CLI::IsMember({"betas", "shuffled-betas", "rows", "symmetric-r", "constant"}));
    baseline_cmd->add_option("--train", bl.train, "Training label CSV");
    baseline_cmd->add_option("--items-from", bl.items_from, "Copy item ids (and classes) from this CSV");
    baseline_cmd->add_option("--classes", bl.classes, "Class subset: file or comma list");
    baseline_cmd->add_option("--seed", bl.seed, "PRNG seed")->envname("SOFTEVAL_SEED");
    baseline_cmd->add_option("--n-items", bl.n_items, "Number of generated items");
    baseline_cmd->add_option("--r", bl.r, "Shape of the symmetric Beta(r, r)");
    baseline_cmd->add_option("--value", bl.value, "Constant output value");
    baseline_cmd->add_option("-o,--output", bl.output, "Output path ('-' for stdout)");
    baseline_cmd->add_option("--meta", bl.meta, "Write sampling metadata JSON here");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Perturbation and Beta(r, r) curves");
    sweep_cmd->add_option("--mode", sw.mode, "epsilon or beta_r");
    sweep_cmd->add_option("--grid", sw.grid, "Comma list of grid values");
    sweep_cmd->add_option("--start", sw.start, "Grid start");
    sweep_cmd->add_option("--stop", sw.stop, "Grid stop (inclusive)");
    sweep_cmd->add_option("--step", sw.step, "Grid step");
    sweep_cmd->add_option("--ref", sw.ref, "Reference CSV for beta_r (default: synthetic)");
    sweep_cmd->add_option("--n-items", sw.n_items, "Synthetic reference items");
    sweep_cmd->add_option("--n-classes", sw.n_classes, "Synthetic reference classes");
    sweep_cmd->add_option("--seed", sw.seed, "PRNG seed")->envname("SOFTEVAL_SEED");
    sweep_cmd->add_flag("--no-constant", sw.no_constant, "Skip the constant output point");
    sweep_cmd->add_option("--constant", sw.constant_value, "Constant output value");
    sweep_cmd->add_option("-o,--output", sw.output, "Output path ('-' for stdout)");
    sweep_cmd->add_option("--meta", sw.meta, "Write sweep metadata JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    return guarded([&] {
        apply_kernel(kernel);
        if (*evaluate_cmd) {
            return run_evaluate(ev);
        }
        if (*thresholds_cmd) {
            return run_thresholds(th);
        }
        if (*baseline_cmd) {
            return run_baseline(bl);
        }
        return run_sweep(sw);
    });
}
