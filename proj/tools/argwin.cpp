// argwin: batch pipeline for winning-argument analysis of reply trees.
// Subcommands: solve, simulate, recurrence, analyze, fit-powerlaw, recommend.
// Every run writes a manifest next to its outputs; statistics files are
// byte-identical for identical parameters (timestamps live in the manifest).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "argwin/analytics.hpp"
#include "argwin/estimators.hpp"
#include "argwin/generators.hpp"
#include "argwin/ingest.hpp"
#include "argwin/numeric.hpp"
#include "argwin/semantics.hpp"
#include "argwin/tree_json.hpp"
#include "argwin/version.hpp"
#include "json_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace argwin;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitEmpty = 3;

void emit_error(const std::string& code, const std::string& message) {
    std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
}

// Collects output files and writes the run manifest on completion.
class RunWriter {
public:
    RunWriter(std::string command, fs::path dir, json parameters, std::uint64_t seed)
        : command_(std::move(command)), dir_(std::move(dir)),
          parameters_(std::move(parameters)), seed_(seed),
          start_(std::chrono::steady_clock::now()) {
        fs::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::unreadable_path, "cannot write '" + (dir_ / name).string() + "'");
        out << content;
        if (!content.empty() && content.back() != '\n') out << '\n';
        outputs_.push_back(name);
    }

    void note(const std::string& key, json value) { extras_[key] = std::move(value); }

    void finish() {
        const auto elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start_)
                                 .count();
        json manifest{{"command", command_},
                      {"parameters", parameters_},
                      {"master_seed", seed_},
                      {"version", ARGWIN_VERSION},
                      {"outputs", outputs_},
                      {"duration_seconds", elapsed}};
        for (auto& [k, v] : extras_.items()) manifest[k] = v;
        std::ofstream out(dir_ / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << '\n';
    }

private:
    std::string command_;
    fs::path dir_;
    json parameters_;
    std::uint64_t seed_;
    std::vector<std::string> outputs_;
    json extras_ = json::object();
    std::chrono::steady_clock::time_point start_;
};

// Shared generator/model flag bundle for simulate and recurrence.
struct ModelFlags {
    std::string kind = "poisson";
    double lambda = 2.0;
    double alpha = 3.05;
    int k_min = 17;
    std::string histogram_path;

    DegreeModel build() const {
        if (kind == "poisson") return DegreeModel::poisson(lambda);
        if (kind == "powerlaw") return DegreeModel::power_law(alpha, k_min);
        if (kind == "empirical") {
            if (histogram_path.empty())
                throw Error(ErrorCode::invalid_parameter, "empirical model needs --hist");
            std::ifstream in(histogram_path);
            if (!in)
                throw Error(ErrorCode::unreadable_path, "cannot open '" + histogram_path + "'");
            json doc = json::parse(in, nullptr, false);
            if (doc.is_discarded() || !doc.is_object())
                throw Error(ErrorCode::parse_error,
                            "--hist must be a JSON object {\"k\": probability}");
            std::vector<std::pair<int, double>> hist;
            for (auto& [key, value] : doc.items())
                hist.emplace_back(std::stoi(key), value.get<double>());
            return DegreeModel::empirical(std::move(hist));
        }
        throw Error(ErrorCode::invalid_parameter, "unknown model '" + kind + "'");
    }
};

struct RuleFlags {
    std::string name = "grounded";
    double beta = 0.0;

    WinningRule build() const { return WinningRule::from_name(name, beta); }
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

// Reads (distance_from_max, p) pairs from our own stats or profile CSVs.
std::vector<std::pair<int, double>> read_keyed_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::unreadable_path, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::parse_error, "'" + path + "' is empty");
    const auto header = split_csv_line(line);
    int key_col = -1, p_col = -1, variant_col = -1;
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "distance_from_max") key_col = static_cast<int>(i);
        if (header[i] == "p_win" || header[i] == "p") p_col = static_cast<int>(i);
        if (header[i] == "variant") variant_col = static_cast<int>(i);
    }
    if (key_col < 0 || p_col < 0)
        throw Error(ErrorCode::parse_error,
                    "'" + path + "' lacks distance_from_max and p_win/p columns");
    std::vector<std::pair<int, double>> out;
    std::string first_variant;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (variant_col >= 0) {
            if (first_variant.empty()) first_variant = fields[static_cast<size_t>(variant_col)];
            if (fields[static_cast<size_t>(variant_col)] != first_variant) continue;
        }
        out.emplace_back(std::stoi(fields[static_cast<size_t>(key_col)]),
                         std::stod(fields[static_cast<size_t>(p_col)]));
    }
    return out;
}

json profile_json(const LevelProbabilityProfile& profile) {
    return json::parse(profile.to_json());
}

// --- subcommand bodies ------------------------------------------------

struct SolveArgs {
    std::string tree_path;
    RuleFlags rule;
    std::string out_dir;
};

int run_solve(const SolveArgs& args) {
    const ReplyTree tree = read_tree(args.tree_path);
    const WinningRule rule = args.rule.build();
    const StateAssignment states = propagate_states(tree, rule);

    RunWriter writer("solve", args.out_dir,
                     json{{"tree", args.tree_path},
                          {"rule", rule.name()},
                          {"beta", args.rule.beta}},
                     0);
    writer.write("states.json", states.to_json(tree));
    writer.write("winners.json", json(states.winners(tree)).dump(2));
    writer.finish();
    return 0;
}

struct SimulateArgs {
    std::string generator = "poisson";
    ModelFlags model;
    int depth = 8;
    int nodes = 50;
    double q = 0.5;
    long trees = 1000;
    std::uint64_t seed = 0;
    RuleFlags rule;
    int jobs = 1;
    int threshold = 10;
    bool signed_mean = false;
    std::string out_dir;
};

int run_simulate(const SimulateArgs& args) {
    EnsembleSpec spec;
    spec.q = args.q;
    spec.tree_count = args.trees;
    spec.master_seed = args.seed;
    if (args.generator == "pa") {
        spec.kind = GeneratorKind::preferential_attachment;
        spec.nodes = args.nodes;
    } else {
        spec.kind = GeneratorKind::homogeneous_depth;
        spec.depth = args.depth;
        ModelFlags model = args.model;
        model.kind = args.generator;
        spec.model = model.build();
    }
    const WinningRule rule = args.rule.build();
    const SimulationResult result =
        run_ensemble(spec, rule, args.threshold, args.jobs);

    RunWriter writer("simulate", args.out_dir,
                     json{{"gen", args.generator},
                          {"lambda", args.model.lambda},
                          {"alpha", args.model.alpha},
                          {"kmin", args.model.k_min},
                          {"depth", args.depth},
                          {"nodes", args.nodes},
                          {"q", args.q},
                          {"trees", args.trees},
                          {"seed", args.seed},
                          {"rule", rule.name()},
                          {"beta", args.rule.beta},
                          {"jobs", args.jobs},
                          {"threshold", args.threshold},
                          {"signed_mean", args.signed_mean}},
                     args.seed);
    writer.write("stats.csv", result.stats.to_csv(args.signed_mean));
    writer.write("stats.json", result.stats.to_json());
    writer.note("generation",
                json{{"short_trees", result.short_trees},
                     {"realized_support_fraction",
                      result.realized_edges > 0
                          ? static_cast<double>(result.realized_support_edges) /
                                static_cast<double>(result.realized_edges)
                          : 0.0}});
    writer.finish();
    return 0;
}

struct RecurrenceArgs {
    ModelFlags model;
    int depth = 8;
    double q = 0.5;
    std::string variant = "full";
    double p0 = -1.0;  // bounds: leaf probability; <0 means "from the model"
    std::string out_dir;
};

int run_recurrence(const RecurrenceArgs& args) {
    RunWriter writer("recurrence", args.out_dir,
                     json{{"model", args.model.kind},
                          {"lambda", args.model.lambda},
                          {"alpha", args.model.alpha},
                          {"kmin", args.model.k_min},
                          {"depth", args.depth},
                          {"q", args.q},
                          {"variant", args.variant},
                          {"p0", args.p0}},
                     0);
    if (args.variant == "full") {
        const auto profile = solve_recurrence(args.model.build(), args.depth, args.q);
        writer.write("profile.csv", profile.to_csv());
        writer.write("profile.json", profile.to_json());
    } else if (args.variant == "no-leaves") {
        const auto profile =
            solve_recurrence_no_leaves(args.model.build(), args.depth, args.q);
        writer.write("profile.csv", profile.to_csv());
        writer.write("profile.json", profile.to_json());
    } else if (args.variant == "bounds") {
        const double p0 =
            args.p0 >= 0.0 ? args.p0 : args.model.build().leaf_probability();
        const BoundProfiles bounds = bound_profiles(p0, args.depth, args.q);
        std::string csv = bounds.upper.to_csv();
        std::istringstream lower_csv(bounds.lower.to_csv());
        std::string line;
        std::getline(lower_csv, line);  // skip the duplicate header
        while (std::getline(lower_csv, line)) csv += line + '\n';
        writer.write("profile.csv", csv);
        writer.write("profile.json", json{{"upper", profile_json(bounds.upper)},
                                          {"lower", profile_json(bounds.lower)}}
                                         .dump(2));
        writer.write("cobweb.csv", bounds.trace.to_csv());
        writer.write("cobweb.json", bounds.trace.to_json());
    } else {
        throw Error(ErrorCode::invalid_parameter, "unknown variant '" + args.variant + "'");
    }
    writer.finish();
    return 0;
}

struct AnalyzeArgs {
    std::string corpus;
    RuleFlags rule;
    int min_size = 20;
    bool lenient = false;
    int threshold = 10;
    bool signed_mean = false;
    std::string out_dir;
};

int run_analyze(const AnalyzeArgs& args) {
    CleaningOptions cleaning;
    cleaning.min_size = args.min_size;
    cleaning.strict = !args.lenient;
    const LoadedCorpus corpus = load_corpus(args.corpus, cleaning);
    const WinningRule rule = args.rule.build();

    RunWriter writer("analyze", args.out_dir,
                     json{{"corpus", args.corpus},
                          {"rule", rule.name()},
                          {"beta", args.rule.beta},
                          {"min_size", args.min_size},
                          {"lenient", args.lenient},
                          {"threshold", args.threshold},
                          {"signed_mean", args.signed_mean}},
                     0);
    writer.write("cleaning_report.json", corpus.report.to_json());
    if (corpus.trees.empty()) {
        writer.finish();
        emit_error("empty_corpus", "no trees survived cleaning");
        return kExitEmpty;
    }

    const auto bins = bin_by_support(corpus.trees);
    json bins_json = json::object();
    for (const auto& [support_class, indices] : bins) {
        json names = json::array();
        for (size_t i : indices) names.push_back(corpus.names[i]);
        bins_json[to_string(support_class)] = std::move(names);
    }
    writer.write("bins.json", bins_json.dump(2));

    try {
        const auto degrees = pool_in_degrees(corpus.trees);
        writer.write("powerlaw_fit.json", fit_power_law(degrees).to_json());
    } catch (const Error& e) {
        writer.write("powerlaw_fit.json",
                     json{{"error", error_code_name(e.code())}, {"message", e.what()}}.dump(2));
    }

    for (const auto& [support_class, indices] : bins) {
        std::vector<ReplyTree> class_trees;
        std::vector<double> class_q;
        long class_edges = 0;
        for (size_t i : indices) {
            class_trees.push_back(corpus.trees[i]);
            class_q.push_back(estimate_q(corpus.trees[i]));
            class_edges += corpus.trees[i].edge_count();
        }
        std::vector<TreeLevelObservables> per_tree;
        const EnsembleStats stats =
            aggregate_trees(class_trees, rule, args.threshold,
                            std::string("corpus class ") + to_string(support_class),
                            &per_tree);
        const std::string class_name = to_string(support_class);
        writer.write("stats_" + class_name + ".csv", stats.to_csv(args.signed_mean));
        writer.write("stats_" + class_name + ".json", stats.to_json());

        if (stats.levels.empty()) continue;
        double q_mean = 0.0;
        for (double q : class_q) q_mean += q;
        q_mean /= static_cast<double>(class_q.size());
        const StructureHint hint = support_class == SupportClass::low ||
                                           (support_class == SupportClass::unclassified &&
                                            q_mean <= 0.4)
                                       ? StructureHint::homogeneous
                                       : StructureHint::scale_free;
        std::vector<std::pair<int, double>> profile;
        for (const auto& level : stats.levels)
            profile.emplace_back(level.distance_from_max, level.p_win);
        const RegimeReport report = recommend_sampling(
            profile, q_mean, hint, regime_epsilon_for_estimate(q_mean, class_edges));
        writer.write("recommendation_" + class_name + ".json", report.to_json());
    }
    writer.finish();
    return 0;
}

struct FitArgs {
    std::string corpus;
    std::string degrees_path;
    int min_size = 20;
    bool lenient = false;
    std::string out_dir;
};

int run_fit(const FitArgs& args) {
    std::vector<int> degrees;
    if (!args.corpus.empty()) {
        CleaningOptions cleaning;
        cleaning.min_size = args.min_size;
        cleaning.strict = !args.lenient;
        const LoadedCorpus corpus = load_corpus(args.corpus, cleaning);
        degrees = pool_in_degrees(corpus.trees);
    } else if (!args.degrees_path.empty()) {
        std::ifstream in(args.degrees_path);
        if (!in)
            throw Error(ErrorCode::unreadable_path, "cannot open '" + args.degrees_path + "'");
        int value = 0;
        while (in >> value) degrees.push_back(value);
    } else {
        throw Error(ErrorCode::invalid_parameter, "fit-powerlaw needs --corpus or --degrees");
    }
    const PowerLawFit fit = fit_power_law(degrees);

    RunWriter writer("fit-powerlaw", args.out_dir,
                     json{{"corpus", args.corpus},
                          {"degrees", args.degrees_path},
                          {"min_size", args.min_size},
                          {"lenient", args.lenient}},
                     0);
    writer.write("powerlaw_fit.json", fit.to_json());
    writer.finish();
    return 0;
}

struct RecommendArgs {
    std::string stats_path;
    std::string profile_path;
    double q = 0.5;
    std::string structure = "scale-free";
    double epsilon = 1e-9;
    long edges = 0;
    std::string out_dir;
};

int run_recommend(const RecommendArgs& args) {
    if (args.stats_path.empty() == args.profile_path.empty())
        throw Error(ErrorCode::invalid_parameter,
                    "recommend needs exactly one of --stats or --profile");
    const auto profile =
        read_keyed_profile(args.stats_path.empty() ? args.profile_path : args.stats_path);
    const StructureHint hint = args.structure == "homogeneous"
                                   ? StructureHint::homogeneous
                                   : StructureHint::scale_free;
    const double epsilon =
        args.edges > 0 ? regime_epsilon_for_estimate(args.q, args.edges) : args.epsilon;
    const RegimeReport report = recommend_sampling(profile, args.q, hint, epsilon);

    RunWriter writer("recommend", args.out_dir,
                     json{{"stats", args.stats_path},
                          {"profile", args.profile_path},
                          {"q", args.q},
                          {"structure", args.structure},
                          {"epsilon", args.epsilon},
                          {"edges", args.edges}},
                     0);
    writer.write("recommendation.json", report.to_json());
    writer.finish();
    return 0;
}

void add_model_flags(CLI::App* cmd, ModelFlags& model, bool with_kind) {
    if (with_kind)
        cmd->add_option("--model", model.kind, "in-degree model")
            ->check(CLI::IsMember({"poisson", "powerlaw", "empirical"}));
    cmd->add_option("--lambda", model.lambda, "Poisson rate");
    cmd->add_option("--alpha", model.alpha, "power-law exponent");
    cmd->add_option("--kmin", model.k_min, "power-law lower cutoff");
    cmd->add_option("--hist", model.histogram_path, "empirical histogram JSON file");
}

void add_rule_flags(CLI::App* cmd, RuleFlags& rule) {
    cmd->add_option("--rule", rule.name, "winning rule")
        ->check(CLI::IsMember({"grounded", "leaves-exception", "majority", "gen-majority"}));
    cmd->add_option("--beta", rule.beta, "gen-majority weight exponent");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"winning-argument analysis for reply-tree discussions"};
    app.config_formatter(std::make_shared<argwin::cli::JsonConfig>());
    app.set_config("--config", "", "JSON config file mirroring the flags");
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "evaluate winners of one tree");
    solve_cmd->add_option("--tree", solve_args.tree_path, "tree JSON file")->required();
    add_rule_flags(solve_cmd, solve_args.rule);
    solve_cmd->add_option("--out", solve_args.out_dir, "output directory")->required();

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "ensemble simulation statistics");
    sim_cmd->add_option("--gen", sim_args.generator, "generator")
        ->check(CLI::IsMember({"poisson", "powerlaw", "empirical", "pa"}))
        ->required();
    add_model_flags(sim_cmd, sim_args.model, false);
    sim_cmd->add_option("--depth", sim_args.depth, "homogeneous tree depth");
    sim_cmd->add_option("--nodes", sim_args.nodes, "preferential-attachment tree size");
    sim_cmd->add_option("--q", sim_args.q, "support probability")->required();
    sim_cmd->add_option("--trees", sim_args.trees, "ensemble size");
    sim_cmd->add_option("--seed", sim_args.seed, "master seed")->envname("ARGWIN_SEED");
    add_rule_flags(sim_cmd, sim_args.rule);
    sim_cmd->add_option("--jobs", sim_args.jobs, "worker threads");
    sim_cmd->add_option("--threshold", sim_args.threshold, "min trees per reported level");
    sim_cmd->add_flag("--signed-mean", sim_args.signed_mean, "append the signed-mean diagnostic column");
    sim_cmd->add_option("--out", sim_args.out_dir, "output directory")->required();

    RecurrenceArgs rec_args;
    auto* rec_cmd = app.add_subcommand("recurrence", "analytic level profiles");
    add_model_flags(rec_cmd, rec_args.model, true);
    rec_cmd->add_option("--depth", rec_args.depth, "depth N");
    rec_cmd->add_option("--q", rec_args.q, "support probability")->required();
    rec_cmd->add_option("--variant", rec_args.variant, "profile variant")
        ->check(CLI::IsMember({"full", "no-leaves", "bounds"}));
    rec_cmd->add_option("--p0", rec_args.p0, "leaf probability for bounds");
    rec_cmd->add_option("--out", rec_args.out_dir, "output directory")->required();

    AnalyzeArgs an_args;
    auto* an_cmd = app.add_subcommand("analyze", "corpus pipeline");
    an_cmd->add_option("--corpus", an_args.corpus, "corpus directory")->required();
    add_rule_flags(an_cmd, an_args.rule);
    an_cmd->add_option("--min-size", an_args.min_size, "minimum tree size");
    an_cmd->add_flag("--lenient", an_args.lenient, "prune flagged subtrees instead of dropping trees");
    an_cmd->add_option("--threshold", an_args.threshold, "min trees per reported level");
    an_cmd->add_flag("--signed-mean", an_args.signed_mean, "append the signed-mean diagnostic column");
    an_cmd->add_option("--out", an_args.out_dir, "output directory")->required();

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit-powerlaw", "discrete power-law fit");
    fit_cmd->add_option("--corpus", fit_args.corpus, "corpus directory");
    fit_cmd->add_option("--degrees", fit_args.degrees_path, "file of in-degrees, one per line");
    fit_cmd->add_option("--min-size", fit_args.min_size, "minimum tree size");
    fit_cmd->add_flag("--lenient", fit_args.lenient, "lenient cleaning");
    fit_cmd->add_option("--out", fit_args.out_dir, "output directory")->required();

    RecommendArgs recommend_args;
    auto* recommend_cmd = app.add_subcommand("recommend", "level reading order");
    recommend_cmd->add_option("--stats", recommend_args.stats_path, "ensemble stats CSV");
    recommend_cmd->add_option("--profile", recommend_args.profile_path, "analytic profile CSV");
    recommend_cmd->add_option("--q", recommend_args.q, "support fraction")->required();
    recommend_cmd->add_option("--structure", recommend_args.structure, "structure hint")
        ->check(CLI::IsMember({"homogeneous", "scale-free"}));
    recommend_cmd->add_option("--epsilon", recommend_args.epsilon, "regime tolerance");
    recommend_cmd->add_option("--edges", recommend_args.edges,
                              "edge count; derives the tolerance for estimated q");
    recommend_cmd->add_option("--out", recommend_args.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        emit_error("usage", e.what());
        return kExitValidation;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(solve_args);
        if (sim_cmd->parsed()) return run_simulate(sim_args);
        if (rec_cmd->parsed()) return run_recurrence(rec_args);
        if (an_cmd->parsed()) return run_analyze(an_args);
        if (fit_cmd->parsed()) return run_fit(fit_args);
        if (recommend_cmd->parsed()) return run_recommend(recommend_args);
    } catch (const Error& e) {
        emit_error(error_code_name(e.code()), e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return kExitValidation;
    }
    return 0;
}
