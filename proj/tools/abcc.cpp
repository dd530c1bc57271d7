// Command-line front end for the abcc library.

#include "abcc/errors.hpp"
#include "abcc/experiments.hpp"
#include "abcc/io.hpp"
#include "abcc/metrics.hpp"
#include "abcc/noise.hpp"
#include "abcc/oracle.hpp"
#include "abcc/rng.hpp"
#include "abcc/rules.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace abcc;

namespace {

struct Shared {
    std::size_t m = 0;
    std::size_t k = 0;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out;
    bool approx = false;
};

struct Inputs {
    std::vector<std::string> rules{};
    std::vector<std::string> metrics{};
    std::string rule_file;
    std::string metric_file;
    std::string model_file;
    std::string profile;
    std::string committee;
    std::string model = "mp";
    std::string p;
    std::string ground;
    std::size_t n = 0;
    std::string grid = "10,30,100,300,1000";
    std::uint64_t trials = 200;
    std::uint64_t profiles = 100;
    std::size_t max_votes = 12;
};

/// Collects outputs and the manifest for one invocation.
class Run {
public:
    Run(const Shared& shared, std::string command_line) : shared_(shared) {
        manifest_.command_line = std::move(command_line);
        manifest_.seed = shared.seed;
        manifest_.started = utc_timestamp();
        start_ = std::chrono::steady_clock::now();
    }

    Json& config() { return manifest_.config; }

    std::string read_input(const std::string& path) {
        std::string text = read_file(path);
        manifest_.input_digests[path] = fnv1a_hex(text);
        return text;
    }

    /// Writes DIR/name when --out is set, otherwise prints to stdout.
    void emit(const std::string& name, const std::string& contents, bool echo = false) {
        if (shared_.out.empty()) {
            std::cout << contents;
            return;
        }
        const auto path = (std::filesystem::path(shared_.out) / name).string();
        write_file(path, contents);
        manifest_.outputs.push_back(path);
        if (echo) std::cout << contents;
    }

    void finish() {
        if (shared_.out.empty() || manifest_.outputs.empty()) return;
        manifest_.finished = utc_timestamp();
        manifest_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        append_manifest(shared_.out, manifest_);
    }

private:
    const Shared& shared_;
    RunManifest manifest_;
    std::chrono::steady_clock::time_point start_;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::uint64_t require_seed(const Shared& s) {
    if (!s.seed) throw Error(ErrorCode::BadParams, "this command needs an explicit --seed");
    return *s.seed;
}

void require_mk(const Shared& s) {
    if (s.m == 0 || s.k == 0) throw Error(ErrorCode::BadParams, "--m and --k are required");
}

AbccRule load_rule(Run& run, const Inputs& in, const std::string& id, std::size_t m, std::size_t k) {
    if (!in.rule_file.empty()) {
        AbccRule rule = parse_rule_json(Json::parse(run.read_input(in.rule_file)), std::filesystem::path(in.rule_file).stem().string());
        if (rule.m() != m || rule.k() != k) throw Error(ErrorCode::DomainMismatch, "rule file has different (m, k)");
        return rule;
    }
    return make_rule(id, m, k);
}

std::string single_rule_id(const Inputs& in) {
    if (in.rule_file.empty() && in.rules.size() != 1) throw Error(ErrorCode::BadParams, "give exactly one --rule or a --rule-file");
    return in.rules.empty() ? std::string() : in.rules.front();
}

struct LoadedMetric {
    Universe universe;
    DistanceMetric metric;
};

/// Builtin identifier or validated JSON file. Invalid files raise InvalidMetric.
LoadedMetric load_metric(Run& run, const Inputs& in, const std::string& id, std::size_t m, const Limits& limits) {
    if (!in.metric_file.empty()) {
        auto parsed = parse_metric_json(Json::parse(run.read_input(in.metric_file)), std::filesystem::path(in.metric_file).stem().string());
        const auto check = check_metric_axioms(parsed.metric, limits);
        if (!check.ok) throw Error(ErrorCode::InvalidMetric, "metric violates " + check.axiom);
        return {std::move(parsed.universe), std::move(parsed.metric)};
    }
    return {Universe(m), make_metric(id, m)};
}

std::vector<std::size_t> parse_grid(const std::string& text) {
    std::vector<std::size_t> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            grid.push_back(static_cast<std::size_t>(v));
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::Parse, "bad grid entry '" + item + "'");
        }
    }
    return grid;
}

NoiseModel build_model(Run& run, const Shared& s, const Inputs& in, const Universe& universe, std::uint64_t seed,
                       const Limits& limits) {
    if (!in.model_file.empty()) return parse_model_json(Json::parse(run.read_input(in.model_file)), universe, limits);
    if (in.ground.empty()) throw Error(ErrorCode::BadParams, "--ground is required");
    const Committee ground(universe.parse_set(in.ground), s.k ? s.k : universe.parse_set(in.ground).size());
    if (in.model == "mp") {
        if (in.p.empty()) throw Error(ErrorCode::BadParams, "--p is required for the mp model");
        return make_mp(parse_rational(in.p), universe.size(), ground);
    }
    if (in.model == "level") {
        if (in.metrics.size() != 1) throw Error(ErrorCode::BadParams, "the level model needs one --metric");
        return random_level_model(make_metric(in.metrics.front(), universe.size()), ground, mix64(seed), limits);
    }
    throw Error(ErrorCode::BadParams, "unknown model '" + in.model + "' (mp or level)");
}

// --- commands ---------------------------------------------------------------

int cmd_score(Run& run, const Shared& s, const Inputs& in) {
    const auto parsed = parse_profile(run.read_input(in.profile), s.m ? std::optional<Universe>(Universe(s.m)) : std::nullopt);
    const AlternativeSet set = parsed.universe.parse_set(in.committee);
    const std::size_t k = s.k ? s.k : set.size();
    const AbccRule rule = load_rule(run, in, single_rule_id(in), parsed.universe.size(), k);
    const auto breakdown = profile_score(rule, Committee(set, k), parsed.profile);
    const JsonStyle style{parsed.universe, s.approx};
    Json per_vote = Json::array();
    for (const auto& v : breakdown.per_vote) per_vote.push_back(style.rational(v));
    run.config() = {{"command", "score"}, {"rule", rule.name()}, {"committee", in.committee}, {"profile", in.profile}};
    run.emit("score.json", dump(Json{{"rule", rule.name()}, {"committee", style.committee(breakdown.committee)},
                                     {"score", style.rational(breakdown.total)}, {"per_vote", std::move(per_vote)}}),
             true);
    return 0;
}

int cmd_winners(Run& run, const Shared& s, const Inputs& in, const Limits& limits) {
    if (s.k == 0) throw Error(ErrorCode::BadParams, "--k is required");
    const auto parsed = parse_profile(run.read_input(in.profile), s.m ? std::optional<Universe>(Universe(s.m)) : std::nullopt);
    const AbccRule rule = load_rule(run, in, single_rule_id(in), parsed.universe.size(), s.k);
    const JsonStyle style{parsed.universe, s.approx};
    Json list = Json::array();
    for (const auto& c : winners(rule, parsed.profile, limits)) list.push_back(style.committee(c));
    run.config() = {{"command", "winners"}, {"rule", rule.name()}, {"k", s.k}, {"profile", in.profile}};
    run.emit("winners.json", Json{{"winners", std::move(list)}}.dump() + "\n", true);
    return 0;
}

int cmd_check_metric(Run& run, const Shared& s, const Inputs& in, const Limits& limits, bool full) {
    std::optional<Universe> universe;
    std::optional<DistanceMetric> d;
    if (!in.metric_file.empty()) {
        auto parsed = parse_metric_json(Json::parse(run.read_input(in.metric_file)), std::filesystem::path(in.metric_file).stem().string());
        universe = std::move(parsed.universe);
        d = std::move(parsed.metric);
    } else {
        if (in.metrics.size() != 1 || s.m == 0) throw Error(ErrorCode::BadParams, "give --metric and --m, or --metric-file");
        universe.emplace(s.m);
        d = make_metric(in.metrics.front(), s.m);
    }
    const JsonStyle style{*universe, s.approx};
    run.config() = {{"command", full ? "taxonomy" : "check-metric"}, {"metric", d->name()}, {"m", d->m()}, {"k", s.k}};
    const auto axioms = check_metric_axioms(*d, limits);
    Json report;
    if (!axioms.ok || !full) {
        report = Json{{"metric", d->name()}, {"m", d->m()}, {"axioms", axioms_to_json(axioms, style)}};
    } else {
        if (s.k == 0) throw Error(ErrorCode::BadParams, "--k is required for taxonomy");
        report = taxonomy_to_json(taxonomy(*d, s.k, limits), style);
    }
    run.emit(full ? "taxonomy.json" : "metric_check.json", dump(report), true);
    if (!axioms.ok) {
        std::cerr << "error: metric violates " << axioms.axiom << "\n";
        return 4;
    }
    return 0;
}

int cmd_robust(Run& run, const Shared& s, const Inputs& in, const Limits& limits) {
    const std::string metric_id = in.metrics.empty() ? std::string() : in.metrics.front();
    if (in.metric_file.empty() && in.metrics.size() != 1) throw Error(ErrorCode::BadParams, "give one --metric or a --metric-file");
    auto loaded = load_metric(run, in, metric_id, s.m, limits);
    const std::size_t m = loaded.metric.m();
    if (s.k == 0) throw Error(ErrorCode::BadParams, "--k is required");
    const AbccRule rule = load_rule(run, in, single_rule_id(in), m, s.k);
    const auto verdict = robustness_verdict(rule, loaded.metric, limits);
    const JsonStyle style{loaded.universe, s.approx};
    run.config() = {{"command", "robust"}, {"rule", rule.name()}, {"metric", loaded.metric.name()}, {"m", m}, {"k", s.k}};
    Json out = verdict_to_json(verdict, style, limits);
    out = Json{{"rule", rule.name()}, {"metric", loaded.metric.name()}, {"m", m}, {"k", s.k}, {"verdict", std::move(out)}};
    run.emit("verdict.json", dump(out), false);
    if (!s.out.empty()) {
        std::cout << "status: " << status_name(verdict.status) << "\n";
        if (verdict.status == RobustnessStatus::NotRobust && verdict.witness && verdict.witness->model) {
            run.emit("witness_model.json", dump(model_to_json(*verdict.witness->model, loaded.universe, limits)));
        }
    }
    return 0;
}

int cmd_counterexample(Run& run, const Shared& s, const Inputs& in, const Limits& limits) {
    require_mk(s);
    const AbccRule rule = load_rule(run, in, single_rule_id(in), s.m, s.k);
    run.config() = {{"command", "counterexample"}, {"rule", rule.name()}, {"m", s.m}, {"k", s.k}};
    const auto package = mc_uniqueness_counterexample(rule, limits);

    // Re-verify from scratch before anything is written.
    const Rational gap = expected_gap(rule, package.model, package.ground, package.rival, limits);
    if (gap != package.expected_gap || !(gap < 0) || !audit_d_monotonic(package.model, package.metric, limits).ok) {
        throw std::logic_error("counterexample failed re-verification");
    }
    const Universe universe(s.m);
    const JsonStyle style{universe, s.approx};
    Json out = package_to_json(package, style, limits);
    out["rule"] = rule.name();
    out["verified"] = true;
    run.emit("counterexample.json", dump(out), false);
    if (!s.out.empty()) std::cout << "expected_gap: " << to_string(gap) << "\n";
    return 0;
}

int cmd_hierarchy(Run& run, const Shared& s, const Inputs& in, const Limits& limits) {
    require_mk(s);
    std::vector<std::string> rule_ids = in.rules.empty() ? catalog_rule_ids(s.m, s.k) : in.rules;
    std::vector<std::string> metric_ids = in.metrics;
    if (metric_ids.empty()) {
        metric_ids = builtin_similarity_metric_ids();
        metric_ids.push_back("trivial");
    }
    std::vector<AbccRule> rules;
    for (const auto& id : rule_ids) rules.push_back(make_rule(id, s.m, s.k));
    std::vector<DistanceMetric> metrics;
    for (const auto& id : metric_ids) metrics.push_back(make_metric(id, s.m));
    run.config() = {{"command", "hierarchy"}, {"rules", rule_ids}, {"metrics", metric_ids}, {"m", s.m}, {"k", s.k}};
    const auto report = hierarchy_report(rules, metrics, s.m, s.k, limits);
    if (s.out.empty()) {
        std::cout << hierarchy_csv(report);
    } else {
        run.emit("hierarchy.csv", hierarchy_csv(report));
        run.emit("hierarchy.json", dump(hierarchy_to_json(report)));
    }
    return 0;
}

int cmd_sample(Run& run, const Shared& s, const Inputs& in, const Limits& limits) {
    const std::uint64_t seed = require_seed(s);
    if (s.m == 0) throw Error(ErrorCode::BadParams, "--m is required");
    const Universe universe(s.m);
    const NoiseModel model = build_model(run, s, in, universe, seed, limits);
    run.config() = {{"command", "sample"}, {"model", model_to_json(model, universe, limits)}, {"n", in.n}, {"m", s.m}};
    const Profile profile = sample_profile(model, in.n, derive_seed(seed, 0), limits);
    run.emit("profile.txt", format_profile(universe, profile));
    if (!s.out.empty()) run.emit("model.json", dump(model_to_json(model, universe, limits)));
    return 0;
}

int cmd_converge(Run& run, const Shared& s, const Inputs& in, const Limits& limits) {
    const std::uint64_t seed = require_seed(s);
    require_mk(s);
    const Universe universe(s.m);
    const AbccRule rule = load_rule(run, in, single_rule_id(in), s.m, s.k);
    TrialConfig config{rule, build_model(run, s, in, universe, seed, limits), parse_grid(in.grid), in.trials, seed, s.threads};
    run.config() = {{"command", "converge"},
                    {"rule", rule.name()},
                    {"model", model_to_json(config.model, universe, limits)},
                    {"grid", config.n_grid},
                    {"trials", config.trials},
                    {"m", s.m},
                    {"k", s.k}};
    const auto curve = convergence_curve(config, limits);
    Json json = curve_to_json(curve);
    const auto accuracy = accuracy_classify(rule, config.model, limits);
    json["oracle"] = accuracy.status == Accuracy::AccurateInLimit ? "AccurateInLimit" : "NotAccurate";
    if (s.out.empty()) {
        std::cout << curve_csv(curve);
    } else {
        run.emit("curve.csv", curve_csv(curve));
        run.emit("curve.json", dump(json));
    }
    return 0;
}

int cmd_mle_check(Run& run, const Shared& s, const Inputs& in, const Limits& limits) {
    const std::uint64_t seed = require_seed(s);
    require_mk(s);
    if (in.p.empty()) throw Error(ErrorCode::BadParams, "--p is required");
    const Rational p = parse_rational(in.p);
    if (!(p > Rational(1, 2) && p <= 1)) throw Error(ErrorCode::BadP, "p must lie in (1/2, 1], got " + to_string(p));
    if (in.max_votes == 0) throw Error(ErrorCode::BadParams, "--max-votes must be at least 1");
    run.config() = {{"command", "mle-check"}, {"p", to_string(p)}, {"m", s.m}, {"k", s.k}, {"profiles", in.profiles}, {"max_votes", in.max_votes}};

    std::uint64_t agree = 0;
    Json rows = Json::array();
    const Universe universe(s.m);
    for (std::uint64_t i = 0; i < in.profiles; ++i) {
        Rng rng(derive_seed(seed, i));
        Profile profile;
        const std::size_t n = 1 + rng.below(in.max_votes);
        for (std::size_t v = 0; v < n; ++v) profile.votes.push_back(AlternativeSet(rng.below(std::uint64_t{1} << s.m)));
        const auto result = mle_committees(profile, p, s.m, s.k, limits);
        const bool same = result.by_likelihood == result.by_av;
        agree += same ? 1 : 0;
        Json likely = Json::array();
        for (const auto& c : result.by_likelihood) likely.push_back(universe.format(c.set()));
        rows.push_back({{"profile", i}, {"n", n}, {"min_total_distance", result.min_total_distance}, {"mle", std::move(likely)}, {"equivalent", same}});
    }
    const std::string summary = "equivalent: " + std::to_string(agree) + "/" + std::to_string(in.profiles) + "\n";
    std::cout << summary;
    if (!s.out.empty()) run.emit("mle_check.json", dump(Json{{"equivalent", agree}, {"profiles", in.profiles}, {"rows", std::move(rows)}}));
    return agree == in.profiles ? 0 : 1;
}

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::Parse: return 2;
        case ErrorCode::CapExceeded: return 3;
        case ErrorCode::InvalidMetric: return 4;
        case ErrorCode::NoWitness: return 5;
        case ErrorCode::BadP: return 6;
        default: return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approval-based committee rules: scoring, noise models and exact robustness oracles"};
    app.require_subcommand(1);
    Shared shared;
    Inputs in;
    Limits limits;

    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--m", shared.m, "Number of alternatives");
        cmd->add_option("--k", shared.k, "Committee size");
        cmd->add_option("--seed", shared.seed, "Master seed");
        cmd->add_option("--threads", shared.threads, "Worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--out", shared.out, "Directory for output files and manifest.jsonl");
        cmd->add_flag("--approx", shared.approx, "Print decimals instead of exact fractions");
        cmd->add_option("--max-exact-m", limits.max_exact_m, "Cap on m for exhaustive paths");
        cmd->add_option("--max-committees", limits.max_committees, "Cap on C(m, k) for committee loops");
    };
    auto add_rule = [&](CLI::App* cmd, bool many) {
        auto* opt = cmd->add_option("--rule", in.rules, "Rule identifier");
        if (!many) opt->expected(1);
        cmd->add_option("--rule-file", in.rule_file, "Rule JSON file");
    };
    auto add_metric = [&](CLI::App* cmd, bool many) {
        auto* opt = cmd->add_option("--metric", in.metrics, "Metric identifier");
        if (!many) opt->expected(1);
        cmd->add_option("--metric-file", in.metric_file, "Metric JSON file");
    };
    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--model", in.model, "mp or level (random level probabilities over --metric)");
        cmd->add_option("--model-file", in.model_file, "Model JSON file");
        cmd->add_option("--p", in.p, "Product-model parameter as p/q");
        cmd->add_option("--ground", in.ground, "Ground-truth committee, comma separated");
        add_metric(cmd, false);
    };

    auto* score = app.add_subcommand("score", "Score one committee on a profile");
    add_shared(score);
    add_rule(score, false);
    score->add_option("--profile", in.profile, "Profile file")->required();
    score->add_option("--committee", in.committee, "Committee, comma separated")->required();

    auto* win = app.add_subcommand("winners", "Winning committees of a profile");
    add_shared(win);
    add_rule(win, false);
    win->add_option("--profile", in.profile, "Profile file")->required();

    auto* check = app.add_subcommand("check-metric", "Check the metric axioms");
    add_shared(check);
    add_metric(check, false);

    auto* tax = app.add_subcommand("taxonomy", "Metric axioms and structural properties");
    add_shared(tax);
    add_metric(tax, false);

    auto* robust = app.add_subcommand("robust", "Exact robustness verdict for a rule and a metric");
    add_shared(robust);
    add_rule(robust, false);
    add_metric(robust, false);

    auto* counter = app.add_subcommand("counterexample", "Metric and model under which a rule prefers a rival");
    add_shared(counter);
    add_rule(counter, false);

    auto* hier = app.add_subcommand("hierarchy", "Verdict matrix over rules and metrics");
    add_shared(hier);
    add_rule(hier, true);
    add_metric(hier, true);

    auto* sample = app.add_subcommand("sample", "Sample a profile from a noise model");
    add_shared(sample);
    add_model(sample);
    sample->add_option("--n", in.n, "Number of votes")->required();

    auto* converge = app.add_subcommand("converge", "Monte Carlo recovery rates over profile sizes");
    add_shared(converge);
    add_rule(converge, false);
    add_model(converge);
    converge->add_option("--grid", in.grid, "Comma-separated profile sizes");
    converge->add_option("--trials", in.trials, "Trials per profile size")->check(CLI::PositiveNumber);

    auto* mle = app.add_subcommand("mle-check", "Compare likelihood maximizers with AV winners on random profiles");
    add_shared(mle);
    mle->add_option("--p", in.p, "Product-model parameter as p/q");
    mle->add_option("--profiles", in.profiles, "Number of random profiles");
    mle->add_option("--max-votes", in.max_votes, "Largest profile size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command_line;
    for (int i = 0; i < argc; ++i) {
        if (i) command_line += ' ';
        command_line += argv[i];
    }
    Run run(shared, command_line);
    try {
        int status = 0;
        if (*score) status = cmd_score(run, shared, in);
        else if (*win) status = cmd_winners(run, shared, in, limits);
        else if (*check) status = cmd_check_metric(run, shared, in, limits, false);
        else if (*tax) status = cmd_check_metric(run, shared, in, limits, true);
        else if (*robust) status = cmd_robust(run, shared, in, limits);
        else if (*counter) status = cmd_counterexample(run, shared, in, limits);
        else if (*hier) status = cmd_hierarchy(run, shared, in, limits);
        else if (*sample) status = cmd_sample(run, shared, in, limits);
        else if (*converge) status = cmd_converge(run, shared, in, limits);
        else if (*mle) status = cmd_mle_check(run, shared, in, limits);
        run.finish();
        return status;
    } catch (const Error& e) {
        std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error (Parse): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
