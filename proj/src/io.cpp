#include "abcc/io.hpp"

#include "abcc/errors.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace abcc {

namespace {

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(std::size_t line, std::size_t column, const std::string& what) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

/// Splits on commas, reporting each label with its 1-based column.
std::vector<std::pair<std::string, std::size_t>> split_labels(std::string_view text, std::size_t offset, std::size_t line) {
    std::vector<std::pair<std::string, std::size_t>> out;
    if (trim(text).empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        const auto label = trim(piece);
        const std::size_t lead = piece.find_first_not_of(" \t\r");
        const std::size_t column = offset + start + (lead == std::string_view::npos ? 0 : lead) + 1;
        if (label.empty()) parse_error(line, column, "empty label");
        if (label.find_first_of(" \t") != std::string_view::npos) parse_error(line, column, "label contains whitespace");
        out.emplace_back(std::string(label), column);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

Rational json_rational(const Json& j, const char* field) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw Error(ErrorCode::Parse, std::string("field '") + field + "' must be a \"p/q\" string or an integer");
}

const Json& require(const Json& j, const char* field) {
    if (!j.is_object() || !j.contains(field)) throw Error(ErrorCode::Parse, std::string("missing field '") + field + "'");
    return j.at(field);
}

std::size_t require_size(const Json& j, const char* field) {
    const Json& v = require(j, field);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw Error(ErrorCode::Parse, std::string("field '") + field + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

AlternativeSet json_set(const Json& j, const Universe& universe) {
    if (!j.is_array()) throw Error(ErrorCode::Parse, "a set must be an array of labels");
    std::vector<std::string> labels;
    for (const auto& e : j) {
        if (!e.is_string()) throw Error(ErrorCode::Parse, "set members must be label strings");
        labels.push_back(e.get<std::string>());
    }
    return universe.set_of(labels);
}

Json labels_json(const Universe& universe, AlternativeSet s) {
    Json out = Json::array();
    for (const auto& l : universe.labels(s)) out.push_back(l);
    return out;
}

}  // namespace

ParsedProfile parse_profile(std::string_view text, const std::optional<Universe>& fallback) {
    std::optional<Universe> universe;
    Profile profile;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool seen_vote = false;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const auto body = trim(line);
        if (!body.empty() && body.front() == '#') continue;

        constexpr std::string_view header = "alternatives:";
        if (body.substr(0, header.size()) == header) {
            if (universe || seen_vote) parse_error(line_no, 1, "the alternatives header must come first and only once");
            const std::size_t offset = line.find(':') + 1;
            std::vector<std::string> names;
            for (auto& [label, column] : split_labels(line.substr(offset), offset, line_no)) {
                (void)column;
                names.push_back(std::move(label));
            }
            if (names.empty()) parse_error(line_no, offset + 1, "no alternatives declared");
            try {
                universe.emplace(std::move(names));
            } catch (const Error& e) {
                parse_error(line_no, offset + 1, e.what());
            }
            continue;
        }
        if (!universe) {
            if (!fallback) parse_error(line_no, 1, "missing 'alternatives:' header");
            universe = fallback;
        }
        seen_vote = true;
        AlternativeSet vote;
        for (const auto& [label, column] : split_labels(line, 0, line_no)) {
            const auto index = universe->index_of(label);
            if (!index) parse_error(line_no, column, "unknown alternative '" + label + "'");
            if (vote.contains(*index)) parse_error(line_no, column, "repeated alternative '" + label + "'");
            vote = vote.with(*index);
        }
        profile.votes.push_back(vote);
    }
    if (!universe) {
        if (!fallback) throw Error(ErrorCode::Parse, "line 1, column 1: missing 'alternatives:' header");
        universe = fallback;
    }
    return ParsedProfile{std::move(*universe), std::move(profile)};
}

std::string format_profile(const Universe& universe, const Profile& profile) {
    std::string out = "alternatives: ";
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if (i) out += ',';
        out += universe.name(i);
    }
    out += '\n';
    for (AlternativeSet vote : profile.votes) {
        out += universe.format(vote);
        out += '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << contents;
}

AbccRule parse_rule_json(const Json& j, std::string name) {
    const std::size_t m = require_size(j, "m");
    const std::size_t k = require_size(j, "k");
    const Json& table = require(j, "table");
    if (!table.is_array()) throw Error(ErrorCode::Parse, "'table' must be an array");
    AbccRule::Table entries;
    for (const auto& e : table) {
        const std::size_t x = require_size(e, "x");
        const std::size_t y = require_size(e, "y");
        if (!entries.emplace(std::make_pair(x, y), json_rational(require(e, "score"), "score")).second) {
            throw Error(ErrorCode::Parse, "duplicate entry for (" + std::to_string(x) + ", " + std::to_string(y) + ")");
        }
    }
    if (j.contains("name") && j.at("name").is_string()) name = j.at("name").get<std::string>();
    return AbccRule(std::move(name), m, k, entries);
}

Json rule_to_json(const AbccRule& rule) {
    Json table = Json::array();
    for (const auto& [xy, score] : rule.table()) {
        table.push_back({{"x", xy.first}, {"y", xy.second}, {"score", to_string(score)}});
    }
    return Json{{"name", rule.name()}, {"m", rule.m()}, {"k", rule.k()}, {"table", std::move(table)}};
}

ParsedMetric parse_metric_json(const Json& j, std::string name) {
    const std::size_t m = require_size(j, "m");
    if (m == 0 || m >= 32) throw Error(ErrorCode::Parse, "metric tables need 1 <= m < 32");
    Universe universe(m);
    if (j.contains("alternatives")) {
        std::vector<std::string> names;
        for (const auto& e : j.at("alternatives")) {
            if (!e.is_string()) throw Error(ErrorCode::Parse, "'alternatives' must list label strings");
            names.push_back(e.get<std::string>());
        }
        if (names.size() != m) throw Error(ErrorCode::Parse, "'alternatives' must list exactly m labels");
        universe = Universe(std::move(names));
    }
    const std::size_t n = std::size_t{1} << m;
    std::vector<std::optional<Rational>> cells(n * n);
    const Json& entries = require(j, "entries");
    if (!entries.is_array()) throw Error(ErrorCode::Parse, "'entries' must be an array");
    for (const auto& e : entries) {
        const auto x = json_set(require(e, "x"), universe).bits();
        const auto y = json_set(require(e, "y"), universe).bits();
        Rational d = json_rational(require(e, "d"), "d");
        auto& cell = cells[x * n + y];
        if (cell && *cell != d) {
            throw Error(ErrorCode::Parse, "conflicting entries for (" + universe.format(AlternativeSet(x)) + "), (" +
                                              universe.format(AlternativeSet(y)) + ")");
        }
        cell = std::move(d);
    }
    std::vector<Rational> table(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            const auto& direct = cells[x * n + y];
            const auto& mirror = cells[y * n + x];
            if (direct) {
                table[x * n + y] = *direct;
            } else if (mirror) {
                table[x * n + y] = *mirror;
            } else if (x != y) {
                throw Error(ErrorCode::Parse, "incomplete table: no distance between {" + universe.format(AlternativeSet(x)) +
                                                  "} and {" + universe.format(AlternativeSet(y)) + "}");
            }
        }
    }
    if (j.contains("name") && j.at("name").is_string()) name = j.at("name").get<std::string>();
    return ParsedMetric{std::move(universe), DistanceMetric::from_table(std::move(name), m, std::move(table))};
}

Json metric_to_json(const DistanceMetric& d, const Universe& universe, const Limits& limits) {
    const auto table = d.materialize(limits);
    const std::size_t n = std::size_t{1} << d.m();
    Json entries = Json::array();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            entries.push_back({{"x", labels_json(universe, AlternativeSet(x))},
                               {"y", labels_json(universe, AlternativeSet(y))},
                               {"d", to_string(table[x * n + y])}});
        }
    }
    return Json{{"name", d.name()}, {"m", d.m()}, {"alternatives", universe.names()}, {"entries", std::move(entries)}};
}

NoiseModel parse_model_json(const Json& j, const Universe& universe, const Limits& limits) {
    const Json& type = require(j, "type");
    if (!type.is_string()) throw Error(ErrorCode::Parse, "'type' must be a string");
    const AlternativeSet ground_set = json_set(require(j, "ground"), universe);
    const Committee ground(ground_set);
    if (type == "mp") return make_mp(json_rational(require(j, "p"), "p"), universe.size(), ground);
    if (type != "level") throw Error(ErrorCode::Parse, "unknown model type '" + type.get<std::string>() + "'");

    const Json& metric = require(j, "metric");
    std::optional<DistanceMetric> d;
    if (metric.is_string()) {
        d = make_metric(metric.get<std::string>(), universe.size());
    } else {
        auto parsed = parse_metric_json(metric);
        if (parsed.universe != universe) throw Error(ErrorCode::Parse, "embedded metric uses different alternatives");
        const auto check = check_metric_axioms(parsed.metric, limits);
        if (!check.ok) throw Error(ErrorCode::InvalidMetric, "embedded metric violates " + check.axiom);
        d = std::move(parsed.metric);
    }
    const Json& probs_json = require(j, "probs");
    if (!probs_json.is_array()) throw Error(ErrorCode::Parse, "'probs' must be an array");
    std::vector<Rational> probs;
    for (const auto& p : probs_json) probs.push_back(json_rational(p, "probs"));
    return make_level_model(*d, ground, std::move(probs), limits);
}

Json model_to_json(const NoiseModel& model, const Universe& universe, const Limits& limits) {
    const Json ground = labels_json(universe, model.ground().set());
    if (model.is_product()) return Json{{"type", "mp"}, {"p", to_string(model.p())}, {"ground", ground}};
    Json metric = model.metric().kind() == MetricKind::Table ? metric_to_json(model.metric(), universe, limits)
                                                            : Json(model.metric().name());
    Json probs = Json::array();
    for (const auto& p : model.level_probs()) probs.push_back(to_string(p));
    return Json{{"type", "level"}, {"metric", std::move(metric)}, {"ground", ground}, {"probs", std::move(probs)}};
}

Json JsonStyle::rational(const Rational& r) const {
    if (approx) return to_double(r);
    return to_string(r);
}

Json JsonStyle::set(AlternativeSet s) const { return labels_json(universe, s); }

Json axioms_to_json(const AxiomCheck& check, const JsonStyle& style) {
    Json witness = Json::array();
    for (AlternativeSet s : check.witness) witness.push_back(style.set(s));
    Json out{{"ok", check.ok}};
    if (!check.ok) {
        out["axiom"] = check.axiom;
        out["witness"] = std::move(witness);
    }
    return out;
}

namespace {

Json overlap_json(const OverlapResult& r, const JsonStyle& style) {
    Json out{{"value", r.value}};
    if (r.witness) {
        const auto& w = *r.witness;
        out["witness"] = Json{{"U", style.committee(w.u)}, {"V", style.committee(w.v)}, {"S", style.set(w.s)},
                              {"d_US", style.rational(w.d_us)}, {"d_VS", style.rational(w.d_vs)}};
    }
    return out;
}

}  // namespace

Json taxonomy_to_json(const TaxonomyReport& report, const JsonStyle& style) {
    Json concentric{{"value", report.majority_concentric.value}};
    if (const auto& w = report.majority_concentric.witness) {
        concentric["witness"] = Json{{"U", style.committee(w->ground)},
                                     {"a", style.universe.name(w->a)},
                                     {"b", style.universe.name(w->b)},
                                     {"t", w->t},
                                     {"count_ab", w->count_ab},
                                     {"count_ba", w->count_ba}};
    }
    Json independent{{"value", report.alternative_independent.value}};
    if (const auto& w = report.alternative_independent.witness) {
        independent["witness"] = Json::array({Json::array({style.set(w->first.first), style.set(w->first.second)}),
                                              Json::array({style.set(w->second.first), style.set(w->second.second)})});
    }
    return Json{{"metric", report.metric},
                {"m", report.m},
                {"k", report.k},
                {"axioms", axioms_to_json(report.axioms, style)},
                {"majority_concentric", std::move(concentric)},
                {"natural", overlap_json(report.natural, style)},
                {"similarity", overlap_json(report.similarity, style)},
                {"alternative_independent", std::move(independent)}};
}

Json verdict_to_json(const RobustnessVerdict& verdict, const JsonStyle& style, const Limits& limits) {
    Json out{{"status", status_name(verdict.status)}};
    if (verdict.witness) {
        const auto& w = *verdict.witness;
        Json witness{{"U", style.committee(w.ground)}, {"V", style.committee(w.rival)}, {"j", w.level}};
        witness["model"] = w.model ? model_to_json(*w.model, style.universe, limits) : Json(nullptr);
        witness["gap"] = style.rational(w.gap);
        out["witness"] = std::move(witness);
    } else {
        out["witness"] = nullptr;
    }
    Json pairs = Json::array();
    for (const auto& p : verdict.pairs) {
        pairs.push_back({{"U", style.committee(p.ground)},
                         {"V", style.committee(p.rival)},
                         {"min_prefix", style.rational(p.min_prefix)},
                         {"status", status_name(p.status)}});
    }
    out["per_pair_summary"] = std::move(pairs);
    return out;
}

Json package_to_json(const CounterexamplePackage& package, const JsonStyle& style, const Limits& limits) {
    return Json{{"U", style.committee(package.ground)},
                {"V", style.committee(package.rival)},
                {"W", style.set(package.witness_set)},
                {"x_star", package.x_star},
                {"y_star", package.y_star},
                {"delta", style.rational(package.delta)},
                {"expected_gap", style.rational(package.expected_gap)},
                {"model", model_to_json(package.model, style.universe, limits)}};
}

Json curve_to_json(const ConvergenceCurve& curve) {
    Json rows = Json::array();
    for (const auto& row : curve.rows) {
        const auto& r = row.rates;
        rows.push_back({{"n", row.n},
                        {"trials", r.trials},
                        {"recovered", r.recovered},
                        {"tied", r.tied},
                        {"wrong", r.wrong},
                        {"recovery_rate", r.recovery_rate()},
                        {"tie_rate", r.tie_rate()},
                        {"wrong_rate", r.wrong_rate()}});
    }
    return Json{{"rule", curve.rule},
                {"model", curve.model},
                {"seed", curve.seed},
                {"monotone_recovery", curve.monotone_recovery},
                {"rows", std::move(rows)}};
}

Json hierarchy_to_json(const HierarchyReport& report) {
    Json rules = Json::array();
    for (const auto& r : report.rules) {
        rules.push_back({{"rule", r.rule}, {"nontrivial", r.nontrivial}, {"top_jump", r.top_jump}, {"top_jump_vacuous", r.top_jump_vacuous}});
    }
    Json metrics = Json::array();
    for (const auto& t : report.metrics) {
        metrics.push_back({{"metric", t.metric},
                           {"metric_axioms", t.axioms.ok},
                           {"majority_concentric", t.majority_concentric.value},
                           {"natural", t.natural.value},
                           {"similarity", t.similarity.value},
                           {"alternative_independent", t.alternative_independent.value}});
    }
    Json matrix = Json::array();
    for (const auto& row : report.statuses) {
        Json cells = Json::array();
        for (auto s : row) cells.push_back(status_name(s));
        matrix.push_back(std::move(cells));
    }
    return Json{{"m", report.m}, {"k", report.k}, {"rules", std::move(rules)}, {"metrics", std::move(metrics)}, {"matrix", std::move(matrix)}};
}

Json sample_size_to_json(const SampleSizeBound& bound, const JsonStyle& style) {
    return Json{{"n", bound.n},
                {"min_gap", style.rational(bound.min_gap)},
                {"min_difference", style.rational(bound.min_difference)},
                {"max_difference", style.rational(bound.max_difference)}};
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
    return buffer;
}

Json RunManifest::to_json() const {
    Json digests = Json::object();
    for (const auto& [path, digest] : input_digests) digests[path] = digest;
    return Json{{"command_line", command_line},
                {"tool_version", kToolVersion},
                {"generator", kGenerator},
                {"seed", seed ? Json(*seed) : Json(nullptr)},
                {"config", config},
                {"config_hash", fnv1a_hex(config.dump())},
                {"input_digests", std::move(digests)},
                {"outputs", outputs},
                {"started", started},
                {"finished", finished},
                {"wall_seconds", wall_seconds}};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

void append_manifest(const std::string& dir, const RunManifest& manifest) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / "manifest.jsonl", std::ios::app);
    if (!out) throw std::runtime_error("cannot append to manifest in '" + dir + "'");
    out << manifest.to_json().dump() << '\n';
}

}  // namespace abcc
