#include "abcc/errors.hpp"
#include "abcc/io.hpp"

#include "doctest.h"
#include "support.hpp"

#include <filesystem>
#include <random>

using namespace abcc;
using testing::S;

namespace {

std::string parse_message(std::string_view text) {
    try {
        parse_profile(text);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        return e.what();
    }
    FAIL("profile parsed");
    return {};
}

}  // namespace

TEST_CASE("profile text format") {
    const auto p = parse_profile("# comment\nalternatives: a,b,c\na,b\n\n c , a\n# another\nb\n");
    CHECK(p.universe.names() == std::vector<std::string>{"a", "b", "c"});
    CHECK(p.profile.votes == std::vector<AlternativeSet>{S({0, 1}), AlternativeSet(), S({0, 2}), S({1})});

    const auto fallback = parse_profile("a\nb,c\n", Universe(3));
    CHECK(fallback.profile.size() == 2);
    CHECK(parse_profile("alternatives: x,y\n").profile.size() == 0);
    CHECK(parse_profile("alternatives: x,y\r\nx\r\n").profile.votes == std::vector<AlternativeSet>{S({0})});

    CHECK(parse_message("alternatives: a,b\na,q\n").find("line 2, column 3") != std::string::npos);
    CHECK(parse_message("alternatives: a,b\nb,,a\n").find("line 2, column 3") != std::string::npos);
    CHECK(parse_message("alternatives: a,b\na,a\n").find("repeated") != std::string::npos);
    CHECK(parse_message("a,b\n").find("header") != std::string::npos);
    CHECK(parse_message("alternatives: a,a\n").find("line 1") != std::string::npos);
    CHECK(parse_message("alternatives: a,b\na\nalternatives: a,b\n").find("line 3") != std::string::npos);
}

TEST_CASE("profile round trip") {
    std::mt19937_64 gen(2);
    for (int i = 0; i < 50; ++i) {
        const std::size_t m = 1 + gen() % 8;
        const Universe u(m);
        const auto profile = testing::random_profile(gen, m, gen() % 20);
        const auto back = parse_profile(format_profile(u, profile));
        CHECK(back.universe == u);
        CHECK(back.profile == profile);
    }
    const Universe named(std::vector<std::string>{"x1", "x2", "x3"});
    const Profile p{{S({0, 2}), AlternativeSet()}};
    CHECK(parse_profile(format_profile(named, p)).profile == p);
}

TEST_CASE("rule json round trip") {
    for (const auto& id : catalog_rule_ids(4, 2)) {
        const auto rule = make_rule(id, 4, 2);
        const auto back = parse_rule_json(rule_to_json(rule));
        CHECK(back.table() == rule.table());
        CHECK(back.name() == rule.name());
    }
    const auto j = Json::parse(R"({"m":2,"k":1,"table":[{"x":0,"y":0,"score":0},{"x":0,"y":1,"score":"0"},
        {"x":1,"y":1,"score":"1/2"},{"x":1,"y":2,"score":"1/2"}]})");
    CHECK(parse_rule_json(j)(1, 1) == Rational(1, 2));
    auto broken = j;
    broken["table"][2]["score"] = "x/2";
    CHECK_THROWS_AS(parse_rule_json(broken), Error);
    auto missing = j;
    missing.erase("k");
    CHECK_THROWS_AS(parse_rule_json(missing), Error);
}

TEST_CASE("metric json") {
    for (const char* id : {"jaccard", "random_table:3", "complement"}) {
        const auto d = make_metric(id, 3);
        const auto back = parse_metric_json(metric_to_json(d, Universe(3)));
        CHECK(back.metric.materialize() == d.materialize());
    }

    // Mirror entries and the diagonal are inferred.
    Json small{{"m", 1}, {"entries", Json::array({{{"x", Json::array()}, {"y", {"a"}}, {"d", "3/2"}}})}};
    const auto parsed = parse_metric_json(small);
    CHECK(parsed.metric(S({0}), AlternativeSet()) == Rational(3, 2));
    CHECK(parsed.metric(S({0}), S({0})) == 0);

    Json named{{"m", 1}, {"alternatives", {"z"}}, {"entries", Json::array({{{"x", {"z"}}, {"y", Json::array()}, {"d", 1}}})}};
    CHECK(parse_metric_json(named).universe.name(0) == "z");

    Json incomplete{{"m", 2}, {"entries", Json::array({{{"x", Json::array()}, {"y", {"a"}}, {"d", 1}}})}};
    CHECK_THROWS_AS(parse_metric_json(incomplete), Error);

    Json conflict = small;
    conflict["entries"].push_back({{"x", Json::array()}, {"y", {"a"}}, {"d", 2}});
    CHECK_THROWS_AS(parse_metric_json(conflict), Error);
}

TEST_CASE("model json round trip") {
    const Universe u(4);
    const Committee ab(S({0, 1}), 2);
    const auto mp = make_mp(Rational(3, 4), 4, ab);
    const auto mp_back = parse_model_json(model_to_json(mp, u), u);
    CHECK(mp_back.table() == mp.table());

    const auto level = random_level_model(make_metric("jaccard", 4), ab, 3);
    CHECK(model_to_json(level, u)["metric"] == "jaccard");
    CHECK(parse_model_json(model_to_json(level, u), u).table() == level.table());

    const auto table = random_level_model(make_metric("random_table:9", 4), ab, 3);
    CHECK(model_to_json(table, u)["metric"].is_object());
    CHECK(parse_model_json(model_to_json(table, u), u).table() == table.table());

    const auto bad_p = Json::parse(R"({"type":"mp","p":"1/2","ground":["a","b"]})");
    try {
        parse_model_json(bad_p, u);
        FAIL("accepted p = 1/2");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadP);
    }
    CHECK_THROWS_AS(parse_model_json(Json::parse(R"({"type":"other","ground":[]})"), u), Error);
}

TEST_CASE("report json") {
    const Universe u(4);
    const JsonStyle exact{u, false};
    const JsonStyle approx{u, true};
    CHECK(exact.rational(Rational(3, 4)) == "3/4");
    CHECK(approx.rational(Rational(3, 4)) == 0.75);

    const auto verdict = robustness_verdict(make_cc(4, 2), make_metric("trivial", 4));
    const auto j = verdict_to_json(verdict, exact);
    CHECK(j["status"] == "DegenerateNotRobust");
    CHECK(j["witness"]["gap"] == "0");
    CHECK(j["per_pair_summary"].size() == 30);

    const auto tax = taxonomy_to_json(taxonomy(make_metric("complement", 3), 2), JsonStyle{Universe(3), false});
    CHECK(tax["majority_concentric"]["value"] == true);
    CHECK(tax["natural"]["value"] == false);
    CHECK(tax["natural"]["witness"]["S"] == Json::array({"b"}));
    CHECK(tax["similarity"]["value"] == false);

    const auto pkg = package_to_json(mc_uniqueness_counterexample(make_cc(4, 2)), exact);
    CHECK(parse_rational(pkg["expected_gap"].get<std::string>()) < 0);
}

TEST_CASE("manifests") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    const auto dir = std::filesystem::temp_directory_path() / "abcc_manifest_test";
    std::filesystem::remove_all(dir);
    RunManifest m;
    m.command_line = "abcc sample";
    m.seed = 7;
    m.outputs = {"x"};
    append_manifest(dir.string(), m);
    append_manifest(dir.string(), m);
    const auto text = read_file((dir / "manifest.jsonl").string());
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    const auto first = Json::parse(text.substr(0, text.find('\n')));
    CHECK(first["seed"] == 7);
    CHECK(first["config_hash"] == fnv1a_hex(Json::object().dump()));
    std::filesystem::remove_all(dir);
}
