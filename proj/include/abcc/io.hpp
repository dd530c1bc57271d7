#pragma once

#include "abcc/core.hpp"
#include "abcc/experiments.hpp"
#include "abcc/metrics.hpp"
#include "abcc/noise.hpp"
#include "abcc/oracle.hpp"
#include "abcc/rules.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace abcc {

using Json = nlohmann::ordered_json;

struct ParsedProfile {
    Universe universe;
    Profile profile;
};

/// Profile text: an optional "alternatives: a,b,c" header, then one vote per
/// line as comma-separated labels. A blank line is an empty vote and lines
/// starting with '#' are skipped. Without a header the fallback universe is
/// used. Throws Error(Parse) with "line L, column C" in the message.
ParsedProfile parse_profile(std::string_view text, const std::optional<Universe>& fallback = std::nullopt);
std::string format_profile(const Universe& universe, const Profile& profile);

/// Reads a whole file; throws Error(Parse) when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// {"m", "k", "table": [{"x", "y", "score": "p/q"}]}
AbccRule parse_rule_json(const Json& j, std::string name = "custom");
Json rule_to_json(const AbccRule& rule);

struct ParsedMetric {
    Universe universe;
    DistanceMetric metric;
};

/// {"m", "alternatives"?, "entries": [{"x": [...], "y": [...], "d": "p/q"}]}.
/// Diagonal entries default to 0 and mirrored entries are inferred; any other
/// gap is an Error(Parse). The axioms are not checked here.
ParsedMetric parse_metric_json(const Json& j, std::string name = "custom");
/// Off-diagonal entries with x.bits() < y.bits().
Json metric_to_json(const DistanceMetric& d, const Universe& universe, const Limits& limits = {});

/// {"type": "mp", "p", "ground"} or {"type": "level", "metric", "ground", "probs"}.
/// "metric" is an identifier for make_metric or an embedded metric object.
NoiseModel parse_model_json(const Json& j, const Universe& universe, const Limits& limits = {});
Json model_to_json(const NoiseModel& model, const Universe& universe, const Limits& limits = {});

/// Serialization settings shared by the report writers. With `approx` set,
/// rationals become decimals instead of "p/q" strings.
struct JsonStyle {
    const Universe& universe;
    bool approx = false;

    Json rational(const Rational& r) const;
    Json set(AlternativeSet s) const;
    Json committee(const Committee& c) const { return set(c.set()); }
};

Json taxonomy_to_json(const TaxonomyReport& report, const JsonStyle& style);
Json axioms_to_json(const AxiomCheck& check, const JsonStyle& style);
Json verdict_to_json(const RobustnessVerdict& verdict, const JsonStyle& style, const Limits& limits = {});
Json package_to_json(const CounterexamplePackage& package, const JsonStyle& style, const Limits& limits = {});
Json curve_to_json(const ConvergenceCurve& curve);
Json hierarchy_to_json(const HierarchyReport& report);
Json sample_size_to_json(const SampleSizeBound& bound, const JsonStyle& style);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

struct RunManifest {
    std::string command_line;
    Json config = Json::object();
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> input_digests;
    std::vector<std::string> outputs;
    std::string started;
    std::string finished;
    double wall_seconds = 0.0;

    Json to_json() const;
};

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

/// Appends one JSON line to DIR/manifest.jsonl.
void append_manifest(const std::string& dir, const RunManifest& manifest);

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kGenerator = "mt19937_64+splitmix64";

}  // namespace abcc
