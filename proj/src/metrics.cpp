#include "abcc/metrics.hpp"

#include "abcc/errors.hpp"
#include "abcc/rng.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace abcc {

namespace {

std::size_t set_difference(AlternativeSet x, AlternativeSet y) { return (x - y).size() + (y - x).size(); }

std::size_t zelinka(AlternativeSet x, AlternativeSet y) { return std::max((x - y).size(), (y - x).size()); }

const char* builtin_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::SetDifference: return "set_difference";
        case MetricKind::Jaccard: return "jaccard";
        case MetricKind::Zelinka: return "zelinka";
        case MetricKind::BunkeShearer: return "bunke_shearer";
        case MetricKind::Trivial: return "trivial";
        case MetricKind::Complement: return "complement";
        case MetricKind::Table: return "table";
    }
    return "unknown";
}

}  // namespace

DistanceMetric DistanceMetric::builtin(MetricKind kind, std::size_t m) {
    if (kind == MetricKind::Table) throw Error(ErrorCode::BadParams, "table metrics need explicit values");
    if (kind == MetricKind::Complement && m != 3) throw Error(ErrorCode::BadParams, "the complement metric is defined for m=3 only");
    if (m == 0 || m > kMaxAlternatives) throw Error(ErrorCode::BadParams, "metric universe size must be in 1..64");
    return DistanceMetric(builtin_name(kind), m, kind);
}

DistanceMetric DistanceMetric::from_table(std::string name, std::size_t m, std::vector<Rational> table) {
    if (m == 0 || m >= 32) throw Error(ErrorCode::BadParams, "table metrics need 1 <= m < 32");
    const std::size_t n = std::size_t{1} << m;
    if (table.size() != n * n) throw Error(ErrorCode::BadParams, "table metric needs 4^m entries");
    DistanceMetric d(std::move(name), m, MetricKind::Table);
    d.table_ = std::make_shared<const std::vector<Rational>>(std::move(table));
    return d;
}

Rational DistanceMetric::operator()(AlternativeSet x, AlternativeSet y) const {
    switch (kind_) {
        case MetricKind::SetDifference: return Rational(set_difference(x, y));
        case MetricKind::Jaccard: {
            const std::size_t u = (x | y).size();
            return u == 0 ? Rational(0) : Rational(set_difference(x, y), u);
        }
        case MetricKind::Zelinka: return Rational(zelinka(x, y));
        case MetricKind::BunkeShearer: {
            const std::size_t big = std::max(x.size(), y.size());
            return big == 0 ? Rational(0) : Rational(zelinka(x, y), big);
        }
        case MetricKind::Trivial: return Rational(x == y ? 0 : 1);
        case MetricKind::Complement: {
            if (x == y) return Rational(0);
            return Rational((x & y).empty() && (x | y) == AlternativeSet::full(m_) ? 1 : 2);
        }
        case MetricKind::Table: return (*table_)[(x.bits() << m_) | y.bits()];
    }
    return Rational(0);
}

std::vector<Rational> DistanceMetric::materialize(const Limits& limits) const {
    require_exact_m(m_, limits);
    if (table_) return *table_;
    const std::size_t n = std::size_t{1} << m_;
    std::vector<Rational> out(n * n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) out[x * n + y] = (*this)(AlternativeSet(x), AlternativeSet(y));
    return out;
}

std::vector<std::string> builtin_similarity_metric_ids() {
    return {"set_difference", "jaccard", "zelinka", "bunke_shearer"};
}

namespace {

std::uint64_t parse_seed(std::string_view id, std::string_view arg) {
    if (arg.empty()) throw Error(ErrorCode::BadParams, "metric '" + std::string(id) + "' needs a seed");
    std::uint64_t seed = 0;
    for (char c : arg) {
        if (c < '0' || c > '9') throw Error(ErrorCode::BadParams, "bad seed in metric '" + std::string(id) + "'");
        seed = seed * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return seed;
}

}  // namespace

DistanceMetric make_metric(std::string_view id, std::size_t m) {
    static const std::map<std::string, MetricKind, std::less<>> builtins = {
        {"set_difference", MetricKind::SetDifference},
        {"jaccard", MetricKind::Jaccard},
        {"zelinka", MetricKind::Zelinka},
        {"bunke_shearer", MetricKind::BunkeShearer},
        {"trivial", MetricKind::Trivial},
        {"complement", MetricKind::Complement},
    };
    if (auto it = builtins.find(id); it != builtins.end()) return DistanceMetric::builtin(it->second, m);

    const auto colon = id.find(':');
    const std::string_view kind = id.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1);
    RandomMetricOptions options;
    if (kind == "random_table") {
        options.family = MetricFamily::Table;
    } else if (kind == "random_signature") {
        options.family = MetricFamily::Signature;
    } else if (kind == "random_natural") {
        options.family = MetricFamily::Signature;
        options.monotone_in_overlap = true;
    } else {
        throw Error(ErrorCode::BadParams, "unknown metric '" + std::string(id) + "'");
    }
    return random_metric(m, options, parse_seed(id, arg));
}

namespace {

/// Distances rescaled to a common denominator when every numerator fits in
/// int64 with room for a sum; the triangle check then runs on integers.
std::optional<std::vector<std::int64_t>> integer_image(const std::vector<Rational>& values) {
    BigInt lcm = 1;
    for (const auto& v : values) {
        const BigInt den = denominator_of(v);
        if (lcm % den != 0) lcm = boost::multiprecision::lcm(lcm, den);
        if (boost::multiprecision::msb(lcm) > 60) return std::nullopt;
    }
    std::vector<std::int64_t> out;
    out.reserve(values.size());
    const BigInt bound = BigInt(1) << 61;
    for (const auto& v : values) {
        const BigInt scaled = numerator_of(v) * (lcm / denominator_of(v));
        if (abs(scaled) >= bound) return std::nullopt;
        out.push_back(scaled.convert_to<std::int64_t>());
    }
    return out;
}

template <typename T>
AxiomCheck check_axioms_on(const std::vector<T>& t, std::size_t n) {
    auto at = [&](std::size_t x, std::size_t y) -> const T& { return t[x * n + y]; };
    auto set = [](std::size_t x) { return AlternativeSet(x); };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (at(x, y) < 0) return {false, "negativity", {set(x), set(y)}};
    for (std::size_t x = 0; x < n; ++x)
        if (at(x, x) != 0) return {false, "identity", {set(x), set(x)}};
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (x != y && at(x, y) == 0) return {false, "positivity", {set(x), set(y)}};
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            if (at(x, y) != at(y, x)) return {false, "symmetry", {set(x), set(y)}};
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z)
                if (at(x, z) > at(x, y) + at(y, z)) return {false, "triangle", {set(x), set(y), set(z)}};
    return {};
}

}  // namespace

AxiomCheck check_metric_axioms(const DistanceMetric& d, const Limits& limits) {
    const auto table = d.materialize(limits);
    const std::size_t n = std::size_t{1} << d.m();
    if (auto ints = integer_image(table)) return check_axioms_on(*ints, n);
    return check_axioms_on(table, n);
}

DistanceMetric make_custom_metric(std::string name, std::size_t m, std::vector<Rational> table, const Limits& limits) {
    auto d = DistanceMetric::from_table(std::move(name), m, std::move(table));
    const auto check = check_metric_axioms(d, limits);
    if (!check.ok) {
        const Universe universe(m);
        std::string sets;
        for (auto s : check.witness) sets += " {" + universe.format(s) + "}";
        throw Error(ErrorCode::InvalidMetric, "metric '" + d.name() + "' violates " + check.axiom + " at" + sets);
    }
    return d;
}

std::uint64_t LevelStructure::cumulative_size(std::size_t t) const {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i <= t && i < level_sets.size(); ++i) total += level_sets[i].size();
    return total;
}

LevelStructure level_structure(const DistanceMetric& d, const Committee& ground, const Limits& limits) {
    require_exact_m(d.m(), limits);
    if (!ground.set().within(d.m())) throw Error(ErrorCode::DomainMismatch, "ground committee outside the metric universe");
    const std::size_t n = std::size_t{1} << d.m();
    std::vector<Rational> dist(n);
    for (std::size_t s = 0; s < n; ++s) dist[s] = d(ground.set(), AlternativeSet(s));

    LevelStructure out{ground, dist, {}, std::vector<std::uint32_t>(n)};
    std::sort(out.values.begin(), out.values.end());
    out.values.erase(std::unique(out.values.begin(), out.values.end()), out.values.end());
    out.level_sets.resize(out.values.size());
    for (std::size_t s = 0; s < n; ++s) {
        const auto t = static_cast<std::uint32_t>(std::lower_bound(out.values.begin(), out.values.end(), dist[s]) - out.values.begin());
        out.level_of[s] = t;
        out.level_sets[t].emplace_back(s);
    }
    return out;
}

std::uint64_t neighborhood_count(const LevelStructure& levels, std::size_t a, std::size_t b, std::size_t t) {
    if (a == b) throw Error(ErrorCode::BadParams, "neighborhood_count needs distinct alternatives");
    if (t > levels.span()) throw Error(ErrorCode::BadParams, "radius index beyond the level span");
    std::uint64_t count = 0;
    for (std::size_t i = 0; i <= t; ++i) {
        for (AlternativeSet s : levels.level_sets[i]) {
            if (s.contains(a) && !s.contains(b)) ++count;
        }
    }
    return count;
}

std::uint64_t neighborhood_count(const DistanceMetric& d, const Committee& ground, std::size_t a, std::size_t b,
                                 std::size_t t, const Limits& limits) {
    return neighborhood_count(level_structure(d, ground, limits), a, b, t);
}

ConcentricityResult is_majority_concentric(const DistanceMetric& d, std::size_t k, const Limits& limits) {
    require_exact_m(d.m(), limits);
    const std::size_t m = d.m();
    for (const Committee& u : enumerate_committees(m, k, limits)) {
        const auto levels = level_structure(d, u, limits);
        const std::size_t levels_n = levels.values.size();
        for (std::size_t a : u.set().indices()) {
            for (std::size_t b = 0; b < m; ++b) {
                if (u.set().contains(b)) continue;
                std::vector<std::int64_t> ab(levels_n), ba(levels_n);
                for (std::size_t t = 0; t < levels_n; ++t) {
                    for (AlternativeSet s : levels.level_sets[t]) {
                        if (s.contains(a) && !s.contains(b)) ++ab[t];
                        if (s.contains(b) && !s.contains(a)) ++ba[t];
                    }
                }
                std::uint64_t cum_ab = 0, cum_ba = 0;
                for (std::size_t t = 0; t < levels_n; ++t) {
                    cum_ab += ab[t];
                    cum_ba += ba[t];
                    if (cum_ab < cum_ba) return {false, ConcentricityWitness{u, a, b, t, cum_ab, cum_ba}};
                }
            }
        }
    }
    return {};
}

namespace {

OverlapResult overlap_check(const DistanceMetric& d, std::size_t k, bool strict, const Limits& limits) {
    require_exact_m(d.m(), limits);
    const auto committees = enumerate_committees(d.m(), k, limits);
    const std::size_t n = std::size_t{1} << d.m();
    std::vector<std::vector<Rational>> dist(committees.size(), std::vector<Rational>(n));
    for (std::size_t c = 0; c < committees.size(); ++c)
        for (std::size_t s = 0; s < n; ++s) dist[c][s] = d(committees[c].set(), AlternativeSet(s));

    for (std::size_t iu = 0; iu < committees.size(); ++iu) {
        for (std::size_t iv = 0; iv < committees.size(); ++iv) {
            if (iu == iv) continue;
            for (std::size_t s = 0; s < n; ++s) {
                const AlternativeSet set(s);
                if (overlap(committees[iu].set(), set) <= overlap(committees[iv].set(), set)) continue;
                const Rational& du = dist[iu][s];
                const Rational& dv = dist[iv][s];
                if (strict ? !(du < dv) : du > dv) {
                    return {false, OverlapWitness{committees[iu], committees[iv], set, du, dv}};
                }
            }
        }
    }
    return {};
}

}  // namespace

OverlapResult is_natural(const DistanceMetric& d, std::size_t k, const Limits& limits) {
    return overlap_check(d, k, false, limits);
}

OverlapResult is_similarity(const DistanceMetric& d, std::size_t k, const Limits& limits) {
    return overlap_check(d, k, true, limits);
}

IndependenceResult is_alternative_independent(const DistanceMetric& d, const Limits& limits) {
    require_exact_m(d.m(), limits);
    const std::size_t n = std::size_t{1} << d.m();
    using Signature = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;
    std::map<Signature, std::pair<Rational, std::pair<AlternativeSet, AlternativeSet>>> seen;
    for (std::size_t xb = 0; xb < n; ++xb) {
        for (std::size_t yb = 0; yb < n; ++yb) {
            const AlternativeSet x(xb), y(yb);
            const Signature sig{(x - y).size(), (y - x).size(), x.size(), y.size()};
            Rational value = d(x, y);
            auto [it, inserted] = seen.try_emplace(sig, value, std::pair{x, y});
            if (!inserted && it->second.first != value) {
                return {false, std::pair{it->second.second, std::pair{x, y}}};
            }
        }
    }
    return {};
}

TaxonomyReport taxonomy(const DistanceMetric& d, std::size_t k, const Limits& limits) {
    TaxonomyReport r;
    r.metric = d.name();
    r.m = d.m();
    r.k = k;
    r.axioms = check_metric_axioms(d, limits);
    r.majority_concentric = is_majority_concentric(d, k, limits);
    r.natural = is_natural(d, k, limits);
    r.similarity = is_similarity(d, k, limits);
    r.alternative_independent = is_alternative_independent(d, limits);
    return r;
}

namespace {

std::vector<Rational> value_grid(const RandomMetricOptions& o, unsigned steps) {
    std::vector<Rational> grid;
    for (unsigned j = 0; j <= steps; ++j) grid.push_back(o.low + (o.high - o.low) * Rational(j, steps));
    return grid;
}

std::vector<Rational> random_table(std::size_t m, const RandomMetricOptions& o, Rng& rng) {
    const std::size_t n = std::size_t{1} << m;
    const auto grid = value_grid(o, o.steps);
    std::vector<Rational> table(n * n);
    std::optional<DistanceMetric> base;
    Rational base_max = 0;
    if (o.base) {
        base = DistanceMetric::builtin(*o.base, m);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) base_max = std::max(base_max, (*base)(AlternativeSet(x), AlternativeSet(y)));
    }
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            Rational v;
            if (base && rng.below(100) >= o.perturb_percent) {
                v = 1 + (*base)(AlternativeSet(x), AlternativeSet(y)) / base_max;
            } else {
                v = grid[rng.below(grid.size())];
            }
            table[x * n + y] = v;
            table[y * n + x] = v;
        }
    }
    return table;
}

std::vector<Rational> random_signature_table(std::size_t m, const RandomMetricOptions& o, Rng& rng) {
    // g is keyed by (smaller size, larger size, overlap); swapping the
    // arguments of d maps a signature to the same key, so d is symmetric.
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Rational> g;
    for (std::size_t a = 0; a <= m; ++a) {
        for (std::size_t b = a; b <= m; ++b) {
            const std::size_t o_min = a + b > m ? a + b - m : 0;
            std::vector<std::size_t> overlaps;
            for (std::size_t ov = o_min; ov <= a; ++ov) {
                if (!(a == b && ov == a)) overlaps.push_back(ov);
            }
            if (overlaps.empty()) continue;
            const unsigned steps = std::max<unsigned>(o.steps, static_cast<unsigned>(overlaps.size()));
            const auto grid = value_grid(o, steps);
            std::vector<Rational> values;
            if (o.monotone_in_overlap && o.strict) {
                std::vector<std::size_t> idx(grid.size());
                std::iota(idx.begin(), idx.end(), 0);
                rng.shuffle(idx.begin(), idx.end());
                for (std::size_t i = 0; i < overlaps.size(); ++i) values.push_back(grid[idx[i]]);
            } else {
                for (std::size_t i = 0; i < overlaps.size(); ++i) values.push_back(grid[rng.below(grid.size())]);
            }
            if (o.monotone_in_overlap) std::sort(values.begin(), values.end(), std::greater<>());
            for (std::size_t i = 0; i < overlaps.size(); ++i) g[{a, b, overlaps[i]}] = values[i];
        }
    }
    const std::size_t n = std::size_t{1} << m;
    std::vector<Rational> table(n * n);
    for (std::size_t xb = 0; xb < n; ++xb) {
        for (std::size_t yb = 0; yb < n; ++yb) {
            if (xb == yb) continue;
            const AlternativeSet x(xb), y(yb);
            const std::size_t a = std::min(x.size(), y.size());
            const std::size_t b = std::max(x.size(), y.size());
            table[xb * n + yb] = g.at({a, b, overlap(x, y)});
        }
    }
    return table;
}

}  // namespace

DistanceMetric random_metric(std::size_t m, const RandomMetricOptions& options, std::uint64_t seed, const Limits& limits) {
    require_exact_m(m, limits);
    if (options.steps == 0 || options.low <= 0 || options.high < options.low) {
        throw Error(ErrorCode::BadParams, "random metric needs 0 < low <= high and steps >= 1");
    }
    Rng rng(seed);
    const bool signature = options.family == MetricFamily::Signature;
    std::string name = signature ? (options.monotone_in_overlap ? "random_natural:" : "random_signature:") : "random_table:";
    name += std::to_string(seed);
    for (unsigned attempt = 0; attempt < std::max(1U, options.max_retries); ++attempt) {
        auto table = signature ? random_signature_table(m, options, rng) : random_table(m, options, rng);
        auto d = DistanceMetric::from_table(name, m, std::move(table));
        if (check_metric_axioms(d, limits).ok) return d;
    }
    throw Error(ErrorCode::GenerationFailed, "no valid metric after " + std::to_string(options.max_retries) + " attempts");
}

}  // namespace abcc
