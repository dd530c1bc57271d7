#include "abcc/errors.hpp"
#include "abcc/metrics.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <random>

using namespace abcc;
using testing::popcount;
using testing::S;

namespace {

Rational ref_set_difference(std::uint64_t x, std::uint64_t y) { return Rational(static_cast<long>(popcount(x ^ y))); }

Rational ref_zelinka(std::uint64_t x, std::uint64_t y) {
    return Rational(static_cast<long>(std::max(popcount(x & ~y), popcount(y & ~x))));
}

/// Exhaustive N^t_{a|b} straight from distances.
std::uint64_t ref_neighborhood(const DistanceMetric& d, const Committee& u, std::size_t a, std::size_t b, const Rational& radius) {
    std::uint64_t count = 0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << d.m()); ++s) {
        const AlternativeSet set(s);
        if (set.contains(a) && !set.contains(b) && d(u.set(), set) <= radius) ++count;
    }
    return count;
}

bool ref_majority_concentric(const DistanceMetric& d, std::size_t k) {
    for (const auto& u : testing::all_committees(d.m(), k)) {
        std::vector<Rational> radii;
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << d.m()); ++s) radii.push_back(d(u.set(), AlternativeSet(s)));
        for (std::size_t a : u.set().indices()) {
            for (std::size_t b = 0; b < d.m(); ++b) {
                if (u.set().contains(b)) continue;
                for (const auto& r : radii) {
                    if (ref_neighborhood(d, u, a, b, r) < ref_neighborhood(d, u, b, a, r)) return false;
                }
            }
        }
    }
    return true;
}

bool ref_overlap_property(const DistanceMetric& d, std::size_t k, bool strict) {
    const auto cs = testing::all_committees(d.m(), k);
    for (const auto& u : cs) {
        for (const auto& v : cs) {
            for (std::uint64_t s = 0; s < (std::uint64_t{1} << d.m()); ++s) {
                if (popcount(u.set().bits() & s) <= popcount(v.set().bits() & s)) continue;
                const auto du = d(u.set(), AlternativeSet(s));
                const auto dv = d(v.set(), AlternativeSet(s));
                if (strict ? !(du < dv) : !(du <= dv)) return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("builtin values") {
    const auto ab = S({0, 1}), ac = S({0, 2});
    CHECK(make_metric("set_difference", 3)(ab, ac) == 2);
    CHECK(make_metric("jaccard", 3)(ab, ac) == Rational(2, 3));
    CHECK(make_metric("bunke_shearer", 3)(ab, ac) == Rational(1, 2));
    CHECK(make_metric("zelinka", 3)(ab, ac) == 1);
    CHECK(make_metric("jaccard", 3)(AlternativeSet(), AlternativeSet()) == 0);
    CHECK(make_metric("bunke_shearer", 3)(AlternativeSet(), AlternativeSet()) == 0);
    const auto c = make_metric("complement", 3);
    CHECK(c(ab, S({2})) == 1);
    CHECK(c(ab, ac) == 2);
    CHECK(c(ab, ab) == 0);
    CHECK_THROWS_AS(make_metric("complement", 4), Error);
    CHECK_THROWS_AS(make_metric("unknown", 4), Error);
}

TEST_CASE("builtin closed forms and cross identities") {
    for (std::size_t m = 1; m <= 7; ++m) {
        const auto sd = make_metric("set_difference", m);
        const auto j = make_metric("jaccard", m);
        const auto z = make_metric("zelinka", m);
        const auto bs = make_metric("bunke_shearer", m);
        const auto tr = make_metric("trivial", m);
        const std::uint64_t n = std::uint64_t{1} << m;
        for (std::uint64_t x = 0; x < n; ++x) {
            for (std::uint64_t y = 0; y < n; ++y) {
                const AlternativeSet X(x), Y(y);
                REQUIRE(sd(X, Y) == ref_set_difference(x, y));
                REQUIRE(z(X, Y) == ref_zelinka(x, y));
                REQUIRE(j(X, Y) * Rational(static_cast<long>(popcount(x | y))) == sd(X, Y));
                REQUIRE(bs(X, Y) * Rational(static_cast<long>(std::max(popcount(x), popcount(y)))) == z(X, Y));
                REQUIRE(tr(X, Y) == (x == y ? 0 : 1));
            }
        }
    }
}

TEST_CASE("metric axioms") {
    CHECK(check_metric_axioms(make_metric("set_difference", 4)).ok);
    CHECK(check_metric_axioms(make_metric("jaccard", 5)).ok);
    CHECK(check_metric_axioms(make_metric("bunke_shearer", 5)).ok);
    CHECK(check_metric_axioms(make_metric("zelinka", 4)).ok);
    CHECK(check_metric_axioms(make_metric("complement", 3)).ok);

    auto table = make_metric("set_difference", 3).materialize();
    const std::size_t n = 8;
    table[1 * n + 2] = table[2 * n + 1] = 0;
    const auto identity = check_metric_axioms(DistanceMetric::from_table("bad", 3, table));
    CHECK(!identity.ok);
    CHECK(identity.axiom == "positivity");
    CHECK(identity.witness == std::vector<AlternativeSet>{AlternativeSet(1), AlternativeSet(2)});

    auto asym = make_metric("set_difference", 3).materialize();
    asym[1 * n + 2] = 5;
    CHECK(check_metric_axioms(DistanceMetric::from_table("asym", 3, asym)).axiom == "symmetry");

    auto tri = make_metric("trivial", 3).materialize();
    tri[0 * n + 7] = tri[7 * n + 0] = 3;
    const auto triangle = check_metric_axioms(DistanceMetric::from_table("tri", 3, tri));
    CHECK(triangle.axiom == "triangle");
    CHECK(triangle.witness.size() == 3);

    auto neg = make_metric("trivial", 3).materialize();
    neg[0] = -1;
    CHECK(!check_metric_axioms(DistanceMetric::from_table("neg", 3, neg)).ok);

    try {
        make_custom_metric("tri", 3, tri);
        FAIL("accepted a non-metric");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidMetric);
    }
    CHECK_THROWS_AS(DistanceMetric::from_table("short", 3, std::vector<Rational>(10)), Error);
}

TEST_CASE("level structures") {
    for (std::size_t m = 1; m <= 5; ++m) {
        const auto ls = level_structure(make_metric("trivial", m), Committee(S({0}), 1));
        CHECK(ls.span() == 1);
        CHECK(ls.level_size(0) == 1);
        CHECK(ls.level_size(1) == (std::uint64_t{1} << m) - 1);
    }

    const auto sd = level_structure(make_metric("set_difference", 4), Committee(S({0, 1}), 2));
    CHECK(sd.values == std::vector<Rational>{0, 1, 2, 3, 4});
    const std::vector<std::uint64_t> binom = {1, 4, 6, 4, 1};
    for (std::size_t t = 0; t <= 4; ++t) CHECK(sd.level_size(t) == binom[t]);
    CHECK(sd.cumulative_size(2) == 11);

    const auto cx = level_structure(make_metric("complement", 3), Committee(S({0, 1}), 2));
    CHECK(cx.values == std::vector<Rational>{0, 1, 2});
    CHECK(cx.level_sets[1] == std::vector<AlternativeSet>{S({2})});
    CHECK(cx.level(S({0, 1})) == 0);

    std::mt19937_64 gen(9);
    for (int i = 0; i < 30; ++i) {
        const std::size_t m = 2 + gen() % 4;
        const auto d = random_metric(m, {}, gen());
        const Committee u(AlternativeSet(gen() % (std::uint64_t{1} << m)));
        const auto l = level_structure(d, u);
        std::uint64_t total = 0;
        for (std::size_t t = 0; t <= l.span(); ++t) {
            total += l.level_size(t);
            for (auto s : l.level_sets[t]) CHECK(d(u.set(), s) == l.values[t]);
            if (t) CHECK(l.values[t - 1] < l.values[t]);
        }
        CHECK(total == (std::uint64_t{1} << m));
        CHECK(l.values[0] == 0);
        CHECK(l.level(u.set()) == 0);
    }
}

TEST_CASE("neighborhood counts") {
    const auto d = make_metric("jaccard", 4);
    const Committee u(S({0, 1}), 2);
    const auto l = level_structure(d, u);
    CHECK(neighborhood_count(l, 0, 2, 0) == 1);
    CHECK(neighborhood_count(l, 2, 0, 0) == 0);
    CHECK(neighborhood_count(l, 0, 1, 0) == 0);
    CHECK(neighborhood_count(l, 0, 2, l.span()) == 4);
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            if (a == b) continue;
            for (std::size_t t = 0; t <= l.span(); ++t) {
                CHECK(neighborhood_count(l, a, b, t) == ref_neighborhood(d, u, a, b, l.values[t]));
                if (t) CHECK(neighborhood_count(l, a, b, t - 1) <= neighborhood_count(l, a, b, t));
            }
        }
    }
}

TEST_CASE("taxonomy of builtins") {
    const auto complement = taxonomy(make_metric("complement", 3), 2);
    CHECK(complement.axioms.ok);
    CHECK(complement.majority_concentric.value);
    CHECK(!complement.natural.value);
    REQUIRE(complement.natural.witness);
    CHECK(complement.natural.witness->u.set() == S({0, 1}));
    CHECK(complement.natural.witness->v.set() == S({0, 2}));
    CHECK(complement.natural.witness->s == S({1}));
    CHECK(complement.natural.witness->d_us == 2);
    CHECK(complement.natural.witness->d_vs == 1);

    for (std::size_t m = 3; m <= 5; ++m) {
        for (std::size_t k = 1; k < m; ++k) {
            for (const auto& id : builtin_similarity_metric_ids()) {
                const auto d = make_metric(id, m);
                CHECK_MESSAGE(is_similarity(d, k).value, id << " m=" << m << " k=" << k);
                CHECK(is_majority_concentric(d, k).value);
                CHECK(is_alternative_independent(d).value);
            }
            const auto tr = make_metric("trivial", m);
            CHECK(is_natural(tr, k).value);
            CHECK(!is_similarity(tr, k).value);
            CHECK(is_alternative_independent(tr).value);
        }
    }
}

TEST_CASE("taxonomy checkers agree with brute force on random metrics") {
    std::mt19937_64 gen(21);
    for (int i = 0; i < 60; ++i) {
        const std::size_t m = 2 + gen() % 3;
        const std::size_t k = 1 + gen() % (m - 1);
        RandomMetricOptions o;
        o.family = i % 3 == 0 ? MetricFamily::Table : MetricFamily::Signature;
        o.monotone_in_overlap = i % 3 == 2;
        o.strict = i % 6 == 2;
        const auto d = random_metric(m, o, gen());
        const auto mc = is_majority_concentric(d, k);
        const auto nat = is_natural(d, k);
        const auto sim = is_similarity(d, k);
        CHECK(mc.value == ref_majority_concentric(d, k));
        CHECK(nat.value == ref_overlap_property(d, k, false));
        CHECK(sim.value == ref_overlap_property(d, k, true));
        if (sim.value) CHECK(nat.value);
        if (nat.value) CHECK(mc.value);
        if (o.family == MetricFamily::Signature) CHECK(is_alternative_independent(d).value);
        if (o.monotone_in_overlap) CHECK(nat.value);
        if (o.strict) CHECK(sim.value);
        if (!mc.value) {
            REQUIRE(mc.witness);
            const auto& w = *mc.witness;
            CHECK(w.count_ab < w.count_ba);
            CHECK(neighborhood_count(d, w.ground, w.a, w.b, w.t) == w.count_ab);
        }
    }
}

TEST_CASE("alternative independence witnesses") {
    auto table = make_metric("set_difference", 3).materialize();
    table[1 * 8 + 2] = table[2 * 8 + 1] = 3;
    const auto r = is_alternative_independent(DistanceMetric::from_table("dep", 3, table));
    CHECK(!r.value);
    REQUIRE(r.witness);
}

TEST_CASE("random metrics are valid and seed-deterministic") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (auto family : {MetricFamily::Table, MetricFamily::Signature}) {
            RandomMetricOptions o;
            o.family = family;
            const auto a = random_metric(3, o, seed);
            const auto b = random_metric(3, o, seed);
            CHECK(a.materialize() == b.materialize());
            CHECK(check_metric_axioms(a).ok);
        }
    }
    CHECK(random_metric(3, {}, 1).materialize() != random_metric(3, {}, 2).materialize());

    RandomMetricOptions based;
    based.base = MetricKind::SetDifference;
    based.perturb_percent = 0;
    const auto rescaled = random_metric(3, based, 4);
    CHECK(rescaled(S({0}), S({1})) == Rational(1) + Rational(2, 3));

    RandomMetricOptions impossible;
    impossible.low = 1;
    impossible.high = 10;
    impossible.steps = 1;
    impossible.max_retries = 3;
    CHECK_THROWS_AS(random_metric(4, impossible, 1), Error);

    CHECK(make_metric("random_table:7", 3).materialize() == make_metric("random_table:7", 3).materialize());
    CHECK(make_metric("random_natural:7", 3).name() == "random_natural:7");
}
