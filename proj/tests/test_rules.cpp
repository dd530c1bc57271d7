#include "abcc/errors.hpp"
#include "abcc/rules.hpp"

#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <random>

using namespace abcc;
using testing::S;

TEST_CASE("catalog values") {
    CHECK(make_av(4, 3)(2, 3) == 2);
    CHECK(make_pav(4, 3)(3, 3) == Rational(11, 6));
    const auto mc = make_mc(4, 2);
    CHECK(mc(1, 2) == 0);
    CHECK(mc(2, 2) == 1);
    const auto sav = make_sav(5, 2);
    CHECK(sav(1, 4) == Rational(1, 4));
    CHECK(sav(0, 0) == 0);
    CHECK(make_sainte_lague(5, 3)(3, 3) == Rational(1) + Rational(1, 3) + Rational(1, 5));
    CHECK(make_p_geometric(5, 3, Rational(1, 2))(2, 3) == Rational(3, 4));
    CHECK(make_rule("thiele:1,1/3", 4, 2)(2, 3) == Rational(4, 3));
    CHECK(make_rule("p_geometric:2/3", 4, 2)(2, 2) == Rational(2, 3) + Rational(4, 9));
}

TEST_CASE("catalog tables match the closed forms on the whole domain") {
    for (std::size_t m = 1; m <= 6; ++m) {
        for (std::size_t k = 1; k <= m; ++k) {
            for (const auto& id : catalog_rule_ids(m, k)) {
                const auto rule = make_rule(id, m, k);
                for (const auto& [x, y] : rule.domain().pairs()) {
                    CHECK_MESSAGE(rule(x, y) == testing::reference_score(id, x, y, k), id << " at (" << x << "," << y << ")");
                }
            }
        }
    }
}

TEST_CASE("special m=4, k=2 rules") {
    const auto f = make_pairs_only_av();
    const auto g = make_pairs_doubled_av();
    CHECK(vote_score(f, Committee(S({0, 1}), 2), S({0, 1, 2})) == 0);
    CHECK(f(2, 2) == 2);
    CHECK(g(2, 2) == 4);
    CHECK(g(2, 3) == 2);
    CHECK_THROWS_AS(make_rule("pairs_only_av", 5, 2), Error);
    const auto ids = catalog_rule_ids(4, 2);
    CHECK(std::find(ids.begin(), ids.end(), "pairs_only_av") != ids.end());
    const auto ids52 = catalog_rule_ids(5, 2);
    CHECK(std::find(ids52.begin(), ids52.end(), "pairs_only_av") == ids52.end());
}

TEST_CASE("rule validation") {
    AbccRule::Table t;
    const auto d32 = feasible_pairs(3, 2);
    for (const auto& [x, y] : d32.pairs()) t[{x, y}] = Rational(static_cast<long>(x));
    CHECK_NOTHROW(AbccRule("ok", 3, 2, t));

    auto missing = t;
    missing.erase({1, 2});
    CHECK_THROWS_AS(AbccRule("missing", 3, 2, missing), Error);

    auto decreasing = t;
    decreasing[{2, 2}] = 0;
    try {
        AbccRule("decreasing", 3, 2, decreasing);
        FAIL("accepted a decreasing table");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadParams);
    }

    auto negative = t;
    negative[{0, 0}] = -1;
    CHECK_THROWS_AS(AbccRule("negative", 3, 2, negative), Error);

    auto extra = t;
    extra[{0, 3}] = 0;
    CHECK_THROWS_AS(AbccRule("extra", 3, 2, extra), Error);

    CHECK_THROWS_AS(make_rule("thiele:1,-1", 4, 2), Error);
    CHECK_THROWS_AS(make_rule("thiele:1", 4, 2), Error);
    CHECK_THROWS_AS(make_rule("nope", 4, 2), Error);
    CHECK_THROWS_AS(make_av(4, 2)(0, 4), Error);
}

TEST_CASE("scores") {
    const Committee abc(S({0, 1, 2}), 3);
    CHECK(vote_score(make_av(4, 3), abc, S({0, 1, 3})) == 2);
    CHECK(vote_score(make_cc(3, 2), Committee(S({0, 1}), 2), S({0, 1, 2})) == 1);

    const Committee ab(S({0, 1}), 2);
    const Profile p1{{S({0}), S({1}), S({0, 1})}};
    const auto av = profile_score(make_av(3, 2), ab, p1);
    CHECK(av.total == 4);
    CHECK(av.per_vote == std::vector<Rational>{1, 1, 2});

    const Profile p2{{S({0, 1}), S({0, 1}), S({0})}};
    CHECK(profile_score(make_mc(3, 2), ab, p2).total == 2);
    CHECK(profile_score(make_pav(3, 2), ab, Profile{}).total == 0);

    CHECK_THROWS_AS(vote_score(make_av(3, 2), abc, S({0})), Error);
    CHECK_THROWS_AS(vote_score(make_av(3, 2), ab, S({3})), Error);
}

TEST_CASE("score identity and AV decomposition on random profiles") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 2 + gen() % 5;
        const std::size_t k = 1 + gen() % (m - 1);
        const auto profile = testing::random_profile(gen, m, gen() % 15);
        const auto committees = testing::all_committees(m, k);
        const Committee u = committees[gen() % committees.size()];
        const auto rule = testing::random_rule(gen, m, k);

        const auto breakdown = profile_score(rule, u, profile);
        Rational sum = 0;
        for (std::size_t i = 0; i < profile.size(); ++i) {
            CHECK(breakdown.per_vote[i] == vote_score(rule, u, profile.votes[i]));
            sum += breakdown.per_vote[i];
        }
        CHECK(breakdown.total == sum);

        std::size_t appearances = 0;
        for (auto a : u.set().indices()) {
            for (auto vote : profile.votes) appearances += vote.contains(a) ? 1 : 0;
        }
        CHECK(profile_score(make_av(m, k), u, profile).total == Rational(static_cast<long>(appearances)));
    }
}

TEST_CASE("winners") {
    const Profile five{std::vector<AlternativeSet>(5, S({0, 1}))};
    const auto w = winners(make_av(3, 2), five);
    REQUIRE(w.size() == 1);
    CHECK(w[0].set() == S({0, 1}));

    CHECK(winners(make_pav(5, 2), Profile{}).size() == 10);

    const auto cc = winners(make_cc(2, 1), Profile{{S({0}), S({1})}});
    REQUIRE(cc.size() == 2);
    CHECK(cc[0].set() == S({0}));
    CHECK(cc[1].set() == S({1}));

    Limits tight;
    tight.max_committees = 5;
    CHECK_THROWS_AS(winners(make_av(5, 2), Profile{}, tight), Error);
}

TEST_CASE("winners agree with brute force on random rules and profiles") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t m = 2 + gen() % 5;
        const std::size_t k = 1 + gen() % m;
        const auto profile = testing::random_profile(gen, m, gen() % 20);
        const auto rule = trial % 2 ? testing::random_rule(gen, m, k) : make_rule(catalog_rule_ids(m, k)[gen() % 7], m, k);
        auto got = winners(rule, profile);
        std::sort(got.begin(), got.end());
        CHECK(!got.empty());
        CHECK(got == testing::brute_winners(rule, profile));
    }
}

TEST_CASE("nontriviality") {
    for (std::size_t m = 2; m <= 5; ++m) {
        for (std::size_t k = 1; k < m; ++k) {
            CHECK(is_nontrivial(make_av(m, k)).value);
            CHECK(is_nontrivial(make_mc(m, k)).value);
        }
    }
    AbccRule::Table zero;
    const auto d42 = feasible_pairs(4, 2);
    for (const auto& [x, y] : d42.pairs()) zero[{x, y}] = 0;
    const auto constant = is_nontrivial(AbccRule("zero", 4, 2, zero));
    CHECK(!constant.value);
    REQUIRE(constant.witness);
    CHECK(constant.witness->first != constant.witness->second);
}

TEST_CASE("nontriviality matches a brute-force separating-set search") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t m = 2 + gen() % 4;
        const std::size_t k = 1 + gen() % m;
        AbccRule::Table t;
        // Sparse tables make trivial rules common.
        for (std::size_t y = 0; y <= m; ++y) {
            const std::size_t lo = k + y > m ? k + y - m : 0;
            Rational v = 0;
            for (std::size_t x = lo; x <= std::min(y, k); ++x) {
                if (gen() % 4 == 0) v += 1;
                t[{x, y}] = v;
            }
        }
        const AbccRule rule("sparse", m, k, t);
        bool expected = true;
        const auto cs = testing::all_committees(m, k);
        for (const auto& u : cs) {
            for (const auto& v : cs) {
                if (u == v) continue;
                bool separated = false;
                for (std::uint64_t s = 0; s < (std::uint64_t{1} << m) && !separated; ++s) {
                    const auto y = testing::popcount(s);
                    separated = rule(testing::popcount(u.set().bits() & s), y) > rule(testing::popcount(v.set().bits() & s), y);
                }
                expected = expected && separated;
            }
        }
        const auto got = is_nontrivial(rule);
        CHECK(got.value == expected);
        CHECK(got.witness.has_value() == !expected);
    }
}

TEST_CASE("top jump") {
    CHECK(has_top_jump(make_av(4, 2)).value);
    CHECK(has_top_jump(make_pav(5, 3)).value);
    CHECK(!has_top_jump(make_cc(4, 2)).value);
    CHECK(has_top_jump(make_cc(4, 1)).value);
    const auto vacuous = has_top_jump(make_cc(3, 3));
    CHECK(vacuous.value);
    CHECK(vacuous.vacuous);
}
