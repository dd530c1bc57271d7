// Shared helpers for the test binaries: seeded generators and brute-force
// reference computations that avoid the library code paths under test.
#pragma once

#include "abcc/core.hpp"
#include "abcc/metrics.hpp"
#include "abcc/noise.hpp"
#include "abcc/rational.hpp"
#include "abcc/rules.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing {

using abcc::AlternativeSet;
using abcc::Committee;
using abcc::Rational;

inline AlternativeSet S(std::initializer_list<std::size_t> members) { return AlternativeSet::of(members); }

inline std::size_t popcount(std::uint64_t bits) { return static_cast<std::size_t>(__builtin_popcountll(bits)); }

/// Committees of size k over m alternatives, by scanning all bitmasks.
inline std::vector<Committee> all_committees(std::size_t m, std::size_t k) {
    std::vector<Committee> out;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << m); ++b) {
        if (popcount(b) == k) out.emplace_back(AlternativeSet(b), k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Closed-form catalog scores, written independently of the rule tables.
inline Rational reference_score(const std::string& id, std::size_t x, std::size_t y, std::size_t k) {
    if (id == "av") return Rational(static_cast<long>(x));
    if (id == "cc") return Rational(x >= 1 ? 1 : 0);
    if (id == "pav") {
        Rational h = 0;
        for (std::size_t i = 1; i <= x; ++i) h += Rational(1) / Rational(static_cast<long>(i));
        return h;
    }
    if (id == "sav") return y == 0 ? Rational(0) : Rational(static_cast<long>(x)) / Rational(static_cast<long>(y));
    if (id == "mc") return Rational(x == k && y == k ? 1 : 0);
    if (id == "sainte_lague") {
        Rational h = 0;
        for (std::size_t i = 1; i <= x; ++i) h += Rational(1) / Rational(static_cast<long>(2 * i - 1));
        return h;
    }
    if (id == "p_geometric:1/2") {
        Rational h = 0, w = 1;
        for (std::size_t i = 1; i <= x; ++i) {
            w /= 2;
            h += w;
        }
        return h;
    }
    if (id == "pairs_only_av") return Rational(y == 2 ? static_cast<long>(x) : 0);
    if (id == "pairs_doubled_av") return Rational(static_cast<long>(y == 2 ? 2 * x : x));
    throw std::runtime_error("no reference for " + id);
}

/// Total score of every committee, computed vote by vote.
inline std::map<Committee, Rational> brute_scores(const abcc::AbccRule& rule, const abcc::Profile& profile) {
    std::map<Committee, Rational> out;
    for (const auto& c : all_committees(rule.m(), rule.k())) {
        Rational total = 0;
        for (auto vote : profile.votes) total += rule(popcount(c.set().bits() & vote.bits()), popcount(vote.bits()));
        out.emplace(c, total);
    }
    return out;
}

inline std::vector<Committee> brute_winners(const abcc::AbccRule& rule, const abcc::Profile& profile) {
    const auto scores = brute_scores(rule, profile);
    Rational best = scores.begin()->second;
    for (const auto& [c, s] : scores) best = std::max(best, s);
    std::vector<Committee> out;
    for (const auto& [c, s] : scores) {
        if (s == best) out.push_back(c);
    }
    return out;
}

inline abcc::Profile random_profile(std::mt19937_64& gen, std::size_t m, std::size_t n) {
    abcc::Profile p;
    std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << m) - 1);
    for (std::size_t i = 0; i < n; ++i) p.votes.emplace_back(pick(gen));
    return p;
}

/// Random non-decreasing table on X_{m,k} with small integer steps.
inline abcc::AbccRule random_rule(std::mt19937_64& gen, std::size_t m, std::size_t k) {
    abcc::AbccRule::Table table;
    std::uniform_int_distribution<int> step(0, 3);
    for (std::size_t y = 0; y <= m; ++y) {
        const std::size_t lo = k + y > m ? k + y - m : 0;
        const std::size_t hi = std::min(y, k);
        Rational v = step(gen);
        for (std::size_t x = lo; x <= hi; ++x) {
            table[{x, y}] = v;
            v += Rational(step(gen), 2);
        }
    }
    return abcc::AbccRule("random", m, k, table);
}

/// Pr[S | U] for a level model, recomputed from raw distances: rank the
/// distinct values of d(U, .) and look up the given level probabilities.
inline std::vector<Rational> reference_level_table(const abcc::DistanceMetric& d, const Committee& ground,
                                                   const std::vector<Rational>& level_probs) {
    const std::size_t n = std::size_t{1} << d.m();
    std::set<Rational> values;
    std::vector<Rational> dist(n);
    for (std::size_t s = 0; s < n; ++s) {
        dist[s] = d(ground.set(), AlternativeSet(s));
        values.insert(dist[s]);
    }
    const std::vector<Rational> sorted(values.begin(), values.end());
    std::vector<Rational> out(n);
    for (std::size_t s = 0; s < n; ++s) {
        const auto rank = std::lower_bound(sorted.begin(), sorted.end(), dist[s]) - sorted.begin();
        out[s] = level_probs.at(static_cast<std::size_t>(rank));
    }
    return out;
}

/// Σ_S (f(U, S) - f(V, S)) Pr[S], directly from the probability table.
inline Rational reference_gap(const abcc::AbccRule& rule, const std::vector<Rational>& table, const Committee& u,
                              const Committee& v) {
    Rational total = 0;
    for (std::size_t s = 0; s < table.size(); ++s) {
        const auto y = popcount(s);
        total += (rule(popcount(u.set().bits() & s), y) - rule(popcount(v.set().bits() & s), y)) * table[s];
    }
    return total;
}

}  // namespace testing
