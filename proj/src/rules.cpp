#include "abcc/rules.hpp"

#include "abcc/errors.hpp"

#include <algorithm>
#include <unordered_map>

namespace abcc {

AbccRule::AbccRule(std::string name, std::size_t m, std::size_t k, const Table& table)
    : name_(std::move(name)), domain_(m, k), dense_((m + 1) * (k + 1)) {
    for (const auto& [xy, score] : table) {
        if (!domain_.contains(xy.first, xy.second)) {
            throw Error(ErrorCode::BadParams, "rule '" + name_ + "': pair (" + std::to_string(xy.first) + "," +
                                                  std::to_string(xy.second) + ") is outside the feasible domain");
        }
    }
    for (const auto& [x, y] : domain_.pairs()) {
        auto it = table.find({x, y});
        if (it == table.end()) {
            throw Error(ErrorCode::BadParams, "rule '" + name_ + "': missing score for (" + std::to_string(x) + "," +
                                                  std::to_string(y) + ")");
        }
        if (it->second < 0) {
            throw Error(ErrorCode::BadParams, "rule '" + name_ + "': negative score at (" + std::to_string(x) + "," +
                                                  std::to_string(y) + ")");
        }
        dense_[y * (k + 1) + x] = it->second;
    }
    for (const auto& [x, y] : domain_.pairs()) {
        if (x > domain_.x_min(y) && at(x, y) < at(x - 1, y)) {
            throw Error(ErrorCode::BadParams, "rule '" + name_ + "': score decreases from (" + std::to_string(x - 1) +
                                                  "," + std::to_string(y) + ") to (" + std::to_string(x) + "," +
                                                  std::to_string(y) + ")");
        }
    }
}

const Rational& AbccRule::operator()(std::size_t x, std::size_t y) const {
    if (!domain_.contains(x, y)) {
        throw Error(ErrorCode::DomainMismatch,
                    "(" + std::to_string(x) + "," + std::to_string(y) + ") is not in the feasible domain");
    }
    return at(x, y);
}

AbccRule::Table AbccRule::table() const {
    Table t;
    for (const auto& [x, y] : domain_.pairs()) t.emplace(std::pair{x, y}, at(x, y));
    return t;
}

namespace {

template <typename F>
AbccRule tabulate(std::string name, std::size_t m, std::size_t k, F&& f) {
    const FeasiblePairDomain domain(m, k);
    AbccRule::Table t;
    for (const auto& [x, y] : domain.pairs()) t.emplace(std::pair{x, y}, f(x, y));
    return AbccRule(std::move(name), m, k, t);
}

void require_m4_k2(std::string_view name, std::size_t m, std::size_t k) {
    if (m != 4 || k != 2) throw Error(ErrorCode::BadParams, std::string(name) + " is defined only for m=4, k=2");
}

}  // namespace

AbccRule make_av(std::size_t m, std::size_t k) {
    return tabulate("av", m, k, [](std::size_t x, std::size_t) { return Rational(x); });
}

AbccRule make_cc(std::size_t m, std::size_t k) {
    return tabulate("cc", m, k, [](std::size_t x, std::size_t) { return Rational(x > 0 ? 1 : 0); });
}

AbccRule make_pav(std::size_t m, std::size_t k) {
    std::vector<Rational> w;
    for (std::size_t j = 1; j <= k; ++j) w.emplace_back(1, j);
    return make_thiele(m, k, w, "pav");
}

AbccRule make_sav(std::size_t m, std::size_t k) {
    return tabulate("sav", m, k, [](std::size_t x, std::size_t y) { return y == 0 ? Rational(0) : Rational(x, y); });
}

AbccRule make_mc(std::size_t m, std::size_t k) {
    return tabulate("mc", m, k, [k](std::size_t x, std::size_t y) { return Rational(x == k && y == k ? 1 : 0); });
}

AbccRule make_thiele(std::size_t m, std::size_t k, const std::vector<Rational>& weights, std::string name) {
    if (weights.size() != k) {
        throw Error(ErrorCode::BadParams,
                    "thiele needs exactly k=" + std::to_string(k) + " weights, got " + std::to_string(weights.size()));
    }
    for (const auto& w : weights) {
        if (w < 0) throw Error(ErrorCode::BadParams, "thiele weights must be non-negative");
    }
    std::vector<Rational> prefix(k + 1);
    for (std::size_t j = 0; j < k; ++j) prefix[j + 1] = prefix[j] + weights[j];
    return tabulate(std::move(name), m, k, [&](std::size_t x, std::size_t) { return prefix[x]; });
}

AbccRule make_p_geometric(std::size_t m, std::size_t k, const Rational& p) {
    if (p <= 0) throw Error(ErrorCode::BadParams, "p_geometric needs p > 0");
    std::vector<Rational> w;
    Rational power = 1;
    for (std::size_t j = 1; j <= k; ++j) {
        power *= p;
        w.push_back(power);
    }
    return make_thiele(m, k, w, "p_geometric:" + to_string(p));
}

AbccRule make_sainte_lague(std::size_t m, std::size_t k) {
    std::vector<Rational> w;
    for (std::size_t j = 1; j <= k; ++j) w.emplace_back(1, 2 * j - 1);
    return make_thiele(m, k, w, "sainte_lague");
}

AbccRule make_pairs_only_av() {
    return tabulate("pairs_only_av", 4, 2, [](std::size_t x, std::size_t y) { return Rational(y == 2 ? x : 0); });
}

AbccRule make_pairs_doubled_av() {
    return tabulate("pairs_doubled_av", 4, 2, [](std::size_t x, std::size_t y) { return Rational(y == 2 ? 2 * x : x); });
}

AbccRule make_rule(std::string_view id, std::size_t m, std::size_t k) {
    const auto colon = id.find(':');
    const std::string_view kind = id.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : id.substr(colon + 1);
    auto no_arg = [&] {
        if (colon != std::string_view::npos) throw Error(ErrorCode::BadParams, "rule '" + std::string(kind) + "' takes no parameter");
    };
    if (kind == "av") return no_arg(), make_av(m, k);
    if (kind == "cc") return no_arg(), make_cc(m, k);
    if (kind == "pav") return no_arg(), make_pav(m, k);
    if (kind == "sav") return no_arg(), make_sav(m, k);
    if (kind == "mc") return no_arg(), make_mc(m, k);
    if (kind == "sainte_lague") return no_arg(), make_sainte_lague(m, k);
    if (kind == "pairs_only_av") {
        no_arg();
        require_m4_k2(kind, m, k);
        return make_pairs_only_av();
    }
    if (kind == "pairs_doubled_av") {
        no_arg();
        require_m4_k2(kind, m, k);
        return make_pairs_doubled_av();
    }
    try {
        if (kind == "p_geometric") return make_p_geometric(m, k, parse_rational(arg));
        if (kind == "thiele") {
            std::vector<Rational> w;
            std::size_t start = 0;
            while (start <= arg.size()) {
                const auto comma = arg.find(',', start);
                w.push_back(parse_rational(arg.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
            return make_thiele(m, k, w, "thiele:" + std::string(arg));
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse) throw Error(ErrorCode::BadParams, e.what());
        throw;
    }
    throw Error(ErrorCode::BadParams, "unknown rule '" + std::string(id) + "'");
}

std::vector<std::string> catalog_rule_ids(std::size_t m, std::size_t k) {
    std::vector<std::string> ids = {"av", "cc", "pav", "sav", "mc", "sainte_lague", "p_geometric:1/2"};
    if (m == 4 && k == 2) {
        ids.emplace_back("pairs_only_av");
        ids.emplace_back("pairs_doubled_av");
    }
    return ids;
}

namespace {

void check_committee(const AbccRule& rule, const Committee& committee) {
    if (committee.size() != rule.k() || !committee.set().within(rule.m())) {
        throw Error(ErrorCode::DomainMismatch, "committee does not match rule '" + rule.name() + "' (m=" +
                                                   std::to_string(rule.m()) + ", k=" + std::to_string(rule.k()) + ")");
    }
}

void check_vote(const AbccRule& rule, AlternativeSet vote) {
    if (!vote.within(rule.m())) {
        throw Error(ErrorCode::DomainMismatch, "vote mentions an alternative outside the universe of size " + std::to_string(rule.m()));
    }
}

}  // namespace

Rational vote_score(const AbccRule& rule, const Committee& committee, AlternativeSet vote) {
    check_committee(rule, committee);
    check_vote(rule, vote);
    return rule.at(overlap(committee.set(), vote), vote.size());
}

ScoreBreakdown profile_score(const AbccRule& rule, const Committee& committee, const Profile& profile) {
    check_committee(rule, committee);
    ScoreBreakdown out{committee, Rational(0), {}};
    out.per_vote.reserve(profile.size());
    for (AlternativeSet vote : profile.votes) {
        check_vote(rule, vote);
        out.per_vote.push_back(rule.at(overlap(committee.set(), vote), vote.size()));
        out.total += out.per_vote.back();
    }
    return out;
}

std::vector<Committee> winners(const AbccRule& rule, const Profile& profile, const Limits& limits) {
    const auto committees = enumerate_committees(rule.m(), rule.k(), limits);

    // Collapse repeated votes; totals are then integer-weighted sums over X_{m,k}.
    std::unordered_map<AlternativeSet::Bits, std::uint64_t> histogram;
    for (AlternativeSet vote : profile.votes) {
        check_vote(rule, vote);
        ++histogram[vote.bits()];
    }
    std::vector<std::pair<AlternativeSet, std::uint64_t>> distinct;
    distinct.reserve(histogram.size());
    for (const auto& [bits, count] : histogram) distinct.emplace_back(AlternativeSet(bits), count);

    const std::size_t k1 = rule.k() + 1;
    std::vector<std::uint64_t> counts((rule.m() + 1) * k1);
    std::vector<Committee> best;
    Rational best_total;
    for (const Committee& c : committees) {
        std::fill(counts.begin(), counts.end(), 0);
        for (const auto& [vote, count] : distinct) counts[vote.size() * k1 + overlap(c.set(), vote)] += count;
        Rational total = 0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (counts[i] != 0) total += rule.at(i % k1, i / k1) * counts[i];
        }
        if (best.empty() || total > best_total) {
            best.assign(1, c);
            best_total = std::move(total);
        } else if (total == best_total) {
            best.push_back(c);
        }
    }
    return best;
}

NontrivialityResult is_nontrivial(const AbccRule& rule, const Limits& limits) {
    const std::size_t m = rule.m();
    const std::size_t k = rule.k();
    require_exact_m(m, limits);
    const auto committees = enumerate_committees(m, k, limits);

    // Separation depends on (U, V) only through o = |U ∩ V|. A vote S is
    // described by how many members it takes from U∩V (i), U∖V (j), V∖U (l)
    // and the rest (r).
    auto separable = [&](std::size_t o) {
        const std::size_t diff = k - o;
        const std::size_t rest = m - 2 * k + o;
        for (std::size_t i = 0; i <= o; ++i)
            for (std::size_t j = 0; j <= diff; ++j)
                for (std::size_t l = 0; l <= diff; ++l)
                    for (std::size_t r = 0; r <= rest; ++r) {
                        const std::size_t y = i + j + l + r;
                        if (rule.at(i + j, y) > rule.at(i + l, y)) return true;
                    }
        return false;
    };

    const std::size_t min_overlap = 2 * k > m ? 2 * k - m : 0;
    for (std::size_t o = min_overlap; o < k; ++o) {
        if (separable(o)) continue;
        for (const Committee& u : committees) {
            for (const Committee& v : committees) {
                if (overlap(u.set(), v.set()) == o) return {false, std::pair{u, v}};
            }
        }
    }
    return {true, std::nullopt};
}

TopJump has_top_jump(const AbccRule& rule) {
    const std::size_t k = rule.k();
    if (!rule.domain().contains(k - 1, k)) return {true, true};
    return {rule.at(k, k) > rule.at(k - 1, k), false};
}

}  // namespace abcc
