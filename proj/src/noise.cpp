#include "abcc/noise.hpp"

#include "abcc/errors.hpp"
#include "abcc/oracle.hpp"
#include "abcc/rng.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace abcc {

Rational NoiseModel::probability(AlternativeSet s) const {
    if (!s.within(m_)) return Rational(0);
    if (is_product()) {
        const std::size_t dist = (s - ground_.set()).size() + (ground_.set() - s).size();
        return power(p_, static_cast<unsigned>(m_ - dist)) * power(Rational(1) - p_, static_cast<unsigned>(dist));
    }
    return probs_[levels_->level(s)];
}

std::vector<Rational> NoiseModel::table(const Limits& limits) const {
    require_exact_m(m_, limits);
    const std::size_t n = std::size_t{1} << m_;
    std::vector<Rational> out(n);
    if (is_product()) {
        // Powers indexed by set-difference distance.
        const Rational q = Rational(1) - p_;
        std::vector<Rational> by_distance(m_ + 1);
        for (std::size_t t = 0; t <= m_; ++t) {
            by_distance[t] = power(p_, static_cast<unsigned>(m_ - t)) * power(q, static_cast<unsigned>(t));
        }
        for (std::size_t s = 0; s < n; ++s) {
            const AlternativeSet set(s);
            out[s] = by_distance[(set - ground_.set()).size() + (ground_.set() - set).size()];
        }
        return out;
    }
    for (std::size_t s = 0; s < n; ++s) out[s] = probs_[levels_->level_of[s]];
    return out;
}

NoiseModel make_mp(const Rational& p, std::size_t m, const Committee& ground) {
    if (p <= Rational(1, 2) || p > 1) throw Error(ErrorCode::BadP, "p=" + to_string(p) + " is outside (1/2, 1]");
    if (m == 0 || m > kMaxAlternatives) throw Error(ErrorCode::BadParams, "universe size must be in 1..64");
    if (!ground.set().within(m) || ground.size() == 0) throw Error(ErrorCode::DomainMismatch, "ground committee outside the universe");
    NoiseModel model(ground, m);
    model.p_ = p;
    return model;
}

NoiseModel make_level_model(const DistanceMetric& d, const Committee& ground, std::vector<Rational> probs,
                            const Limits& limits) {
    auto levels = level_structure(d, ground, limits);
    if (probs.size() != levels.values.size()) {
        throw Error(ErrorCode::BadParams, "expected " + std::to_string(levels.values.size()) + " level probabilities, got " +
                                              std::to_string(probs.size()));
    }
    if (probs.back() < 0) throw Error(ErrorCode::NotMonotonic, "probabilities must be non-negative");
    for (std::size_t t = 0; t + 1 < probs.size(); ++t) {
        if (!(probs[t] > probs[t + 1])) {
            throw Error(ErrorCode::NotMonotonic, "level probabilities must strictly decrease: p_" + std::to_string(t) + "=" +
                                                     to_string(probs[t]) + ", p_" + std::to_string(t + 1) + "=" +
                                                     to_string(probs[t + 1]));
        }
    }
    Rational total = 0;
    for (std::size_t t = 0; t < probs.size(); ++t) total += probs[t] * levels.level_size(t);
    if (total != 1) throw Error(ErrorCode::NotNormalized, "probabilities sum to " + to_string(total) + ", deficit " + to_string(Rational(1) - total));
    NoiseModel model(ground, d.m());
    model.metric_ = d;
    model.levels_ = std::move(levels);
    model.probs_ = std::move(probs);
    return model;
}

NoiseModel random_level_model(const DistanceMetric& d, const Committee& ground, std::uint64_t seed, const Limits& limits) {
    Rng rng(seed);
    const auto levels = level_structure(d, ground, limits);
    const std::size_t count = levels.values.size();
    // p_t = Σ_{j ≥ t} e_j with e_j > 0 below the last level; e_s may be zero.
    std::vector<Rational> steps(count);
    for (std::size_t j = 0; j < count; ++j) {
        steps[j] = Rational(j + 1 < count ? 1 + rng.below(8) : rng.below(9));
    }
    std::vector<Rational> probs(count);
    Rational running = 0;
    for (std::size_t t = count; t-- > 0;) {
        running += steps[t];
        probs[t] = running;
    }
    Rational total = 0;
    for (std::size_t t = 0; t < count; ++t) total += probs[t] * levels.level_size(t);
    for (auto& p : probs) p /= total;
    return make_level_model(d, ground, std::move(probs), limits);
}

namespace {

class LevelSampler {
public:
    explicit LevelSampler(const std::vector<Rational>& table) {
        BigInt lcm = 1;
        for (const auto& p : table) {
            const BigInt den = denominator_of(p);
            if (lcm % den != 0) lcm = boost::multiprecision::lcm(lcm, den);
        }
        BigInt running = 0;
        big_cdf_.reserve(table.size());
        for (const auto& p : table) {
            running += numerator_of(p) * (lcm / denominator_of(p));
            big_cdf_.push_back(running);
        }
        total_ = running;
        if (total_ <= std::numeric_limits<std::uint64_t>::max()) {
            small_total_ = total_.convert_to<std::uint64_t>();
            for (const auto& c : big_cdf_) small_cdf_.push_back(c.convert_to<std::uint64_t>());
        }
    }

    AlternativeSet draw(Rng& rng) const {
        if (small_total_ != 0) {
            const std::uint64_t u = rng.below(small_total_);
            return AlternativeSet(std::upper_bound(small_cdf_.begin(), small_cdf_.end(), u) - small_cdf_.begin());
        }
        const BigInt u = rng.below(total_);
        return AlternativeSet(std::upper_bound(big_cdf_.begin(), big_cdf_.end(), u) - big_cdf_.begin());
    }

private:
    std::vector<BigInt> big_cdf_;
    std::vector<std::uint64_t> small_cdf_;
    BigInt total_;
    std::uint64_t small_total_ = 0;
};

}  // namespace

Profile sample_profile(const NoiseModel& model, std::size_t n, std::uint64_t seed, const Limits& limits) {
    Rng rng(seed);
    Profile profile;
    profile.votes.reserve(n);
    if (n == 0) return profile;
    if (model.is_product()) {
        const Rational q = Rational(1) - model.p();
        const AlternativeSet ground = model.ground().set();
        for (std::size_t i = 0; i < n; ++i) {
            AlternativeSet vote;
            for (std::size_t a = 0; a < model.m(); ++a) {
                if (rng.bernoulli(ground.contains(a) ? model.p() : q)) vote = vote.with(a);
            }
            profile.votes.push_back(vote);
        }
        return profile;
    }
    const LevelSampler sampler(model.table(limits));
    for (std::size_t i = 0; i < n; ++i) profile.votes.push_back(sampler.draw(rng));
    return profile;
}

MonotonicityAudit audit_d_monotonic(const NoiseModel& model, const DistanceMetric& d, const Limits& limits) {
    require_exact_m(model.m(), limits);
    if (d.m() != model.m()) throw Error(ErrorCode::DomainMismatch, "metric and model universes differ");
    const auto table = model.table(limits);
    // Sorting by distance reduces the pairwise iff to: constant within a
    // distance class and strictly decreasing between consecutive classes.
    std::map<Rational, std::vector<AlternativeSet>> classes;
    for (std::size_t s = 0; s < table.size(); ++s) classes[d(model.ground().set(), AlternativeSet(s))].emplace_back(s);
    const std::vector<AlternativeSet>* previous = nullptr;
    for (const auto& [dist, sets] : classes) {
        for (AlternativeSet s : sets) {
            if (table[s.bits()] != table[sets.front().bits()]) return {false, std::pair{sets.front(), s}};
        }
        if (previous && !(table[previous->front().bits()] > table[sets.front().bits()])) {
            return {false, std::pair{previous->front(), sets.front()}};
        }
        previous = &sets;
    }
    return {};
}

CounterexamplePackage mc_uniqueness_counterexample(const AbccRule& rule, const Limits& limits) {
    const std::size_t m = rule.m();
    const std::size_t k = rule.k();
    require_exact_m(m, limits);
    if (m == k) throw Error(ErrorCode::PreconditionFailed, "the construction needs m > k");
    std::optional<std::pair<std::size_t, std::size_t>> jump;
    for (const auto& [x, y] : rule.domain().pairs()) {
        if (x == 0 || (x == k && y == k) || !rule.domain().contains(x - 1, y)) continue;
        if (rule.at(x, y) > rule.at(x - 1, y)) {
            jump = std::pair{x, y};
            break;
        }
    }
    if (!jump) {
        throw Error(ErrorCode::NoWitness, "rule '" + rule.name() + "' increases only at (k,k); no counterexample exists");
    }
    const auto [x_star, y_star] = *jump;

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < k; ++i) idx.push_back(i);
    const Committee ground(AlternativeSet::of(idx), k);
    idx.clear();
    for (std::size_t i = 1; i <= k; ++i) idx.push_back(i);
    const Committee rival(AlternativeSet::of(idx), k);
    idx.clear();
    for (std::size_t i = k + 1 - x_star; i <= y_star + k - x_star; ++i) idx.push_back(i);
    const AlternativeSet w = AlternativeSet::of(idx);

    const std::size_t n = std::size_t{1} << m;
    std::vector<Rational> table(n * n, Rational(2));
    for (std::size_t s = 0; s < n; ++s) table[s * n + s] = 0;
    for (AlternativeSet near : {rival.set(), w}) {
        table[ground.set().bits() * n + near.bits()] = 1;
        table[near.bits() * n + ground.set().bits()] = 1;
    }
    auto metric = DistanceMetric::from_table("uniqueness_counterexample", m, std::move(table));

    const Rational others(static_cast<long long>(n - 3));
    Rational delta = Rational(1) / Rational(3 * (n - 1)) / 2;
    for (int halving = 0; halving <= 64; ++halving, delta /= 2) {
        auto model = make_level_model(metric, ground, {Rational(1, 3), Rational(1, 3) - delta, 2 * delta / others}, limits);
        Rational gap = expected_gap(rule, model, ground, rival, limits);
        if (gap < 0) {
            return CounterexamplePackage{std::move(metric), std::move(model), ground, rival, w, x_star, y_star, delta, std::move(gap)};
        }
    }
    throw Error(ErrorCode::DeltaSearchFailed, "no negative gap after 64 halvings of delta");
}

NoiseModel av_refutation_model(const DistanceMetric& d, const Committee& ground, std::size_t a, std::size_t b,
                               std::size_t t_star, const Limits& limits) {
    const std::size_t m = d.m();
    if (a >= m || b >= m || !ground.set().contains(a) || ground.set().contains(b)) {
        throw Error(ErrorCode::PreconditionFailed, "need a in the ground committee and b outside it");
    }
    const auto levels = level_structure(d, ground, limits);
    const std::size_t s = levels.span();
    if (t_star < 1 || t_star + 1 > s) {
        throw Error(ErrorCode::PreconditionFailed, "t* must lie in 1..s-1 (s=" + std::to_string(s) + ")");
    }
    if (neighborhood_count(levels, a, b, t_star) >= neighborhood_count(levels, b, a, t_star)) {
        throw Error(ErrorCode::PreconditionFailed, "majority-concentricity holds at the given (U, a, b, t*)");
    }

    const Rational eps = Rational(1) / (Rational(s) * power(Rational(8), static_cast<unsigned>(m)));
    // Upper block: p_t = τ - ε t / t*. Lower block: 2ε down to ε, equally
    // spaced; a single lower level takes ε.
    std::vector<Rational> lower;
    const std::size_t tail = s - t_star;
    for (std::size_t j = 0; j < tail; ++j) {
        lower.push_back(tail == 1 ? eps : 2 * eps - eps * Rational(j, tail - 1));
    }
    Rational upper_count = 0, upper_offset = 0, lower_mass = 0;
    for (std::size_t t = 0; t <= t_star; ++t) {
        upper_count += levels.level_size(t);
        upper_offset += eps * Rational(t, t_star) * levels.level_size(t);
    }
    for (std::size_t j = 0; j < tail; ++j) lower_mass += lower[j] * levels.level_size(t_star + 1 + j);
    const Rational tau = (1 + upper_offset - lower_mass) / upper_count;

    std::vector<Rational> probs;
    for (std::size_t t = 0; t <= t_star; ++t) probs.push_back(tau - eps * Rational(t, t_star));
    probs.insert(probs.end(), lower.begin(), lower.end());
    auto model = make_level_model(d, ground, std::move(probs), limits);

    const Committee rival(ground.set().without(a).with(b), ground.size());
    if (!(tau > Rational(1) / Rational(std::size_t{1} << m)) ||
        !(expected_gap(make_av(m, ground.size()), model, ground, rival, limits) < 0)) {
        throw std::logic_error("av_refutation_model: construction did not produce a negative gap");
    }
    return model;
}

}  // namespace abcc
