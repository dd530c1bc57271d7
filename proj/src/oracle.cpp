#include "abcc/oracle.hpp"

#include "abcc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abcc {

namespace {

void check_pair(const AbccRule& rule, const Committee& ground, const Committee& rival) {
    if (ground.size() != rule.k() || rival.size() != rule.k() || !ground.set().within(rule.m()) ||
        !rival.set().within(rule.m())) {
        throw Error(ErrorCode::DomainMismatch, "committees do not match rule '" + rule.name() + "'");
    }
}

}  // namespace

Rational expected_gap(const AbccRule& rule, const NoiseModel& model, const Committee& ground, const Committee& rival,
                      const Limits& limits) {
    check_pair(rule, ground, rival);
    if (model.ground() != ground) throw Error(ErrorCode::DomainMismatch, "model is not centred on the given ground committee");
    if (model.m() != rule.m()) throw Error(ErrorCode::DomainMismatch, "model and rule universes differ");
    const auto table = model.table(limits);
    Rational total = 0;
    for (std::size_t s = 0; s < table.size(); ++s) {
        if (table[s] == 0) continue;
        const AlternativeSet set(s);
        const std::size_t y = set.size();
        const Rational& fu = rule.at(overlap(ground.set(), set), y);
        const Rational& fv = rule.at(overlap(rival.set(), set), y);
        if (fu != fv) total += (fu - fv) * table[s];
    }
    return total;
}

AccuracyReport accuracy_classify(const AbccRule& rule, const NoiseModel& model, const Limits& limits) {
    const Committee& ground = model.ground();
    const auto table = model.table(limits);
    AccuracyReport report;
    bool all_positive = true;
    for (const Committee& rival : enumerate_committees(rule.m(), rule.k(), limits)) {
        if (rival == ground) continue;
        Rational gap = expected_gap(rule, model, ground, rival, limits);
        GapKind kind = GapKind::Positive;
        if (gap < 0) {
            kind = GapKind::Negative;
        } else if (gap == 0) {
            kind = GapKind::ZeroIdentically;
            for (std::size_t s = 0; s < table.size(); ++s) {
                const AlternativeSet set(s);
                if (table[s] != 0 && rule.at(overlap(ground.set(), set), set.size()) != rule.at(overlap(rival.set(), set), set.size())) {
                    kind = GapKind::ZeroMean;
                    break;
                }
            }
        }
        all_positive = all_positive && kind == GapKind::Positive;
        report.rivals.push_back({rival, std::move(gap), kind});
    }
    report.status = all_positive ? Accuracy::AccurateInLimit : Accuracy::NotAccurate;
    return report;
}

UvBijection::UvBijection(AlternativeSet u, AlternativeSet v) : u_(u), v_(v) {
    if (u.size() != v.size()) throw Error(ErrorCode::SizeMismatch, "a (U,V)-bijection needs |U| = |V|");
    const auto from = (u - v).indices();
    const auto to = (v - u).indices();
    for (std::size_t i = 0; i < from.size(); ++i) swaps_.emplace_back(from[i], to[i]);
}

std::size_t UvBijection::operator()(std::size_t alternative) const {
    for (const auto& [a, b] : swaps_) {
        if (alternative == a) return b;
        if (alternative == b) return a;
    }
    return alternative;
}

AlternativeSet UvBijection::operator()(AlternativeSet s) const {
    AlternativeSet moved = s;
    for (const auto& [a, b] : swaps_) {
        moved = moved.without(a).without(b);
        if (s.contains(a)) moved = moved.with(b);
        if (s.contains(b)) moved = moved.with(a);
    }
    return moved;
}

UvBijection uv_bijection(const Committee& u, const Committee& v) { return UvBijection(u.set(), v.set()); }

Rational GapAnalysis::evaluate(const std::vector<Rational>& level_probs) const {
    if (level_probs.size() != coefficients.size()) throw Error(ErrorCode::BadParams, "level probability count mismatch");
    Rational total = 0;
    for (std::size_t t = 0; t < coefficients.size(); ++t) total += coefficients[t] * level_probs[t];
    return total;
}

Rational GapAnalysis::evaluate_by_parts(const std::vector<Rational>& level_probs) const {
    if (level_probs.size() != prefix.size()) throw Error(ErrorCode::BadParams, "level probability count mismatch");
    Rational total = 0;
    for (std::size_t j = 0; j < prefix.size(); ++j) {
        const Rational step = j + 1 < prefix.size() ? level_probs[j] - level_probs[j + 1] : level_probs[j];
        total += prefix[j] * step;
    }
    return total;
}

namespace {

std::vector<Rational> level_coefficients(const AbccRule& rule, const LevelStructure& levels, const Committee& rival) {
    std::vector<Rational> c(levels.values.size());
    const AlternativeSet u = levels.ground.set();
    for (std::size_t t = 0; t < levels.level_sets.size(); ++t) {
        for (AlternativeSet s : levels.level_sets[t]) {
            const std::size_t y = s.size();
            const Rational& fu = rule.at(overlap(u, s), y);
            const Rational& fv = rule.at(overlap(rival.set(), s), y);
            if (fu != fv) c[t] += fu - fv;
        }
    }
    return c;
}

std::vector<Rational> prefix_sums(const std::vector<Rational>& c) {
    std::vector<Rational> e(c.size());
    Rational running = 0;
    for (std::size_t t = 0; t < c.size(); ++t) {
        running += c[t];
        e[t] = running;
    }
    return e;
}

/// Level probabilities from increments: p_t = Σ_{i ≥ t} e_i.
std::vector<Rational> probs_from_steps(const std::vector<Rational>& steps) {
    std::vector<Rational> p(steps.size());
    Rational running = 0;
    for (std::size_t t = steps.size(); t-- > 0;) {
        running += steps[t];
        p[t] = running;
    }
    return p;
}

}  // namespace

GapAnalysis gap_analysis(const AbccRule& rule, const DistanceMetric& d, const Committee& ground, const Committee& rival,
                         const Limits& limits) {
    check_pair(rule, ground, rival);
    if (d.m() != rule.m()) throw Error(ErrorCode::DomainMismatch, "metric and rule universes differ");
    GapAnalysis out{ground, rival, level_structure(d, ground, limits), {}, {}};
    out.coefficients = level_coefficients(rule, out.levels, rival);
    out.prefix = prefix_sums(out.coefficients);

    // Both evaluation routes must agree; any linear test vector exercises the identity.
    std::vector<Rational> probe(out.coefficients.size());
    for (std::size_t t = 0; t < probe.size(); ++t) probe[t] = Rational(static_cast<long long>(probe.size() - t) * 3 + 1, 7 + t);
    if (out.evaluate(probe) != out.evaluate_by_parts(probe)) throw std::logic_error("gap_analysis: summation-by-parts mismatch");
    return out;
}

const char* status_name(RobustnessStatus status) {
    switch (status) {
        case RobustnessStatus::Robust: return "Robust";
        case RobustnessStatus::NotRobust: return "NotRobust";
        case RobustnessStatus::DegenerateNotRobust: return "DegenerateNotRobust";
    }
    return "Unknown";
}

namespace {

/// Strictly decreasing model whose gap is negative, near the vertex that puts
/// uniform mass on levels 0..j.
RobustnessWitness negative_witness(const DistanceMetric& d, const AbccRule& rule, const LevelStructure& levels,
                                   const Committee& rival, const std::vector<Rational>& c, const std::vector<Rational>& prefix,
                                   const Limits& limits) {
    const std::size_t count = prefix.size();
    std::vector<Rational> cumulative(count);
    for (std::size_t t = 0; t < count; ++t) cumulative[t] = Rational(levels.cumulative_size(t));

    std::size_t j = 0;
    Rational worst = 0;
    for (std::size_t t = 0; t < count; ++t) {
        const Rational vertex_gap = prefix[t] / cumulative[t];
        if (vertex_gap < worst) {
            worst = vertex_gap;
            j = t;
        }
    }
    Rational max_c = 1;
    for (const auto& v : c) max_c = std::max(max_c, Rational(abs(v)));
    Rational others = 0;
    for (std::size_t t = 0; t < count; ++t) {
        if (t != j) others += cumulative[t];
    }

    Rational eta = -worst / (4 * Rational(std::size_t{1} << d.m()) * max_c + 1);
    for (int attempt = 0; attempt < 256; ++attempt, eta /= 2) {
        std::vector<Rational> steps(count, eta);
        steps[j] = (1 - eta * others) / cumulative[j];
        if (!(steps[j] > 0)) continue;
        Rational gap = 0;
        for (std::size_t t = 0; t < count; ++t) gap += prefix[t] * steps[t];
        if (!(gap < 0)) continue;
        auto model = make_level_model(d, levels.ground, probs_from_steps(steps), limits);
        Rational direct = expected_gap(rule, model, levels.ground, rival, limits);
        if (direct != gap || !audit_d_monotonic(model, d, limits).ok) {
            throw std::logic_error("robustness_verdict: witness model failed re-verification");
        }
        return RobustnessWitness{levels.ground, rival, j, std::move(model), std::move(gap)};
    }
    throw std::logic_error("robustness_verdict: could not perturb vertex into a strict model");
}

RobustnessWitness zero_witness(const DistanceMetric& d, const AbccRule& rule, const LevelStructure& levels,
                               const Committee& rival, const Limits& limits) {
    const std::size_t count = levels.values.size();
    Rational total = 0;
    for (std::size_t t = 0; t < count; ++t) total += Rational(levels.cumulative_size(t));
    std::vector<Rational> steps(count, Rational(1) / total);
    auto model = make_level_model(d, levels.ground, probs_from_steps(steps), limits);
    Rational gap = expected_gap(rule, model, levels.ground, rival, limits);
    if (gap != 0) throw std::logic_error("robustness_verdict: degenerate witness has non-zero gap");
    return RobustnessWitness{levels.ground, rival, levels.span(), std::move(model), std::move(gap)};
}

}  // namespace

RobustnessVerdict robustness_verdict(const AbccRule& rule, const DistanceMetric& d, const Limits& limits) {
    if (d.m() != rule.m()) throw Error(ErrorCode::DomainMismatch, "metric and rule universes differ");
    require_exact_m(d.m(), limits);
    const auto committees = enumerate_committees(rule.m(), rule.k(), limits);

    RobustnessVerdict verdict;
    std::optional<std::pair<LevelStructure, Committee>> degenerate;
    for (const Committee& u : committees) {
        const auto levels = level_structure(d, u, limits);
        const std::size_t s = levels.span();
        for (const Committee& v : committees) {
            if (u == v) continue;
            const auto c = level_coefficients(rule, levels, v);
            const auto prefix = prefix_sums(c);
            Rational min_prefix = prefix[0];
            bool negative = false;
            bool positive_before_last = false;
            for (std::size_t j = 0; j < prefix.size(); ++j) {
                if (prefix[j] < 0) negative = true;
                if (j < s) {
                    min_prefix = std::min(min_prefix, prefix[j]);
                    if (prefix[j] > 0) positive_before_last = true;
                }
            }
            RobustnessStatus status = RobustnessStatus::Robust;
            if (negative) {
                status = RobustnessStatus::NotRobust;
                if (verdict.status != RobustnessStatus::NotRobust) {
                    verdict.status = RobustnessStatus::NotRobust;
                    verdict.witness = negative_witness(d, rule, levels, v, c, prefix, limits);
                }
            } else if (!positive_before_last) {
                status = RobustnessStatus::DegenerateNotRobust;
                if (!degenerate) degenerate.emplace(levels, v);
            }
            verdict.pairs.push_back({u, v, std::move(min_prefix), status});
        }
    }
    if (verdict.status != RobustnessStatus::NotRobust && degenerate) {
        verdict.status = RobustnessStatus::DegenerateNotRobust;
        verdict.witness = zero_witness(d, rule, degenerate->first, degenerate->second, limits);
    }
    return verdict;
}

SampleSizeBound sample_size_bound(const AbccRule& rule, const NoiseModel& model, double epsilon, const Limits& limits) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::BadParams, "epsilon must lie in (0, 1)");
    SampleSizeBound out;
    bool first = true;
    for (const Committee& rival : enumerate_committees(rule.m(), rule.k(), limits)) {
        if (rival == model.ground()) continue;
        Rational gap = expected_gap(rule, model, model.ground(), rival, limits);
        if (first || gap < out.min_gap) out.min_gap = std::move(gap);
        first = false;
    }
    if (first || out.min_gap <= 0) {
        throw Error(ErrorCode::NotAccurate, "minimum expected gap " + to_string(out.min_gap) + " is not positive");
    }
    const auto& domain = rule.domain();
    for (std::size_t y = 0; y <= rule.m(); ++y) {
        for (std::size_t x1 = domain.x_min(y); x1 <= domain.x_max(y); ++x1) {
            for (std::size_t x2 = domain.x_min(y); x2 <= domain.x_max(y); ++x2) {
                const Rational diff = rule.at(x1, y) - rule.at(x2, y);
                out.min_difference = std::min(out.min_difference, diff);
                out.max_difference = std::max(out.max_difference, diff);
            }
        }
    }
    const double range = to_double(out.max_difference - out.min_difference);
    const double mu = to_double(out.min_gap);
    const double bound = range * range / (2.0 * mu * mu) *
                         std::log(2.0 * std::pow(static_cast<double>(rule.m()), static_cast<double>(rule.k())) / epsilon);
    out.n = static_cast<std::uint64_t>(std::ceil(bound));
    return out;
}

}  // namespace abcc
