#pragma once

#include "abcc/core.hpp"
#include "abcc/metrics.hpp"
#include "abcc/rational.hpp"
#include "abcc/rules.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace abcc {

/// A distribution over the 2^m approval sets given a ground-truth committee.
///
/// Product form: each member of the ground committee is approved with
/// probability p and each non-member with probability 1 - p, so
/// Pr[S | U] = p^(m - dΔ(U, S)) (1 - p)^dΔ(U, S). It never materializes the
/// full table and samples for any m up to 64.
///
/// Level form: Pr[S | U] = p_t where t is the distance level of S around U
/// under a metric d. Probabilities strictly decrease across levels.
class NoiseModel {
public:
    const Committee& ground() const { return ground_; }
    std::size_t m() const { return m_; }
    bool is_product() const { return !metric_.has_value(); }

    /// Product form only.
    const Rational& p() const { return p_; }
    /// Level form only.
    const DistanceMetric& metric() const { return *metric_; }
    const LevelStructure& levels() const { return *levels_; }
    const std::vector<Rational>& level_probs() const { return probs_; }
    /// True when the farthest level carries zero mass.
    bool has_zero_tail() const { return !is_product() && probs_.back() == 0; }

    Rational probability(AlternativeSet s) const;

    /// Pr[S | U] for every S, indexed by S.bits().
    std::vector<Rational> table(const Limits& limits = {}) const;

    friend NoiseModel make_mp(const Rational& p, std::size_t m, const Committee& ground);
    friend NoiseModel make_level_model(const DistanceMetric& d, const Committee& ground, std::vector<Rational> probs,
                                       const Limits& limits);

private:
    NoiseModel(Committee ground, std::size_t m) : ground_(ground), m_(m) {}

    Committee ground_;
    std::size_t m_;
    Rational p_;
    std::optional<DistanceMetric> metric_;
    std::optional<LevelStructure> levels_;
    std::vector<Rational> probs_;
};

/// Throws Error(BadP) unless 1/2 < p <= 1.
NoiseModel make_mp(const Rational& p, std::size_t m, const Committee& ground);

/// probs[t] is the probability of each set at level t. Throws
/// Error(NotMonotonic) unless p_0 > p_1 > ... > p_s >= 0, Error(NotNormalized)
/// (with the exact deficit) unless Σ n_t p_t = 1, Error(BadParams) on a
/// length mismatch.
NoiseModel make_level_model(const DistanceMetric& d, const Committee& ground, std::vector<Rational> probs,
                            const Limits& limits = {});

/// Level model with random strictly decreasing probabilities.
NoiseModel random_level_model(const DistanceMetric& d, const Committee& ground, std::uint64_t seed,
                              const Limits& limits = {});

/// n independent votes. Product models flip m exact coins per vote; level
/// models use inverse-transform sampling over the exact cumulative table.
Profile sample_profile(const NoiseModel& model, std::size_t n, std::uint64_t seed, const Limits& limits = {});

struct MonotonicityAudit {
    bool ok = true;
    std::optional<std::pair<AlternativeSet, AlternativeSet>> witness;
};

/// Pr[S1|U] > Pr[S2|U] exactly when d(U, S1) < d(U, S2), checked on all pairs.
MonotonicityAudit audit_d_monotonic(const NoiseModel& model, const DistanceMetric& d, const Limits& limits = {});

/// A metric and model under which a rule other than MC expects the rival to
/// outscore the ground truth.
struct CounterexamplePackage {
    DistanceMetric metric;
    NoiseModel model;
    Committee ground;
    Committee rival;
    /// The set that the rival scores f(x*, y*) on and the ground f(x* - 1, y*).
    AlternativeSet witness_set;
    std::size_t x_star;
    std::size_t y_star;
    Rational delta;
    Rational expected_gap;
};

/// Builds the three-level construction: distance 1 from U to V = {a_2..a_{k+1}}
/// and to W, distance 2 to every other set, probabilities 1/3, 1/3 - δ and
/// 2δ/(2^m - 3). δ starts at 1/(6(2^m - 1)) and halves (at most 64 times)
/// until the exact expected gap is negative.
///
/// Throws Error(NoWitness) when no feasible (x*, y*) != (k, k) has
/// f(x*, y*) > f(x* - 1, y*), Error(PreconditionFailed) when m == k,
/// Error(DeltaSearchFailed) when halving does not reach a negative gap.
CounterexamplePackage mc_uniqueness_counterexample(const AbccRule& rule, const Limits& limits = {});

/// A d-monotonic model under which AV prefers V = U ∖ {a} ∪ {b} to U, for a
/// metric violating majority-concentricity at (U, a, b, t*). Probabilities
/// fall linearly from τ to τ - ε over levels 0..t* and from 2ε to ε over
/// the remaining levels, with ε = 1/(s 8^m) and τ solved for normalization.
/// Throws Error(PreconditionFailed) unless |N^t*_{a|b}| < |N^t*_{b|a}| and
/// 1 <= t* <= s - 1.
NoiseModel av_refutation_model(const DistanceMetric& d, const Committee& ground, std::size_t a, std::size_t b,
                               std::size_t t_star, const Limits& limits = {});

}  // namespace abcc
