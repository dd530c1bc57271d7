#pragma once

#include "abcc/core.hpp"
#include "abcc/metrics.hpp"
#include "abcc/noise.hpp"
#include "abcc/rational.hpp"
#include "abcc/rules.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace abcc {

/// E_{S ~ model}[sc(U, S) - sc(V, S)] by exact summation over all 2^m sets.
/// The model's ground committee must be U.
Rational expected_gap(const AbccRule& rule, const NoiseModel& model, const Committee& ground, const Committee& rival,
                      const Limits& limits = {});

enum class Accuracy { AccurateInLimit, NotAccurate, Inconclusive };

enum class GapKind {
    Positive,
    Negative,
    /// Zero mean and sc(U, S) = sc(V, S) on every set with positive mass: a permanent tie.
    ZeroIdentically,
    /// Zero mean with positive variance: U wins outright with probability at most about 1/2.
    ZeroMean,
};

struct RivalGap {
    Committee rival;
    Rational gap;
    GapKind kind;
};

struct AccuracyReport {
    Accuracy status = Accuracy::Inconclusive;
    std::vector<RivalGap> rivals;
};

/// Accurate in the limit iff every rival's expected gap is strictly positive.
/// Any zero or negative gap classifies as NotAccurate.
AccuracyReport accuracy_classify(const AbccRule& rule, const NoiseModel& model, const Limits& limits = {});

/// Swaps U∖V with V∖U pointwise (matched in index order) and fixes every
/// other alternative.
class UvBijection {
public:
    /// Throws Error(SizeMismatch) unless |U| = |V|.
    UvBijection(AlternativeSet u, AlternativeSet v);

    AlternativeSet u() const { return u_; }
    AlternativeSet v() const { return v_; }
    std::size_t operator()(std::size_t alternative) const;
    AlternativeSet operator()(AlternativeSet s) const;

private:
    AlternativeSet u_;
    AlternativeSet v_;
    std::vector<std::pair<std::size_t, std::size_t>> swaps_;
};

UvBijection uv_bijection(const Committee& u, const Committee& v);

/// Per-level coefficients of the expected score gap between U and V.
///
/// With c_t = Σ_{S at level t} (sc(U, S) - sc(V, S)), E_j = c_0 + ... + c_j
/// and e_j = p_j - p_{j+1} (e_s = p_s), every level model satisfies
///     E[gap] = Σ_t c_t p_t = Σ_j E_j e_j.
/// Strict models have e_j > 0 for j < s and e_s >= 0.
struct GapAnalysis {
    Committee ground;
    Committee rival;
    LevelStructure levels;
    std::vector<Rational> coefficients;
    std::vector<Rational> prefix;

    /// Σ_t c_t p_t
    Rational evaluate(const std::vector<Rational>& level_probs) const;
    /// Σ_j E_j (p_j - p_{j+1})
    Rational evaluate_by_parts(const std::vector<Rational>& level_probs) const;
};

GapAnalysis gap_analysis(const AbccRule& rule, const DistanceMetric& d, const Committee& ground, const Committee& rival,
                         const Limits& limits = {});

enum class RobustnessStatus { Robust, NotRobust, DegenerateNotRobust };

const char* status_name(RobustnessStatus status);

struct PairSummary {
    Committee ground;
    Committee rival;
    Rational min_prefix;
    RobustnessStatus status;
};

struct RobustnessWitness {
    Committee ground;
    Committee rival;
    /// Level j with E_j < 0 (NotRobust) or the span s (degenerate).
    std::size_t level = 0;
    std::optional<NoiseModel> model;
    Rational gap;
};

struct RobustnessVerdict {
    RobustnessStatus status = RobustnessStatus::Robust;
    std::optional<RobustnessWitness> witness;
    std::vector<PairSummary> pairs;
};

/// Decides whether the rule is accurate in the limit for every d-monotonic
/// model. Per ordered pair (U, V):
///   - some E_j < 0: NotRobust, with a strict model near the polytope vertex
///     of level j whose exact gap is negative;
///   - all E_j >= 0 and E_0 = ... = E_{s-1} = 0: DegenerateNotRobust (some
///     strict model has zero gap);
///   - otherwise the gap is positive under every strict model.
/// NotRobust takes precedence over DegenerateNotRobust across pairs.
RobustnessVerdict robustness_verdict(const AbccRule& rule, const DistanceMetric& d, const Limits& limits = {});

struct SampleSizeBound {
    std::uint64_t n = 0;
    Rational min_gap;
    /// Extremes of f(x1, y) - f(x2, y) over feasible same-y pairs.
    Rational min_difference;
    Rational max_difference;
};

/// n = ceil((b' - a')^2 / (2 μ_min^2) ln(2 m^k / ε)): with at least n votes
/// the ground truth is the unique winner with probability >= 1 - ε.
/// Throws Error(NotAccurate) unless μ_min > 0, Error(BadParams) unless 0 < ε < 1.
SampleSizeBound sample_size_bound(const AbccRule& rule, const NoiseModel& model, double epsilon, const Limits& limits = {});

}  // namespace abcc
