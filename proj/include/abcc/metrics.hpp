#pragma once

#include "abcc/core.hpp"
#include "abcc/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abcc {

enum class MetricKind {
    SetDifference,
    Jaccard,
    Zelinka,
    BunkeShearer,
    Trivial,
    /// m = 3: distance 1 between complementary sets, 2 between any other distinct sets.
    Complement,
    Table,
};

/// Exact-valued distance on subsets of an m-alternative universe. Built-ins
/// are evaluated in closed form; everything else is a dense 2^m x 2^m table.
class DistanceMetric {
public:
    static DistanceMetric builtin(MetricKind kind, std::size_t m);
    /// No axiom check; see make_custom_metric for the validating constructor.
    static DistanceMetric from_table(std::string name, std::size_t m, std::vector<Rational> table);

    const std::string& name() const { return name_; }
    std::size_t m() const { return m_; }
    MetricKind kind() const { return kind_; }

    Rational operator()(AlternativeSet x, AlternativeSet y) const;

    /// Dense row-major table of all values (x.bits() * 2^m + y.bits()).
    std::vector<Rational> materialize(const Limits& limits = {}) const;

private:
    DistanceMetric(std::string name, std::size_t m, MetricKind kind) : name_(std::move(name)), m_(m), kind_(kind) {}

    std::string name_;
    std::size_t m_;
    MetricKind kind_;
    std::shared_ptr<const std::vector<Rational>> table_;
};

/// set_difference, jaccard, zelinka, bunke_shearer, trivial, complement (m = 3),
/// random_table:SEED, random_signature:SEED, random_natural:SEED.
DistanceMetric make_metric(std::string_view id, std::size_t m);

std::vector<std::string> builtin_similarity_metric_ids();

struct AxiomCheck {
    bool ok = true;
    /// identity, positivity, symmetry, triangle, or negativity
    std::string axiom;
    std::vector<AlternativeSet> witness;
};

AxiomCheck check_metric_axioms(const DistanceMetric& d, const Limits& limits = {});

/// Validates the metric axioms; throws Error(InvalidMetric) naming the
/// violated axiom and the offending sets.
DistanceMetric make_custom_metric(std::string name, std::size_t m, std::vector<Rational> table, const Limits& limits = {});

/// Distinct distances from a ground committee and the classes they induce.
struct LevelStructure {
    Committee ground;
    /// δ_0 = 0 < δ_1 < ... < δ_s
    std::vector<Rational> values;
    std::vector<std::vector<AlternativeSet>> level_sets;
    /// level_of[S.bits()] = t with d(U, S) = δ_t
    std::vector<std::uint32_t> level_of;

    std::size_t span() const { return values.size() - 1; }
    std::size_t level(AlternativeSet s) const { return level_of[s.bits()]; }
    std::uint64_t level_size(std::size_t t) const { return level_sets[t].size(); }
    /// Σ_{t' ≤ t} n_{t'}
    std::uint64_t cumulative_size(std::size_t t) const;
};

LevelStructure level_structure(const DistanceMetric& d, const Committee& ground, const Limits& limits = {});

/// |N^t_{a|b}|: sets containing a, missing b, within distance δ_t of the ground.
std::uint64_t neighborhood_count(const LevelStructure& levels, std::size_t a, std::size_t b, std::size_t t);
std::uint64_t neighborhood_count(const DistanceMetric& d, const Committee& ground, std::size_t a, std::size_t b,
                                 std::size_t t, const Limits& limits = {});

struct ConcentricityWitness {
    Committee ground;
    std::size_t a;
    std::size_t b;
    std::size_t t;
    std::uint64_t count_ab;
    std::uint64_t count_ba;
};

struct ConcentricityResult {
    bool value = true;
    std::optional<ConcentricityWitness> witness;
};

ConcentricityResult is_majority_concentric(const DistanceMetric& d, std::size_t k, const Limits& limits = {});

struct OverlapWitness {
    Committee u;
    Committee v;
    AlternativeSet s;
    Rational d_us;
    Rational d_vs;
};

struct OverlapResult {
    bool value = true;
    std::optional<OverlapWitness> witness;
};

/// d(U, S) <= d(V, S) whenever |U| = |V| = k and |U ∩ S| > |V ∩ S|.
OverlapResult is_natural(const DistanceMetric& d, std::size_t k, const Limits& limits = {});
/// Same with strict inequality.
OverlapResult is_similarity(const DistanceMetric& d, std::size_t k, const Limits& limits = {});

struct IndependenceResult {
    bool value = true;
    /// Two pairs with equal (|X∖Y|, |Y∖X|, |X|, |Y|) but different distances.
    std::optional<std::pair<std::pair<AlternativeSet, AlternativeSet>, std::pair<AlternativeSet, AlternativeSet>>> witness;
};

IndependenceResult is_alternative_independent(const DistanceMetric& d, const Limits& limits = {});

struct TaxonomyReport {
    std::string metric;
    std::size_t m = 0;
    std::size_t k = 0;
    AxiomCheck axioms;
    ConcentricityResult majority_concentric;
    OverlapResult natural;
    OverlapResult similarity;
    IndependenceResult alternative_independent;
};

TaxonomyReport taxonomy(const DistanceMetric& d, std::size_t k, const Limits& limits = {});

enum class MetricFamily {
    /// d(X, Y) = g(|X∖Y|, |Y∖X|, |X|, |Y|) with random g; alternative-independent.
    Signature,
    /// Random symmetric table, off-diagonal values in [low, high].
    Table,
};

struct RandomMetricOptions {
    MetricFamily family = MetricFamily::Table;
    /// Values are drawn from low + (high - low) * j / steps, j = 0..steps.
    /// With high <= 2 * low every draw is a metric.
    Rational low = 1;
    Rational high = 2;
    unsigned steps = 4;
    /// Signature family: g is non-increasing in |X ∩ Y| for fixed |X|, |Y|
    /// (a natural metric); strictly decreasing when `strict` is set.
    bool monotone_in_overlap = false;
    bool strict = false;
    /// Table family: start from this metric rescaled into [1, 2] and redraw
    /// each entry with probability perturb_percent / 100.
    std::optional<MetricKind> base;
    unsigned perturb_percent = 100;
    unsigned max_retries = 200;
};

/// Seeded random metric; the axioms are verified before return. Throws
/// Error(GenerationFailed) when every retry fails the axiom check.
DistanceMetric random_metric(std::size_t m, const RandomMetricOptions& options, std::uint64_t seed,
                             const Limits& limits = {});

}  // namespace abcc
