#pragma once

#include "abcc/core.hpp"
#include "abcc/metrics.hpp"
#include "abcc/noise.hpp"
#include "abcc/oracle.hpp"
#include "abcc/rules.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace abcc {

struct TrialRates {
    std::uint64_t trials = 0;
    std::uint64_t recovered = 0;
    std::uint64_t tied = 0;
    std::uint64_t wrong = 0;

    double recovery_rate() const { return trials ? static_cast<double>(recovered) / static_cast<double>(trials) : 0.0; }
    double tie_rate() const { return trials ? static_cast<double>(tied) / static_cast<double>(trials) : 0.0; }
    double wrong_rate() const { return trials ? static_cast<double>(wrong) / static_cast<double>(trials) : 0.0; }
};

/// Samples `trials` profiles of n votes and classifies each outcome:
/// recovered (ground truth is the unique winner), tied (ground truth shares
/// the top score) or wrong (ground truth is not a winner). Trial i draws from
/// derive_seed(seed, i), so results do not depend on `threads`.
TrialRates accuracy_trial(const AbccRule& rule, const NoiseModel& model, std::size_t n, std::uint64_t trials,
                          std::uint64_t seed, unsigned threads = 1, const Limits& limits = {});

struct TrialConfig {
    AbccRule rule;
    NoiseModel model;
    std::vector<std::size_t> n_grid = {10, 30, 100, 300, 1000};
    std::uint64_t trials = 200;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct CurveRow {
    std::size_t n = 0;
    TrialRates rates;
};

struct ConvergenceCurve {
    std::string rule;
    std::string model;
    std::uint64_t seed = 0;
    std::vector<CurveRow> rows;
    /// Recovery rate never decreases along the grid. Informational only.
    bool monotone_recovery = true;
};

/// One accuracy_trial per grid point; grid point i uses derive_seed(seed, i).
/// Throws Error(BadParams) on an empty grid, n = 0 or zero trials.
ConvergenceCurve convergence_curve(const TrialConfig& config, const Limits& limits = {});

/// Short description such as "mp(p=3/4)" or "level(metric=jaccard)".
std::string describe_model(const NoiseModel& model);

struct MleResult {
    /// Committees of minimum total symmetric difference to the votes.
    std::vector<Committee> by_likelihood;
    /// AV winners.
    std::vector<Committee> by_av;
    std::uint64_t min_total_distance = 0;
};

/// Maximum-likelihood committees under the product model computed two ways.
/// Throws Error(BadP) unless 1/2 < p <= 1.
MleResult mle_committees(const Profile& profile, const Rational& p, std::size_t m, std::size_t k, const Limits& limits = {});

struct RuleRow {
    std::string rule;
    bool nontrivial = false;
    bool top_jump = false;
    bool top_jump_vacuous = false;
};

struct HierarchyReport {
    std::size_t m = 0;
    std::size_t k = 0;
    std::vector<RuleRow> rules;
    std::vector<TaxonomyReport> metrics;
    /// statuses[r][c] for rule r under metric c.
    std::vector<std::vector<RobustnessStatus>> statuses;
};

HierarchyReport hierarchy_report(const std::vector<AbccRule>& rules, const std::vector<DistanceMetric>& metrics,
                                 std::size_t m, std::size_t k, const Limits& limits = {});

/// n,trials,recovered,tied,wrong,recovery_rate,tie_rate,wrong_rate
std::string curve_csv(const ConvergenceCurve& curve);
/// rule,metric,status
std::string hierarchy_csv(const HierarchyReport& report);

}  // namespace abcc
