#include "abcc/experiments.hpp"

#include "abcc/errors.hpp"
#include "abcc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

namespace abcc {

namespace {

enum class Outcome { Recovered, Tied, Wrong };

Outcome classify(const std::vector<Committee>& won, const Committee& ground) {
    const bool present = std::find(won.begin(), won.end(), ground) != won.end();
    if (!present) return Outcome::Wrong;
    return won.size() == 1 ? Outcome::Recovered : Outcome::Tied;
}

}  // namespace

TrialRates accuracy_trial(const AbccRule& rule, const NoiseModel& model, std::size_t n, std::uint64_t trials,
                          std::uint64_t seed, unsigned threads, const Limits& limits) {
    if (model.m() != rule.m() || model.ground().size() != rule.k()) {
        throw Error(ErrorCode::DomainMismatch, "model does not match rule '" + rule.name() + "'");
    }
    if (binomial(rule.m(), rule.k()) > limits.max_committees) {
        throw Error(ErrorCode::CapExceeded, "C(m, k) exceeds the committee cap");
    }
    // Touch the caps once up front so worker threads never throw on them.
    if (!model.is_product()) require_exact_m(model.m(), limits);

    std::atomic<std::uint64_t> recovered{0}, tied{0}, wrong{0};
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
        for (std::uint64_t i = next++; i < trials; i = next++) {
            const Profile profile = sample_profile(model, n, derive_seed(seed, i), limits);
            switch (classify(winners(rule, profile, limits), model.ground())) {
                case Outcome::Recovered: ++recovered; break;
                case Outcome::Tied: ++tied; break;
                case Outcome::Wrong: ++wrong; break;
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(trials, 1))));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return TrialRates{trials, recovered.load(), tied.load(), wrong.load()};
}

std::string describe_model(const NoiseModel& model) {
    if (model.is_product()) return "mp(p=" + to_string(model.p()) + ")";
    return "level(metric=" + model.metric().name() + ")";
}

ConvergenceCurve convergence_curve(const TrialConfig& config, const Limits& limits) {
    if (config.n_grid.empty()) throw Error(ErrorCode::BadParams, "n_grid is empty");
    if (config.trials == 0) throw Error(ErrorCode::BadParams, "trials must be at least 1");
    for (std::size_t n : config.n_grid) {
        if (n == 0) throw Error(ErrorCode::BadParams, "grid sizes must be at least 1");
    }
    ConvergenceCurve curve{config.rule.name(), describe_model(config.model), config.seed, {}, true};
    for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
        const std::size_t n = config.n_grid[i];
        TrialRates rates = accuracy_trial(config.rule, config.model, n, config.trials, derive_seed(config.seed, i),
                                          config.threads, limits);
        if (!curve.rows.empty() && rates.recovered < curve.rows.back().rates.recovered) curve.monotone_recovery = false;
        curve.rows.push_back({n, rates});
    }
    return curve;
}

MleResult mle_committees(const Profile& profile, const Rational& p, std::size_t m, std::size_t k, const Limits& limits) {
    if (!(p > Rational(1, 2) && p <= 1)) throw Error(ErrorCode::BadP, "p must lie in (1/2, 1], got " + to_string(p));
    const auto committees = enumerate_committees(m, k, limits);
    for (AlternativeSet vote : profile.votes) {
        if (!vote.within(m)) throw Error(ErrorCode::DomainMismatch, "vote outside the universe");
    }

    // Pr[profile | U] = p^(nm - D) (1 - p)^D with D the total symmetric
    // difference, so for p > 1/2 the likeliest committees minimize D.
    MleResult out;
    bool first = true;
    for (const Committee& u : committees) {
        std::uint64_t total = 0;
        for (AlternativeSet vote : profile.votes) {
            total += ((u.set() - vote) | (vote - u.set())).size();
        }
        if (first || total < out.min_total_distance) {
            out.min_total_distance = total;
            out.by_likelihood.clear();
            first = false;
        }
        if (total == out.min_total_distance) out.by_likelihood.push_back(u);
    }
    out.by_av = winners(make_av(m, k), profile, limits);
    return out;
}

HierarchyReport hierarchy_report(const std::vector<AbccRule>& rules, const std::vector<DistanceMetric>& metrics,
                                 std::size_t m, std::size_t k, const Limits& limits) {
    HierarchyReport report;
    report.m = m;
    report.k = k;
    for (const auto& d : metrics) {
        if (d.m() != m) throw Error(ErrorCode::DomainMismatch, "metric '" + d.name() + "' has a different universe");
        report.metrics.push_back(taxonomy(d, k, limits));
    }
    for (const auto& rule : rules) {
        if (rule.m() != m || rule.k() != k) throw Error(ErrorCode::DomainMismatch, "rule '" + rule.name() + "' has different (m, k)");
        const TopJump jump = has_top_jump(rule);
        report.rules.push_back({rule.name(), is_nontrivial(rule, limits).value, jump.value, jump.vacuous});
        std::vector<RobustnessStatus> row;
        for (const auto& d : metrics) row.push_back(robustness_verdict(rule, d, limits).status);
        report.statuses.push_back(std::move(row));
    }
    return report;
}

std::string curve_csv(const ConvergenceCurve& curve) {
    std::ostringstream out;
    out << "n,trials,recovered,tied,wrong,recovery_rate,tie_rate,wrong_rate\n";
    char buffer[128];
    for (const auto& row : curve.rows) {
        const auto& r = row.rates;
        std::snprintf(buffer, sizeof buffer, "%.6f,%.6f,%.6f", r.recovery_rate(), r.tie_rate(), r.wrong_rate());
        out << row.n << ',' << r.trials << ',' << r.recovered << ',' << r.tied << ',' << r.wrong << ',' << buffer << '\n';
    }
    return out.str();
}

std::string hierarchy_csv(const HierarchyReport& report) {
    std::ostringstream out;
    out << "rule,metric,status\n";
    for (std::size_t r = 0; r < report.rules.size(); ++r) {
        for (std::size_t c = 0; c < report.metrics.size(); ++c) {
            out << report.rules[r].rule << ',' << report.metrics[c].metric << ',' << status_name(report.statuses[r][c]) << '\n';
        }
    }
    return out.str();
}

}  // namespace abcc
