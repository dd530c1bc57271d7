#pragma once

#include "abcc/core.hpp"
#include "abcc/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abcc {

/// An approval-based counting choice rule: a committee U earns f(|U ∩ S|, |S|)
/// from each vote S. The score table is total on X_{m,k}, non-negative, and
/// non-decreasing in x for fixed y.
class AbccRule {
public:
    using Table = std::map<std::pair<std::size_t, std::size_t>, Rational>;

    /// Validates totality, non-negativity and monotonicity; throws Error(BadParams).
    AbccRule(std::string name, std::size_t m, std::size_t k, const Table& table);

    const std::string& name() const { return name_; }
    std::size_t m() const { return domain_.m(); }
    std::size_t k() const { return domain_.k(); }
    const FeasiblePairDomain& domain() const { return domain_; }

    /// f(x, y). Throws Error(DomainMismatch) outside X_{m,k}.
    const Rational& operator()(std::size_t x, std::size_t y) const;

    /// Unchecked lookup for hot loops; (x, y) must be feasible.
    const Rational& at(std::size_t x, std::size_t y) const { return dense_[y * (k() + 1) + x]; }

    Table table() const;

private:
    std::string name_;
    FeasiblePairDomain domain_;
    std::vector<Rational> dense_;
};

AbccRule make_av(std::size_t m, std::size_t k);
AbccRule make_cc(std::size_t m, std::size_t k);
AbccRule make_pav(std::size_t m, std::size_t k);
AbccRule make_sav(std::size_t m, std::size_t k);
AbccRule make_mc(std::size_t m, std::size_t k);
/// f(x, y) = w_1 + ... + w_x. Needs k non-negative weights.
AbccRule make_thiele(std::size_t m, std::size_t k, const std::vector<Rational>& weights, std::string name = "thiele");
/// Thiele with w_j = p^j, p > 0.
AbccRule make_p_geometric(std::size_t m, std::size_t k, const Rational& p);
/// Thiele with w_j = 1 / (2j - 1).
AbccRule make_sainte_lague(std::size_t m, std::size_t k);
/// m = 4, k = 2 only: f(x, 2) = x and zero for every other vote size.
AbccRule make_pairs_only_av();
/// m = 4, k = 2 only: AV with votes of size 2 counted twice.
AbccRule make_pairs_doubled_av();

/// Rule from an identifier: av, cc, pav, sav, mc, sainte_lague, pairs_only_av,
/// pairs_doubled_av, thiele:w1,w2,..., p_geometric:p. Throws Error(BadParams).
AbccRule make_rule(std::string_view id, std::size_t m, std::size_t k);

/// Identifiers of the built-in catalog valid at (m, k).
std::vector<std::string> catalog_rule_ids(std::size_t m, std::size_t k);

struct ScoreBreakdown {
    Committee committee;
    Rational total;
    std::vector<Rational> per_vote;
};

/// table[(|U ∩ S|, |S|)]. Throws Error(DomainMismatch) on size or universe mismatch.
Rational vote_score(const AbccRule& rule, const Committee& committee, AlternativeSet vote);

ScoreBreakdown profile_score(const AbccRule& rule, const Committee& committee, const Profile& profile);

/// Every committee with maximum total score; ties are kept.
std::vector<Committee> winners(const AbccRule& rule, const Profile& profile, const Limits& limits = {});

struct NontrivialityResult {
    bool value = false;
    /// On failure, a pair (U, V) for which no vote S gives U strictly more than V.
    std::optional<std::pair<Committee, Committee>> witness;
};

/// Non-trivial: every ordered pair of distinct committees (U, V) is separated
/// by some vote S with sc(U, S) > sc(V, S).
NontrivialityResult is_nontrivial(const AbccRule& rule, const Limits& limits = {});

struct TopJump {
    bool value = false;
    /// m == k, so (k-1, k) is infeasible and the answer is true by convention.
    bool vacuous = false;
};

/// f(k, k) > f(k-1, k).
TopJump has_top_jump(const AbccRule& rule);

}  // namespace abcc
