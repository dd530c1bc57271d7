#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abcc {

/// Bit-indexed sets cap the universe at 64 alternatives.
inline constexpr std::size_t kMaxAlternatives = 64;

/// Enumeration caps for the exact (exhaustive) code paths. Sampling paths
/// do not consult these.
struct Limits {
    std::size_t max_exact_m = 16;
    std::uint64_t max_committees = 100000;
};

/// Throws Error(CapExceeded) when m is above limits.max_exact_m.
void require_exact_m(std::size_t m, const Limits& limits);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// A subset of the universe {0, ..., m-1}, one bit per alternative.
class AlternativeSet {
public:
    using Bits = std::uint64_t;

    constexpr AlternativeSet() = default;
    constexpr explicit AlternativeSet(Bits bits) : bits_(bits) {}

    static AlternativeSet of(std::initializer_list<std::size_t> members);
    static AlternativeSet of(const std::vector<std::size_t>& members);
    /// {0, ..., m-1}
    static AlternativeSet full(std::size_t m);

    constexpr Bits bits() const { return bits_; }
    constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool empty() const { return bits_ == 0; }
    /// True when every member index is below m.
    constexpr bool within(std::size_t m) const {
        return m >= kMaxAlternatives || (bits_ >> m) == 0;
    }

    constexpr AlternativeSet with(std::size_t i) const { return AlternativeSet(bits_ | (Bits{1} << i)); }
    constexpr AlternativeSet without(std::size_t i) const { return AlternativeSet(bits_ & ~(Bits{1} << i)); }

    std::vector<std::size_t> indices() const;

    friend constexpr AlternativeSet operator&(AlternativeSet a, AlternativeSet b) { return AlternativeSet(a.bits_ & b.bits_); }
    friend constexpr AlternativeSet operator|(AlternativeSet a, AlternativeSet b) { return AlternativeSet(a.bits_ | b.bits_); }
    /// Set difference.
    friend constexpr AlternativeSet operator-(AlternativeSet a, AlternativeSet b) { return AlternativeSet(a.bits_ & ~b.bits_); }

    friend constexpr bool operator==(AlternativeSet, AlternativeSet) = default;
    friend constexpr auto operator<=>(AlternativeSet, AlternativeSet) = default;

private:
    Bits bits_ = 0;
};

inline std::size_t overlap(AlternativeSet a, AlternativeSet b) { return (a & b).size(); }

/// The alternatives. Labels exist for I/O only; all logic works on indices.
class Universe {
public:
    /// Default labels a, b, c, ... (a26, a27, ... past z).
    explicit Universe(std::size_t m);
    explicit Universe(std::vector<std::string> names);

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index_of(std::string_view label) const;

    /// Labels to a set. Throws Error(Parse) on unknown or repeated labels.
    AlternativeSet set_of(const std::vector<std::string>& labels) const;
    /// Comma-separated labels to a set; blank text is the empty set.
    AlternativeSet parse_set(std::string_view csv) const;

    std::vector<std::string> labels(AlternativeSet s) const;
    std::string format(AlternativeSet s) const;

    friend bool operator==(const Universe&, const Universe&) = default;

private:
    std::vector<std::string> names_;
};

std::string default_label(std::size_t i);

/// A set of exactly k alternatives.
class Committee {
public:
    /// Throws Error(SizeMismatch) unless |set| == k.
    Committee(AlternativeSet set, std::size_t k);
    explicit Committee(AlternativeSet set) : set_(set) {}

    AlternativeSet set() const { return set_; }
    std::size_t size() const { return set_.size(); }

    friend bool operator==(const Committee&, const Committee&) = default;
    friend auto operator<=>(const Committee&, const Committee&) = default;

private:
    AlternativeSet set_;
};

struct Profile {
    std::vector<AlternativeSet> votes;

    std::size_t size() const { return votes.size(); }
    friend bool operator==(const Profile&, const Profile&) = default;
};

/// X_{m,k}: every (|U ∩ S|, |S|) reachable with |U| = k inside m alternatives.
class FeasiblePairDomain {
public:
    FeasiblePairDomain(std::size_t m, std::size_t k);

    std::size_t m() const { return m_; }
    std::size_t k() const { return k_; }
    /// Ordered by y, then x.
    const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }
    std::size_t x_min(std::size_t y) const;
    std::size_t x_max(std::size_t y) const;
    bool contains(std::size_t x, std::size_t y) const;

private:
    std::size_t m_;
    std::size_t k_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Throws Error(BadK) unless 0 < k <= m.
FeasiblePairDomain feasible_pairs(std::size_t m, std::size_t k);

/// All 2^m subsets in ascending bit order.
std::vector<AlternativeSet> enumerate_subsets(std::size_t m, const Limits& limits = {});

/// All C(m, k) committees in lexicographic order of their index lists.
std::vector<Committee> enumerate_committees(std::size_t m, std::size_t k, const Limits& limits = {});

}  // namespace abcc
