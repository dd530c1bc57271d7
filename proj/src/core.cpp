#include "abcc/core.hpp"

#include "abcc/errors.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

namespace abcc {

void require_exact_m(std::size_t m, const Limits& limits) {
    if (m > limits.max_exact_m) {
        throw Error(ErrorCode::CapExceeded, "m=" + std::to_string(m) + " exceeds the exact enumeration cap of " +
                                                std::to_string(limits.max_exact_m));
    }
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(result);
}

AlternativeSet AlternativeSet::of(std::initializer_list<std::size_t> members) {
    return of(std::vector<std::size_t>(members));
}

AlternativeSet AlternativeSet::of(const std::vector<std::size_t>& members) {
    Bits bits = 0;
    for (std::size_t i : members) {
        if (i >= kMaxAlternatives) throw Error(ErrorCode::DomainMismatch, "alternative index out of range");
        bits |= Bits{1} << i;
    }
    return AlternativeSet(bits);
}

AlternativeSet AlternativeSet::full(std::size_t m) {
    if (m >= kMaxAlternatives) return AlternativeSet(~Bits{0});
    return AlternativeSet((Bits{1} << m) - 1);
}

std::vector<std::size_t> AlternativeSet::indices() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (Bits b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
}

std::string default_label(std::size_t i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "a" + std::to_string(i);
}

Universe::Universe(std::size_t m) {
    if (m > kMaxAlternatives) throw Error(ErrorCode::CapExceeded, "at most 64 alternatives are supported");
    names_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) names_.push_back(default_label(i));
}

Universe::Universe(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() > kMaxAlternatives) throw Error(ErrorCode::CapExceeded, "at most 64 alternatives are supported");
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw Error(ErrorCode::Parse, "empty alternative label");
        for (char c : n) {
            if (c == ',' || c == '#' || std::isspace(static_cast<unsigned char>(c))) {
                throw Error(ErrorCode::Parse, "alternative label '" + n + "' contains a reserved character");
            }
        }
        if (!seen.insert(n).second) throw Error(ErrorCode::Parse, "duplicate alternative label '" + n + "'");
    }
}

std::optional<std::size_t> Universe::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == label) return i;
    }
    return std::nullopt;
}

AlternativeSet Universe::set_of(const std::vector<std::string>& labels) const {
    AlternativeSet s;
    for (const auto& l : labels) {
        auto idx = index_of(l);
        if (!idx) throw Error(ErrorCode::Parse, "unknown alternative '" + l + "'");
        if (s.contains(*idx)) throw Error(ErrorCode::Parse, "alternative '" + l + "' listed twice");
        s = s.with(*idx);
    }
    return s;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

AlternativeSet Universe::parse_set(std::string_view csv) const {
    csv = trim(csv);
    if (csv.empty()) return {};
    std::vector<std::string> labels;
    std::size_t start = 0;
    for (;;) {
        const auto comma = csv.find(',', start);
        const auto piece = trim(csv.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (piece.empty()) throw Error(ErrorCode::Parse, "empty label in '" + std::string(csv) + "'");
        labels.emplace_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return set_of(labels);
}

std::vector<std::string> Universe::labels(AlternativeSet s) const {
    std::vector<std::string> out;
    for (std::size_t i : s.indices()) out.push_back(name(i));
    return out;
}

std::string Universe::format(AlternativeSet s) const {
    std::string out;
    for (std::size_t i : s.indices()) {
        if (!out.empty()) out += ',';
        out += name(i);
    }
    return out;
}

Committee::Committee(AlternativeSet set, std::size_t k) : set_(set) {
    if (set.size() != k) {
        throw Error(ErrorCode::SizeMismatch,
                    "committee has " + std::to_string(set.size()) + " members, expected " + std::to_string(k));
    }
}

FeasiblePairDomain::FeasiblePairDomain(std::size_t m, std::size_t k) : m_(m), k_(k) {
    if (k == 0 || k > m) {
        throw Error(ErrorCode::BadK, "committee size k=" + std::to_string(k) + " must satisfy 0 < k <= m=" + std::to_string(m));
    }
    for (std::size_t y = 0; y <= m; ++y) {
        for (std::size_t x = x_min(y); x <= x_max(y); ++x) pairs_.emplace_back(x, y);
    }
}

std::size_t FeasiblePairDomain::x_min(std::size_t y) const { return k_ + y > m_ ? k_ + y - m_ : 0; }

std::size_t FeasiblePairDomain::x_max(std::size_t y) const { return std::min(y, k_); }

bool FeasiblePairDomain::contains(std::size_t x, std::size_t y) const {
    return y <= m_ && x >= x_min(y) && x <= x_max(y);
}

FeasiblePairDomain feasible_pairs(std::size_t m, std::size_t k) { return FeasiblePairDomain(m, k); }

std::vector<AlternativeSet> enumerate_subsets(std::size_t m, const Limits& limits) {
    require_exact_m(m, limits);
    const AlternativeSet::Bits count = AlternativeSet::Bits{1} << m;
    std::vector<AlternativeSet> out;
    out.reserve(count);
    for (AlternativeSet::Bits b = 0; b < count; ++b) out.emplace_back(b);
    return out;
}

std::vector<Committee> enumerate_committees(std::size_t m, std::size_t k, const Limits& limits) {
    if (k == 0 || k > m) {
        throw Error(ErrorCode::BadK, "committee size k=" + std::to_string(k) + " must satisfy 0 < k <= m=" + std::to_string(m));
    }
    if (m > kMaxAlternatives) throw Error(ErrorCode::CapExceeded, "at most 64 alternatives are supported");
    const std::uint64_t count = binomial(m, k);
    if (count > limits.max_committees) {
        throw Error(ErrorCode::CapExceeded, "C(" + std::to_string(m) + "," + std::to_string(k) + ")=" +
                                                std::to_string(count) + " exceeds the committee cap of " +
                                                std::to_string(limits.max_committees));
    }
    std::vector<Committee> out;
    out.reserve(count);
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        out.emplace_back(AlternativeSet::of(idx));
        // Advance to the next combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == m - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

}  // namespace abcc
