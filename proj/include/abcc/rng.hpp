#pragma once

#include "abcc/rational.hpp"

#include <cstdint>
#include <random>

namespace abcc {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed of stream `index` under `master`. Distinct indices give unrelated streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seeded generator with exact integer/rational draws. The engine is
/// std::mt19937_64, whose output sequence is fixed by the standard; all
/// bounded draws use rejection sampling so results do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform in [0, bound) for arbitrary-precision bounds.
    BigInt below(const BigInt& bound);

    /// True with exact probability p (p is clamped to [0, 1]).
    bool bernoulli(const Rational& p);

    template <typename It>
    void shuffle(It first, It last) {
        auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            std::swap(first[i - 1], first[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace abcc
