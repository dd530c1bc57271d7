#include "abcc/rng.hpp"

#include <limits>

namespace abcc {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    // Largest multiple of bound representable; reject the tail.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

BigInt Rng::below(const BigInt& bound) {
    if (bound <= 1) return BigInt(0);
    const BigInt top = bound - 1;
    const std::size_t bits = boost::multiprecision::msb(top) + 1;
    const std::size_t words = (bits + 63) / 64;
    const std::size_t spare = words * 64 - bits;
    for (;;) {
        BigInt x = 0;
        for (std::size_t w = 0; w < words; ++w) {
            x <<= 64;
            std::uint64_t chunk = engine_();
            if (w == 0 && spare > 0) chunk >>= spare;
            x += chunk;
        }
        if (x < bound) return x;
    }
}

bool Rng::bernoulli(const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    const BigInt num = numerator_of(p);
    const BigInt den = denominator_of(p);
    if (den <= std::numeric_limits<std::uint64_t>::max()) {
        return below(den.convert_to<std::uint64_t>()) < num.convert_to<std::uint64_t>();
    }
    return below(den) < num;
}

}  // namespace abcc
