#include "abcc/rational.hpp"

#include "abcc/errors.hpp"

#include <cctype>

namespace abcc {

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

BigInt to_bigint(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return BigInt(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const std::string_view s = trim(text);
    const auto slash = s.find('/');
    const std::string_view num = s.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+') {
        throw Error(ErrorCode::Parse, "not a rational: '" + std::string(text) + "'");
    }
    BigInt d = to_bigint(den);
    if (d == 0) throw Error(ErrorCode::Parse, "zero denominator: '" + std::string(text) + "'");
    return Rational(to_bigint(num), d);
}

std::string to_string(const Rational& value) {
    if (denominator_of(value) == 1) return numerator_of(value).str();
    return numerator_of(value).str() + "/" + denominator_of(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational power(const Rational& base, unsigned exponent) {
    Rational result = 1;
    Rational square = base;
    while (exponent != 0) {
        if (exponent & 1U) result *= square;
        exponent >>= 1;
        if (exponent != 0) square *= square;
    }
    return result;
}

}  // namespace abcc
