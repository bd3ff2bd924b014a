#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace qcover {

// a + b*sqrt(2) with integer a, b. Exact; sign is decided without floating point.
struct ZSqrt2 {
    std::int64_t a = 0;
    std::int64_t b = 0;

    constexpr ZSqrt2() = default;
    constexpr ZSqrt2(std::int64_t a_, std::int64_t b_ = 0) : a(a_), b(b_) {}

    static constexpr ZSqrt2 sqrt2() { return {0, 1}; }

    constexpr bool is_zero() const { return a == 0 && b == 0; }

    constexpr int sign() const {
        if (a >= 0 && b >= 0) return is_zero() ? 0 : 1;
        if (a <= 0 && b <= 0) return -1;
        // Opposite signs: compare a^2 with 2 b^2.
        const std::int64_t lhs = a * a, rhs = 2 * b * b;
        if (lhs == rhs) return 0;  // unreachable for integers: sqrt(2) is irrational
        return (a > 0) == (lhs > rhs) ? 1 : -1;
    }

    constexpr double to_double() const { return static_cast<double>(a) + static_cast<double>(b) * 1.4142135623730951; }

    friend constexpr ZSqrt2 operator+(ZSqrt2 x, ZSqrt2 y) { return {x.a + y.a, x.b + y.b}; }
    friend constexpr ZSqrt2 operator-(ZSqrt2 x, ZSqrt2 y) { return {x.a - y.a, x.b - y.b}; }
    friend constexpr ZSqrt2 operator-(ZSqrt2 x) { return {-x.a, -x.b}; }
    friend constexpr ZSqrt2 operator*(ZSqrt2 x, ZSqrt2 y) {
        return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
    }
    friend constexpr bool operator==(ZSqrt2, ZSqrt2) = default;
    friend constexpr auto operator<=>(ZSqrt2, ZSqrt2) = default;  // lexicographic on (a, b), for ordering only

    std::string to_string() const;
};

}  // namespace qcover
