#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace ejnet {

using i64 = std::int64_t;

// x + y*rho with rho^2 = rho - 1.  Every address in the library lives in this form.
struct EJInt {
    i64 x = 0;
    i64 y = 0;

    constexpr EJInt() = default;
    constexpr EJInt(i64 x_, i64 y_) : x(x_), y(y_) {}

    friend constexpr bool operator==(const EJInt&, const EJInt&) = default;
    friend constexpr auto operator<=>(const EJInt&, const EJInt&) = default;
};

EJInt operator+(EJInt u, EJInt v);
EJInt operator-(EJInt u, EJInt v);
EJInt operator-(EJInt u);
EJInt operator*(EJInt u, EJInt v);
inline EJInt& operator+=(EJInt& u, EJInt v) { return u = u + v; }
inline EJInt& operator-=(EJInt& u, EJInt v) { return u = u - v; }

EJInt add(EJInt u, EJInt v);
EJInt sub(EJInt u, EJInt v);
EJInt neg(EJInt u);
EJInt mul(EJInt u, EJInt v);

// ρ̄ = 1 - ρ
EJInt conj(EJInt v);

i64 norm(EJInt v);
i64 weight(EJInt v);

// Unit direction rho^m, m in 0..5.
struct Direction {
    int m = 0;

    constexpr Direction() = default;
    constexpr explicit Direction(int e) : m(((e % 6) + 6) % 6) {}

    constexpr Direction operator-() const { return Direction(m + 3); }
    constexpr Direction rotated(int by) const { return Direction(m + by); }

    friend constexpr bool operator==(Direction, Direction) = default;
};

EJInt unit_pow(int m);
inline EJInt unit(Direction d) { return unit_pow(d.m); }

// Short ascii label: 1, rho, rho^2, -1, -rho, -rho^2.
std::string_view dir_name(Direction d);
std::optional<Direction> parse_dir(std::string_view s);

// Dense generator alpha = a + (a+1) rho.
struct Generator {
    i64 a = 1;
    i64 b = 2;
    i64 k = 1;
    i64 norm = 7;

    static Generator dense(i64 a);
    EJInt alpha() const { return {a, b}; }
};

// Minimal-weight representative of v mod alpha.  Unique for dense generators.
EJInt reduce(EJInt v, const Generator& g);
bool congruent(EJInt u, EJInt v, const Generator& g);
bool is_canonical(EJInt v, const Generator& g);

// "x,y" or "x,y,z" (x + y rho + z rho^2), normalized on parse.
std::optional<EJInt> parse_ej(std::string_view s);
std::string to_string(EJInt v);
// Human form, e.g. "3-4ρ" with ascii "rho".
std::string pretty(EJInt v);

std::ostream& operator<<(std::ostream& os, EJInt v);

}  // namespace ejnet

template <>
struct std::hash<ejnet::EJInt> {
    size_t operator()(const ejnet::EJInt& v) const noexcept {
        auto h = static_cast<std::uint64_t>(v.x) * 0x9E3779B97F4A7C15ull;
        h ^= static_cast<std::uint64_t>(v.y) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
        return static_cast<size_t>(h);
    }
};
