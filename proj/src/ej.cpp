#include "ejnet/ej.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ejnet {

namespace {

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("EJ coordinate overflow");
    return r;
}
i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("EJ coordinate overflow");
    return r;
}
i64 checked_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("EJ coordinate overflow");
    return r;
}

constexpr std::array<EJInt, 6> kUnits{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

// round(p/q) with ties away from zero, q > 0
i64 div_round(i64 p, i64 q) {
    i64 d = p / q, r = p % q;
    if (2 * std::llabs(r) >= q) d += (p < 0) ? -1 : 1;
    return d;
}

}  // namespace

EJInt operator+(EJInt u, EJInt v) { return {checked_add(u.x, v.x), checked_add(u.y, v.y)}; }
EJInt operator-(EJInt u, EJInt v) { return {checked_sub(u.x, v.x), checked_sub(u.y, v.y)}; }
EJInt operator-(EJInt u) { return {checked_sub(0, u.x), checked_sub(0, u.y)}; }
EJInt operator*(EJInt u, EJInt v) {
    i64 yy = checked_mul(u.y, v.y);
    return {checked_sub(checked_mul(u.x, v.x), yy),
            checked_add(checked_add(checked_mul(u.x, v.y), checked_mul(u.y, v.x)), yy)};
}

EJInt add(EJInt u, EJInt v) { return u + v; }
EJInt sub(EJInt u, EJInt v) { return u - v; }
EJInt neg(EJInt u) { return -u; }
EJInt mul(EJInt u, EJInt v) { return u * v; }

EJInt conj(EJInt v) { return {checked_add(v.x, v.y), checked_sub(0, v.y)}; }

i64 norm(EJInt v) {
    return checked_add(checked_add(checked_mul(v.x, v.x), checked_mul(v.y, v.y)), checked_mul(v.x, v.y));
}

i64 weight(EJInt v) {
    i64 ax = std::llabs(v.x), ay = std::llabs(v.y);
    if ((v.x >= 0 && v.y >= 0) || (v.x <= 0 && v.y <= 0)) return ax + ay;
    return ax > ay ? ax : ay;
}

EJInt unit_pow(int m) { return kUnits[static_cast<size_t>(((m % 6) + 6) % 6)]; }

std::string_view dir_name(Direction d) {
    static constexpr std::array<std::string_view, 6> names{"1", "rho", "rho^2", "-1", "-rho", "-rho^2"};
    return names[static_cast<size_t>(d.m)];
}

std::optional<Direction> parse_dir(std::string_view s) {
    for (int m = 0; m < 6; ++m)
        if (dir_name(Direction(m)) == s) return Direction(m);
    if (s == "+1") return Direction(0);
    if (s.size() == 1 && s[0] >= '0' && s[0] <= '5') return Direction(s[0] - '0');
    return std::nullopt;
}

Generator Generator::dense(i64 a) {
    if (a < 1) throw std::invalid_argument("generator needs a >= 1");
    if (a > 1000000) throw std::invalid_argument("generator too large");
    Generator g;
    g.a = a;
    g.b = a + 1;
    g.k = a;
    g.norm = 3 * a * a + 3 * a + 1;
    return g;
}

EJInt reduce(EJInt v, const Generator& g) {
    if (weight(v) <= g.k) return v;
    const EJInt alpha = g.alpha();
    // rough quotient v/alpha = v * conj(alpha) / N, rounded per coordinate
    EJInt p = v * conj(alpha);
    EJInt q{div_round(p.x, g.norm), div_round(p.y, g.norm)};
    EJInt r = v - q * alpha;
    // finish greedily: step to the rotated generator that lowers weight most
    for (int guard = 0; weight(r) > g.k; ++guard) {
        if (guard > 64) throw std::logic_error("reduce did not converge");
        i64 best = weight(r);
        EJInt next = r;
        for (int m = 0; m < 6; ++m) {
            EJInt c = r - unit_pow(m) * alpha;
            if (weight(c) < best) {
                best = weight(c);
                next = c;
            }
        }
        if (next == r) throw std::logic_error("reduce stuck: residue not unique");
        r = next;
    }
    return r;
}

bool congruent(EJInt u, EJInt v, const Generator& g) { return reduce(u - v, g) == EJInt{0, 0}; }

bool is_canonical(EJInt v, const Generator& g) { return weight(v) <= g.k; }

std::optional<EJInt> parse_ej(std::string_view s) {
    std::vector<i64> parts;
    size_t pos = 0;
    while (true) {
        size_t comma = s.find(',', pos);
        std::string_view tok = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
        i64 val = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), val);
        if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
        parts.push_back(val);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (parts.size() == 2) return EJInt{parts[0], parts[1]};
    if (parts.size() == 3) return EJInt{parts[0], parts[1]} + EJInt{parts[2], 0} * unit_pow(2);
    return std::nullopt;
}

std::string to_string(EJInt v) { return std::to_string(v.x) + "," + std::to_string(v.y); }

std::string pretty(EJInt v) {
    if (v.y == 0) return std::to_string(v.x);
    std::string out;
    if (v.x != 0) out = std::to_string(v.x);
    if (v.y < 0) out += "-";
    else if (v.x != 0) out += "+";
    if (std::llabs(v.y) != 1) out += std::to_string(std::llabs(v.y));
    out += "rho";
    return out;
}

std::ostream& operator<<(std::ostream& os, EJInt v) { return os << pretty(v); }

}  // namespace ejnet
