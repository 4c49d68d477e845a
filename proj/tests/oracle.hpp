#pragma once

// Brute-force reference implementations.  Deliberately naive and independent of the
// library's fast paths: residues via the Z/N isomorphism, paths via EJInt parent walks
// with std::set bookkeeping.

#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "ejnet/spantree.hpp"

namespace oracle {

using ejnet::EJInt;
using ejnet::i64;

inline i64 mod(i64 v, i64 n) { return ((v % n) + n) % n; }

// Z[rho]/alpha ~ Z/N with rho -> -a * b^-1 (mod N), valid because gcd(b, N) = 1.
struct Residues {
    i64 a, b, n, r;
    std::map<i64, EJInt> rep;  // image -> minimal-weight representative

    explicit Residues(i64 a_) : a(a_), b(a_ + 1), n(3 * a_ * a_ + 3 * a_ + 1) {
        i64 binv = 0;
        for (i64 t = 1; t < n; ++t)
            if (mod(b * t, n) == 1) binv = t;
        r = mod(-a * binv, n);
        for (i64 x = -2 * a; x <= 2 * a; ++x)
            for (i64 y = -2 * a; y <= 2 * a; ++y) {
                EJInt v{x, y};
                i64 w = ejnet::weight(v);
                auto [it, fresh] = rep.emplace(image(v), v);
                if (!fresh && w < ejnet::weight(it->second)) it->second = v;
            }
    }
    i64 image(EJInt v) const { return mod(mod(v.x, n) + mod(v.y, n) * r % n, n); }
    EJInt reduce(EJInt v) const { return rep.at(image(v)); }
};

inline std::vector<EJInt> walk(const ejnet::SpanningTree& t, EJInt v) {
    const auto& net = *t.net;
    std::vector<EJInt> path{v};
    ejnet::NodeId cur = net.id(v);
    for (int guard = 0; cur != 0 && guard <= net.size(); ++guard) {
        cur = t.parent.at(static_cast<size_t>(cur));
        if (cur == ejnet::kNoNode) return {};
        path.push_back(net.addr(cur));
    }
    if (cur != 0) return {};
    return {path.rbegin(), path.rend()};
}

inline bool spanning(const ejnet::SpanningTree& t) {
    for (EJInt v : t.net->nodes())
        if (walk(t, v).empty()) return false;
    return true;
}

// Number of (v, t1, t2) triples whose root-v paths share an internal node.
inline std::size_t independence_violations(const std::vector<ejnet::SpanningTree>& trees) {
    std::size_t bad = 0;
    for (EJInt v : trees.front().net->nodes()) {
        if (v == EJInt{0, 0}) continue;
        std::vector<std::set<EJInt>> inner;
        for (const auto& t : trees) {
            auto p = walk(t, v);
            inner.emplace_back(p.begin() + 1, p.end() - 1);
        }
        for (size_t i = 0; i < inner.size(); ++i)
            for (size_t j = i + 1; j < inner.size(); ++j)
                for (EJInt u : inner[i])
                    if (inner[j].count(u)) {
                        ++bad;
                        break;
                    }
    }
    return bad;
}

// Edges (undirected, or child->parent when directed) used by more than one tree.
inline std::size_t shared_edges(const std::vector<ejnet::SpanningTree>& trees, bool directed) {
    std::map<std::pair<EJInt, EJInt>, int> used;
    for (const auto& t : trees) {
        const auto& net = *t.net;
        for (ejnet::NodeId v = 1; v < net.size(); ++v) {
            EJInt c = net.addr(v), p = net.addr(t.parent[static_cast<size_t>(v)]);
            auto e = directed ? std::make_pair(c, p) : std::make_pair(std::min(c, p), std::max(c, p));
            ++used[e];
        }
    }
    std::size_t bad = 0;
    for (auto& [e, n] : used) bad += n > 1 ? 1 : 0;
    return bad;
}

inline int depth(const ejnet::SpanningTree& t) {
    int d = 0;
    for (EJInt v : t.net->nodes()) d = std::max(d, static_cast<int>(walk(t, v).size()) - 1);
    return d;
}

// 1 + max over live v of min tree depth avoiding faults; unreachable counted and skipped.
inline int metric(const std::vector<ejnet::SpanningTree>& trees, const std::set<EJInt>& faults, int* unreachable = nullptr) {
    int worst = 0, lost = 0;
    for (EJInt v : trees.front().net->nodes()) {
        if (v == EJInt{0, 0} || faults.count(v)) continue;
        int best = -1;
        for (const auto& t : trees) {
            auto p = walk(t, v);
            bool ok = true;
            for (EJInt u : p)
                if (faults.count(u)) ok = false;
            int d = static_cast<int>(p.size()) - 1;
            if (ok && (best < 0 || d < best)) best = d;
        }
        if (best < 0) ++lost;
        else worst = std::max(worst, best);
    }
    if (unreachable) *unreachable = lost;
    return worst + 1;
}

}  // namespace oracle
