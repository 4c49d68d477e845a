#include "ejnet/spantree.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "tables.hpp"

namespace ejnet {

using namespace detail;

std::string_view scheme_name(Scheme s) { return s == Scheme::EDNIST ? "ednist" : "ist"; }

std::optional<Scheme> parse_scheme(std::string_view s) {
    if (s == "ednist" || s == "EDNIST") return Scheme::EDNIST;
    if (s == "ist" || s == "IST") return Scheme::IST;
    return std::nullopt;
}

int tree_count(Scheme s) { return s == Scheme::EDNIST ? 3 : 6; }
int rotation_offset(Scheme s, int t) { return s == Scheme::EDNIST ? 2 * (t - 1) : t - 1; }
i64 expected_depth(Scheme s, i64 k) { return s == Scheme::EDNIST ? 2 * k + 2 : 2 * k + 1; }

std::shared_ptr<const DenseEJ> network(i64 a) {
    static std::mutex mu;
    static std::map<i64, std::shared_ptr<const DenseEJ>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[a];
    if (!slot) slot = std::make_shared<const DenseEJ>(Generator::dense(a));
    return slot;
}

namespace {

struct Sector {
    i64 x, y;
    int d;
};

// v = x rho^(d-1) + y rho^d with x > 0, y >= 0
Sector sector_of(EJInt v) {
    for (int d = 1; d <= 6; ++d) {
        EJInt u = v * unit_pow(7 - d);
        if (u.x > 0 && u.y >= 0) return {u.x, u.y, d};
    }
    throw std::invalid_argument("origin has no sector");
}

int tree1_dir(Scheme s, const Reading& r, const Sector& sc, i64 k) {
    int cls = fine_class(s, sc.x, sc.y, sc.d, k);
    int row = parent_row_of(s, cls);
    const auto& pr = parent_rows(s)[static_cast<size_t>(row)];
    int base = ((r.sector_mask >> row) & 1u) ? sc.d : 1;
    int dir = base + pr.offset;
    if (r.patch >= 0)
        for (const auto& ov : patches(s)[static_cast<size_t>(r.patch)].overrides)
            if (ov.cls == cls && (!ov.corner_only || sc.x == k)) dir = ov.dir;
    return ((dir % 6) + 6) % 6;
}

bool overridden(Scheme s, const Reading& r, const Sector& sc, i64 k) {
    if (r.patch < 0) return false;
    int cls = fine_class(s, sc.x, sc.y, sc.d, k);
    for (const auto& ov : patches(s)[static_cast<size_t>(r.patch)].overrides)
        if (ov.cls == cls && (!ov.corner_only || sc.x == k)) return true;
    return false;
}

PathWord normalize(std::vector<std::pair<Direction, i64>> raw) {
    PathWord w;
    for (auto [d, n] : raw) {
        if (n == 0) continue;
        if (!w.tuples.empty() && w.tuples.back().first == d) w.tuples.back().second += n;
        else w.tuples.emplace_back(d, n);
    }
    return w;
}

std::pair<i64, i64> frame_coords(int frame, EJInt v1, const Sector& sc) {
    switch (frame) {
        case kSector: return {sc.x, sc.y};
        case kRho: return {v1.x, v1.y};
        case kRho2: return {v1.x + v1.y, v1.y};
        default: return {v1.x + v1.y, -v1.y};
    }
}

std::optional<PathWord> table_word(Scheme s, int row, int frame, EJInt v1, const Sector& sc, i64 k) {
    auto [x, y] = frame_coords(frame, v1, sc);
    std::vector<std::pair<Direction, i64>> raw;
    for (const Term& tm : word_rows(s)[static_cast<size_t>(row)].terms) {
        i64 e = tm.c0 + tm.ck * k + tm.cx * x + tm.cy * y + tm.cax * std::llabs(x) + tm.cay * std::llabs(y);
        if (e < 0) return std::nullopt;
        raw.emplace_back(Direction(tm.dir), e);
    }
    return normalize(std::move(raw));
}

PathWord word_from_path(const DenseEJ& net, const std::vector<NodeId>& path) {
    std::vector<std::pair<Direction, i64>> raw;
    for (size_t i = 1; i < path.size(); ++i) raw.emplace_back(Direction(net.direction_to(path[i - 1], path[i])), 1);
    return normalize(std::move(raw));
}

std::vector<EJInt> addrs(const DenseEJ& net, const std::vector<NodeId>& ids) {
    std::vector<EJInt> out;
    out.reserve(ids.size());
    for (NodeId i : ids) out.push_back(net.addr(i));
    return out;
}

SpanningTree empty_tree(const DenseEJ& net, Scheme s, int t) {
    SpanningTree tr;
    tr.scheme = s;
    tr.t = t;
    tr.net = std::shared_ptr<const DenseEJ>(std::shared_ptr<const DenseEJ>{}, &net);
    tr.parent.assign(static_cast<size_t>(net.size()), kNoNode);
    tr.parent_dir.assign(static_cast<size_t>(net.size()), -1);
    return tr;
}

}  // namespace

SectorClass classify(Scheme s, const Generator& g, int t, EJInt v) {
    if (v == EJInt{0, 0}) throw std::invalid_argument("root has no sector class");
    int c = rotation_offset(s, t);
    EJInt v1 = reduce(v * unit_pow(-c), g);
    Sector sc = sector_of(v1);
    SectorClass out;
    out.scheme = s;
    out.cls = fine_class(s, sc.x, sc.y, sc.d, g.k);
    out.label = class_label(s, out.cls);
    out.x = sc.x;
    out.y = sc.y;
    out.d = sc.d;
    out.j = (sc.d - 1 + c) % 6 + 1;
    return out;
}

i64 PathWord::length() const {
    i64 n = 0;
    for (const auto& p : tuples) n += p.second;
    return n;
}

std::string PathWord::str() const {
    std::string out;
    for (const auto& [d, n] : tuples) {
        out += "(";
        out += dir_name(d);
        out += ")^" + std::to_string(n);
    }
    return out.empty() ? "()" : out;
}

PathWord PathWord::rotated(int by) const {
    PathWord w = *this;
    for (auto& p : w.tuples) p.first = p.first.rotated(by);
    return w;
}

std::vector<EJInt> expand(const PathWord& w, EJInt from, const Generator& g) {
    std::vector<EJInt> out{from};
    EJInt cur = from;
    for (const auto& [d, n] : w.tuples)
        for (i64 i = 0; i < n; ++i) {
            cur = reduce(cur + unit(d), g);
            out.push_back(cur);
        }
    return out;
}

std::string Reading::id() const {
    std::string out(scheme_name(scheme));
    out += "/exp=";
    for (int r = 0; r < parent_row_count(scheme); ++r) out += ((sector_mask >> r) & 1u) ? 'j' : 't';
    out += "/patch=";
    out += patch < 0 ? std::string_view("none") : patch_name(scheme, patch);
    return out;
}

Reading printed_reading(Scheme s) { return Reading{s, 0, -1}; }

std::optional<Reading> parse_reading(std::string_view id) {
    auto slash = id.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    auto sch = parse_scheme(id.substr(0, slash));
    if (!sch) return std::nullopt;
    auto rest = id.substr(slash + 1);
    if (rest.substr(0, 4) != "exp=") return std::nullopt;
    rest.remove_prefix(4);
    int rows = parent_row_count(*sch);
    if (rest.size() < static_cast<size_t>(rows)) return std::nullopt;
    Reading r{*sch, 0, -1};
    for (int i = 0; i < rows; ++i) {
        char ch = rest[static_cast<size_t>(i)];
        if (ch == 'j') r.sector_mask |= (1u << i);
        else if (ch != 't') return std::nullopt;
    }
    rest.remove_prefix(static_cast<size_t>(rows));
    if (rest.substr(0, 7) != "/patch=") return std::nullopt;
    rest.remove_prefix(7);
    if (rest == "none") return r;
    for (int p = 0; p < patch_count(*sch); ++p)
        if (patch_name(*sch, p) == rest) {
            r.patch = p;
            return r;
        }
    return std::nullopt;
}

std::vector<Reading> candidate_readings(Scheme s) {
    std::vector<Reading> out;
    const std::uint32_t n = 1u << parent_row_count(s);
    for (std::uint32_t m = 0; m < n; ++m) out.push_back({s, m, -1});
    for (int p = 0; p < patch_count(s); ++p) out.push_back({s, 0, p});
    return out;
}

std::size_t SpanningTree::edge_count() const {
    return static_cast<std::size_t>(std::count_if(parent.begin(), parent.end(), [](NodeId p) { return p != kNoNode; }));
}

int SpanningTree::depth_of(NodeId v) const {
    int d = 0;
    for (NodeId cur = v; cur != 0; ++d) {
        if (d > static_cast<int>(parent.size())) return -1;
        cur = parent[static_cast<size_t>(cur)];
        if (cur == kNoNode) return -1;
    }
    return d;
}

int SpanningTree::depth() const {
    int best = 0;
    for (NodeId v = 0; v < static_cast<NodeId>(parent.size()); ++v) {
        int d = depth_of(v);
        if (d < 0) return -1;
        best = std::max(best, d);
    }
    return best;
}

std::vector<NodeId> SpanningTree::path_ids(NodeId v) const {
    std::vector<NodeId> out{v};
    for (NodeId cur = v; cur != 0;) {
        cur = parent[static_cast<size_t>(cur)];
        if (cur == kNoNode || out.size() > parent.size()) return {};
        out.push_back(cur);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<EJInt> tree_path(const SpanningTree& tree, EJInt v) {
    NodeId i = tree.net->id(v);
    if (i == kNoNode) throw std::invalid_argument("address not in network: " + to_string(v));
    return addrs(*tree.net, tree.path_ids(i));
}

std::vector<EJInt> translated_path(const SpanningTree& tree, EJInt r, EJInt v) {
    const Generator& g = tree.net->gen();
    auto p = tree_path(tree, reduce(v - r, g));
    for (auto& u : p) u = reduce(u + r, g);
    return p;
}

SpanningTree rotate_tree(const SpanningTree& tree, int m) {
    const DenseEJ& net = *tree.net;
    SpanningTree out = tree;
    std::fill(out.parent.begin(), out.parent.end(), kNoNode);
    std::fill(out.parent_dir.begin(), out.parent_dir.end(), -1);
    const EJInt u = unit_pow(m);
    for (NodeId v = 0; v < net.size(); ++v) {
        NodeId p = tree.parent[static_cast<size_t>(v)];
        if (p == kNoNode) continue;
        NodeId v2 = net.id(reduce(net.addr(v) * u, net.gen()));
        NodeId p2 = net.id(reduce(net.addr(p) * u, net.gen()));
        out.parent[static_cast<size_t>(v2)] = p2;
        out.parent_dir[static_cast<size_t>(v2)] =
            static_cast<std::int8_t>(Direction(tree.parent_dir[static_cast<size_t>(v)] + m).m);
    }
    return out;
}

SpanningTree build_tree(const DenseEJ& net, Scheme s, int t, const Reading& r) {
    SpanningTree t1 = empty_tree(net, s, 1);
    t1.interpretation_id = r.id();
    for (NodeId v = 1; v < net.size(); ++v) {
        int dir = tree1_dir(s, r, sector_of(net.addr(v)), net.k());
        t1.parent_dir[static_cast<size_t>(v)] = static_cast<std::int8_t>(dir);
        t1.parent[static_cast<size_t>(v)] = net.neighbor(v, Direction(dir));
    }
    if (t == 1) return t1;
    SpanningTree out = rotate_tree(t1, rotation_offset(s, t));
    out.t = t;
    return out;
}

// Per-node construction in tree t's own sector frame, without going through tree 1.
SpanningTree build_tree_direct(const DenseEJ& net, Scheme s, int t, const Reading& r) {
    SpanningTree tr = empty_tree(net, s, t);
    tr.interpretation_id = r.id();
    const int c = rotation_offset(s, t);
    for (NodeId v = 1; v < net.size(); ++v) {
        SectorClass sc = classify(s, net.gen(), t, net.addr(v));
        int dir = tree1_dir(s, r, Sector{sc.x, sc.y, sc.d}, net.k()) + c;
        tr.parent_dir[static_cast<size_t>(v)] = static_cast<std::int8_t>(Direction(dir).m);
        tr.parent[static_cast<size_t>(v)] = net.neighbor(v, Direction(dir));
    }
    return tr;
}

TreeSet construct(std::shared_ptr<const DenseEJ> netp, Scheme s, const Reading& r) {
    const DenseEJ& net = *netp;
    TreeSet ts;
    ts.scheme = s;
    ts.reading = r;
    ts.interpretation_id = r.id();
    ts.net = netp;
    SpanningTree t1 = build_tree(net, s, 1, r);
    t1.net = netp;
    for (int t = 1; t <= tree_count(s); ++t) {
        SpanningTree tr = t == 1 ? t1 : rotate_tree(t1, rotation_offset(s, t));
        tr.t = t;
        ts.trees.push_back(std::move(tr));
    }

    const auto n = static_cast<size_t>(net.size());
    const i64 k = net.k();
    ts.derived.assign(n, 0);
    ts.word_row.assign(n, -1);
    std::vector<Sector> secs(n);
    std::vector<std::vector<NodeId>> paths(n);
    for (NodeId v = 1; v < net.size(); ++v) {
        secs[static_cast<size_t>(v)] = sector_of(net.addr(v));
        paths[static_cast<size_t>(v)] = t1.path_ids(v);
    }
    for (NodeId v = 1; v < net.size(); ++v) {
        const auto& p = paths[static_cast<size_t>(v)];
        bool touched = p.empty();
        for (size_t i = 1; i < p.size() && !touched; ++i)
            touched = overridden(s, r, secs[static_cast<size_t>(p[i])], k);
        if (touched && r.patch >= 0 && !p.empty()) ts.derived[static_cast<size_t>(v)] = 1;
        else {
            const Sector& sc = secs[static_cast<size_t>(v)];
            ts.word_row[static_cast<size_t>(v)] = word_row_of(s, fine_class(s, sc.x, sc.y, sc.d, k));
        }
    }

    // Frame per path-table row: first frame whose words all equal the tree paths;
    // otherwise the one with the most exact matches, then the most words that land on v.
    const int rows = word_row_count(s);
    ts.word_frame.assign(static_cast<size_t>(rows), kRho);
    ts.frame_fits.assign(static_cast<size_t>(rows), 0);
    for (int row = 0; row < rows; ++row) {
        std::pair<int, int> best{-1, -1};
        int best_frame = kRho;
        for (int f = 0; f < kFrameCount; ++f) {
            int members = 0, exact = 0, lands = 0;
            for (NodeId v = 1; v < net.size(); ++v) {
                if (ts.word_row[static_cast<size_t>(v)] != row) continue;
                ++members;
                auto w = table_word(s, row, f, net.addr(v), secs[static_cast<size_t>(v)], k);
                if (!w) continue;
                auto walk = expand(*w, {0, 0}, net.gen());
                if (walk.back() == net.addr(v)) ++lands;
                if (walk == addrs(net, paths[static_cast<size_t>(v)])) ++exact;
            }
            if (exact == members) {
                best_frame = f;
                ts.frame_fits[static_cast<size_t>(row)] = 1;
                break;
            }
            if (std::make_pair(exact, lands) > best) {
                best = {exact, lands};
                best_frame = f;
            }
        }
        ts.word_frame[static_cast<size_t>(row)] = best_frame;
    }
    return ts;
}

PathWord TreeSet::path_word(int t, EJInt v) const {
    const DenseEJ& nt = *net;
    if (t < 1 || t > static_cast<int>(trees.size())) throw std::out_of_range("tree index");
    if (!nt.contains(v)) throw std::invalid_argument("address not in network: " + to_string(v));
    if (v == EJInt{0, 0}) throw std::invalid_argument("root has no path word");
    const int c = rotation_offset(scheme, t);
    EJInt v1 = reduce(v * unit_pow(-c), nt.gen());
    NodeId i1 = nt.id(v1);
    PathWord w;
    if (derived[static_cast<size_t>(i1)] || word_frame.empty()) {
        w = word_from_path(nt, trees[0].path_ids(i1));
    } else {
        int row = word_row[static_cast<size_t>(i1)];
        auto tw = table_word(scheme, row, word_frame[static_cast<size_t>(row)], v1, sector_of(v1), nt.k());
        if (!tw) throw std::runtime_error("path word for " + to_string(v) + " has a negative exponent");
        w = *tw;
    }
    w = w.rotated(c);
    if (expand(w, {0, 0}, nt.gen()).back() != v)
        throw std::runtime_error("path word " + w.str() + " does not end at " + to_string(v));
    return w;
}

std::string_view frame_name(int f) {
    switch (f) {
        case kSector: return "sector";
        case kRho: return "x+y*rho";
        case kRho2: return "x+y*rho^2";
        default: return "x+y*rho^5";
    }
}

TreeSet construct_k1(std::shared_ptr<const DenseEJ> netp, Scheme s) {
    const DenseEJ& net = *netp;
    if (net.k() != 1) throw std::invalid_argument("explicit trees only exist for a = 1");
    TreeSet ts;
    ts.scheme = s;
    ts.interpretation_id = std::string(scheme_name(s)) + "/k1-explicit";
    ts.net = netp;
    ts.derived.assign(static_cast<size_t>(net.size()), 1);
    ts.word_row.assign(static_cast<size_t>(net.size()), -1);

    auto make = [&](const std::vector<NodeId>& parent, int t) {
        SpanningTree tr = empty_tree(net, s, t);
        tr.net = netp;
        tr.interpretation_id = ts.interpretation_id;
        for (NodeId v = 1; v < net.size(); ++v) {
            tr.parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(v)];
            tr.parent_dir[static_cast<size_t>(v)] =
                static_cast<std::int8_t>(net.direction_to(v, parent[static_cast<size_t>(v)]));
        }
        return tr;
    };

    if (s == Scheme::IST) {
        // tree t: root -> rho^(t-1) -> everything else
        for (int t = 1; t <= 6; ++t) {
            NodeId hub = net.id(unit_pow(t - 1));
            std::vector<NodeId> parent(7, hub);
            parent[0] = kNoNode;
            parent[static_cast<size_t>(hub)] = 0;
            ts.trees.push_back(make(parent, t));
        }
        return ts;
    }

    // EDNIST: first parent assignment (odometer order over node ordinals) whose rotations
    // by rho^2 and rho^4 give three edge-disjoint independent trees.
    std::vector<NodeId> parent(7, 0);
    parent[0] = kNoNode;
    while (true) {
        bool ok = true;
        for (NodeId v = 1; v < 7 && ok; ++v) ok = parent[static_cast<size_t>(v)] != v;
        if (ok) {
            SpanningTree t1 = make(parent, 1);
            if (t1.depth() >= 0) {
                std::vector<SpanningTree> trees{t1};
                for (int t = 2; t <= 3; ++t) {
                    SpanningTree tr = rotate_tree(t1, rotation_offset(s, t));
                    tr.t = t;
                    trees.push_back(std::move(tr));
                }
                if (verify_edge_disjoint(trees, false).pass && verify_node_independent(trees).pass) {
                    ts.trees = std::move(trees);
                    return ts;
                }
            }
        }
        NodeId i = 6;
        while (i >= 1 && parent[static_cast<size_t>(i)] == 6) parent[static_cast<size_t>(i--)] = 0;
        if (i < 1) break;
        ++parent[static_cast<size_t>(i)];
    }
    throw std::logic_error("no explicit EDNIST triple for a = 1");
}

}  // namespace ejnet
