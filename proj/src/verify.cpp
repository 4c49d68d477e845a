#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ejnet/spantree.hpp"
#include "tables.hpp"

namespace ejnet {

namespace {

std::string addr_str(const DenseEJ& net, NodeId v) { return to_string(net.addr(v)); }

}  // namespace

Check verify_spanning(const SpanningTree& tree) {
    const DenseEJ& net = *tree.net;
    Check c{"spanning", true, 0, {}};
    auto fail = [&](const std::string& why) {
        if (c.violations++ == 0) c.first = why;
        c.pass = false;
    };
    if (tree.parent[0] != kNoNode) fail("root has a parent");
    if (tree.edge_count() != static_cast<size_t>(net.size() - 1))
        fail("edge count " + std::to_string(tree.edge_count()) + " != N-1");
    for (NodeId v = 1; v < net.size(); ++v) {
        NodeId p = tree.parent[static_cast<size_t>(v)];
        if (p == kNoNode) {
            fail("tree " + std::to_string(tree.t) + ": node " + addr_str(net, v) + " has no parent");
            continue;
        }
        int d = tree.parent_dir[static_cast<size_t>(v)];
        if (d < 0 || net.neighbor(v, Direction(d)) != p)
            fail("tree " + std::to_string(tree.t) + ": parent edge of " + addr_str(net, v) + " is not a network edge");
        if (tree.depth_of(v) < 0)
            fail("tree " + std::to_string(tree.t) + ": chain from " + addr_str(net, v) + " never reaches the root");
    }
    return c;
}

Check verify_node_independent(const std::vector<SpanningTree>& trees) {
    Check c{"node-independent", true, 0, {}};
    if (trees.empty()) return c;
    const DenseEJ& net = *trees[0].net;
    std::vector<int> owner(static_cast<size_t>(net.size()), -1);
    for (NodeId v = 1; v < net.size(); ++v) {
        std::fill(owner.begin(), owner.end(), -1);
        bool bad = false;
        for (size_t t = 0; t < trees.size() && !bad; ++t) {
            auto p = trees[t].path_ids(v);
            if (p.empty()) {
                bad = true;
                if (c.violations == 0) c.first = "tree " + std::to_string(t + 1) + " does not reach " + addr_str(net, v);
                break;
            }
            for (size_t i = 1; i + 1 < p.size(); ++i) {
                int& o = owner[static_cast<size_t>(p[i])];
                if (o >= 0 && o != static_cast<int>(t)) {
                    bad = true;
                    if (c.violations == 0)
                        c.first = "paths to " + addr_str(net, v) + " in trees " + std::to_string(o + 1) + " and " +
                                  std::to_string(t + 1) + " share " + addr_str(net, p[i]);
                    break;
                }
                o = static_cast<int>(t);
            }
        }
        if (bad) {
            ++c.violations;
            c.pass = false;
        }
    }
    return c;
}

Check verify_edge_disjoint(const std::vector<SpanningTree>& trees, bool directed) {
    Check c{directed ? "directed-edge-disjoint" : "edge-disjoint", true, 0, {}};
    if (trees.empty()) return c;
    const DenseEJ& net = *trees[0].net;
    std::map<std::pair<NodeId, NodeId>, int> used;
    for (size_t t = 0; t < trees.size(); ++t)
        for (NodeId v = 1; v < net.size(); ++v) {
            NodeId p = trees[t].parent[static_cast<size_t>(v)];
            if (p == kNoNode) continue;
            auto key = directed ? std::make_pair(p, v) : std::make_pair(std::min(p, v), std::max(p, v));
            auto [it, fresh] = used.emplace(key, static_cast<int>(t));
            if (!fresh) {
                if (c.violations == 0)
                    c.first = "edge " + addr_str(net, p) + (directed ? "->" : "--") + addr_str(net, v) +
                              " in trees " + std::to_string(it->second + 1) + " and " + std::to_string(t + 1);
                ++c.violations;
                c.pass = false;
            }
        }
    return c;
}

Check verify_depth(const std::vector<SpanningTree>& trees, int expected) {
    Check c{"depth == " + std::to_string(expected), true, 0, {}};
    for (const auto& tr : trees) {
        int d = tr.depth();
        if (d != expected) {
            if (c.violations == 0) c.first = "tree " + std::to_string(tr.t) + " has depth " + std::to_string(d);
            ++c.violations;
            c.pass = false;
        }
    }
    return c;
}

Check verify_path_consistency(const TreeSet& set) {
    Check c{"path-consistency", true, 0, {}};
    const DenseEJ& net = *set.net;
    for (const auto& tr : set.trees)
        for (NodeId v = 1; v < net.size(); ++v) {
            EJInt a = net.addr(v);
            std::string why;
            try {
                PathWord w = set.path_word(tr.t, a);
                if (expand(w, {0, 0}, net.gen()) != tree_path(tr, a))
                    why = "tree " + std::to_string(tr.t) + ": word " + w.str() + " for " + to_string(a) +
                          " leaves the tree path";
            } catch (const std::exception& e) {
                why = "tree " + std::to_string(tr.t) + ": " + e.what();
            }
            if (!why.empty()) {
                if (c.violations == 0) c.first = why;
                ++c.violations;
                c.pass = false;
            }
        }
    return c;
}

std::size_t child_column_mismatches(const TreeSet& set) {
    if (set.word_frame.empty()) return 0;
    using namespace detail;
    const DenseEJ& net = *set.net;
    const SpanningTree& t1 = set.trees[0];
    std::size_t bad = 0;
    for (NodeId v = 1; v < net.size(); ++v) {
        SectorClass sc = classify(set.scheme, net.gen(), 1, net.addr(v));
        int row = parent_row_of(set.scheme, sc.cls);
        const auto& pr = parent_rows(set.scheme)[static_cast<size_t>(row)];
        int base = ((set.reading.sector_mask >> row) & 1u) ? sc.d : 1;
        std::set<NodeId> listed;
        for (int off : pr.children) listed.insert(net.neighbor(v, Direction(base + off)));
        std::set<NodeId> actual;
        for (NodeId u = 1; u < net.size(); ++u)
            if (t1.parent[static_cast<size_t>(u)] == v) actual.insert(u);
        for (NodeId u : listed) bad += actual.count(u) ? 0 : 1;
        for (NodeId u : actual) bad += listed.count(u) ? 0 : 1;
    }
    return bad;
}

std::vector<DenseEJ::Edge> unused_edges(const std::vector<SpanningTree>& trees) {
    std::vector<DenseEJ::Edge> out;
    if (trees.empty()) return out;
    const DenseEJ& net = *trees[0].net;
    std::set<std::pair<NodeId, NodeId>> used;
    for (const auto& tr : trees)
        for (NodeId v = 1; v < net.size(); ++v) {
            NodeId p = tr.parent[static_cast<size_t>(v)];
            if (p != kNoNode) used.insert({std::min(p, v), std::max(p, v)});
        }
    for (const auto& e : net.edges())
        if (!used.count({e.u, e.v})) out.push_back(e);
    return out;
}

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::size_t Report::violations() const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.violations;
    return n;
}

std::string Report::text() const {
    std::ostringstream os;
    if (!subject.empty()) os << subject << "\n";
    for (const auto& c : checks) {
        os << (c.pass ? "  PASS " : "  FAIL ") << c.name;
        if (!c.pass) os << ": " << c.violations << " violation(s); first: " << c.first;
        os << "\n";
    }
    for (const auto& n : notes) os << "  note: " << n << "\n";
    os << (pass() ? "result: PASS\n" : "result: FAIL\n");
    return os.str();
}

Report verify_treeset(const TreeSet& set) {
    Report rep;
    const DenseEJ& net = *set.net;
    const i64 a = net.gen().a;
    rep.subject = std::string(scheme_name(set.scheme)) + " a=" + std::to_string(a) + " N=" +
                  std::to_string(net.size()) + " trees=" + std::to_string(set.trees.size()) +
                  " interpretation=" + set.interpretation_id;

    Check span{"spanning", true, 0, {}};
    Check edges{"edges per tree == " + std::to_string(3 * a * a + 3 * a), true, 0, {}};
    for (const auto& tr : set.trees) {
        Check c = verify_spanning(tr);
        if (!c.pass) {
            if (span.violations == 0) span.first = c.first;
            span.violations += c.violations;
            span.pass = false;
        }
        if (static_cast<i64>(tr.edge_count()) != 3 * a * a + 3 * a) {
            if (edges.violations++ == 0) edges.first = "tree " + std::to_string(tr.t);
            edges.pass = false;
        }
    }
    rep.checks.push_back(span);
    rep.checks.push_back(edges);
    if (!span.pass) return rep;  // the rest walks parent chains

    if (a >= 2) rep.checks.push_back(verify_depth(set.trees, static_cast<int>(expected_depth(set.scheme, a))));
    rep.checks.push_back(verify_node_independent(set.trees));
    rep.checks.push_back(verify_edge_disjoint(set.trees, set.scheme == Scheme::IST));

    Check rot{"rotation-equivariant", true, 0, {}};
    if (!set.word_frame.empty())
        for (const auto& tr : set.trees) {
            SpanningTree direct = build_tree_direct(net, set.scheme, tr.t, set.reading);
            if (direct.parent != tr.parent) {
                if (rot.violations++ == 0) rot.first = "tree " + std::to_string(tr.t);
                rot.pass = false;
            }
        }
    rep.checks.push_back(rot);
    rep.checks.push_back(verify_path_consistency(set));

    if (set.scheme == Scheme::EDNIST)
        rep.notes.push_back("unused network edges: " + std::to_string(unused_edges(set.trees).size()));
    if (!set.word_frame.empty()) {
        std::size_t derived = 0;
        for (char d : set.derived) derived += d ? 1 : 0;
        if (derived) rep.notes.push_back("path words taken from the tree for " + std::to_string(derived) + " node(s)");
        rep.notes.push_back("child-column mismatches: " + std::to_string(child_column_mismatches(set)));
    }
    return rep;
}

const Resolution& resolve(Scheme s, i64 a) {
    if (a < 2) throw std::invalid_argument("table readings need a >= 2");
    static std::mutex mu;
    static std::map<std::pair<int, i64>, Resolution> cache;
    std::lock_guard lock(mu);
    auto key = std::make_pair(static_cast<int>(s), a);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    Resolution res;
    res.scheme = s;
    res.a = a;
    auto net = network(a);
    std::size_t best = static_cast<std::size_t>(-1);
    for (const Reading& r : candidate_readings(s)) {
        ++res.tried;
        // cheap reject before building the whole family
        SpanningTree t1 = build_tree(*net, s, 1, r);
        if (t1.depth() < 0) continue;
        TreeSet ts = construct(net, s, r);
        Report rep = verify_treeset(ts);
        if (rep.pass()) {
            res.ok = true;
            res.reading = r;
            break;
        }
        if (rep.violations() < best) {
            best = rep.violations();
            res.best_id = r.id();
            std::ostringstream os;
            for (const auto& c : rep.checks)
                if (!c.pass) os << c.name << "=" << c.violations << " ";
            res.best_summary = os.str();
        }
    }

    if (res.ok) {
        const Reading& r = res.reading;
        for (int row = 0; row < parent_row_count(s); ++row)
            if ((r.sector_mask >> row) & 1u)
                res.deviations.push_back("parent row " + std::string(detail::parent_rows(s)[static_cast<size_t>(row)].name) +
                                         " measured from the sector index j");
        if (r.patch >= 0) {
            std::string line = "patch " + std::string(patch_name(s, r.patch)) + ":";
            for (const auto& ov : detail::patches(s)[static_cast<size_t>(r.patch)].overrides) {
                line += " " + std::string(class_label(s, ov.cls));
                if (ov.corner_only) line += "(x=k)";
                line += "->" + std::string(dir_name(Direction(ov.dir)));
            }
            res.deviations.push_back(line);
        }
        TreeSet ts = construct(net, s, r);
        for (int row = 0; row < word_row_count(s); ++row)
            res.deviations.push_back("path row " + std::string(word_row_name(s, row)) + " read in frame " +
                                     std::string(frame_name(ts.word_frame[static_cast<size_t>(row)])));
    }
    return cache.emplace(key, std::move(res)).first->second;
}

std::string resolve_interpretation(Scheme s, i64 a) {
    const Resolution& r = resolve(s, a);
    if (!r.ok)
        throw std::runtime_error("no table reading passes for " + std::string(scheme_name(s)) + " a=" +
                                 std::to_string(a) + "; best " + r.best_id + ": " + r.best_summary);
    return r.reading.id();
}

Report verify_report(Scheme s, i64 a, std::string_view reading) {
    TreeSet ts = trees_for(s, a, reading);
    Report rep = verify_treeset(ts);
    if (a >= 2) {
        const Resolution& res = resolve(s, a);
        if (ts.reading == res.reading)
            for (const auto& d : res.deviations) rep.notes.push_back("deviation: " + d);
        else if (res.ok)
            rep.notes.push_back("resolved interpretation: " + res.reading.id());
    } else {
        rep.notes.push_back("explicit trees for the 7-node network");
    }
    return rep;
}

const TreeSet& resolved_set(Scheme s, i64 a) {
    static std::mutex mu;
    static std::map<std::pair<int, i64>, std::unique_ptr<TreeSet>> cache;
    auto key = std::make_pair(static_cast<int>(s), a);
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return *it->second;
    }
    std::unique_ptr<TreeSet> ts;
    if (a == 1) ts = std::make_unique<TreeSet>(construct_k1(network(1), s));
    else {
        resolve_interpretation(s, a);  // throws on failure
        ts = std::make_unique<TreeSet>(construct(network(a), s, resolve(s, a).reading));
    }
    std::lock_guard lock(mu);
    auto [it, fresh] = cache.emplace(key, std::move(ts));
    return *it->second;
}

TreeSet trees_for(Scheme s, i64 a, std::string_view reading) {
    if (a == 1) return construct_k1(network(1), s);
    if (reading == "resolved") return resolved_set(s, a);
    if (reading == "printed") return construct(network(a), s, printed_reading(s));
    auto r = parse_reading(reading);
    if (!r || r->scheme != s) throw std::invalid_argument("unknown reading: " + std::string(reading));
    return construct(network(a), s, *r);
}

std::vector<SpanningTree> build_all(Scheme s, i64 a) { return resolved_set(s, a).trees; }

PathWord path_word(Scheme s, i64 a, int t, EJInt v) { return resolved_set(s, a).path_word(t, v); }

}  // namespace ejnet
