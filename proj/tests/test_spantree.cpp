#include <doctest.h>

#include <json.hpp>

#include "ejnet/spantree.hpp"
#include "oracle.hpp"

using namespace ejnet;

namespace {

EJInt parent_of(const SpanningTree& t, EJInt v) {
    const auto& net = *t.net;
    return net.addr(t.parent[static_cast<size_t>(net.id(v))]);
}

}  // namespace

TEST_CASE("scheme basics") {
    CHECK(tree_count(Scheme::EDNIST) == 3);
    CHECK(tree_count(Scheme::IST) == 6);
    CHECK(rotation_offset(Scheme::EDNIST, 2) == 2);
    CHECK(rotation_offset(Scheme::IST, 4) == 3);
    CHECK(parse_scheme("ist") == Scheme::IST);
    CHECK(parse_scheme("ednist") == Scheme::EDNIST);
    CHECK(!parse_scheme("foo"));
}

TEST_CASE("every non-root node falls in exactly one finest class") {
    for (Scheme s : {Scheme::EDNIST, Scheme::IST})
        for (i64 a = 3; a <= 5; ++a) {  // at a=2 the interior sets minus their L rows are empty
            auto net = network(a);
            std::vector<int> hits(static_cast<size_t>(class_count(s)), 0);
            std::map<std::pair<int, bool>, i64> sector;  // (d, axis) -> count
            for (NodeId v = 1; v < net->size(); ++v) {
                SectorClass c = classify(s, net->gen(), 1, net->addr(v));
                REQUIRE(c.cls >= 0);
                REQUIRE(c.cls < class_count(s));
                CHECK(c.x > 0);
                CHECK(c.y >= 0);
                // v = x rho^(j-1) + y rho^j
                EJInt back = EJInt{c.x, 0} * unit_pow(c.j - 1) + EJInt{c.y, 0} * unit_pow(c.j);
                CHECK(back == net->addr(v));
                ++hits[static_cast<size_t>(c.cls)];
                ++sector[{c.d, c.y == 0}];
            }
            for (int h : hits) CHECK(h > 0);
            // each sector: k axis nodes, k(k-1)/2 interior nodes
            for (int d = 1; d <= 6; ++d) {
                CHECK(sector[{d, true}] == a);
                CHECK(sector[{d, false}] == a * (a - 1) / 2);
            }
        }
}

TEST_CASE("class cardinalities") {
    for (i64 k = 2; k <= 6; ++k) {
        auto net = network(k);
        for (Scheme s : {Scheme::EDNIST, Scheme::IST}) {
            std::map<std::string, i64> n;
            for (NodeId v = 1; v < net->size(); ++v) ++n[std::string(classify(s, net->gen(), 1, net->addr(v)).label)];
            const i64 T = k * (k - 1) / 2;
            std::map<std::string, i64> want;
            if (s == Scheme::EDNIST)
                want = {{"B1", k},         {"B2\\S2", k - 1}, {"S2", 1},  {"B3", k},     {"B4\\S4", k - 1}, {"S4", 1},
                        {"B5", k},         {"B6", k},          {"T1", T},  {"T2", T},     {"T3", T},          {"T4\\L4", T - (k - 1)},
                        {"L4", k - 1},     {"T5", T},          {"T6\\L6", T - (k - 1)}, {"L6", k - 1}};
            else
                want = {{"B1", k},      {"B2", k}, {"B3", k},     {"B4", k},          {"B5\\S", k - 1},
                        {"S", 1},       {"B6", k}, {"T1", T},     {"T2", T},          {"T3\\L3", T - (k - 1)},
                        {"L3", k - 1},  {"T4\\L4", T - (k - 1)}, {"L4", k - 1}, {"T5", T}, {"T6", T}};
            for (auto& [label, c] : want) {
                CAPTURE(label);
                CHECK(n[label] == c);
            }
            i64 total = 1;
            for (auto& [label, c] : n) total += c;
            CHECK(total == 3 * k * k + 3 * k + 1);
        }
    }
}

TEST_CASE("reading ids round-trip") {
    for (Scheme s : {Scheme::EDNIST, Scheme::IST}) {
        auto cands = candidate_readings(s);
        CHECK(cands.size() == (std::size_t{1} << parent_row_count(s)) + static_cast<std::size_t>(patch_count(s)));
        CHECK(cands.front() == printed_reading(s));
        for (const auto& r : cands) CHECK(parse_reading(r.id()) == r);
    }
    CHECK(printed_reading(Scheme::IST).id() == "ist/exp=tttttttttt/patch=none");
    CHECK(!parse_reading("ist/exp=ttt/patch=none"));
    CHECK(!parse_reading("nonsense"));
}

TEST_CASE("worked tree examples on the 61-node network") {
    auto net = network(4);
    for (const char* rd : {"printed", "resolved"}) {
        CAPTURE(rd);
        TreeSet ed = trees_for(Scheme::EDNIST, 4, rd);
        const auto& t1 = ed.trees[0];
        CHECK(parent_of(t1, {1, 1}) == EJInt{1, 0});
        CHECK(parent_of(t1, {1, 2}) == EJInt{1, 1});
        CHECK(ed.path_word(1, {3, -4}).str() == "(1)^1(-rho^2)^4(-1)^2");
    }
    TreeSet ist = trees_for(Scheme::IST, 4, "printed");
    CHECK(parent_of(ist.trees[0], {0, 4}) == EJInt{-1, 4});
    for (NodeId v = 1; v < net->size(); ++v) CHECK(ist.trees[0].parent[static_cast<size_t>(v)] != net->id({0, 4}));
    CHECK(ist.path_word(1, {3, -4}).str() == "(1)^4(rho)^1(1)^3");
}

TEST_CASE("printed readings fail independence by a fixed count") {
    for (i64 a = 2; a <= 6; ++a) {
        CAPTURE(a);
        TreeSet ed = trees_for(Scheme::EDNIST, a, "printed");
        Check c = verify_node_independent(ed.trees);
        CHECK(c.violations == 3);
        CHECK(oracle::independence_violations(ed.trees) > 0);
        CHECK(verify_edge_disjoint(ed.trees, false).pass);

        TreeSet ist = trees_for(Scheme::IST, a, "printed");
        CHECK(verify_node_independent(ist.trees).violations == static_cast<std::size_t>(6 * a));
        CHECK(oracle::independence_violations(ist.trees) > 0);
        CHECK(verify_edge_disjoint(ist.trees, true).pass);
        CHECK(oracle::shared_edges(ist.trees, true) == 0);
        CHECK(verify_depth(ist.trees, static_cast<int>(2 * a + 1)).pass);
        CHECK_FALSE(verify_path_consistency(ist).pass);
    }
}

TEST_CASE("resolution picks one reading per scheme for every size") {
    for (i64 a = 2; a <= 6; ++a) {
        CHECK(resolve_interpretation(Scheme::EDNIST, a) == "ednist/exp=ttttttttttt/patch=corner-rehook");
        CHECK(resolve_interpretation(Scheme::IST, a) == "ist/exp=tttttttttt/patch=axis-rotated");
        CHECK_FALSE(resolve(Scheme::IST, a).deviations.empty());
    }
    CHECK_THROWS(resolve(Scheme::IST, 1));
}

TEST_CASE("resolved trees pass the brute-force oracles") {
    for (Scheme s : {Scheme::EDNIST, Scheme::IST})
        for (i64 a = 1; a <= 6; ++a) {
            CAPTURE(a);
            CAPTURE(scheme_name(s));
            const TreeSet& set = resolved_set(s, a);
            CHECK(verify_treeset(set).pass());
            REQUIRE(static_cast<int>(set.trees.size()) == tree_count(s));
            for (const auto& t : set.trees) {
                CHECK(oracle::spanning(t));
                CHECK(static_cast<i64>(t.edge_count()) == 3 * a * a + 3 * a);
                if (a >= 2) CHECK(oracle::depth(t) == expected_depth(s, a));
            }
            CHECK(oracle::independence_violations(set.trees) == 0);
            CHECK(oracle::shared_edges(set.trees, s == Scheme::IST) == 0);
        }
}

TEST_CASE("trees are rotations of tree 1") {
    for (Scheme s : {Scheme::EDNIST, Scheme::IST}) {
        const TreeSet& set = resolved_set(s, 4);
        for (const auto& t : set.trees) {
            SpanningTree r = rotate_tree(set.trees[0], rotation_offset(s, t.t));
            CHECK(r.parent == t.parent);
        }
    }
}

TEST_CASE("path words walk the tree path") {
    for (Scheme s : {Scheme::EDNIST, Scheme::IST})
        for (i64 a = 2; a <= 5; ++a) {
            const TreeSet& set = resolved_set(s, a);
            const auto& net = *set.net;
            for (const auto& t : set.trees)
                for (NodeId v = 1; v < net.size(); ++v) {
                    EJInt dst = net.addr(v);
                    PathWord w = set.path_word(t.t, dst);
                    CHECK(expand(w, {0, 0}, net.gen()) == oracle::walk(t, dst));
                    // normalized: no empty tuples, no repeated direction
                    for (size_t i = 0; i < w.tuples.size(); ++i) {
                        CHECK(w.tuples[i].second > 0);
                        if (i) CHECK(w.tuples[i].first != w.tuples[i - 1].first);
                    }
                }
        }
}

TEST_CASE("three network edges stay unused by the edge-disjoint trees") {
    for (i64 a = 2; a <= 6; ++a) {
        const TreeSet& set = resolved_set(Scheme::EDNIST, a);
        const auto& net = *set.net;
        auto unused = unused_edges(set.trees);
        REQUIRE(unused.size() == 3);
        std::set<std::pair<EJInt, EJInt>> es;
        for (auto e : unused) es.insert(std::minmax(net.addr(e.u), net.addr(e.v)));
        for (auto e : unused) {
            // one orbit under rotation by rho^2, each edge touching a corner
            EJInt u = reduce(net.addr(e.u) * unit_pow(2), net.gen()), v = reduce(net.addr(e.v) * unit_pow(2), net.gen());
            CHECK(es.count(std::minmax(u, v)) == 1);
            bool corner = false;
            for (int m = 0; m < 6; ++m)
                for (EJInt end : {net.addr(e.u), net.addr(e.v)})
                    corner = corner || end == EJInt{a, 0} * unit_pow(m);
            CHECK(corner);
        }
    }
}

TEST_CASE("7-node network uses explicit trees") {
    for (Scheme s : {Scheme::EDNIST, Scheme::IST}) {
        const TreeSet& set = resolved_set(s, 1);
        CHECK(set.interpretation_id.find("k1") != std::string::npos);
        CHECK(oracle::independence_violations(set.trees) == 0);
        CHECK(oracle::shared_edges(set.trees, s == Scheme::IST) == 0);
        for (const auto& t : set.trees) CHECK(t.edge_count() == 6);
    }
}

TEST_CASE("tree exports") {
    const TreeSet& set = resolved_set(Scheme::IST, 2);
    auto j = nlohmann::json::parse(tree_json(set.trees[2]));
    CHECK(j["t"] == 3);
    CHECK(j["parents"].size() == 18);
    CHECK(j["interpretation_id"] == set.interpretation_id);
    std::string dot = tree_dot(set.trees[0]);
    std::size_t arrows = 0;
    for (std::size_t p = 0; (p = dot.find("->", p)) != std::string::npos; ++p) ++arrows;
    CHECK(arrows == 18);
}

TEST_CASE("product trees over two 19-node layers") {
    auto net = std::make_shared<const ProductNet>(ProductNet::uniform(2, 2));
    auto ed = build_product_trees(Scheme::EDNIST, net);
    REQUIRE(ed.size() == 3);
    for (const auto& t : ed) {
        CHECK(verify_product_spanning(t).pass);
        CHECK(t.edge_count() == 360);
    }
    CHECK(verify_product_edge_disjoint(ed).pass);
    auto ist = build_product_trees(Scheme::IST, net);
    REQUIRE(ist.size() == 6);
    for (const auto& t : ist) CHECK(verify_product_spanning(t).pass);
}
