#include <doctest.h>

#include "ejnet/routing.hpp"
#include "oracle.hpp"

using namespace ejnet;

TEST_CASE("message hand-offs on the 61-node example") {
    TreeSet set = trees_for(Scheme::EDNIST, 4, "resolved");
    const Generator& g = set.net->gen();
    EJInt D = *parse_ej("-2,0,1");
    RouteMessage m = init_routing({0, 0}, D, set, 1);
    CHECK(m.word.str() == "(1)^3(-rho^2)^3");
    CHECK(m.dir == Direction(0));
    CHECK(m.steps == 2);  // popped, one hop already sent
    CHECK(m.remaining.size() == 1);
    CHECK(m.current == EJInt{1, 0});

    std::vector<i64> steps{m.steps};
    std::variant<Delivered, RouteMessage> st = m;
    while (auto* msg = std::get_if<RouteMessage>(&st)) {
        st = route_step(std::move(*msg));
        if (auto* nx = std::get_if<RouteMessage>(&st)) steps.push_back(nx->steps);
    }
    auto& d = std::get<Delivered>(st);
    CHECK(d.hops() == 6);
    CHECK(steps == std::vector<i64>{2, 1, 0, 2, 1, 0});
    std::vector<EJInt> expect{{0, 0}, {1, 0}, {2, 0}, {3, 0}, *parse_ej("3,0,-1"), *parse_ej("3,0,-2"), *parse_ej("3,0,-3")};
    REQUIRE(d.hop_trace.size() == expect.size());
    for (size_t i = 0; i < expect.size(); ++i) CHECK(congruent(d.hop_trace[i], expect[i], g));
}

TEST_CASE("simulated routes equal translated tree paths") {
    for (Scheme s : {Scheme::EDNIST, Scheme::IST})
        for (i64 a = 2; a <= 4; ++a) {
            const TreeSet& set = resolved_set(s, a);
            const auto& net = *set.net;
            const auto& g = net.gen();
            const int depth = static_cast<int>(expected_depth(s, a));
            for (NodeId si = 0; si < net.size(); si += 3)
                for (NodeId di = 0; di < net.size(); ++di) {
                    if (si == di) continue;
                    EJInt S = net.addr(si), D = net.addr(di);
                    for (const auto& t : set.trees) {
                        RouteOutcome out = simulate_route(S, D, set, t.t);
                        REQUIRE(out.delivered);
                        CHECK(out.hop_trace == translated_path(t, S, D));
                        CHECK(static_cast<int>(out.hop_trace.size()) - 1 <= depth);
                        // translation invariance
                        auto base = oracle::walk(t, reduce(D - S, g));
                        REQUIRE(base.size() == out.hop_trace.size());
                        for (size_t i = 0; i < base.size(); ++i) CHECK(out.hop_trace[i] == reduce(base[i] + S, g));
                    }
                }
        }
}

TEST_CASE("faulty nodes and links drop the message") {
    const TreeSet& set = resolved_set(Scheme::IST, 3);
    const auto& net = *set.net;
    EJInt D{2, -3};
    auto path = translated_path(set.trees[0], {0, 0}, D);
    REQUIRE(path.size() > 2);
    FaultSet f;
    f.nodes.insert(net.id(path[1]));
    auto out = simulate_route({0, 0}, D, set, 1, f);
    CHECK_FALSE(out.delivered);
    CHECK(out.hop_trace.size() == 2);

    FaultSet l;
    l.add_link(net.id(path[1]), net.id(path[2]));
    out = simulate_route({0, 0}, D, set, 1, l);
    CHECK_FALSE(out.delivered);
    CHECK(out.dropped.find("link") != std::string::npos);
}

TEST_CASE("fault-tolerant selection") {
    const TreeSet& set = resolved_set(Scheme::IST, 2);
    const auto& net = *set.net;
    for (NodeId di = 1; di < net.size(); ++di) {
        EJInt D = net.addr(di);
        auto free = fault_tolerant_route({0, 0}, D, set, {});
        REQUIRE(free);
        std::size_t best = 1000;
        for (const auto& t : set.trees) best = std::min(best, oracle::walk(t, D).size() - 1);
        CHECK(free->hops() == best);
        // one fault on tree 1's path forces another tree that avoids it
        auto p1 = oracle::walk(set.trees[0], D);
        for (size_t i = 1; i + 1 < p1.size(); ++i) {
            FaultSet f;
            f.nodes.insert(net.id(p1[i]));
            auto r = fault_tolerant_route({0, 0}, D, set, f);
            REQUIRE(r);
            CHECK(r->tree != 1);
            for (EJInt u : r->path) CHECK(u != p1[i]);
        }
    }
}

TEST_CASE("every destination survives any five faults (six independent trees)") {
    const TreeSet& set = resolved_set(Scheme::IST, 2);
    const auto& net = *set.net;
    const int n = net.size();
    std::size_t cases = 0, lost = 0;
    for (NodeId di = 1; di < n; ++di) {
        std::vector<NodeId> pool;
        for (NodeId v = 1; v < n; ++v)
            if (v != di) pool.push_back(v);
        for (int r = 0; r <= 5; ++r) {
            std::vector<int> idx(static_cast<size_t>(r));
            for (int i = 0; i < r; ++i) idx[static_cast<size_t>(i)] = i;
            const int m = static_cast<int>(pool.size());
            while (true) {
                FaultSet f;
                for (int i : idx) f.nodes.insert(pool[static_cast<size_t>(i)]);
                ++cases;
                if (!fault_tolerant_route({0, 0}, net.addr(di), set, f)) ++lost;
                int i = r - 1;
                while (i >= 0 && idx[static_cast<size_t>(i)] == m - r + i) --i;
                if (i < 0) break;
                ++idx[static_cast<size_t>(i)];
                for (int j = i + 1; j < r; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
            }
        }
    }
    CHECK(cases == 18 * (1 + 17 + 136 + 680 + 2380 + 6188));
    CHECK(lost == 0);
}

TEST_CASE("a faulty link on one edge-disjoint tree leaves the others intact") {
    for (i64 a = 2; a <= 4; ++a) {
        const TreeSet& set = resolved_set(Scheme::EDNIST, a);
        const auto& net = *set.net;
        const auto& t1 = set.trees[0];
        for (NodeId v = 1; v < net.size(); ++v) {
            FaultSet f;
            f.add_link(v, t1.parent[static_cast<size_t>(v)]);
            for (int t = 1; t < 3; ++t) {
                auto arrival = broadcast(set.trees[static_cast<size_t>(t)], f);
                for (NodeId u = 0; u < net.size(); ++u) CHECK(arrival[static_cast<size_t>(u)] >= 0);
            }
            CHECK(broadcast(t1, f)[static_cast<size_t>(v)] == -1);
        }
    }
}

TEST_CASE("split delivery certificates are empty") {
    for (i64 a = 2; a <= 5; ++a) {
        const TreeSet& set = resolved_set(Scheme::IST, a);
        const auto& net = *set.net;
        for (NodeId di = 1; di < net.size(); ++di) {
            DeliveryPlan p = split_delivery({0, 0}, net.addr(di), set);
            CHECK(p.paths.size() == 6);
            CHECK(p.disjoint());
            if (weight(net.addr(di)) == 1) {
                bool direct = false;
                for (auto& r : p.paths) direct = direct || r.hops() == 1;
                CHECK(direct);
            }
        }
    }
    CHECK_THROWS(split_delivery({1, 0}, {1, 0}, resolved_set(Scheme::IST, 2)));
}

TEST_CASE("broadcast arrival equals depth without faults") {
    const TreeSet& set = resolved_set(Scheme::IST, 4);
    for (const auto& t : set.trees) {
        auto arr = broadcast(t, {});
        CHECK(arr[0] == 0);
        int mx = 0;
        for (NodeId v = 0; v < set.net->size(); ++v) {
            CHECK(arr[static_cast<size_t>(v)] == t.depth_of(v));
            mx = std::max(mx, arr[static_cast<size_t>(v)]);
        }
        CHECK(mx == 9);
    }
    // cutting a child of the root removes its whole subtree
    const auto& t = set.trees[0];
    NodeId child = 0;
    for (NodeId v = 1; v < set.net->size(); ++v)
        if (t.parent[static_cast<size_t>(v)] == 0) child = v;
    FaultSet f;
    f.nodes.insert(child);
    auto arr = broadcast(t, f);
    for (NodeId v = 1; v < set.net->size(); ++v) {
        auto p = t.path_ids(v);
        bool below = std::find(p.begin(), p.end(), child) != p.end();
        CHECK((arr[static_cast<size_t>(v)] == -1) == below);
    }
    FaultSet root;
    root.nodes.insert(0);
    CHECK_THROWS(broadcast(t, root));
}

TEST_CASE("trace rendering") {
    const TreeSet& set = resolved_set(Scheme::IST, 2);
    auto out = simulate_route({0, 0}, {1, 0}, set, 1);
    std::string txt = format_trace(out);
    CHECK(txt.find("step 1: 0,0 --") != std::string::npos);
    CHECK(txt.find("via tree 1") != std::string::npos);
    CHECK(trace_json(out).find("\"delivered\":true") != std::string::npos);
    CHECK_THROWS(init_routing({1, 0}, {1, 0}, set, 1));
}
