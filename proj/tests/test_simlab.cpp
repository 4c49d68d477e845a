#include <doctest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ejnet/simlab.hpp"
#include "oracle.hpp"

using namespace ejnet;

TEST_CASE("binomial") {
    CHECK(binomial(18, 5) == 8568);
    CHECK(binomial(36, 5) == 376992);
    CHECK(binomial(5, 7) == 0);
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(100, 50) == std::numeric_limits<std::uint64_t>::max());
    CHECK(binomial(66, 33) == 7219428434016265740ull);
}

TEST_CASE("averages truncate to 3 decimals") {
    SimRecord r;
    r.sets = 816;
    r.sum = 2978;  // 3.64951
    CHECK(r.avg_str() == "3.649");
    r.sets = 3;
    r.sum = 10;
    CHECK(r.avg_str() == "3.333");
    r.sets = 1;
    r.sum = 4;
    CHECK(r.avg_str() == "4.000");
    r.sets = 0;
    CHECK(r.avg_str() == "nan");
}

TEST_CASE("metric without faults is k+1") {
    for (i64 a = 1; a <= 6; ++a) {
        for (const char* rd : {"printed", "resolved"}) {
            TreeSet set = trees_for(Scheme::IST, a, rd);
            CHECK(metric(set, {}) == a + 1);
        }
    }
    FaultSet root;
    root.nodes.insert(0);
    CHECK_THROWS(metric(resolved_set(Scheme::IST, 2), root));
}

TEST_CASE("fast metric matches the brute-force metric") {
    std::mt19937_64 rng(3);
    for (const char* rd : {"printed", "resolved"})
        for (i64 a = 2; a <= 4; ++a) {
            TreeSet set = trees_for(Scheme::IST, a, rd);
            MetricEval ev(set);
            const auto& net = *set.net;
            for (int rep = 0; rep < 200; ++rep) {
                int f = static_cast<int>(rng() % 6);
                std::vector<NodeId> nodes;
                std::set<EJInt> addrs;
                while (static_cast<int>(nodes.size()) < f) {
                    NodeId v = static_cast<NodeId>(1 + rng() % static_cast<std::uint64_t>(net.size() - 1));
                    if (addrs.insert(net.addr(v)).second) nodes.push_back(v);
                }
                int lost = 0;
                int want = oracle::metric(set.trees, addrs, &lost);
                auto got = ev.eval(nodes);
                CHECK(got.metric == want);
                CHECK(got.unreachable == lost);
            }
        }
}

TEST_CASE("link faults in the metric") {
    const TreeSet& set = resolved_set(Scheme::EDNIST, 2);
    MetricEval ev(set);
    const auto& t1 = set.trees[0];
    // cutting every tree-1 edge into a node forces the other trees for it
    for (NodeId v = 1; v < set.net->size(); ++v) {
        auto r = ev.eval({}, {{v, t1.parent[static_cast<size_t>(v)]}});
        CHECK(r.unreachable == 0);
        CHECK(r.metric >= 3);
    }
}

TEST_CASE("exhaustive sweep of the 19-node network") {
    TreeSet set = trees_for(Scheme::IST, 2, "printed");
    const char* avg[] = {"3.000", "3.333", "3.529", "3.649", "3.765", "3.899"};
    const int mx[] = {3, 4, 4, 4, 6, 6};
    double last = 0;
    for (int f = 0; f <= 5; ++f) {
        SimRecord r = experiment(set, f, Policy::exhaustive());
        CHECK(r.avg_str() == avg[f]);
        CHECK(r.max_max == mx[f]);
        CHECK(r.sets == binomial(18, static_cast<std::uint64_t>(f)));
        CHECK(r.bound_violations == 0);
        CHECK(r.avg() >= last);
        last = r.avg();
    }
}

TEST_CASE("resolved trees keep every node reachable and stay in bounds") {
    for (i64 a = 2; a <= 3; ++a) {
        const TreeSet& set = resolved_set(Scheme::IST, a);
        for (int f = 0; f <= 5; ++f) {
            if (a == 3 && f > 3) break;
            SimRecord r = experiment(set, f, Policy::exhaustive());
            CHECK(r.unreachable == 0);
            CHECK(r.invariants_hold());
            CHECK(r.min_metric >= a + 1);
            CHECK(r.max_max <= 2 * a + 2);
        }
    }
}

TEST_CASE("edge-disjoint extension with link faults") {
    const TreeSet& set = resolved_set(Scheme::EDNIST, 2);
    SimOptions one;
    one.links = 1;
    SimRecord r = experiment(set, 1, Policy::exhaustive(), one);
    CHECK(r.sets == 18 * 57);
    CHECK(r.unreachable == 0);
    CHECK(r.guaranteed());
    CHECK(r.invariants_hold());
    CHECK(csv_row(r).find("exhaustive+links=1") != std::string::npos);
}

TEST_CASE("budget") {
    TreeSet set = trees_for(Scheme::IST, 3, "printed");
    SimOptions small;
    small.budget = 100;
    CHECK_THROWS_AS(experiment(set, 2, Policy::exhaustive(), small), BudgetExceeded);
    // auto falls back to sampling and records it
    Policy p;
    p.samples = 50;
    p.seed = 9;
    SimRecord r = experiment(set, 2, p, small);
    CHECK(r.policy.kind == Policy::Sampled);
    CHECK(r.sets == 50);

    setenv("EJST_BUDGET", "1234", 1);
    CHECK(exhaustive_budget() == 1234);
    unsetenv("EJST_BUDGET");
    CHECK(exhaustive_budget() == 10000000);
}

TEST_CASE("sampling is seeded and thread-count independent") {
    TreeSet set = trees_for(Scheme::IST, 3, "printed");
    auto run = [&] { return to_csv({experiment(set, 3, Policy::sampled(20000, 7))}); };
    std::string a = run();
    CHECK(a == run());
    CHECK(a != to_csv({experiment(set, 3, Policy::sampled(20000, 8))}));
#ifdef _OPENMP
    int old = omp_get_max_threads();
    omp_set_num_threads(1);
    std::string serial = run();
    std::string ex1 = to_csv({experiment(set, 3, Policy::exhaustive())});
    omp_set_num_threads(std::max(4, old));
    CHECK(serial == a);
    CHECK(ex1 == to_csv({experiment(set, 3, Policy::exhaustive())}));
    omp_set_num_threads(old);
#endif
}

TEST_CASE("table sweep and CSV") {
    CHECK(to_csv(table_sweep(Scheme::IST, {}, {}, Policy::exhaustive(), "printed")) ==
          "scheme,a,f,policy,avg_max,max_max,sets\n");
    CHECK(to_csv(table_sweep(Scheme::IST, {2}, {}, Policy::exhaustive(), "printed")) == csv_header());
    auto rs = table_sweep(Scheme::IST, {1, 2, 3}, {0, 1, 2, 3, 4, 5}, Policy::exhaustive(), "printed");
    REQUIRE(rs.size() == 18);
    for (int f = 0; f <= 5; ++f) CHECK(rs[static_cast<size_t>(f)].avg_str() == "2.000");
    CHECK(rs[6 + 5].avg_str() == "3.899");
    CHECK(rs[12 + 3].avg_str() == "5.105");
    CHECK(rs[12 + 3].max_max == 6);
    CHECK(csv_row(rs[7]) == "ist,2,1,exhaustive,3.333,4,18\n");
    CHECK(csv_row(experiment(trees_for(Scheme::IST, 2, "printed"), 1, Policy::sampled(10, 7))) ==
          "ist,2,1,\"sampled(10,7)\",3.200,4,10\n");
}
