#include <benchmark/benchmark.h>

#include "ejnet/routing.hpp"
#include "ejnet/simlab.hpp"

using namespace ejnet;

static void BM_Reduce(benchmark::State& st) {
    auto g = Generator::dense(st.range(0));
    i64 x = 12345, y = -6789;
    for (auto _ : st) {
        benchmark::DoNotOptimize(reduce({x, y}, g));
        ++x;
    }
}
BENCHMARK(BM_Reduce)->Arg(4)->Arg(32);

static void BM_Construct(benchmark::State& st) {
    const i64 a = st.range(0);
    auto net = network(a);
    Reading r = resolve(Scheme::IST, a).reading;
    for (auto _ : st) benchmark::DoNotOptimize(construct(net, Scheme::IST, r));
}
BENCHMARK(BM_Construct)->Arg(4)->Arg(8);

static void BM_Verify(benchmark::State& st) {
    const TreeSet& set = resolved_set(Scheme::IST, st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(verify_treeset(set));
}
BENCHMARK(BM_Verify)->Arg(4)->Arg(6);

// source-side cost: word lookup and the first hop
static void BM_InitRouting(benchmark::State& st) {
    const TreeSet& set = resolved_set(Scheme::IST, st.range(0));
    const auto& net = *set.net;
    NodeId d = 1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(init_routing({0, 0}, net.addr(d), set, 1));
        d = d + 1 == net.size() ? 1 : d + 1;
    }
}
BENCHMARK(BM_InitRouting)->Arg(4)->Arg(8);

static void BM_Metric(benchmark::State& st) {
    TreeSet set = trees_for(Scheme::IST, st.range(0), "printed");
    MetricEval ev(set);
    std::vector<NodeId> f{3, 7, 11, 13, 17};
    for (auto _ : st) benchmark::DoNotOptimize(ev.eval(f));
}
BENCHMARK(BM_Metric)->Arg(2)->Arg(4);

static void BM_Sweep(benchmark::State& st) {
    TreeSet set = trees_for(Scheme::IST, 3, "printed");
    for (auto _ : st) benchmark::DoNotOptimize(experiment(set, static_cast<int>(st.range(0)), Policy::exhaustive()));
}
BENCHMARK(BM_Sweep)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
