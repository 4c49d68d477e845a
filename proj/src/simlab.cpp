#include "ejnet/simlab.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ejnet {

std::string Policy::str() const {
    switch (kind) {
        case Exhaustive: return "exhaustive";
        case Sampled: return "sampled(" + std::to_string(samples) + "," + std::to_string(seed) + ")";
        default: return "auto";
    }
}

std::uint64_t exhaustive_budget() {
    if (const char* env = std::getenv("EJST_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && end != env) return v;
    }
    return 10000000ull;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    // acc * (n-r+i) is divisible by i at every step
    std::uint64_t acc = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        std::uint64_t g = std::gcd(acc, i);
        std::uint64_t num = 0;
        if (__builtin_mul_overflow(acc / g, (n - r + i) / (i / g), &num)) return std::numeric_limits<std::uint64_t>::max();
        acc = num;
    }
    return acc;
}

std::string SimRecord::avg_str() const {
    if (sets == 0) return "nan";
    // truncation, not rounding: 2978/816 prints as 3.649
    const std::uint64_t m = sum / sets * 1000 + sum % sets * 1000 / sets;
    std::string frac = std::to_string(m % 1000);
    return std::to_string(m / 1000) + "." + std::string(3 - frac.size(), '0') + frac;
}

MetricEval::MetricEval(const TreeSet& set) {
    const DenseEJ& net = *set.net;
    n_ = net.size();
    k_ = net.k();
    trees_ = static_cast<int>(set.trees.size());
    words_ = (static_cast<size_t>(n_) + 63) / 64;
    const auto N = static_cast<size_t>(n_);
    bits_.assign(static_cast<size_t>(trees_) * N * words_, 0);
    depth_.assign(static_cast<size_t>(trees_) * N, 0);
    parent_.assign(static_cast<size_t>(trees_) * N, kNoNode);
    for (int t = 0; t < trees_; ++t) {
        const SpanningTree& tr = set.trees[static_cast<size_t>(t)];
        for (NodeId v = 1; v < n_; ++v) {
            auto p = tr.path_ids(v);
            if (p.empty()) throw std::invalid_argument("tree is not spanning");
            depth_[static_cast<size_t>(t) * N + v] = static_cast<int>(p.size()) - 1;
            parent_[static_cast<size_t>(t) * N + v] = tr.parent[static_cast<size_t>(v)];
            for (size_t i = 1; i < p.size(); ++i)
                bits_[(static_cast<size_t>(t) * N + v) * words_ + p[i] / 64] |= 1ull << (p[i] % 64);
        }
    }
    order_.assign(N * static_cast<size_t>(trees_), 0);
    for (NodeId v = 1; v < n_; ++v) {
        std::vector<int> idx(static_cast<size_t>(trees_));
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
            return depth_[static_cast<size_t>(x) * N + v] < depth_[static_cast<size_t>(y) * N + v];
        });
        for (int r = 0; r < trees_; ++r)
            order_[static_cast<size_t>(v) * static_cast<size_t>(trees_) + static_cast<size_t>(r)] =
                static_cast<std::uint8_t>(idx[static_cast<size_t>(r)]);
    }
}

MetricEval::Result MetricEval::eval(const std::vector<NodeId>& nodes,
                                    const std::vector<std::pair<NodeId, NodeId>>& links) const {
    Result res;
    int worst = 0;
    const auto N = static_cast<size_t>(n_);
    for (NodeId v = 1; v < n_; ++v) {
        if (std::find(nodes.begin(), nodes.end(), v) != nodes.end()) continue;
        int best = -1;
        for (int r = 0; r < trees_ && best < 0; ++r) {
            int t = order_[static_cast<size_t>(v) * static_cast<size_t>(trees_) + static_cast<size_t>(r)];
            bool ok = true;
            for (NodeId u : nodes)
                if (on_path(t, v, u)) {
                    ok = false;
                    break;
                }
            for (size_t i = 0; i < links.size() && ok; ++i) {
                auto [u, w] = links[i];
                const NodeId* par = &parent_[static_cast<size_t>(t) * N];
                if ((u != 0 && on_path(t, v, u) && par[u] == w) || (w != 0 && on_path(t, v, w) && par[w] == u))
                    ok = false;
            }
            if (ok) best = depth_[static_cast<size_t>(t) * N + v];
        }
        if (best < 0) ++res.unreachable;
        else worst = std::max(worst, best);
    }
    res.metric = worst + 1;
    return res;
}

int metric(const TreeSet& set, const FaultSet& faults) {
    if (faults.node_faulty(0)) throw std::invalid_argument("root is faulty");
    MetricEval ev(set);
    std::vector<NodeId> nodes(faults.nodes.begin(), faults.nodes.end());
    std::vector<std::pair<NodeId, NodeId>> links(faults.links.begin(), faults.links.end());
    auto r = ev.eval(nodes, links);
    if (r.unreachable) throw std::runtime_error(std::to_string(r.unreachable) + " node(s) unreachable on every tree");
    return r.metric;
}

namespace {

// advance c to the next r-combination of {lo..n-1} in lexicographic order
bool next_comb(std::vector<int>& c, int lo, int n) {
    const int r = static_cast<int>(c.size());
    int i = r - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == n - r + i) --i;
    if (i < 0 || c[static_cast<size_t>(i)] < lo) return false;
    ++c[static_cast<size_t>(i)];
    for (int j = i + 1; j < r; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
    return true;
}

std::uint64_t draw(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = g();
    while (x >= limit);
    return x % n;
}

// Floyd's sampler: r distinct values from [0, n), sorted
std::vector<int> sample_subset(std::mt19937_64& g, int n, int r) {
    std::set<int> s;
    for (int j = n - r; j < n; ++j) {
        int t = static_cast<int>(draw(g, static_cast<std::uint64_t>(j) + 1));
        if (!s.insert(t).second) s.insert(j);
    }
    return {s.begin(), s.end()};
}

struct Acc {
    std::uint64_t sets = 0, sum = 0, unreachable = 0, bound = 0;
    int max = 0, min = std::numeric_limits<int>::max();

    void add(const MetricEval::Result& r, i64 lo, i64 hi) {
        ++sets;
        sum += static_cast<std::uint64_t>(r.metric);
        unreachable += static_cast<std::uint64_t>(r.unreachable);
        if (r.metric < lo || r.metric > hi) ++bound;
        max = std::max(max, r.metric);
        min = std::min(min, r.metric);
    }
    void merge(const Acc& o) {
        sets += o.sets;
        sum += o.sum;
        unreachable += o.unreachable;
        bound += o.bound;
        max = std::max(max, o.max);
        min = std::min(min, o.min);
    }
};

}  // namespace

SimRecord experiment(const TreeSet& set, int f, const Policy& policy, const SimOptions& opt) {
    const DenseEJ& net = *set.net;
    const int n = static_cast<int>(net.size()) - 1;  // candidates: ordinals 1..N-1
    if (f < 0 || f > n) throw std::invalid_argument("fault count out of range");
    const int l = opt.links;
    const auto edges = net.edges();
    const int E = static_cast<int>(edges.size());
    if (l < 0 || l > E) throw std::invalid_argument("link fault count out of range");

    const std::uint64_t budget = opt.budget ? opt.budget : exhaustive_budget();
    std::uint64_t total = 0;
    if (__builtin_mul_overflow(binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(f)),
                               binomial(static_cast<std::uint64_t>(E), static_cast<std::uint64_t>(l)), &total))
        total = std::numeric_limits<std::uint64_t>::max();

    Policy pol = policy;
    if (pol.kind == Policy::Auto) pol = total <= budget ? Policy::exhaustive() : Policy::sampled(policy.samples, policy.seed);
    if (pol.kind == Policy::Exhaustive && total > budget)
        throw BudgetExceeded("exhaustive sweep of a=" + std::to_string(net.gen().a) + " f=" + std::to_string(f) +
                             " needs more than " + std::to_string(budget) + " fault sets");

    MetricEval ev(set);
    // one terminal step past the deepest tree: 2k+2 for IST, 2k+3 for EDNIST
    const i64 lo = net.k() + 1, hi = expected_depth(set.scheme, net.k()) + 1;
    std::mutex log_mu;
    std::size_t logged = 0;
    auto to_links = [&](const std::vector<int>& idx) {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (int i : idx) out.emplace_back(edges[static_cast<size_t>(i)].u, edges[static_cast<size_t>(i)].v);
        return out;
    };
    auto log_set = [&](const std::vector<NodeId>& nodes, const std::vector<std::pair<NodeId, NodeId>>& lk,
                       const MetricEval::Result& r) {
        if (!opt.log) return;
        std::lock_guard lock(log_mu);
        if (logged >= opt.log_cap) return;
        ++logged;
        *opt.log << "faults";
        for (NodeId v : nodes) *opt.log << " " << to_string(net.addr(v));
        for (auto [u, w] : lk) *opt.log << " " << to_string(net.addr(u)) << "--" << to_string(net.addr(w));
        *opt.log << " metric=" << r.metric << " unreachable=" << r.unreachable << "\n";
    };

    Acc acc;
    if (pol.kind == Policy::Exhaustive) {
        // split on the first member of the node subset (or the link subset if f = 0)
        const bool split_nodes = f > 0;
        const int outer = split_nodes ? n - f + 1 : (l > 0 ? E - l + 1 : 1);
#pragma omp parallel
        {
            Acc local;
            std::vector<NodeId> nodes(static_cast<size_t>(f));
#pragma omp for schedule(dynamic, 1)
            for (int first = 0; first < outer; ++first) {
                std::vector<int> nc(static_cast<size_t>(f)), lc(static_cast<size_t>(l));
                auto reset = [](std::vector<int>& c, int start) {
                    for (size_t i = 0; i < c.size(); ++i) c[i] = start + static_cast<int>(i);
                };
                reset(nc, split_nodes ? first : 0);
                bool more_nodes = true;
                while (more_nodes) {
                    for (int i = 0; i < f; ++i) nodes[static_cast<size_t>(i)] = nc[static_cast<size_t>(i)] + 1;
                    reset(lc, split_nodes ? 0 : first);
                    bool more_links = true;
                    while (more_links) {
                        auto lk = to_links(lc);
                        auto r = ev.eval(nodes, lk);
                        local.add(r, lo, hi);
                        log_set(nodes, lk, r);
                        if (l == 0) break;
                        // lo = first + 1 pins lc[0] when the split is on links
                        more_links = next_comb(lc, split_nodes ? 0 : first + 1, E);
                    }
                    if (f == 0) break;
                    more_nodes = next_comb(nc, first + 1, n);
                }
            }
#pragma omp critical
            acc.merge(local);
        }
    } else {
        std::mt19937_64 gen(pol.seed);
        const std::uint64_t chunk = 1u << 14;
        for (std::uint64_t done = 0; done < pol.samples; done += chunk) {
            const std::uint64_t m = std::min(chunk, pol.samples - done);
            std::vector<std::vector<NodeId>> ns(m);
            std::vector<std::vector<std::pair<NodeId, NodeId>>> ls(m);
            for (std::uint64_t i = 0; i < m; ++i) {
                for (int v : sample_subset(gen, n, f)) ns[i].push_back(v + 1);
                ls[i] = to_links(sample_subset(gen, E, l));
            }
#pragma omp parallel
            {
                Acc local;
#pragma omp for schedule(static)
                for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
                    auto r = ev.eval(ns[static_cast<size_t>(i)], ls[static_cast<size_t>(i)]);
                    local.add(r, lo, hi);
                    log_set(ns[static_cast<size_t>(i)], ls[static_cast<size_t>(i)], r);
                }
#pragma omp critical
                acc.merge(local);
            }
        }
    }

    SimRecord rec;
    rec.scheme = set.scheme;
    rec.a = net.gen().a;
    rec.f = f;
    rec.links = l;
    rec.policy = pol;
    rec.reading = set.interpretation_id;
    rec.sets = acc.sets;
    rec.sum = acc.sum;
    rec.max_max = acc.max;
    rec.min_metric = acc.sets ? acc.min : 0;
    rec.unreachable = acc.unreachable;
    rec.bound_violations = acc.bound;
    return rec;
}

std::vector<SimRecord> table_sweep(Scheme s, const std::vector<i64>& as, const std::vector<int>& fs,
                                   const Policy& policy, std::string_view reading, const SimOptions& opt) {
    std::vector<SimRecord> out;
    for (i64 a : as) {
        if (fs.empty()) continue;
        TreeSet set = trees_for(s, a, reading);
        for (int f : fs) out.push_back(experiment(set, f, policy, opt));
    }
    return out;
}

std::string csv_header() { return "scheme,a,f,policy,avg_max,max_max,sets\n"; }

std::string csv_row(const SimRecord& r) {
    std::ostringstream os;
    std::string pol = r.policy.str();
    if (r.links) pol += "+links=" + std::to_string(r.links);
    if (pol.find(',') != std::string::npos) pol = "\"" + pol + "\"";
    os << scheme_name(r.scheme) << "," << r.a << "," << r.f << "," << pol << "," << r.avg_str() << "," << r.max_max
       << "," << r.sets << "\n";
    return os.str();
}

std::string to_csv(const std::vector<SimRecord>& rs) {
    std::string out = csv_header();
    for (const auto& r : rs) out += csv_row(r);
    return out;
}

}  // namespace ejnet
