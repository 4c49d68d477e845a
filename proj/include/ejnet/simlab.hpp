#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ejnet/network.hpp"
#include "ejnet/spantree.hpp"

namespace ejnet {

struct Policy {
    enum Kind { Exhaustive, Sampled, Auto } kind = Auto;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 20170101;  // default seed

    static Policy exhaustive() { return {Exhaustive, 0, 0}; }
    static Policy sampled(std::uint64_t n, std::uint64_t seed) { return {Sampled, n, seed}; }
    std::string str() const;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Default 10^7 fault sets, overridden by EJST_BUDGET.
std::uint64_t exhaustive_budget();
// C(n, r), saturating at UINT64_MAX
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

struct SimRecord {
    Scheme scheme{};
    i64 a = 0;
    int f = 0;
    int links = 0;       // faulty links per set (EDNIST extension)
    Policy policy;       // resolved: never Auto
    std::string reading;
    std::uint64_t sets = 0;
    std::uint64_t sum = 0;  // sum of per-set metrics
    int max_max = 0;
    int min_metric = 0;
    std::uint64_t unreachable = 0;       // (set, node) pairs with no surviving tree
    std::uint64_t bound_violations = 0;  // sets with metric outside [k+1, depth+1]

    // Fewer faults than trees: every node must stay reachable.
    bool guaranteed() const { return f + links < tree_count(scheme); }
    bool invariants_hold() const { return bound_violations == 0 && (!guaranteed() || unreachable == 0); }

    // Mean rendered to 3 decimals, truncated.
    std::string avg_str() const;
    double avg() const { return sets ? static_cast<double>(sum) / static_cast<double>(sets) : 0.0; }
};

// Precomputed per-tree paths for fast metric evaluation.
class MetricEval {
public:
    explicit MetricEval(const TreeSet& set);

    struct Result {
        int metric = 0;  // 1 + max over reachable non-faulty nodes
        int unreachable = 0;
    };
    // nodes: faulty node ordinals (never 0); links: faulty (u, v) ordinal pairs
    Result eval(const std::vector<NodeId>& nodes, const std::vector<std::pair<NodeId, NodeId>>& links = {}) const;

    NodeId size() const { return n_; }
    i64 k() const { return k_; }

private:
    bool on_path(int t, NodeId v, NodeId u) const {
        return (bits_[(static_cast<size_t>(t) * n_ + v) * words_ + u / 64] >> (u % 64)) & 1u;
    }

    NodeId n_ = 0;
    int trees_ = 0;
    i64 k_ = 0;
    size_t words_ = 0;
    std::vector<std::uint64_t> bits_;   // [tree][node][word]
    std::vector<int> depth_;            // [tree][node]
    std::vector<NodeId> parent_;        // [tree][node]
    std::vector<std::uint8_t> order_;   // [node][rank] -> tree, by depth then index
};

// 1 + max over non-faulty v != root of the shortest surviving tree path.
// Throws if some node has no surviving tree.
int metric(const TreeSet& set, const FaultSet& faults);

struct SimOptions {
    int links = 0;
    std::uint64_t budget = 0;  // 0: exhaustive_budget()
    std::ostream* log = nullptr;
    std::size_t log_cap = 0;
};

SimRecord experiment(const TreeSet& set, int f, const Policy& policy, const SimOptions& opt = {});

std::vector<SimRecord> table_sweep(Scheme s, const std::vector<i64>& as, const std::vector<int>& fs,
                                   const Policy& policy, std::string_view reading, const SimOptions& opt = {});

std::string csv_header();
std::string csv_row(const SimRecord& r);
std::string to_csv(const std::vector<SimRecord>& rs);

}  // namespace ejnet
