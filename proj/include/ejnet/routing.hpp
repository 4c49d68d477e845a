#pragma once

#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ejnet/network.hpp"
#include "ejnet/spantree.hpp"

namespace ejnet {

// The message as it sits on the wire.  `current` is the node that just received it.
struct RouteMessage {
    Direction dir;
    i64 steps = 0;
    std::deque<std::pair<Direction, i64>> remaining;
    EJInt current;
    EJInt dest;
    Generator gen;
    std::vector<EJInt> hop_trace;
    std::vector<Direction> hop_dirs;
    int tree = 1;
    PathWord word;  // full word chosen at the source
};

struct Delivered {
    std::vector<EJInt> hop_trace;
    std::vector<Direction> hop_dirs;
    int tree = 1;
    PathWord word;

    std::size_t hops() const { return hop_trace.empty() ? 0 : hop_trace.size() - 1; }
};

// Source side: map S to 0, look the word up, pop the first tuple and send one hop.
RouteMessage init_routing(EJInt S, EJInt D, const TreeSet& set, int t);
// Receiving side, one node.
std::variant<Delivered, RouteMessage> route_step(RouteMessage msg);

struct RouteOutcome {
    bool delivered = false;
    std::vector<EJInt> hop_trace;
    std::vector<Direction> hop_dirs;
    std::string dropped;  // why it stopped, if it did
    int tree = 1;
    PathWord word;
};

// Runs init_routing + route_step to completion.  Faulty nodes neither forward nor
// consume; a faulty link drops the hop.
RouteOutcome simulate_route(EJInt S, EJInt D, const TreeSet& set, int t, const FaultSet& faults = {});

struct TreeRoute {
    int tree = 0;
    std::vector<EJInt> path;
    std::size_t hops() const { return path.empty() ? 0 : path.size() - 1; }
};

// Among trees whose S->D path avoids every fault, the shortest (lowest index on ties).
std::optional<TreeRoute> fault_tolerant_route(EJInt S, EJInt D, const TreeSet& set, const FaultSet& faults);

struct DeliveryPlan {
    std::vector<TreeRoute> paths;
    struct Shared {
        int a, b;
        std::vector<EJInt> nodes;
    };
    std::vector<Shared> conflicts;  // expected empty
    bool disjoint() const { return conflicts.empty(); }
};

DeliveryPlan split_delivery(EJInt S, EJInt D, const TreeSet& set);

// All-port broadcast on one tree rooted at 0.  -1 = never reached.
std::vector<int> broadcast(const SpanningTree& tree, const FaultSet& faults);

std::string format_trace(const RouteOutcome& out);
std::string trace_json(const RouteOutcome& out);

}  // namespace ejnet
