#include "ejnet/routing.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ejnet {

RouteMessage init_routing(EJInt S, EJInt D, const TreeSet& set, int t) {
    const Generator& g = set.net->gen();
    S = reduce(S, g);
    D = reduce(D, g);
    if (S == D) throw std::invalid_argument("source equals destination");
    EJInt rel = reduce(D - S, g);
    RouteMessage msg;
    msg.gen = g;
    msg.dest = D;
    msg.tree = t;
    msg.word = set.path_word(t, rel);
    msg.remaining.assign(msg.word.tuples.begin(), msg.word.tuples.end());
    auto [dir, steps] = msg.remaining.front();
    msg.remaining.pop_front();
    msg.dir = dir;
    msg.steps = steps - 1;
    msg.current = reduce(S + unit(dir), g);
    msg.hop_trace = {S, msg.current};
    msg.hop_dirs = {dir};
    return msg;
}

std::variant<Delivered, RouteMessage> route_step(RouteMessage msg) {
    if (congruent(msg.current, msg.dest, msg.gen))
        return Delivered{std::move(msg.hop_trace), std::move(msg.hop_dirs), msg.tree, std::move(msg.word)};
    if (msg.steps == 0) {
        if (msg.remaining.empty()) throw std::runtime_error("path word exhausted before delivery");
        std::tie(msg.dir, msg.steps) = msg.remaining.front();
        msg.remaining.pop_front();
    }
    msg.steps -= 1;
    msg.current = reduce(msg.current + unit(msg.dir), msg.gen);
    msg.hop_trace.push_back(msg.current);
    msg.hop_dirs.push_back(msg.dir);
    return msg;
}

RouteOutcome simulate_route(EJInt S, EJInt D, const TreeSet& set, int t, const FaultSet& faults) {
    const DenseEJ& net = *set.net;
    RouteOutcome out;
    out.tree = t;
    RouteMessage msg = init_routing(S, D, set, t);
    out.word = msg.word;
    auto blocked = [&](const RouteMessage& m) -> std::string {
        EJInt from = m.hop_trace[m.hop_trace.size() - 2];
        if (faults.link_faulty(net.id(from), net.id(m.current)))
            return "link " + to_string(from) + "--" + to_string(m.current) + " is faulty";
        if (faults.node_faulty(net.id(m.current))) return "node " + to_string(m.current) + " is faulty";
        return {};
    };
    const std::size_t limit = static_cast<std::size_t>(net.size()) + 2;
    while (true) {
        if (auto why = blocked(msg); !why.empty()) {
            out.hop_trace = msg.hop_trace;
            out.hop_dirs = msg.hop_dirs;
            out.dropped = why;
            return out;
        }
        auto next = route_step(std::move(msg));
        if (auto* d = std::get_if<Delivered>(&next)) {
            out.delivered = true;
            out.hop_trace = std::move(d->hop_trace);
            out.hop_dirs = std::move(d->hop_dirs);
            return out;
        }
        msg = std::move(std::get<RouteMessage>(next));
        if (msg.hop_trace.size() > limit) throw std::runtime_error("route does not terminate");
    }
}

std::optional<TreeRoute> fault_tolerant_route(EJInt S, EJInt D, const TreeSet& set, const FaultSet& faults) {
    const DenseEJ& net = *set.net;
    const Generator& g = net.gen();
    S = reduce(S, g);
    D = reduce(D, g);
    std::optional<TreeRoute> best;
    for (const auto& tr : set.trees) {
        auto path = translated_path(tr, S, D);
        bool ok = true;
        for (size_t i = 0; i < path.size() && ok; ++i) {
            NodeId v = net.id(path[i]);
            if (faults.node_faulty(v)) ok = false;
            if (i > 0 && faults.link_faulty(net.id(path[i - 1]), v)) ok = false;
        }
        if (ok && (!best || path.size() < best->path.size())) best = TreeRoute{tr.t, std::move(path)};
    }
    return best;
}

DeliveryPlan split_delivery(EJInt S, EJInt D, const TreeSet& set) {
    const Generator& g = set.net->gen();
    S = reduce(S, g);
    D = reduce(D, g);
    if (S == D) throw std::invalid_argument("source equals destination");
    DeliveryPlan plan;
    for (const auto& tr : set.trees) plan.paths.push_back({tr.t, translated_path(tr, S, D)});
    for (size_t i = 0; i < plan.paths.size(); ++i)
        for (size_t j = i + 1; j < plan.paths.size(); ++j) {
            const auto& p = plan.paths[i].path;
            const auto& q = plan.paths[j].path;
            std::set<EJInt> inner(p.begin() + 1, p.end() - 1);
            std::vector<EJInt> shared;
            for (size_t m = 1; m + 1 < q.size(); ++m)
                if (inner.count(q[m])) shared.push_back(q[m]);
            if (!shared.empty()) plan.conflicts.push_back({plan.paths[i].tree, plan.paths[j].tree, shared});
        }
    return plan;
}

std::vector<int> broadcast(const SpanningTree& tree, const FaultSet& faults) {
    const DenseEJ& net = *tree.net;
    if (faults.node_faulty(0)) throw std::invalid_argument("root is faulty");
    std::vector<int> arrival(static_cast<size_t>(net.size()), -2);
    arrival[0] = 0;
    // memoized walk up the parent chain
    for (NodeId v = 1; v < net.size(); ++v) {
        std::vector<NodeId> chain;
        NodeId cur = v;
        while (arrival[static_cast<size_t>(cur)] == -2) {
            chain.push_back(cur);
            cur = tree.parent[static_cast<size_t>(cur)];
            if (cur == kNoNode) break;
        }
        int base = cur == kNoNode ? -1 : arrival[static_cast<size_t>(cur)];
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            NodeId u = *it;
            NodeId p = tree.parent[static_cast<size_t>(u)];
            bool cut = base < 0 || faults.node_faulty(u) || (p != kNoNode && faults.link_faulty(u, p));
            base = cut ? -1 : base + 1;
            arrival[static_cast<size_t>(u)] = base;
        }
    }
    return arrival;
}

std::string format_trace(const RouteOutcome& out) {
    std::ostringstream os;
    os << "word " << out.word.str() << "\n";
    for (size_t i = 0; i + 1 < out.hop_trace.size(); ++i)
        os << "step " << i + 1 << ": " << to_string(out.hop_trace[i]) << " --" << dir_name(out.hop_dirs[i]) << "--> "
           << to_string(out.hop_trace[i + 1]) << "\n";
    if (out.delivered) os << "delivered in " << out.hop_trace.size() - 1 << " hops via tree " << out.tree << "\n";
    else os << "dropped after " << out.hop_trace.size() - 1 << " hops via tree " << out.tree << ": " << out.dropped << "\n";
    return os.str();
}

std::string trace_json(const RouteOutcome& out) {
    nlohmann::json j;
    j["tree"] = out.tree;
    j["word"] = out.word.str();
    j["delivered"] = out.delivered;
    auto& steps = j["steps"] = nlohmann::json::array();
    for (size_t i = 0; i + 1 < out.hop_trace.size(); ++i)
        steps.push_back({{"step", i + 1},
                         {"from", {out.hop_trace[i].x, out.hop_trace[i].y}},
                         {"dir", dir_name(out.hop_dirs[i])},
                         {"to", {out.hop_trace[i + 1].x, out.hop_trace[i + 1].y}}});
    j["hops"] = out.hop_trace.empty() ? 0 : out.hop_trace.size() - 1;
    if (!out.delivered) j["dropped"] = out.dropped;
    return j.dump() + "\n";
}

}  // namespace ejnet
