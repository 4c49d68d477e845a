#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ejnet/spantree.hpp"

namespace ejnet {

std::size_t ProductTree::edge_count() const {
    return static_cast<std::size_t>(std::count_if(parent.begin(), parent.end(), [](std::int64_t p) { return p >= 0; }));
}

// Tree t on the top layer; every top node carries a copy of the (n-1)-dimensional tree t,
// and copies hang off each other at the lower root.  Unrolled, a node moves along the
// lowest layer whose coordinate is not yet at the root.
std::vector<ProductTree> build_product_trees(Scheme s, std::shared_ptr<const ProductNet> net, std::string_view reading) {
    const int dims = net->dims();
    std::vector<TreeSet> layer_sets;
    for (int i = 0; i < dims; ++i) {
        i64 a = net->layer(i).gen().a;
        if (a < 1) throw std::invalid_argument("layer generator");
        layer_sets.push_back(trees_for(s, a, reading));
    }
    std::vector<ProductTree> out;
    for (int t = 1; t <= tree_count(s); ++t) {
        ProductTree pt;
        pt.scheme = s;
        pt.t = t;
        pt.net = net;
        pt.parent.assign(static_cast<size_t>(net->size()), -1);
        pt.dim.assign(static_cast<size_t>(net->size()), -1);
        pt.dir.assign(static_cast<size_t>(net->size()), -1);
        for (std::int64_t id = 1; id < net->size(); ++id) {
            auto c = net->coords(id);
            int i = dims - 1;
            while (c[static_cast<size_t>(i)] == 0) --i;
            const SpanningTree& lt = layer_sets[static_cast<size_t>(i)].trees[static_cast<size_t>(t - 1)];
            NodeId from = c[static_cast<size_t>(i)];
            c[static_cast<size_t>(i)] = lt.parent[static_cast<size_t>(from)];
            pt.parent[static_cast<size_t>(id)] = net->id(c);
            pt.dim[static_cast<size_t>(id)] = static_cast<std::int8_t>(i);
            pt.dir[static_cast<size_t>(id)] = lt.parent_dir[static_cast<size_t>(from)];
        }
        out.push_back(std::move(pt));
    }
    return out;
}

Check verify_product_spanning(const ProductTree& tree) {
    Check c{"product-spanning", true, 0, {}};
    const ProductNet& net = *tree.net;
    auto fail = [&](const std::string& why) {
        if (c.violations++ == 0) c.first = why;
        c.pass = false;
    };
    if (tree.edge_count() != static_cast<std::size_t>(net.size() - 1)) fail("edge count != N-1");
    const std::int64_t n = net.size();
    for (std::int64_t v = 1; v < n; ++v) {
        std::int64_t cur = v, steps = 0;
        while (cur != 0 && steps <= n) {
            std::int64_t p = tree.parent[static_cast<size_t>(cur)];
            if (p < 0 || !net.adjacent(cur, p)) break;
            cur = p;
            ++steps;
        }
        if (cur != 0) fail("chain from product node " + std::to_string(v) + " never reaches the root");
    }
    return c;
}

Check verify_product_edge_disjoint(const std::vector<ProductTree>& trees) {
    Check c{"product-edge-disjoint", true, 0, {}};
    std::set<std::pair<std::int64_t, std::int64_t>> used;
    for (const auto& tr : trees)
        for (std::int64_t v = 1; v < static_cast<std::int64_t>(tr.parent.size()); ++v) {
            std::int64_t p = tr.parent[static_cast<size_t>(v)];
            if (p < 0) continue;
            if (!used.insert({std::min(p, v), std::max(p, v)}).second) {
                if (c.violations++ == 0)
                    c.first = "edge " + std::to_string(p) + "--" + std::to_string(v) + " reused by tree " +
                              std::to_string(tr.t);
                c.pass = false;
            }
        }
    return c;
}

std::string tree_dot(const SpanningTree& tree, bool child_to_parent) {
    const DenseEJ& net = *tree.net;
    std::ostringstream os;
    os << "digraph " << scheme_name(tree.scheme) << "_t" << tree.t << " {\n";
    for (NodeId i = 0; i < net.size(); ++i) {
        os << "  n" << i << " [label=\"" << to_string(net.addr(i)) << "\"";
        if (i == 0) os << ", shape=doublecircle";
        os << "];\n";
    }
    for (NodeId v = 1; v < net.size(); ++v) {
        NodeId p = tree.parent[static_cast<size_t>(v)];
        if (p == kNoNode) continue;
        Direction d(tree.parent_dir[static_cast<size_t>(v)]);
        if (child_to_parent) os << "  n" << v << " -> n" << p;
        else os << "  n" << p << " -> n" << v;
        os << " [label=\"" << dir_name(child_to_parent ? d : -d) << "\"";
        if (net.is_wraparound(net.addr(v), d)) os << ", style=dashed";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::string tree_json(const SpanningTree& tree) {
    const DenseEJ& net = *tree.net;
    nlohmann::json j;
    j["scheme"] = scheme_name(tree.scheme);
    j["t"] = tree.t;
    j["root"] = {tree.root().x, tree.root().y};
    j["interpretation_id"] = tree.interpretation_id;
    auto& parents = j["parents"] = nlohmann::json::array();
    for (NodeId v = 1; v < net.size(); ++v) {
        EJInt a = net.addr(v);
        parents.push_back({a.x, a.y, tree.parent_dir[static_cast<size_t>(v)]});
    }
    return j.dump() + "\n";
}

std::string product_tree_dot(const ProductTree& tree, bool child_to_parent) {
    const ProductNet& net = *tree.net;
    auto label = [&](std::int64_t id) {
        std::string s;
        for (EJInt v : net.addrs(id)) {
            if (!s.empty()) s += ";";
            s += to_string(v);
        }
        return s;
    };
    std::ostringstream os;
    os << "digraph " << scheme_name(tree.scheme) << "_product_t" << tree.t << " {\n";
    for (std::int64_t i = 0; i < net.size(); ++i) os << "  n" << i << " [label=\"" << label(i) << "\"];\n";
    for (std::int64_t v = 1; v < net.size(); ++v) {
        std::int64_t p = tree.parent[static_cast<size_t>(v)];
        if (p < 0) continue;
        if (child_to_parent) os << "  n" << v << " -> n" << p;
        else os << "  n" << p << " -> n" << v;
        os << " [label=\"d" << int(tree.dim[static_cast<size_t>(v)]) << ":"
           << dir_name(Direction(tree.dir[static_cast<size_t>(v)])) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace ejnet
