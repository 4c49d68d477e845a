#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ejnet/ej.hpp"

namespace ejnet {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// Dense EJ network.  Node ordinals follow (weight, x, y); node 0 is the origin.
class DenseEJ {
public:
    explicit DenseEJ(const Generator& g);
    static DenseEJ of(i64 a) { return DenseEJ(Generator::dense(a)); }

    const Generator& gen() const { return gen_; }
    i64 k() const { return gen_.k; }
    NodeId size() const { return static_cast<NodeId>(nodes_.size()); }
    const std::vector<EJInt>& nodes() const { return nodes_; }
    EJInt addr(NodeId i) const { return nodes_[static_cast<size_t>(i)]; }

    // kNoNode if v is not canonical
    NodeId id(EJInt v) const;
    NodeId id_of_any(EJInt v) const { return id(reduce(v, gen_)); }
    bool contains(EJInt v) const { return id(v) != kNoNode; }

    NodeId neighbor(NodeId i, Direction d) const { return nbr_[static_cast<size_t>(i) * 6 + d.m]; }
    // Direction from i to j, or -1 if not adjacent.
    int direction_to(NodeId i, NodeId j) const;

    std::vector<std::pair<Direction, EJInt>> neighbors(EJInt v) const;
    bool is_wraparound(EJInt u, Direction d) const;
    i64 distance(EJInt u, EJInt v) const;
    std::vector<int> bfs(NodeId from) const;
    std::vector<i64> distance_distribution() const;

    // Undirected edges as (lo, hi, direction lo->hi); 3N of them.
    struct Edge {
        NodeId u, v;
        Direction d;
    };
    std::vector<Edge> edges() const;

private:
    Generator gen_;
    std::vector<EJInt> nodes_;
    std::vector<NodeId> grid_;  // (2k+1)^2 lookup
    std::vector<NodeId> nbr_;   // 6 per node
};

// Faulty nodes and links.  Links are unordered pairs stored as (min, max).
struct FaultSet {
    std::set<NodeId> nodes;
    std::set<std::pair<NodeId, NodeId>> links;

    bool empty() const { return nodes.empty() && links.empty(); }
    bool node_faulty(NodeId v) const { return nodes.count(v) != 0; }
    bool link_faulty(NodeId u, NodeId v) const {
        return links.count(u < v ? std::make_pair(u, v) : std::make_pair(v, u)) != 0;
    }
    void add_link(NodeId u, NodeId v) { links.insert(u < v ? std::make_pair(u, v) : std::make_pair(v, u)); }
};

// Cross product of dense EJ layers, highest dimension first.  Nodes are mixed-radix
// ordinals; adjacency is computed on demand.
class ProductNet {
public:
    explicit ProductNet(std::vector<DenseEJ> layers);
    static ProductNet uniform(i64 a, int dims);

    int dims() const { return static_cast<int>(layers_.size()); }
    const DenseEJ& layer(int i) const { return layers_[static_cast<size_t>(i)]; }
    std::int64_t size() const { return size_; }
    int degree() const { return 6 * dims(); }

    std::vector<NodeId> coords(std::int64_t id) const;
    std::int64_t id(const std::vector<NodeId>& coords) const;
    std::vector<EJInt> addrs(std::int64_t id) const;

    struct Hop {
        int dim;  // layer index, 0 = highest
        Direction d;
        std::int64_t to;
    };
    std::vector<Hop> neighbors(std::int64_t id) const;
    bool adjacent(std::int64_t u, std::int64_t v) const;

private:
    std::vector<DenseEJ> layers_;
    std::vector<std::int64_t> stride_;
    std::int64_t size_ = 1;
};

std::string network_dot(const DenseEJ& net);
std::string network_json(const DenseEJ& net);
std::string product_dot(const ProductNet& net);
std::string product_json(const ProductNet& net);

}  // namespace ejnet
