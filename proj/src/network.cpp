#include "ejnet/network.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ejnet {

namespace {

i64 mod(i64 v, i64 n) { return ((v % n) + n) % n; }

i64 inverse_mod(i64 b, i64 n) {
    // extended euclid
    i64 t = 0, nt = 1, r = n, nr = mod(b, n);
    while (nr != 0) {
        i64 q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    if (r != 1) throw std::logic_error("b not invertible mod N");
    return mod(t, n);
}

}  // namespace

DenseEJ::DenseEJ(const Generator& g) : gen_(g) {
    const i64 k = g.k;
    for (i64 x = -k; x <= k; ++x)
        for (i64 y = -k; y <= k; ++y)
            if (weight({x, y}) <= k) nodes_.push_back({x, y});
    std::sort(nodes_.begin(), nodes_.end(), [](EJInt p, EJInt q) {
        i64 wp = weight(p), wq = weight(q);
        if (wp != wq) return wp < wq;
        return p < q;
    });
    if (static_cast<i64>(nodes_.size()) != g.norm)
        throw std::logic_error("ball size differs from N(alpha)");

    // Z[rho]/alpha is cyclic of order N with rho = -a/b; the ball must hit every class once.
    const i64 n = g.norm;
    const i64 r = mod(-g.a * inverse_mod(g.b, n), n);
    std::vector<char> hit(static_cast<size_t>(n), 0);
    for (EJInt v : nodes_) {
        auto c = static_cast<size_t>(mod(mod(v.x, n) + mod(v.y, n) * r, n));
        if (hit[c]) throw std::logic_error("residues not unique: generator is not dense");
        hit[c] = 1;
    }

    const i64 side = 2 * k + 1;
    grid_.assign(static_cast<size_t>(side * side), kNoNode);
    for (NodeId i = 0; i < size(); ++i) {
        EJInt v = addr(i);
        grid_[static_cast<size_t>((v.x + k) * side + (v.y + k))] = i;
    }
    nbr_.resize(nodes_.size() * 6);
    for (NodeId i = 0; i < size(); ++i)
        for (int m = 0; m < 6; ++m) nbr_[static_cast<size_t>(i) * 6 + m] = id(reduce(addr(i) + unit_pow(m), gen_));
}

NodeId DenseEJ::id(EJInt v) const {
    const i64 k = gen_.k;
    if (v.x < -k || v.x > k || v.y < -k || v.y > k) return kNoNode;
    return grid_[static_cast<size_t>((v.x + k) * (2 * k + 1) + (v.y + k))];
}

int DenseEJ::direction_to(NodeId i, NodeId j) const {
    for (int m = 0; m < 6; ++m)
        if (neighbor(i, Direction(m)) == j) return m;
    return -1;
}

std::vector<std::pair<Direction, EJInt>> DenseEJ::neighbors(EJInt v) const {
    NodeId i = id(v);
    if (i == kNoNode) throw std::invalid_argument("unknown address " + to_string(v));
    std::vector<std::pair<Direction, EJInt>> out;
    for (int m = 0; m < 6; ++m) out.emplace_back(Direction(m), addr(neighbor(i, Direction(m))));
    return out;
}

bool DenseEJ::is_wraparound(EJInt u, Direction d) const { return !is_canonical(u + unit(d), gen_); }

i64 DenseEJ::distance(EJInt u, EJInt v) const { return weight(reduce(v - u, gen_)); }

std::vector<int> DenseEJ::bfs(NodeId from) const {
    std::vector<int> dist(nodes_.size(), -1);
    std::deque<NodeId> q{from};
    dist[static_cast<size_t>(from)] = 0;
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop_front();
        for (int m = 0; m < 6; ++m) {
            NodeId w = neighbor(u, Direction(m));
            if (dist[static_cast<size_t>(w)] < 0) {
                dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
                q.push_back(w);
            }
        }
    }
    return dist;
}

std::vector<i64> DenseEJ::distance_distribution() const {
    std::vector<i64> out(static_cast<size_t>(gen_.k + 1), 0);
    for (int d : bfs(0)) ++out[static_cast<size_t>(d)];
    return out;
}

std::vector<DenseEJ::Edge> DenseEJ::edges() const {
    std::vector<Edge> out;
    for (NodeId i = 0; i < size(); ++i)
        for (int m = 0; m < 6; ++m) {
            NodeId j = neighbor(i, Direction(m));
            if (i < j) out.push_back({i, j, Direction(m)});
        }
    return out;
}

ProductNet::ProductNet(std::vector<DenseEJ> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("product needs at least one layer");
    stride_.assign(layers_.size(), 1);
    for (size_t i = layers_.size(); i-- > 0;) {
        stride_[i] = size_;
        size_ *= layers_[i].size();
    }
}

ProductNet ProductNet::uniform(i64 a, int dims) {
    if (dims < 1) throw std::invalid_argument("dims must be >= 1");
    std::vector<DenseEJ> ls;
    for (int i = 0; i < dims; ++i) ls.push_back(DenseEJ::of(a));
    return ProductNet(std::move(ls));
}

std::vector<NodeId> ProductNet::coords(std::int64_t id) const {
    std::vector<NodeId> c(layers_.size());
    for (size_t i = 0; i < layers_.size(); ++i) c[i] = static_cast<NodeId>((id / stride_[i]) % layers_[i].size());
    return c;
}

std::int64_t ProductNet::id(const std::vector<NodeId>& c) const {
    std::int64_t out = 0;
    for (size_t i = 0; i < layers_.size(); ++i) out += stride_[i] * c[i];
    return out;
}

std::vector<EJInt> ProductNet::addrs(std::int64_t id) const {
    auto c = coords(id);
    std::vector<EJInt> out;
    for (size_t i = 0; i < c.size(); ++i) out.push_back(layers_[i].addr(c[i]));
    return out;
}

std::vector<ProductNet::Hop> ProductNet::neighbors(std::int64_t id) const {
    auto c = coords(id);
    std::vector<Hop> out;
    for (size_t i = 0; i < layers_.size(); ++i)
        for (int m = 0; m < 6; ++m) {
            NodeId w = layers_[i].neighbor(c[i], Direction(m));
            out.push_back({static_cast<int>(i), Direction(m), id + (w - c[i]) * stride_[i]});
        }
    return out;
}

bool ProductNet::adjacent(std::int64_t u, std::int64_t v) const {
    auto cu = coords(u), cv = coords(v);
    int diff = -1;
    for (size_t i = 0; i < cu.size(); ++i)
        if (cu[i] != cv[i]) {
            if (diff >= 0) return false;
            diff = static_cast<int>(i);
        }
    return diff >= 0 && layers_[static_cast<size_t>(diff)].direction_to(cu[static_cast<size_t>(diff)],
                                                                        cv[static_cast<size_t>(diff)]) >= 0;
}

std::string network_dot(const DenseEJ& net) {
    std::ostringstream os;
    os << "graph ej_" << net.gen().a << "_" << net.gen().b << " {\n";
    for (NodeId i = 0; i < net.size(); ++i) os << "  n" << i << " [label=\"" << to_string(net.addr(i)) << "\"];\n";
    for (const auto& e : net.edges()) {
        os << "  n" << e.u << " -- n" << e.v;
        if (net.is_wraparound(net.addr(e.u), e.d)) os << " [style=dashed]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string network_json(const DenseEJ& net) {
    nlohmann::json j;
    j["generator"] = {{"a", net.gen().a}, {"b", net.gen().b}};
    auto& nodes = j["nodes"] = nlohmann::json::array();
    for (EJInt v : net.nodes()) nodes.push_back({v.x, v.y});
    auto& edges = j["edges"] = nlohmann::json::array();
    for (const auto& e : net.edges()) edges.push_back({e.u, e.v, e.d.m});
    return j.dump() + "\n";
}

namespace {
std::string product_label(const ProductNet& net, std::int64_t id) {
    std::string s;
    for (EJInt v : net.addrs(id)) {
        if (!s.empty()) s += ";";
        s += to_string(v);
    }
    return s;
}
}  // namespace

std::string product_dot(const ProductNet& net) {
    std::ostringstream os;
    os << "graph ej_product {\n";
    for (std::int64_t i = 0; i < net.size(); ++i) os << "  n" << i << " [label=\"" << product_label(net, i) << "\"];\n";
    for (std::int64_t i = 0; i < net.size(); ++i) {
        auto c = net.coords(i);
        for (const auto& h : net.neighbors(i)) {
            if (h.to <= i) continue;
            os << "  n" << i << " -- n" << h.to;
            const DenseEJ& L = net.layer(h.dim);
            if (L.is_wraparound(L.addr(c[static_cast<size_t>(h.dim)]), h.d)) os << " [style=dashed]";
            os << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string product_json(const ProductNet& net) {
    nlohmann::json j;
    auto& gens = j["generators"] = nlohmann::json::array();
    for (int i = 0; i < net.dims(); ++i) gens.push_back({{"a", net.layer(i).gen().a}, {"b", net.layer(i).gen().b}});
    auto& nodes = j["nodes"] = nlohmann::json::array();
    auto& edges = j["edges"] = nlohmann::json::array();
    for (std::int64_t i = 0; i < net.size(); ++i) {
        auto row = nlohmann::json::array();
        for (EJInt v : net.addrs(i)) row.push_back({v.x, v.y});
        nodes.push_back(row);
        for (const auto& h : net.neighbors(i))
            if (h.to > i) edges.push_back({i, h.to, h.dim, h.d.m});
    }
    return j.dump() + "\n";
}

}  // namespace ejnet
