#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ejnet/ej.hpp"
#include "ejnet/network.hpp"

namespace ejnet {

enum class Scheme { EDNIST, IST };

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view s);
int tree_count(Scheme s);
// rotation offset c of tree t (1-based)
int rotation_offset(Scheme s, int t);
i64 expected_depth(Scheme s, i64 k);

std::shared_ptr<const DenseEJ> network(i64 a);

struct SectorClass {
    Scheme scheme{};
    int cls = -1;  // finest set, see class_label
    std::string_view label;
    i64 x = 0, y = 0;
    int j = 1;  // sector index including the tree's rotation
    int d = 1;  // sector index in the tree-1 frame
};

std::string_view class_label(Scheme s, int cls);
int class_count(Scheme s);
SectorClass classify(Scheme s, const Generator& g, int t, EJInt v);

struct PathWord {
    std::vector<std::pair<Direction, i64>> tuples;

    i64 length() const;
    std::string str() const;
    PathWord rotated(int by) const;
    friend bool operator==(const PathWord&, const PathWord&) = default;
};

// Walks a word from `from`, reducing each step.  Returns every visited node.
std::vector<EJInt> expand(const PathWord& w, EJInt from, const Generator& g);

// One reading of the parent/path tables.  Row exponents are either measured from the
// tree's base direction (t) or from the node's sector index (j); a patch optionally
// overrides parent directions of axis nodes.
struct Reading {
    Scheme scheme{};
    std::uint32_t sector_mask = 0;  // bit r set: parent row r uses j
    int patch = -1;                 // index into patch table, -1 none

    std::string id() const;
    friend bool operator==(const Reading&, const Reading&) = default;
};

int parent_row_count(Scheme s);
int patch_count(Scheme s);
std::string_view patch_name(Scheme s, int p);
Reading printed_reading(Scheme s);
std::optional<Reading> parse_reading(std::string_view id);
// Candidate order used by the resolver: all 2^R exponent-base mixes (all-t first,
// mask counted upward), then the patches in table order on the all-t base.
std::vector<Reading> candidate_readings(Scheme s);

struct SpanningTree {
    Scheme scheme{};
    int t = 1;
    std::shared_ptr<const DenseEJ> net;
    std::string interpretation_id;
    std::vector<NodeId> parent;       // kNoNode at root
    std::vector<std::int8_t> parent_dir;  // -1 at root

    EJInt root() const { return net->addr(0); }
    std::size_t edge_count() const;
    int depth_of(NodeId v) const;  // -1 on a broken chain
    int depth() const;
    std::vector<NodeId> path_ids(NodeId v) const;  // root..v, empty on a broken chain
};

std::vector<EJInt> tree_path(const SpanningTree& tree, EJInt v);
SpanningTree rotate_tree(const SpanningTree& tree, int m);

// A full family of trees for one scheme on one network under one reading, together with
// how the path table is read for that family.
struct TreeSet {
    Scheme scheme{};
    Reading reading;
    std::string interpretation_id;
    std::shared_ptr<const DenseEJ> net;
    std::vector<SpanningTree> trees;
    std::vector<int> word_frame;      // per path-table row: frame used for its words
    std::vector<char> frame_fits;     // per row: every word in that frame equals the tree path
    std::vector<char> derived;        // per node (tree-1 frame): word taken from the tree
    std::vector<int> word_row;        // per node (tree-1 frame); -1 at root or if derived

    PathWord path_word(int t, EJInt v) const;
};

std::string_view frame_name(int f);
int word_row_count(Scheme s);
std::string_view word_row_name(Scheme s, int r);

SpanningTree build_tree(const DenseEJ& net, Scheme s, int t, const Reading& r);
SpanningTree build_tree_direct(const DenseEJ& net, Scheme s, int t, const Reading& r);
TreeSet construct(std::shared_ptr<const DenseEJ> net, Scheme s, const Reading& r);
// Explicit verified trees for the 7-node network.
TreeSet construct_k1(std::shared_ptr<const DenseEJ> net, Scheme s);

struct Check {
    std::string name;
    bool pass = true;
    std::size_t violations = 0;
    std::string first;  // first counterexample
};

struct Report {
    std::string subject;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    bool pass() const;
    std::size_t violations() const;
    std::string text() const;
};

Check verify_spanning(const SpanningTree& tree);
Check verify_node_independent(const std::vector<SpanningTree>& trees);
Check verify_edge_disjoint(const std::vector<SpanningTree>& trees, bool directed);
Check verify_depth(const std::vector<SpanningTree>& trees, int expected);
Check verify_path_consistency(const TreeSet& set);
Report verify_treeset(const TreeSet& set);
// Child columns of the parent table versus the built tree (informational).
std::size_t child_column_mismatches(const TreeSet& set);
// Network edges not used by any tree.
std::vector<DenseEJ::Edge> unused_edges(const std::vector<SpanningTree>& trees);

struct Resolution {
    Scheme scheme{};
    i64 a = 0;
    bool ok = false;
    Reading reading;
    int tried = 0;
    std::string best_id;  // best failing candidate when !ok
    std::string best_summary;
    std::vector<std::string> deviations;
};

// Cached per (scheme, a).  a >= 2.
const Resolution& resolve(Scheme s, i64 a);
std::string resolve_interpretation(Scheme s, i64 a);
// verify_treeset on trees_for(s, a, reading), plus the table-reading deviations.
Report verify_report(Scheme s, i64 a, std::string_view reading = "resolved");

// Resolved trees (explicit ones for a = 1).  Throws if resolution fails.
const TreeSet& resolved_set(Scheme s, i64 a);
// Same, under a named reading ("printed", "resolved", or an id).
TreeSet trees_for(Scheme s, i64 a, std::string_view reading);
std::vector<SpanningTree> build_all(Scheme s, i64 a);
PathWord path_word(Scheme s, i64 a, int t, EJInt v);

// Trees rooted elsewhere: all addresses shifted by r.
std::vector<EJInt> translated_path(const SpanningTree& tree, EJInt r, EJInt v);

// Trees over a cross product of dense layers.
struct ProductTree {
    Scheme scheme{};
    int t = 1;
    std::shared_ptr<const ProductNet> net;
    std::vector<std::int64_t> parent;  // -1 at root
    std::vector<std::int8_t> dim;      // layer carrying the parent edge
    std::vector<std::int8_t> dir;

    std::size_t edge_count() const;
};

std::vector<ProductTree> build_product_trees(Scheme s, std::shared_ptr<const ProductNet> net,
                                             std::string_view reading = "resolved");
Check verify_product_spanning(const ProductTree& tree);
Check verify_product_edge_disjoint(const std::vector<ProductTree>& trees);

std::string tree_dot(const SpanningTree& tree, bool child_to_parent = true);
std::string tree_json(const SpanningTree& tree);
std::string product_tree_dot(const ProductTree& tree, bool child_to_parent = true);

}  // namespace ejnet
