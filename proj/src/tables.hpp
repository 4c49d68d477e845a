#pragma once

#include <string_view>
#include <vector>

#include "ejnet/spantree.hpp"

namespace ejnet::detail {

// Parent column: direction = base + offset, base being 1 (tree) or d (sector), all in the
// tree-1 frame.  Child columns use the same base.
struct ParentRow {
    std::string_view name;
    std::vector<int> classes;
    int offset;
    std::vector<int> children;
};

// exponent = c0 + ck*k + cx*x + cy*y + cax*|x| + cay*|y|
struct Term {
    int dir;
    int c0, ck, cx, cy, cax, cay;
};

struct WordRow {
    std::string_view name;
    std::vector<int> classes;
    std::vector<Term> terms;
};

struct Override {
    int cls;
    bool corner_only;  // only the node with x = k
    int dir;
};

struct Patch {
    std::string_view name;
    std::vector<Override> overrides;
};

// coordinate frames for path words
enum Frame { kSector = 0, kRho = 1, kRho2 = 2, kRho5 = 3, kFrameCount = 4 };

const std::vector<ParentRow>& parent_rows(Scheme s);
const std::vector<WordRow>& word_rows(Scheme s);
const std::vector<Patch>& patches(Scheme s);

int fine_class(Scheme s, i64 x, i64 y, int d, i64 k);
int parent_row_of(Scheme s, int cls);
int word_row_of(Scheme s, int cls);

}  // namespace ejnet::detail
