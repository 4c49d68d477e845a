#include "tables.hpp"

#include <array>
#include <stdexcept>

namespace ejnet::detail {

namespace {

// EDNIST classes
enum { E_B1, E_B2, E_S2, E_B3, E_B4, E_S4, E_B5, E_B6, E_T1, E_T2, E_T3, E_T4, E_L4, E_T5, E_T6, E_L6, E_N };
// IST classes
enum { I_B1, I_B2, I_B3, I_B4, I_B5, I_S, I_B6, I_T1, I_T2, I_T3, I_L3, I_T4, I_L4, I_T5, I_T6, I_N };

constexpr std::array<std::string_view, E_N> kEdLabels{"B1",     "B2\\S2", "S2", "B3",     "B4\\S4", "S4",
                                                      "B5",     "B6",     "T1", "T2",     "T3",     "T4\\L4",
                                                      "L4",     "T5",     "T6\\L6", "L6"};
constexpr std::array<std::string_view, I_N> kIstLabels{"B1", "B2",     "B3", "B4",     "B5\\S", "S",  "B6", "T1",
                                                       "T2", "T3\\L3", "L3", "T4\\L4", "L4",    "T5", "T6"};

// Term helpers
constexpr Term X(int dir) { return {dir, 0, 0, 1, 0, 0, 0}; }
constexpr Term Y(int dir) { return {dir, 0, 0, 0, 1, 0, 0}; }

const std::vector<ParentRow> kEdParents = {
    {"B1", {E_B1}, 2, {-1, 0, 4}},
    {"B2\\S2", {E_B2}, 3, {0, 2}},
    {"S2", {E_S2}, 3, {2}},
    {"B3 u B5", {E_B3, E_B5}, -1, {}},
    {"B4\\S4", {E_B4}, 1, {}},
    {"S4", {E_S4}, 1, {2}},
    {"B6 u T2 u T5", {E_B6, E_T2, E_T5}, -1, {2}},
    {"T1 u (T4\\L4)", {E_T1, E_T4}, 3, {0}},
    {"T3 u (T6\\L6)", {E_T3, E_T6}, 1, {4}},
    {"L4", {E_L4}, 3, {}},
    {"L6", {E_L6}, 1, {2, 4}},
};

const std::vector<ParentRow> kIstParents = {
    {"B1", {I_B1}, 2, {-1, 0, 4}},
    {"B2 u B6", {I_B2, I_B6}, 2, {}},
    {"B3 u T2 u T5", {I_B3, I_T2, I_T5}, 2, {-1}},
    {"L3", {I_L3}, 1, {-1, 4}},
    {"(T3\\L3) u T6", {I_T3, I_T6}, 1, {4}},
    {"B4", {I_B4}, 1, {}},
    {"L4", {I_L4}, 3, {}},
    {"T1 u (T4\\L4)", {I_T1, I_T4}, 3, {0}},
    {"B5\\S", {I_B5}, 3, {-1, 0}},
    {"S", {I_S}, 3, {-1}},
};

const std::vector<WordRow> kEdWords = {
    {"B1", {E_B1}, {X(0)}},
    {"T1", {E_T1}, {X(0), Y(1)}},
    {"(B2\\S2) u S2", {E_B2, E_S2}, {Y(1)}},
    {"T2 u B3", {E_T2, E_B3}, {{1, 0, 0, 0, 0, 0, 1}, {3, 0, 0, 0, 0, 1, 0}}},
    {"T3 u (B4\\S4) u S4", {E_T3, E_B4, E_S4}, {{0, 1, 1, 0, 0, -1, 0}, {5, 0, 1, 0, -1, 0, 0}}},
    {"L4 u (T4\\L4)", {E_L4, E_T4}, {{0, 0, 1, 0, 0, -1, 0}, {1, 1, 1, 0, 0, 0, -1}}},
    {"L6 u (T6\\L6)", {E_L6, E_T6}, {X(0), Y(5)}},
    {"B6 u T5 u B5", {E_B6, E_T5, E_B5}, {{0, 1, 0, 0, 0, 0, 0}, {5, 0, 0, 0, 0, 0, 1}, {3, 1, 0, 0, 0, 1, 0}}},
};

const std::vector<WordRow> kIstWords = {
    {"B1", {I_B1}, {X(0)}},
    {"T1 u B2", {I_T1, I_B2}, {X(0), Y(1)}},
    {"T6", {I_T6}, {X(0), Y(5)}},
    {"B4 u (T3\\L3) u L3", {I_B4, I_T3, I_L3}, {{0, 1, 1, 0, 0, -1, 0}, {5, 0, 1, 0, -1, 0, 0}}},
    {"B3 u T2", {I_B3, I_T2}, {{0, 0, 1, 0, 0, 0, 0}, {5, 0, 1, 0, -1, 0, 0}, {0, 1, 0, 1, 0, 0, 0}}},
    {"L4 u (T4\\L4)", {I_L4, I_T4}, {{0, 0, 1, 0, 0, -1, 0}, {1, 1, 1, 0, -1, 0, 0}}},
    {"(B5\\S) u S u T5 u B6", {I_B5, I_S, I_T5, I_B6}, {{0, 0, 1, 0, 0, 0, 0}, {1, 1, 1, 0, 0, 0, -1}, X(0)}},
};

// Repairs tried after every exponent-base mix has failed.  Directions are absolute in the
// tree-1 frame.
const std::vector<Patch> kEdPatches = {
    // the B3 corner k*rho^2 hangs off k through the wraparound link instead
    {"corner-rehook", {{E_B3, true, 3}}},
};

const std::vector<Patch> kIstPatches = {
    // re-hang the B2/B6 leaves only
    {"axis-leaf", {{I_B2, false, 5}, {I_B6, false, 1}}},
    // turn every axis but B1 by a fixed unit
    {"axis-rotated",
     {{I_B2, false, 5}, {I_B3, false, 2}, {I_B4, false, 4}, {I_B5, false, 3}, {I_S, false, 3}, {I_B6, false, 1}}},
};

template <size_t N>
std::array<int, N> invert(const auto& rows) {
    std::array<int, N> out;
    out.fill(-1);
    for (size_t r = 0; r < rows.size(); ++r)
        for (int c : rows[r].classes) {
            if (out[static_cast<size_t>(c)] != -1) throw std::logic_error("class listed twice");
            out[static_cast<size_t>(c)] = static_cast<int>(r);
        }
    for (int v : out)
        if (v < 0) throw std::logic_error("class missing from table");
    return out;
}

}  // namespace

const std::vector<ParentRow>& parent_rows(Scheme s) { return s == Scheme::EDNIST ? kEdParents : kIstParents; }
const std::vector<WordRow>& word_rows(Scheme s) { return s == Scheme::EDNIST ? kEdWords : kIstWords; }
const std::vector<Patch>& patches(Scheme s) { return s == Scheme::EDNIST ? kEdPatches : kIstPatches; }

int fine_class(Scheme s, i64 x, i64 y, int d, i64 k) {
    if (s == Scheme::EDNIST) {
        if (y == 0) {
            switch (d) {
                case 1: return E_B1;
                case 2: return x == k ? E_S2 : E_B2;
                case 3: return E_B3;
                case 4: return x == k ? E_S4 : E_B4;
                case 5: return E_B5;
                default: return E_B6;
            }
        }
        switch (d) {
            case 1: return E_T1;
            case 2: return E_T2;
            case 3: return E_T3;
            case 4: return y == 1 ? E_L4 : E_T4;
            case 5: return E_T5;
            default: return y == 1 ? E_L6 : E_T6;
        }
    }
    if (y == 0) {
        switch (d) {
            case 1: return I_B1;
            case 2: return I_B2;
            case 3: return I_B3;
            case 4: return I_B4;
            case 5: return x == 1 ? I_S : I_B5;
            default: return I_B6;
        }
    }
    switch (d) {
        case 1: return I_T1;
        case 2: return I_T2;
        case 3: return y == 1 ? I_L3 : I_T3;
        case 4: return y == 1 ? I_L4 : I_T4;
        case 5: return I_T5;
        default: return I_T6;
    }
}

int parent_row_of(Scheme s, int cls) {
    static const auto ed = invert<E_N>(kEdParents);
    static const auto ist = invert<I_N>(kIstParents);
    return s == Scheme::EDNIST ? ed[static_cast<size_t>(cls)] : ist[static_cast<size_t>(cls)];
}

int word_row_of(Scheme s, int cls) {
    static const auto ed = invert<E_N>(kEdWords);
    static const auto ist = invert<I_N>(kIstWords);
    return s == Scheme::EDNIST ? ed[static_cast<size_t>(cls)] : ist[static_cast<size_t>(cls)];
}

}  // namespace ejnet::detail

namespace ejnet {

std::string_view class_label(Scheme s, int cls) {
    using namespace detail;
    if (s == Scheme::EDNIST) return kEdLabels.at(static_cast<size_t>(cls));
    return kIstLabels.at(static_cast<size_t>(cls));
}

int class_count(Scheme s) { return s == Scheme::EDNIST ? int{detail::E_N} : int{detail::I_N}; }

int parent_row_count(Scheme s) { return static_cast<int>(detail::parent_rows(s).size()); }
int word_row_count(Scheme s) { return static_cast<int>(detail::word_rows(s).size()); }
std::string_view word_row_name(Scheme s, int r) { return detail::word_rows(s).at(static_cast<size_t>(r)).name; }
int patch_count(Scheme s) { return static_cast<int>(detail::patches(s).size()); }
std::string_view patch_name(Scheme s, int p) { return detail::patches(s).at(static_cast<size_t>(p)).name; }

}  // namespace ejnet
