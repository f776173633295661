#pragma once
// Small parsimony on rooted binary trees: Fitch and Sankoff per-coordinate
// passes, enumeration of all most-parsimonious labelings, scenario counting,
// and the clause-tree reduction scaffolding (sorting trees, combs, skeletons).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medz/cnf.hpp"
#include "medz/partition.hpp"

namespace medz {

struct Tree {
    struct Node {
        int parent = -1, left = -1, right = -1;
        std::string name;  // leaves only
    };
    std::vector<Node> nodes;
    int root = 0;

    bool is_leaf(int v) const { return nodes[v].left < 0; }
    std::vector<int> leaves() const;
    long long edge_count() const { return static_cast<long long>(nodes.size()) - 1; }
};

// Parenthesized topology with named leaves, e.g. "((A,B),(C,D));".
Tree parse_tree(const std::string& text);
std::string tree_to_string(const Tree& t);

// Sidecar label file: "name<TAB>bits" lines; layout from --pairs split.
std::map<std::string, std::string> parse_label_sidecar(std::istream& in);

// ---- single-coordinate passes (leaf_bits indexed by node id; only leaves read)

// Candidate sets B(v) as {has 0, has 1}: intersection-else-union bottom-up.
std::vector<std::array<bool, 2>> fitch_sets(const Tree& t,
                                            const std::vector<uint8_t>& leaf_bits);

// Top-down labeling for a chosen root value (must lie in B(root)).
std::vector<uint8_t> fitch_label(const Tree& t,
                                 const std::vector<uint8_t>& leaf_bits,
                                 int root_choice);

// All Fitch labelings (one per admissible root value).
std::vector<std::vector<uint8_t>> fitch_all(const Tree& t,
                                            const std::vector<uint8_t>& leaf_bits);

struct SankoffScores {
    std::vector<std::array<long long, 2>> s;  // s[v] = {s0, s1}; big = infinity
    long long best = 0;
};
inline constexpr long long kSankoffInf = 1LL << 40;

SankoffScores sankoff_scores(const Tree& t, const std::vector<uint8_t>& leaf_bits);

// Every labeling reachable by the top-down tie-splitting rule; this is the
// complete set of most parsimonious labelings for the coordinate.
std::vector<std::vector<uint8_t>> sankoff_all_mpl(const Tree& t,
                                                  const std::vector<uint8_t>& leaf_bits,
                                                  long long cap = 1 << 20);

// True iff B(v) = {0,1} implies B(parent) = {0,1} for every edge; then the
// Fitch solution set equals the Sankoff solution set.
bool fitch_completeness_condition(const Tree& t,
                                  const std::vector<uint8_t>& leaf_bits);

// ---- multi-coordinate

// Leaf labels indexed by node id (internal entries ignored).
std::vector<std::vector<BitString>> enumerate_mpl(
    const Tree& t, const std::vector<BitString>& labels, long long cap = 1 << 20);

long long parsimony_score(const Tree& t, const std::vector<BitString>& labels);

// Z_{T,phi}(B, w): sum over most parsimonious labelings of the product of
// w(H) over edges; w defaults to factorial.
BigRat scenario_count_tree(const Tree& t, const std::vector<BitString>& labels,
                           const WeightFunction& w, long long cap = 1 << 20);

// Exhaustive oracle over all internal labelings (guarded small trees).
struct ExhaustiveParsimony {
    long long score = 0;
    std::vector<std::vector<BitString>> mpls;
};
ExhaustiveParsimony exhaustive_parsimony(const Tree& t,
                                         const std::vector<BitString>& labels);

// ---- sorting tree S(a,b,c) and the reduction skeleton

// Complete binary tree of height 3; each level's edges introduce exactly one
// equation (coord = 0 on the left child, coord = 1 on the right child).
struct SortingTree {
    Tree tree;
    std::array<int, 3> coords{};  // a, b, c
    // leaf id -> (a,b,c) values along its root path
    std::vector<std::array<uint8_t, 3>> leaf_values;
    std::vector<int> leaf_ids;
};
SortingTree build_sorting_tree(int a, int b, int c);

struct UnitGadgetDescriptor {
    long long leaf_count = 248;
    long long coord_count = 151;
    BigInt sat_count;    // 2^156 * 3^64
    BigInt unsat_count;  // 2^136 * 3^76
};
UnitGadgetDescriptor default_unit_descriptor();

struct PsiSkeleton {
    Tree tree;  // unit subtrees abstracted as single leaves named "U<i>_<j>"
    // Concrete-leaf labels on the 2n pair coordinates (extras are all zero).
    std::map<std::string, BitString> concrete_labels;
    int n = 0, k = 0;            // dimensions of the xor-augmented formula
    long long units_per_comb = 0;  // 16 n0^2 + 8 k0 n0 over the base formula
    long long unit_leaves = 0, concrete_leaves = 0;
    long long t = 0;  // 148 * units_per_comb * (k0 + 4 n0)
};

// Builds the clause-tree comb for Psi(base): base must be D3. Unit subtrees
// stay abstract (their internals are external to this construction).
PsiSkeleton build_psi_skeleton(const CNF3& base,
                               const UnitGadgetDescriptor& unit = default_unit_descriptor());

struct TreeSeparationVerdict {
    int n = 0, k = 0;
    long long copies_exponent = 0;  // E = 16n^2 + 8kn
    bool ratio_lt_1 = false;        // exact integer comparison
    double log10_ratio = 0.0;
    // Factored forms; the published "good" display disagrees with the
    // ratio derivation, so both variants are reported.
    std::string b_good_consistent, b_good_printed, b_bad;
    bool constant_discrepancy = true;
};

// Evaluates 2^{2n} * B_bad / B_good =
//   2^{2n} [3^12 / 2^20]^E binom(2n-6, n-3)^{k+4n}  (ratio-consistent constants)
TreeSeparationVerdict verify_tree_separation(int n, int k);

}  // namespace medz
