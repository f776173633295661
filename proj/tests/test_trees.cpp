#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "medz/trees.hpp"

using namespace medz;

namespace {

std::vector<uint8_t> leaf_bits_by_name(const Tree& t,
                                       const std::map<std::string, int>& vals) {
    std::vector<uint8_t> bits(t.nodes.size(), 0);
    for (int v : t.leaves())
        bits[static_cast<size_t>(v)] =
            static_cast<uint8_t>(vals.at(t.nodes[static_cast<size_t>(v)].name));
    return bits;
}

std::vector<BitString> labels_by_name(const Tree& t, Layout lay,
                                      const std::map<std::string, std::string>& vals) {
    std::vector<BitString> out(t.nodes.size(), BitString(lay));
    for (int v : t.leaves())
        out[static_cast<size_t>(v)] =
            BitString::from_string(lay, vals.at(t.nodes[static_cast<size_t>(v)].name));
    return out;
}

}  // namespace

TEST_CASE("tree parsing round trip") {
    auto t = parse_tree("((A,B),(C,D));");
    CHECK(t.leaves().size() == 4);
    CHECK(t.nodes.size() == 7);
    CHECK(tree_to_string(t) == "((A,B),(C,D));");
    CHECK_THROWS_AS(parse_tree("((A,B);"), InputError);
    std::istringstream side("A\t01\nB\t10\n");
    auto labels = parse_label_sidecar(side);
    CHECK(labels.at("A") == "01");
}

TEST_CASE("fitch on a cherry and nested trees") {
    auto t = parse_tree("(A,B);");
    auto bits = leaf_bits_by_name(t, {{"A", 0}, {"B", 1}});
    auto B = fitch_sets(t, bits);
    CHECK((B[static_cast<size_t>(t.root)][0] && B[static_cast<size_t>(t.root)][1]));
    CHECK(fitch_all(t, bits).size() == 2);
    CHECK(fitch_completeness_condition(t, bits));  // root is the only parent

    auto t2 = parse_tree("((A,B),(C,D));");
    auto bits2 = leaf_bits_by_name(t2, {{"A", 0}, {"B", 0}, {"C", 1}, {"D", 1}});
    auto lab0 = fitch_label(t2, bits2, 0);
    int left = t2.nodes[static_cast<size_t>(t2.root)].left;
    int right = t2.nodes[static_cast<size_t>(t2.root)].right;
    CHECK(lab0[static_cast<size_t>(t2.root)] == 0);
    CHECK(lab0[static_cast<size_t>(left)] == 0);   // follows the root choice
    CHECK(lab0[static_cast<size_t>(right)] == 1);  // forced by its leaves
}

TEST_CASE("sankoff scores and the full MPL set") {
    auto t = parse_tree("(A,B);");
    auto bits = leaf_bits_by_name(t, {{"A", 0}, {"B", 1}});
    auto sc = sankoff_scores(t, bits);
    CHECK(sc.s[static_cast<size_t>(t.root)][0] == 1);
    CHECK(sc.s[static_cast<size_t>(t.root)][1] == 1);
    CHECK(sc.best == 1);

    auto t2 = parse_tree("((A,B),(C,D));");
    auto bits2 = leaf_bits_by_name(t2, {{"A", 0}, {"B", 1}, {"C", 0}, {"D", 1}});
    auto mpls = sankoff_all_mpl(t2, bits2);
    CHECK(mpls.size() == 2);  // root value propagates to both children
    for (const auto& m : mpls) {
        CHECK(m[static_cast<size_t>(t2.root)] ==
              m[static_cast<size_t>(t2.nodes[static_cast<size_t>(t2.root)].left)]);
        CHECK(m[static_cast<size_t>(t2.root)] ==
              m[static_cast<size_t>(t2.nodes[static_cast<size_t>(t2.root)].right)]);
    }
}

TEST_CASE("fitch completeness condition fails on the known counterexample") {
    auto t = parse_tree("(((A,B),C),D);");
    auto bits = leaf_bits_by_name(t, {{"A", 0}, {"B", 1}, {"C", 0}, {"D", 1}});
    CHECK(!fitch_completeness_condition(t, bits));
}

TEST_CASE("fitch set equals sankoff set exactly under the condition") {
    // All tree shapes on 2..4 leaves, all leaf bit patterns.
    std::vector<std::string> shapes = {"(A,B);", "((A,B),C);", "(A,(B,C));",
                                       "((A,B),(C,D));", "(((A,B),C),D);",
                                       "(A,((B,C),D));", "((A,(B,C)),D);"};
    for (const auto& shape : shapes) {
        auto t = parse_tree(shape);
        auto leaves = t.leaves();
        for (uint64_t pat = 0; pat < (1ULL << leaves.size()); ++pat) {
            std::vector<uint8_t> bits(t.nodes.size(), 0);
            for (size_t i = 0; i < leaves.size(); ++i)
                bits[static_cast<size_t>(leaves[i])] = (pat >> i) & 1u;
            auto fset = fitch_all(t, bits);
            auto sset = sankoff_all_mpl(t, bits);
            std::set<std::vector<uint8_t>> fs(fset.begin(), fset.end());
            std::set<std::vector<uint8_t>> ss(sset.begin(), sset.end());
            bool cond = fitch_completeness_condition(t, bits);
            // Fitch labelings are always optimal.
            CHECK(std::includes(ss.begin(), ss.end(), fs.begin(), fs.end()));
            // Per node: the Fitch candidate set equals the set of values the
            // node attains across all optimal labelings iff the condition.
            auto B = fitch_sets(t, bits);
            bool sets_equal = true;
            for (size_t v = 0; v < t.nodes.size(); ++v) {
                std::array<bool, 2> attained{false, false};
                for (const auto& m : sset) attained[m[v]] = true;
                if (attained != B[v]) sets_equal = false;
            }
            CHECK(sets_equal == cond);
        }
    }
}

TEST_CASE("multi-coordinate MPL enumeration and scenario counts") {
    auto t = parse_tree("(A,B);");
    Layout lay{0, 2};
    auto labels = labels_by_name(t, lay, {{"A", "00"}, {"B", "11"}});
    auto mpls = enumerate_mpl(t, labels);
    CHECK(mpls.size() == 4);
    CHECK(parsimony_score(t, mpls.front()) == 2);
    auto w = WeightFunction::make_factorial();
    CHECK(scenario_count_tree(t, labels, w) == 6);

    Layout l1{0, 1};
    auto lab1 = labels_by_name(t, l1, {{"A", "0"}, {"B", "1"}});
    CHECK(scenario_count_tree(t, lab1, w) == 2);

    // Identical leaves: single zero-cost labeling.
    auto same = labels_by_name(t, l1, {{"A", "1"}, {"B", "1"}});
    CHECK(enumerate_mpl(t, same).size() == 1);
    CHECK(scenario_count_tree(t, same, w) == 1);
}

TEST_CASE("sankoff MPLs match exhaustive search") {
    std::vector<std::string> shapes = {"((A,B),C);", "((A,B),(C,D));",
                                       "(((A,B),C),D);"};
    uint64_t s = 99;
    auto rnd = [&]() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    };
    Layout lay{0, 3};
    for (const auto& shape : shapes) {
        auto t = parse_tree(shape);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<BitString> labels(t.nodes.size(), BitString(lay));
            for (int v : t.leaves())
                for (int j = 0; j < 3; ++j)
                    if (rnd() & 1) labels[static_cast<size_t>(v)].set(j, true);
            auto fast = enumerate_mpl(t, labels);
            auto slow = exhaustive_parsimony(t, labels);
            CHECK(parsimony_score(t, fast.front()) == slow.score);
            auto key = [&](const std::vector<BitString>& m) {
                std::string k;
                for (const auto& b : m) k += b.to_string() + "|";
                return k;
            };
            std::set<std::string> fs, ss;
            for (const auto& m : fast) fs.insert(key(m));
            for (const auto& m : slow.mpls) ss.insert(key(m));
            CHECK(fs == ss);
        }
    }
}

TEST_CASE("star-shaped tree matches median enumeration") {
    // Two-level star over three leaves: the root plays the median.
    auto t = parse_tree("((A,B),C);");
    Layout lay{0, 3};
    auto labels = labels_by_name(
        t, lay, {{"A", "110"}, {"B", "101"}, {"C", "100"}});
    auto slow = exhaustive_parsimony(t, labels);
    CHECK(slow.score == 2);
}

TEST_CASE("sorting tree shape") {
    auto st = build_sorting_tree(0, 1, 2);
    CHECK(st.tree.nodes.size() == 15);
    CHECK(st.leaf_ids.size() == 8);
    std::set<std::array<uint8_t, 3>> vals(st.leaf_values.begin(),
                                          st.leaf_values.end());
    CHECK(vals.size() == 8);  // all (a,b,c) combinations appear once
    // Each edge flips at most the one coordinate introduced at its level.
    for (size_t i = 0; i < st.leaf_ids.size(); ++i) {
        const auto& v = st.leaf_values[i];
        CHECK(st.tree.nodes[static_cast<size_t>(st.leaf_ids[i])].name ==
              "L" + std::to_string(v[0]) + std::to_string(v[1]) +
                  std::to_string(v[2]));
    }
}

TEST_CASE("clause-tree skeleton dimensions") {
    CNF3 base;
    base.n = 3;
    Clause3 cl;
    cl.lits = {Literal{1, false}, Literal{2, false}, Literal{3, false}};
    base.clauses = {cl};
    auto sk = build_psi_skeleton(base);
    CHECK(sk.n == 6);
    CHECK(sk.k == 13);
    CHECK(sk.units_per_comb == 168);  // 16*9 + 8*3
    CHECK(sk.t == 148 * 168 * 13);
    CHECK(sk.concrete_leaves == 120 * 13);
    CHECK(sk.unit_leaves == 168 * 13);
    CHECK(sk.concrete_labels.size() == static_cast<size_t>(120 * 13));
    // Count leaves and check labels are fully determined on 2n coordinates.
    long long unit = 0, concrete = 0;
    for (int v : sk.tree.leaves()) {
        const auto& name = sk.tree.nodes[static_cast<size_t>(v)].name;
        if (name[0] == 'U') {
            ++unit;
        } else {
            ++concrete;
            CHECK(sk.concrete_labels.count(name) == 1);
            CHECK(sk.concrete_labels.at(name).size() == 12);
        }
    }
    CHECK(unit == sk.unit_leaves);
    CHECK(concrete == sk.concrete_leaves);
    // Every internal node has exactly two children.
    for (int v = 0; v < static_cast<int>(sk.tree.nodes.size()); ++v)
        if (!sk.tree.is_leaf(v)) {
            CHECK(sk.tree.nodes[static_cast<size_t>(v)].left >= 0);
            CHECK(sk.tree.nodes[static_cast<size_t>(v)].right >= 0);
        }
}

TEST_CASE("tree separation verdict") {
    auto v = verify_tree_separation(3, 1);
    CHECK(v.copies_exponent == 168);
    CHECK(v.ratio_lt_1);
    CHECK(v.log10_ratio < 0.0);
    CHECK(v.constant_discrepancy);
    CHECK(v.b_good_consistent != v.b_good_printed);
    auto v2 = verify_tree_separation(4, 2);
    CHECK(v2.ratio_lt_1);
}
