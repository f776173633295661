#include "medz/trees.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace medz {

std::vector<int> Tree::leaves() const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(nodes.size()); ++v)
        if (is_leaf(v)) out.push_back(v);
    return out;
}

namespace {

struct TreeParser {
    const std::string& s;
    size_t pos = 0;
    Tree t;

    explicit TreeParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n'))
            ++pos;
    }

    int parse_subtree(int parent) {
        skip_ws();
        int id = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        t.nodes[static_cast<size_t>(id)].parent = parent;
        if (pos < s.size() && s[pos] == '(') {
            ++pos;
            int l = parse_subtree(id);
            skip_ws();
            if (pos >= s.size() || s[pos] != ',')
                throw InputError("tree: expected ','");
            ++pos;
            int r = parse_subtree(id);
            skip_ws();
            if (pos >= s.size() || s[pos] != ')')
                throw InputError("tree: expected ')'");
            ++pos;
            t.nodes[static_cast<size_t>(id)].left = l;
            t.nodes[static_cast<size_t>(id)].right = r;
        } else {
            std::string name;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                    s[pos] == '_' || s[pos] == '-' || s[pos] == '.'))
                name.push_back(s[pos++]);
            if (name.empty()) throw InputError("tree: expected a leaf name");
            t.nodes[static_cast<size_t>(id)].name = name;
        }
        return id;
    }
};

}  // namespace

Tree parse_tree(const std::string& text) {
    TreeParser p(text);
    p.t.root = p.parse_subtree(-1);
    p.skip_ws();
    if (p.pos >= p.s.size() || p.s[p.pos] != ';')
        throw InputError("tree: expected trailing ';'");
    return p.t;
}

namespace {

void write_subtree(const Tree& t, int v, std::ostringstream& out) {
    if (t.is_leaf(v)) {
        out << t.nodes[static_cast<size_t>(v)].name;
        return;
    }
    out << '(';
    write_subtree(t, t.nodes[static_cast<size_t>(v)].left, out);
    out << ',';
    write_subtree(t, t.nodes[static_cast<size_t>(v)].right, out);
    out << ')';
}

}  // namespace

std::string tree_to_string(const Tree& t) {
    std::ostringstream out;
    write_subtree(t, t.root, out);
    out << ';';
    return out.str();
}

std::map<std::string, std::string> parse_label_sidecar(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw InputError("labels: expected '<name>\\t<bits>' lines");
        std::string name = line.substr(0, tab), bits = line.substr(tab + 1);
        if (out.count(name)) throw InputError("labels: duplicate leaf name " + name);
        out[name] = bits;
    }
    if (out.empty()) throw InputError("labels: no entries");
    return out;
}

// ---- single-coordinate passes

std::vector<std::array<bool, 2>> fitch_sets(const Tree& t,
                                            const std::vector<uint8_t>& leaf_bits) {
    size_t m = t.nodes.size();
    std::vector<std::array<bool, 2>> B(m, {false, false});
    // Nodes are created parent-before-children, so a reverse pass is bottom-up.
    for (int v = static_cast<int>(m) - 1; v >= 0; --v) {
        if (t.is_leaf(v)) {
            uint8_t b = leaf_bits[static_cast<size_t>(v)];
            if (b > 1) throw InputError("fitch: leaf value must be 0 or 1");
            B[static_cast<size_t>(v)][b] = true;
        } else {
            const auto& L = B[static_cast<size_t>(t.nodes[static_cast<size_t>(v)].left)];
            const auto& R = B[static_cast<size_t>(t.nodes[static_cast<size_t>(v)].right)];
            bool i0 = L[0] && R[0], i1 = L[1] && R[1];
            if (i0 || i1)
                B[static_cast<size_t>(v)] = {i0, i1};
            else
                B[static_cast<size_t>(v)] = {L[0] || R[0], L[1] || R[1]};
        }
    }
    return B;
}

std::vector<uint8_t> fitch_label(const Tree& t, const std::vector<uint8_t>& leaf_bits,
                                 int root_choice) {
    auto B = fitch_sets(t, leaf_bits);
    if (root_choice < 0 || root_choice > 1 ||
        !B[static_cast<size_t>(t.root)][static_cast<size_t>(root_choice)])
        throw InputError("fitch_label: root choice not admissible");
    std::vector<uint8_t> lab(t.nodes.size(), 0);
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
        const auto& Bv = B[static_cast<size_t>(v)];
        if (v == t.root) {
            lab[static_cast<size_t>(v)] = static_cast<uint8_t>(root_choice);
        } else {
            uint8_t pa = lab[static_cast<size_t>(t.nodes[static_cast<size_t>(v)].parent)];
            if (Bv[pa])
                lab[static_cast<size_t>(v)] = pa;
            else
                lab[static_cast<size_t>(v)] = Bv[1] ? 1 : 0;
        }
    }
    return lab;
}

std::vector<std::vector<uint8_t>> fitch_all(const Tree& t,
                                            const std::vector<uint8_t>& leaf_bits) {
    auto B = fitch_sets(t, leaf_bits);
    std::vector<std::vector<uint8_t>> out;
    for (int r = 0; r <= 1; ++r)
        if (B[static_cast<size_t>(t.root)][static_cast<size_t>(r)])
            out.push_back(fitch_label(t, leaf_bits, r));
    return out;
}

SankoffScores sankoff_scores(const Tree& t, const std::vector<uint8_t>& leaf_bits) {
    SankoffScores sc;
    sc.s.assign(t.nodes.size(), {kSankoffInf, kSankoffInf});
    for (int v = static_cast<int>(t.nodes.size()) - 1; v >= 0; --v) {
        auto& sv = sc.s[static_cast<size_t>(v)];
        if (t.is_leaf(v)) {
            uint8_t b = leaf_bits[static_cast<size_t>(v)];
            if (b > 1) throw InputError("sankoff: leaf value must be 0 or 1");
            sv[b] = 0;
        } else {
            for (int a = 0; a <= 1; ++a) {
                long long total = 0;
                for (int c : {t.nodes[static_cast<size_t>(v)].left,
                              t.nodes[static_cast<size_t>(v)].right}) {
                    const auto& scs = sc.s[static_cast<size_t>(c)];
                    long long best = kSankoffInf;
                    for (int b = 0; b <= 1; ++b)
                        best = std::min(best, scs[static_cast<size_t>(b)] + (a != b));
                    total += best;
                }
                sv[static_cast<size_t>(a)] = total;
            }
        }
    }
    const auto& sr = sc.s[static_cast<size_t>(t.root)];
    sc.best = std::min(sr[0], sr[1]);
    return sc;
}

std::vector<std::vector<uint8_t>> sankoff_all_mpl(const Tree& t,
                                                  const std::vector<uint8_t>& leaf_bits,
                                                  long long cap) {
    SankoffScores sc = sankoff_scores(t, leaf_bits);
    std::vector<std::vector<uint8_t>> out;
    std::vector<uint8_t> lab(t.nodes.size(), 0);

    // Children immediately follow their parent in creation order, so assigning
    // node values in index order always sees the parent's value first.
    std::function<void(int)> go = [&](int v) {
        if (v == static_cast<int>(t.nodes.size())) {
            out.push_back(lab);
            if (static_cast<long long>(out.size()) > cap)
                throw GuardError("sankoff_all_mpl: labeling count exceeds the cap");
            return;
        }
        const auto& sv = sc.s[static_cast<size_t>(v)];
        std::vector<uint8_t> choices;
        if (t.is_leaf(v)) {
            choices.push_back(leaf_bits[static_cast<size_t>(v)]);
        } else if (v == t.root) {
            long long best = std::min(sv[0], sv[1]);
            for (uint8_t b = 0; b <= 1; ++b)
                if (sv[b] == best) choices.push_back(b);
        } else {
            uint8_t pa = lab[static_cast<size_t>(t.nodes[static_cast<size_t>(v)].parent)];
            long long best = std::min(sv[0] + (pa != 0), sv[1] + (pa != 1));
            for (uint8_t b = 0; b <= 1; ++b)
                if (sv[b] + (pa != b) == best) choices.push_back(b);
        }
        for (uint8_t b : choices) {
            lab[static_cast<size_t>(v)] = b;
            go(v + 1);
        }
    };
    go(0);
    return out;
}

bool fitch_completeness_condition(const Tree& t,
                                  const std::vector<uint8_t>& leaf_bits) {
    auto B = fitch_sets(t, leaf_bits);
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
        if (v == t.root) continue;
        const auto& Bv = B[static_cast<size_t>(v)];
        const auto& Bu = B[static_cast<size_t>(t.nodes[static_cast<size_t>(v)].parent)];
        if (Bv[0] && Bv[1] && !(Bu[0] && Bu[1])) return false;
    }
    return true;
}

// ---- multi-coordinate

namespace {

Layout common_layout(const Tree& t, const std::vector<BitString>& labels) {
    std::optional<Layout> lay;
    for (int v : t.leaves()) {
        const auto& l = labels[static_cast<size_t>(v)].layout();
        if (!lay)
            lay = l;
        else if (*lay != l)
            throw InputError("tree labels: leaf layouts disagree");
    }
    if (!lay) throw InputError("tree labels: no leaves");
    return *lay;
}

}  // namespace

std::vector<std::vector<BitString>> enumerate_mpl(const Tree& t,
                                                  const std::vector<BitString>& labels,
                                                  long long cap) {
    Layout lay = common_layout(t, labels);
    long long L = lay.length();
    size_t m = t.nodes.size();

    // Per-coordinate solution sets; the full set is their Cartesian product.
    std::vector<std::vector<std::vector<uint8_t>>> per_coord;
    BigInt total = 1;
    for (long long j = 0; j < L; ++j) {
        std::vector<uint8_t> bits(m, 0);
        for (int v : t.leaves())
            bits[static_cast<size_t>(v)] = labels[static_cast<size_t>(v)].get(j);
        per_coord.push_back(sankoff_all_mpl(t, bits, cap));
        total *= static_cast<long>(per_coord.back().size());
        if (total > static_cast<long>(cap))
            throw GuardError("enumerate_mpl: labeling count exceeds the cap");
    }

    std::vector<std::vector<BitString>> out;
    std::vector<size_t> idx(static_cast<size_t>(L), 0);
    for (;;) {
        std::vector<BitString> full(m, BitString(lay));
        for (long long j = 0; j < L; ++j) {
            const auto& lab = per_coord[static_cast<size_t>(j)][idx[static_cast<size_t>(j)]];
            for (size_t v = 0; v < m; ++v)
                if (lab[v]) full[v].set(j, true);
        }
        out.push_back(std::move(full));
        long long j = L - 1;
        while (j >= 0) {
            if (++idx[static_cast<size_t>(j)] < per_coord[static_cast<size_t>(j)].size())
                break;
            idx[static_cast<size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return out;
}

long long parsimony_score(const Tree& t, const std::vector<BitString>& labels) {
    long long total = 0;
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v)
        if (v != t.root)
            total += hamming(labels[static_cast<size_t>(v)],
                             labels[static_cast<size_t>(t.nodes[static_cast<size_t>(v)].parent)]);
    return total;
}

BigRat scenario_count_tree(const Tree& t, const std::vector<BitString>& labels,
                           const WeightFunction& w, long long cap) {
    BigRat Z = 0;
    for (const auto& full : enumerate_mpl(t, labels, cap)) {
        BigRat prod = 1;
        for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v)
            if (v != t.root)
                prod *= w.exact(hamming(
                    full[static_cast<size_t>(v)],
                    full[static_cast<size_t>(t.nodes[static_cast<size_t>(v)].parent)]));
        Z += prod;
    }
    return Z;
}

ExhaustiveParsimony exhaustive_parsimony(const Tree& t,
                                         const std::vector<BitString>& labels) {
    Layout lay = common_layout(t, labels);
    long long L = lay.length();
    std::vector<int> internal;
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v)
        if (!t.is_leaf(v)) internal.push_back(v);
    long long bits = static_cast<long long>(internal.size()) * L;
    if (bits > 22) throw GuardError("exhaustive_parsimony: state space too large");

    ExhaustiveParsimony res;
    res.score = -1;
    for (uint64_t pat = 0; pat < (1ULL << bits); ++pat) {
        std::vector<BitString> full(t.nodes.size(), BitString(lay));
        for (int v : t.leaves()) full[static_cast<size_t>(v)] = labels[static_cast<size_t>(v)];
        long long b = 0;
        for (int v : internal)
            for (long long j = 0; j < L; ++j, ++b)
                if ((pat >> b) & 1u) full[static_cast<size_t>(v)].set(j, true);
        long long sc = parsimony_score(t, full);
        if (res.score < 0 || sc < res.score) {
            res.score = sc;
            res.mpls.clear();
        }
        if (sc == res.score) res.mpls.push_back(std::move(full));
    }
    return res;
}

// ---- sorting tree and the reduction skeleton

SortingTree build_sorting_tree(int a, int b, int c) {
    SortingTree st;
    st.coords = {a, b, c};
    Tree& t = st.tree;
    // Complete binary tree of height 3, built level by level in parent-first
    // order (matching the parser's invariant: children after parents).
    std::function<int(int, int, std::array<uint8_t, 3>)> build =
        [&](int parent, int depth, std::array<uint8_t, 3> vals) -> int {
        int id = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        t.nodes[static_cast<size_t>(id)].parent = parent;
        if (depth == 3) {
            t.nodes[static_cast<size_t>(id)].name =
                "L" + std::to_string(vals[0]) + std::to_string(vals[1]) +
                std::to_string(vals[2]);
            st.leaf_values.push_back(vals);
            st.leaf_ids.push_back(id);
            return id;
        }
        auto lv = vals, rv = vals;
        lv[static_cast<size_t>(depth)] = 0;
        rv[static_cast<size_t>(depth)] = 1;
        int l = build(id, depth + 1, lv);
        int r = build(id, depth + 1, rv);
        t.nodes[static_cast<size_t>(id)].left = l;
        t.nodes[static_cast<size_t>(id)].right = r;
        return id;
    };
    t.root = build(-1, 0, {0, 0, 0});
    return st;
}

UnitGadgetDescriptor default_unit_descriptor() {
    UnitGadgetDescriptor u;
    u.leaf_count = 248;
    u.coord_count = 151;
    u.sat_count = (BigInt(1) << 156) * [] {
        BigInt p;
        mpz_ui_pow_ui(p.get_mpz_t(), 3, 64);
        return p;
    }();
    u.unsat_count = (BigInt(1) << 136) * [] {
        BigInt p;
        mpz_ui_pow_ui(p.get_mpz_t(), 3, 76);
        return p;
    }();
    return u;
}

namespace {

// Grafts a subtree shape recursively; returns the new node id.
struct SkeletonBuilder {
    Tree t;
    std::map<std::string, BitString> labels;
    Layout lay;

    int add_node(int parent) {
        int id = static_cast<int>(t.nodes.size());
        t.nodes.emplace_back();
        t.nodes[static_cast<size_t>(id)].parent = parent;
        return id;
    }

    int add_leaf(int parent, const std::string& name) {
        int id = add_node(parent);
        t.nodes[static_cast<size_t>(id)].name = name;
        return id;
    }

    int add_concrete_leaf(int parent, const std::string& name, const BitString& label) {
        labels[name] = label;
        return add_leaf(parent, name);
    }

    void set_children(int v, int l, int r) {
        t.nodes[static_cast<size_t>(v)].left = l;
        t.nodes[static_cast<size_t>(v)].right = r;
    }

    // Right-leaning caterpillar whose leaves come from `make_leaf(j)`.
    int add_comb(int parent, long long count,
                 const std::function<int(int, long long)>& make_leaf) {
        if (count == 1) return make_leaf(parent, 0);
        int spine = add_node(parent);
        int cur = spine;
        for (long long j = 0; j < count - 1; ++j) {
            int leaf = make_leaf(cur, j);
            if (j + 2 < count) {
                int next = add_node(cur);
                set_children(cur, leaf, next);
                cur = next;
            } else {
                int last = make_leaf(cur, j + 1);
                set_children(cur, leaf, last);
            }
        }
        return spine;
    }
};

}  // namespace

PsiSkeleton build_psi_skeleton(const CNF3& base, const UnitGadgetDescriptor& unit) {
    if (!is_d3(base)) throw InputError("build_psi_skeleton: base must be D3");
    int n0 = base.n, k0 = static_cast<int>(base.clauses.size());
    if (n0 < 2) throw InputError("build_psi_skeleton: base needs >= 2 variables");

    CNF3 psi = xor_augment(base);
    PsiSkeleton sk;
    sk.n = psi.n;
    sk.k = static_cast<int>(psi.clauses.size());
    sk.units_per_comb = 16LL * n0 * n0 + 8LL * k0 * n0;
    sk.t = 148 * sk.units_per_comb * (k0 + 4LL * n0);

    SkeletonBuilder b;
    b.lay = Layout{psi.n, 0};

    // One clause tree per clause of psi: the two fill nodes each carry a
    // 3-level sort on the y coordinates whose leaves carry a 3-level sort on
    // the x coordinates; the leftmost x-sort is swapped for the unit comb.
    auto build_clause_tree = [&](int parent, int ci) -> int {
        const Clause3& cl = psi.clauses[static_cast<size_t>(ci)];
        int va = cl.lits[0].var, vb = cl.lits[1].var, vc = cl.lits[2].var;
        auto is_clause_var = [&](int v) { return v == va || v == vb || v == vc; };

        int rho = b.add_node(parent);
        int concrete_idx = 0;
        std::array<int, 2> sides{};
        for (int side = 0; side <= 1; ++side) {
            // Fill value on pairs outside the clause support.
            BitString fill(b.lay);
            if (side == 1)
                for (int v = 1; v <= psi.n; ++v)
                    if (!is_clause_var(v)) {
                        fill.set(2LL * (v - 1), true);
                        fill.set(2LL * (v - 1) + 1, true);
                    }
            // y-sort under this side.
            std::function<int(int, int, std::array<uint8_t, 3>)> build_y =
                [&](int par, int depth, std::array<uint8_t, 3> yv) -> int {
                if (depth == 3 && side == 0 && yv[0] == 0 && yv[1] == 0 && yv[2] == 0) {
                    // Leftmost x-sort position: comb of abstract unit leaves.
                    return b.add_comb(par, sk.units_per_comb, [&](int p, long long j) {
                        return b.add_leaf(
                            p, "U" + std::to_string(ci) + "_" + std::to_string(j));
                    });
                }
                int id = b.add_node(par);
                if (depth == 3) {
                    // This y-leaf roots an x-sort.
                    std::function<int(int, int, std::array<uint8_t, 3>)> build_x =
                        [&](int par2, int depth2, std::array<uint8_t, 3> xv) -> int {
                        int id2 = b.add_node(par2);
                        if (depth2 == 3) {
                            BitString lab = fill;
                            const int vars[3] = {va, vb, vc};
                            for (int j = 0; j < 3; ++j) {
                                lab.set(2LL * (vars[j] - 1), xv[static_cast<size_t>(j)]);
                                lab.set(2LL * (vars[j] - 1) + 1, yv[static_cast<size_t>(j)]);
                            }
                            std::string name = "B" + std::to_string(ci) + "_c" +
                                               std::to_string(concrete_idx++);
                            b.labels[name] = lab;
                            b.t.nodes[static_cast<size_t>(id2)].name = name;
                            return id2;
                        }
                        auto lv = xv, rv = xv;
                        lv[static_cast<size_t>(depth2)] = 0;
                        rv[static_cast<size_t>(depth2)] = 1;
                        int l = build_x(id2, depth2 + 1, lv);
                        int r = build_x(id2, depth2 + 1, rv);
                        b.set_children(id2, l, r);
                        return id2;
                    };
                    // The y-leaf is itself the root of the x-sort: build the
                    // x-children directly under it.
                    int l = build_x(id, 1, {0, 0, 0});
                    int r = build_x(id, 1, {1, 0, 0});
                    b.set_children(id, l, r);
                    return id;
                }
                auto lv = yv, rv = yv;
                lv[static_cast<size_t>(depth)] = 0;
                rv[static_cast<size_t>(depth)] = 1;
                int l = build_y(id, depth + 1, lv);
                int r = build_y(id, depth + 1, rv);
                b.set_children(id, l, r);
                return id;
            };
            sides[static_cast<size_t>(side)] = build_y(rho, 0, {0, 0, 0});
        }
        b.set_children(rho, sides[0], sides[1]);
        return rho;
    };

    // Comb of the clause trees.
    b.t.root = b.add_comb(-1, sk.k, [&](int p, long long j) {
        return build_clause_tree(p, static_cast<int>(j));
    });
    b.t.nodes[static_cast<size_t>(b.t.root)].parent = -1;

    sk.tree = std::move(b.t);
    sk.concrete_labels = std::move(b.labels);
    sk.unit_leaves = sk.units_per_comb * sk.k;
    sk.concrete_leaves = 120LL * sk.k;
    (void)unit;
    return sk;
}

TreeSeparationVerdict verify_tree_separation(int n, int k) {
    if (n < 3 || k < 1) throw InputError("verify_tree_separation: need n >= 3, k >= 1");
    TreeSeparationVerdict v;
    v.n = n;
    v.k = k;
    long long E = 16LL * n * n + 8LL * k * n;
    v.copies_exponent = E;
    long long reps = k + 4LL * n;

    // lhs = 2^{2n} 3^{12E} binom(2n-6, n-3)^reps  vs  rhs = 2^{20E}
    BigInt lhs = BigInt(1) << (2 * n);
    BigInt p3;
    mpz_ui_pow_ui(p3.get_mpz_t(), 3, static_cast<unsigned long>(12 * E));
    lhs *= p3;
    BigInt bn = binomial(2LL * n - 6, n - 3);
    BigInt bne;
    mpz_pow_ui(bne.get_mpz_t(), bn.get_mpz_t(), static_cast<unsigned long>(reps));
    lhs *= bne;
    BigInt rhs = BigInt(1) << static_cast<unsigned long>(20 * E);
    v.ratio_lt_1 = lhs < rhs;

    auto log10_of = [](const BigInt& z) {
        signed long e2 = 0;
        double m = mpz_get_d_2exp(&e2, z.get_mpz_t());
        return std::log10(m) + static_cast<double>(e2) * std::log10(2.0);
    };
    v.log10_ratio = log10_of(lhs) - log10_of(rhs);

    auto pow_str = [](const std::string& base, long long e) {
        return "(" + base + ")^" + std::to_string(e);
    };
    std::string sat_const = "2^156 3^64", unsat_const = "2^136 3^76";
    std::string nm3 = std::to_string(n - 3), two_nm6 = std::to_string(2 * n - 6);
    v.b_good_consistent =
        pow_str("(" + nm3 + "!)^2 (" + sat_const + ")^" + std::to_string(E), reps);
    v.b_good_printed =
        pow_str("(" + nm3 + "!)^2 (" + unsat_const + ")^" + std::to_string(E), reps);
    v.b_bad = two_nm6 + "! (" + unsat_const + ")^" + std::to_string(E) + " " +
              pow_str(two_nm6 + "! (" + sat_const + ")^" + std::to_string(E), reps - 1);
    v.constant_discrepancy = true;
    return v;
}

}  // namespace medz
