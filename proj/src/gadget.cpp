#include "medz/gadget.hpp"

#include <map>
#include <sstream>

#include "medz/bitstring.hpp"
#include "medz/embedded_data.hpp"

namespace medz {

std::string GadgetRow::Printed::str(const std::string& nsym) const {
    if (literal) return std::to_string(value);
    if (value == 0) return nsym;
    if (value > 0) return nsym + "+" + std::to_string(value);
    return nsym + std::to_string(value);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

GadgetRow::Printed parse_printed(const std::string& tok) {
    GadgetRow::Printed p;
    if (tok.empty()) throw InputError("embedded table: empty entry");
    if (tok[0] == 'n') {
        p.literal = false;
        p.value = tok.size() == 1 ? 0 : std::stoi(tok.substr(1));
    } else {
        p.literal = true;
        p.value = std::stoi(tok);
    }
    return p;
}

GadgetTable parse_table(const char* csv, const std::string& name,
                        size_t expect_rows, int expect_extra_sum) {
    GadgetTable t;
    t.name = name;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (header) {
            header = false;
            continue;
        }
        auto f = split(line, ',');
        if (f.size() != 12) throw InputError("embedded table " + name + ": bad row");
        GadgetRow r;
        r.row = std::stoi(f[0]);
        if (f[1].size() != 6) throw InputError("embedded table " + name + ": bad support");
        for (int j = 0; j < 6; ++j)
            r.support[static_cast<size_t>(j)] = f[1][static_cast<size_t>(j)] == '1';
        r.kappa = std::stoi(f[2]);
        r.extra = std::stoi(f[3]);
        for (int c = 0; c < 8; ++c)
            r.printed[static_cast<size_t>(c)] = parse_printed(f[static_cast<size_t>(4 + c)]);
        t.extra_sum += r.extra;
        t.rows.push_back(r);
    }
    if (t.rows.size() != expect_rows || t.extra_sum != expect_extra_sum)
        throw InputError("embedded table " + name + ": shape check failed");
    return t;
}

}  // namespace

const GadgetTable& table1() {
    static const GadgetTable t = parse_table(detail::kTable1Csv, "table1", 50, 75);
    return t;
}

const GadgetTable& table3() {
    static const GadgetTable t = parse_table(detail::kTable3Csv, "table3", 26, 39);
    return t;
}

const std::array<std::array<uint8_t, 6>, 8>& class_headings() {
    static const std::array<std::array<uint8_t, 6>, 8> h = {{
        {1, 0, 1, 0, 1, 0},  // M1
        {1, 0, 1, 0, 0, 1},  // M2
        {1, 0, 0, 1, 1, 0},  // M3
        {0, 1, 1, 0, 1, 0},  // M4
        {1, 0, 0, 1, 0, 1},  // M5
        {0, 1, 1, 0, 0, 1},  // M6
        {0, 1, 0, 1, 1, 0},  // M7
        {0, 1, 0, 1, 0, 1},  // M8
    }};
    return h;
}

const std::array<ClauseKeyEntry, 8>& clause_key() {
    static const std::array<ClauseKeyEntry, 8> key = [] {
        std::array<ClauseKeyEntry, 8> out{};
        std::istringstream in(detail::kClauseKeyCsv);
        std::string line;
        bool header = true;
        int seen = 0;
        while (std::getline(in, line)) {
            if (line.empty() || line == "\r") continue;
            if (header) {
                header = false;
                continue;
            }
            auto f = split(line, ',');
            if (f.size() != 2 || f[0].size() != 3)
                throw InputError("embedded key: bad row");
            int idx = 0;
            for (int j = 0; j < 3; ++j) {
                char c = f[0][static_cast<size_t>(j)];
                if (c != '+' && c != '-') throw InputError("embedded key: bad sign");
                idx = idx * 2 + (c == '-');
            }
            auto toks = split(f[1], '.');
            if (toks.size() != 6) throw InputError("embedded key: bad slot order");
            for (int j = 0; j < 6; ++j) {
                const std::string& tk = toks[static_cast<size_t>(j)];
                if (tk.size() != 2) throw InputError("embedded key: bad slot token");
                int var = tk[1] - 'a';  // a, b, c
                if (var < 0 || var > 2 || (tk[0] != 'x' && tk[0] != 'y'))
                    throw InputError("embedded key: bad slot token");
                out[static_cast<size_t>(idx)].slot[static_cast<size_t>(j)] =
                    2 * var + (tk[0] == 'y');
            }
            ++seen;
        }
        if (seen != 8) throw InputError("embedded key: expected 8 rows");
        return out;
    }();
    return key;
}

StringBlueprint clause_block(const CNF3& g, int clause_index,
                             const GadgetTable& table, long long q) {
    if (!is_d3(g)) throw InputError("clause_block: formula must be D3");
    if (g.n < 3 || g.n > 32) throw InputError("clause_block: n must be in [3, 32]");
    if (clause_index < 0 || clause_index >= static_cast<int>(g.clauses.size()))
        throw InputError("clause_block: clause index out of range");
    if (q < 0) throw InputError("clause_block: negative extras offset");

    const Clause3& cl = g.clauses[static_cast<size_t>(clause_index)];
    int key_idx = (cl.lits[0].neg ? 4 : 0) + (cl.lits[1].neg ? 2 : 0) +
                  (cl.lits[2].neg ? 1 : 0);
    const ClauseKeyEntry& key = clause_key()[static_cast<size_t>(key_idx)];

    // Global coordinate of slot s (0=x_a, 1=y_a, 2=x_b, 3=y_b, 4=x_c, 5=y_c).
    auto coord_of_slot = [&](int s) {
        int var = cl.lits[static_cast<size_t>(s / 2)].var;
        return 2LL * (var - 1) + (s % 2);
    };
    bool in_clause[33] = {};
    for (const auto& l : cl.lits) in_clause[l.var] = true;

    StringBlueprint bp;
    bp.n_pairs = g.n;
    for (const auto& row : table.rows) {
        BlueprintString s;
        for (int j = 0; j < 6; ++j)
            if (row.support[static_cast<size_t>(j)])
                s.pair_bits |= 1ULL << coord_of_slot(key.slot[static_cast<size_t>(j)]);
        if (row.kappa) {
            for (int v = 1; v <= g.n; ++v)
                if (!in_clause[v])
                    s.pair_bits |= 3ULL << (2 * (v - 1));
        }
        s.extras = row.extra + q;
        s.copies = 1;
        s.tag = "c" + std::to_string(clause_index) + "_r" + std::to_string(row.row);
        bp.strings.push_back(s);
    }
    return bp;
}

namespace {

// Recomputed column entry as an offset from n: H6(support, heading) - 3 + C.
int recomputed_offset(const GadgetRow& r, int col) {
    const auto& h = class_headings()[static_cast<size_t>(col)];
    int d = 0;
    for (int j = 0; j < 6; ++j)
        d += r.support[static_cast<size_t>(j)] != h[static_cast<size_t>(j)];
    return d - 3 + r.extra;
}

std::map<int, int> recomputed_column(const GadgetTable& t, int col) {
    std::map<int, int> out;
    for (const auto& r : t.rows) out[recomputed_offset(r, col)]++;
    return out;
}

std::string offset_str(int off) {
    if (off == 0) return "n";
    if (off > 0) return "n+" + std::to_string(off);
    return "n" + std::to_string(off);
}

}  // namespace

std::map<int, int> satisfying_multiset_table1() {
    return {{-1, 7}, {0, 6}, {1, 12}, {2, 12}, {3, 6}, {4, 7}};
}
std::map<int, int> nonsatisfying_multiset_table1() {
    return {{-2, 1}, {-1, 6}, {0, 3}, {1, 15}, {2, 15}, {3, 3}, {4, 6}, {5, 1}};
}
std::map<int, int> satisfying_multiset_table3() {
    return {{-2, 1}, {-1, 3}, {0, 3}, {1, 6}, {2, 6}, {3, 3}, {4, 3}, {5, 1}};
}
std::map<int, int> nonsatisfying_multiset_table3() {
    return {{-1, 4}, {0, 6}, {1, 3}, {2, 3}, {3, 6}, {4, 4}};
}

TableReport verify_distance_tables() {
    TableReport rep;
    for (const GadgetTable* t : {&table1(), &table3()}) {
        for (const auto& r : t->rows) {
            for (int c = 0; c < 8; ++c) {
                int off = recomputed_offset(r, c);
                const auto& p = r.printed[static_cast<size_t>(c)];
                bool ok = !p.literal && p.value == off;
                if (!ok)
                    rep.mismatches.push_back(
                        {t->name, r.row, c + 1, p.str(), offset_str(off)});
            }
        }
    }
    auto columns_match = [](const GadgetTable& t, const std::map<int, int>& sat,
                            const std::map<int, int>& nonsat) {
        for (int c = 0; c < 7; ++c)
            if (recomputed_column(t, c) != sat) return false;
        return recomputed_column(t, 7) == nonsat;
    };
    rep.table1_multisets_ok = columns_match(table1(), satisfying_multiset_table1(),
                                            nonsatisfying_multiset_table1());
    rep.table3_multisets_ok = columns_match(table3(), satisfying_multiset_table3(),
                                            nonsatisfying_multiset_table3());
    rep.extra_sums_ok = table1().extra_sum == 75 && table3().extra_sum == 39;
    rep.only_the_two_flagged =
        rep.mismatches.size() == 2 &&
        rep.mismatches[0].table == "table1" && rep.mismatches[0].row == 15 &&
        rep.mismatches[0].column == 1 &&
        rep.mismatches[1].table == "table1" && rep.mismatches[1].row == 50 &&
        rep.mismatches[1].column == 8;
    return rep;
}

SharpGadget build_sharp_gadget(const CNF3& d3, unsigned long p) {
    if (!is_d3(d3)) throw InputError("build_sharp_gadget: formula must be D3");
    int n = d3.n, k = static_cast<int>(d3.clauses.size());
    if (n < 3 || n > 32) throw InputError("build_sharp_gadget: n must be in [3, 32]");
    if (static_cast<long long>(p) < n + 5)
        throw InputError("build_sharp_gadget: prime must be >= n+5");

    SharpGadget g;
    g.n = n;
    g.k = k;
    g.p = p;
    g.q = static_cast<long long>(p) - (n + 5);
    g.t = 2 * (g.q + 4) + 2LL * n * (g.q + 3) + static_cast<long long>(k) * (75 + 50 * g.q);
    g.bp.n_pairs = n;

    uint64_t all_pairs = (n == 32) ? ~0ULL : ((1ULL << (2 * n)) - 1);
    g.bp.strings.push_back({all_pairs, g.q + 4, 1, "alpha"});
    g.bp.strings.push_back({0, g.q + 4, 1, "alpha_bar"});
    for (int j = 0; j < n; ++j) {
        uint64_t beta = 3ULL << (2 * j);
        g.bp.strings.push_back({beta, g.q + 3, 1, "beta_" + std::to_string(j + 1)});
        g.bp.strings.push_back(
            {all_pairs ^ beta, g.q + 3, 1, "beta_bar_" + std::to_string(j + 1)});
    }
    for (int i = 0; i < k; ++i) {
        StringBlueprint block = clause_block(d3, i, table1(), g.q);
        for (auto& s : block.strings) g.bp.strings.push_back(std::move(s));
    }
    if (g.bp.total_extras() != g.t)
        throw InputError("build_sharp_gadget: extras total disagrees with t(p)");
    return g;
}

namespace {

unsigned long pow_mod(unsigned long base, unsigned long long e, unsigned long p) {
    unsigned __int128 r = 1, b = base % p;
    while (e) {
        if (e & 1) r = (r * b) % p;
        b = (b * b) % p;
        e >>= 1;
    }
    return static_cast<unsigned long>(r);
}

}  // namespace

unsigned long K_mod_p(int n, int k, unsigned long p) {
    if (p < 7) throw InputError("K_mod_p: prime must be >= 7");
    std::vector<unsigned long> fact(static_cast<size_t>(p), 1);
    for (unsigned long d = 2; d < p; ++d)
        fact[d] = static_cast<unsigned long>(
            (static_cast<unsigned __int128>(fact[d - 1]) * d) % p);
    const std::pair<int, long long> sched[] = {
        {6, 7LL * k},          {5, 6LL * k},          {4, 12LL * k},
        {3, 12LL * k},         {2, 6LL * k + 2 * n},  {1, 7LL * k + 2}};
    unsigned long r = 1;
    for (auto [off, e] : sched)
        r = static_cast<unsigned long>(
            (static_cast<unsigned __int128>(r) *
             pow_mod(fact[p - static_cast<unsigned long>(off)],
                     static_cast<unsigned long long>(e), p)) %
            p);
    return r;
}

unsigned long K_inv_mod_p(int n, int k, unsigned long p) {
    return pow_mod(K_mod_p(n, k, p), p - 2, p);
}

BigInt K_exact(int n, int k, unsigned long p) {
    if (p > 40) throw GuardError("K_exact: guarded to p <= 40");
    if (p < 7) throw InputError("K_exact: prime must be >= 7");
    const std::pair<int, long long> sched[] = {
        {6, 7LL * k},          {5, 6LL * k},          {4, 12LL * k},
        {3, 12LL * k},         {2, 6LL * k + 2 * n},  {1, 7LL * k + 2}};
    BigInt r = 1;
    for (auto [off, e] : sched) {
        BigInt f = factorial(static_cast<long long>(p) - off);
        BigInt fe;
        mpz_pow_ui(fe.get_mpz_t(), f.get_mpz_t(), static_cast<unsigned long>(e));
        r *= fe;
    }
    return r;
}

ThresholdGadget build_threshold_gadget(const CNF3& d3, const std::string& variant) {
    if (!is_d3(d3)) throw InputError("build_threshold_gadget: formula must be D3");
    int n = d3.n, k = static_cast<int>(d3.clauses.size());
    if (n < 3 || n > 32)
        throw InputError("build_threshold_gadget: n must be in [3, 32]");
    if (k < 1) throw InputError("build_threshold_gadget: needs at least one clause");
    if (variant != "up" && variant != "up2")
        throw InputError("build_threshold_gadget: variant must be 'up' or 'up2'");

    ThresholdGadget g;
    g.variant = variant;
    g.n = n;
    g.k = k;
    g.bp.n_pairs = n;

    uint64_t all_pairs = (n == 32) ? ~0ULL : ((1ULL << (2 * n)) - 1);
    // (extras, copies-multiplier-of-k) schedules
    std::vector<std::pair<long long, long long>> alpha_sched, beta_sched;
    const GadgetTable* table = nullptr;
    if (variant == "up") {
        alpha_sched = {{0, 1}, {1, 8}, {2, 18}, {3, 18}, {4, 8}, {5, 1}};
        beta_sched = {{1, 1}, {2, 6}, {3, 6}, {4, 1}};
        table = &table1();
        g.t_printed = 260LL * k + 35LL * k * n;
    } else {
        alpha_sched = {{1, 4}, {2, 14}, {3, 14}, {4, 4}};
        beta_sched = {{2, 6}, {3, 6}};
        table = &table3();
        g.t_printed = 245LL * k + 60LL * k * n;
    }

    for (auto [e, m] : alpha_sched) {
        g.bp.strings.push_back({all_pairs, e, m * k, "alpha+" + std::to_string(e)});
        g.bp.strings.push_back({0, e, m * k, "alpha_bar+" + std::to_string(e)});
    }
    for (int j = 0; j < n; ++j) {
        uint64_t beta = 3ULL << (2 * j);
        for (auto [e, m] : beta_sched) {
            g.bp.strings.push_back(
                {beta, e, m * k, "beta_" + std::to_string(j + 1) + "+" + std::to_string(e)});
            g.bp.strings.push_back({all_pairs ^ beta, e, m * k,
                                    "beta_bar_" + std::to_string(j + 1) + "+" + std::to_string(e)});
        }
    }
    for (int i = 0; i < k; ++i) {
        StringBlueprint block = clause_block(d3, i, *table, 1);
        for (auto& s : block.strings) g.bp.strings.push_back(std::move(s));
    }
    g.t = g.bp.total_extras();
    g.string_count = g.bp.total_strings();

    long long expect_strings =
        variant == "up" ? 158LL * k + 28LL * k * n : 98LL * k + 24LL * k * n;
    if (g.string_count != expect_strings)
        throw InputError("build_threshold_gadget: string count check failed");
    return g;
}

namespace {

BigRat rat_pow(const BigRat& b, long long e) {
    if (e < 0) throw InputError("rat_pow: negative exponent");
    BigRat out;
    mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(b.get_mpq_t()),
               static_cast<unsigned long>(e));
    mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(b.get_mpq_t()),
               static_cast<unsigned long>(e));
    out.canonicalize();
    return out;
}

// prod f(n + off)^{mult * k-ish exponent} over an (offset, exponent) schedule
BigRat sched_prod(const WeightFunction& f, int n,
                  const std::vector<std::pair<int, long long>>& sched) {
    BigRat out = 1;
    for (auto [off, e] : sched) out *= rat_pow(f.exact(n + off), e);
    return out;
}

}  // namespace

SeparationReport verify_separation(const WeightFunction& f, int n, int k,
                                   const std::string& variant) {
    if (n < 3 || k < 1) throw InputError("verify_separation: need n >= 3, k >= 1");
    if (variant != "up" && variant != "up2")
        throw InputError("verify_separation: variant must be 'up' or 'up2'");
    SeparationReport r;
    r.variant = variant;
    r.n = n;
    r.k = k;
    long long K = k;

    if (variant == "up") {
        r.alpha_good = sched_prod(f, n, {{0, 2 * K}, {1, 16 * K}, {2, 36 * K},
                                         {3, 36 * K}, {4, 16 * K}, {5, 2 * K}});
        // pairs (n-1+j, n+1+j), copies k/8k/18k/18k/8k/k at j=0..5:
        r.alpha_bad = 1;
        for (auto [j, m] : std::vector<std::pair<int, long long>>{
                 {0, K}, {1, 8 * K}, {2, 18 * K}, {3, 18 * K}, {4, 8 * K}, {5, K}})
            r.alpha_bad *= rat_pow(f.exact(n - 1 + j) * f.exact(n + 1 + j), m);
        r.beta_good = sched_prod(f, n, {{1, 2 * K}, {2, 12 * K}, {3, 12 * K}, {4, 2 * K}});
        r.beta_min = r.beta_good;
        r.beta_bad = 1;
        for (auto [j, m] : std::vector<std::pair<int, long long>>{
                 {1, K}, {2, 6 * K}, {3, 6 * K}, {4, K}})
            r.beta_bad *= rat_pow(f.exact(n - 2 + j) * f.exact(n + 2 + j), m);
        r.gamma_good = sched_prod(
            f, n, {{0, 7}, {1, 6}, {2, 12}, {3, 12}, {4, 6}, {5, 7}});
        r.gamma_bad = sched_prod(f, n, {{-1, 1}, {0, 6}, {1, 3}, {2, 15},
                                        {3, 15}, {4, 3}, {5, 6}, {6, 1}});
        r.gamma_min = rat_pow(f.exact(n + 2) * f.exact(n + 3), 25);
    } else {
        r.alpha_good = sched_prod(f, n, {{1, 8 * K}, {2, 28 * K}, {3, 28 * K}, {4, 8 * K}});
        r.alpha_bad = 1;
        for (auto [j, m] : std::vector<std::pair<int, long long>>{
                 {1, 4 * K}, {2, 14 * K}, {3, 14 * K}, {4, 4 * K}})
            r.alpha_bad *= rat_pow(f.exact(n - 1 + j) * f.exact(n + 1 + j), m);
        r.beta_good = sched_prod(f, n, {{2, 12 * K}, {3, 12 * K}});
        r.beta_min = r.beta_good;
        r.beta_bad = 1;
        for (auto [j, m] : std::vector<std::pair<int, long long>>{{2, 6 * K}, {3, 6 * K}})
            r.beta_bad *= rat_pow(f.exact(n - 2 + j) * f.exact(n + 2 + j), m);
        r.gamma_good = sched_prod(f, n, {{-1, 1}, {0, 3}, {1, 3}, {2, 6},
                                         {3, 6}, {4, 3}, {5, 3}, {6, 1}});
        r.gamma_bad = sched_prod(f, n, {{0, 4}, {1, 6}, {2, 3}, {3, 3}, {4, 6}, {5, 4}});
        r.gamma_min = rat_pow(f.exact(n + 2) * f.exact(n + 3), 13);
    }

    r.h3 = r.alpha_good * rat_pow(r.beta_good, n) * rat_pow(r.gamma_good, K);
    r.h2 = r.alpha_good * rat_pow(r.beta_good, n) * r.gamma_bad *
           rat_pow(r.gamma_good, K - 1);
    r.h1 = r.alpha_good * r.beta_bad * rat_pow(r.beta_min, n - 1) *
           rat_pow(r.gamma_min, K);
    r.h0 = r.alpha_bad * rat_pow(r.beta_min, n) * rat_pow(r.gamma_min, K);
    r.h3_lt_h0 = r.h3 < r.h0;
    r.h3_lt_h1 = r.h3 < r.h1;
    r.h3_lt_h2 = r.h3 < r.h2;

    r.ratio = (f.exact(n - 2) * rat_pow(f.exact(n + 1), 3) *
               rat_pow(f.exact(n + 2), 3) * f.exact(n + 5)) /
              (f.exact(n - 1) * rat_pow(f.exact(n), 3) *
               rat_pow(f.exact(n + 3), 3) * f.exact(n + 4));
    r.ratio_gt_1 = r.ratio > 1;
    r.hypothesis_holds = (variant == "up") ? r.ratio_gt_1 : (r.ratio < 1);

    // Strict log-convexity: f(d-1) f(d+1) > f(d)^2 over the distances used.
    r.logf_strictly_convex = true;
    for (int d = 1; d <= n + 5; ++d) {
        if (f.exact(d - 1) * f.exact(d + 1) <= f.exact(d) * f.exact(d)) {
            r.logf_strictly_convex = false;
            break;
        }
    }
    return r;
}

}  // namespace medz
