#include "medz/cnf.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "medz/bitstring.hpp"

namespace medz {

bool is_d3(const CNF3& g) {
    for (const auto& c : g.clauses) {
        const auto& l = c.lits;
        for (int i = 0; i < 3; ++i)
            if (l[i].var < 1 || l[i].var > g.n) return false;
        if (l[0].var == l[1].var || l[0].var == l[2].var || l[1].var == l[2].var)
            return false;
    }
    return true;
}

CNF3 parse_dimacs(std::istream& in) {
    CNF3 g;
    long long declared_clauses = -1;
    bool header_seen = false;
    std::string line;
    std::vector<int> pending;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, fmt;
            ls >> p >> fmt >> g.n >> declared_clauses;
            if (fmt != "cnf" || g.n < 1)
                throw InputError("DIMACS: bad problem line");
            header_seen = true;
            continue;
        }
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (pending.empty())
                    throw InputError("DIMACS: empty clause");
                if (pending.size() > 3)
                    throw InputError("DIMACS: clause width exceeds 3");
                while (pending.size() < 3) pending.push_back(pending.front());
                Clause3 c;
                for (int i = 0; i < 3; ++i) {
                    int v = pending[static_cast<size_t>(i)];
                    c.lits[static_cast<size_t>(i)] = {std::abs(v), v < 0};
                    if (std::abs(v) > g.n)
                        throw InputError("DIMACS: literal outside declared variables");
                }
                g.clauses.push_back(c);
                pending.clear();
            } else {
                pending.push_back(lit);
            }
        }
    }
    if (!header_seen) throw InputError("DIMACS: missing problem line");
    if (!pending.empty()) throw InputError("DIMACS: unterminated clause");
    if (declared_clauses >= 0 &&
        declared_clauses != static_cast<long long>(g.clauses.size()))
        throw InputError("DIMACS: clause count disagrees with the header");
    return g;
}

std::string to_dimacs(const CNF3& g) {
    std::ostringstream out;
    out << "p cnf " << g.n << " " << g.clauses.size() << "\n";
    for (const auto& c : g.clauses) {
        for (const auto& l : c.lits) out << (l.neg ? -l.var : l.var) << " ";
        out << "0\n";
    }
    return out.str();
}

D3Result to_d3cnf(const CNF3& g) {
    if (g.n < 3) throw InputError("to_d3cnf: needs at least 3 variables");
    std::vector<Clause3> out;
    for (const auto& c : g.clauses) {
        // Deduplicate literals; detect complementary pairs (tautologies).
        std::vector<Literal> lits;
        bool tautology = false;
        for (const auto& l : c.lits) {
            bool dup = false;
            for (const auto& e : lits) {
                if (e == l) dup = true;
                if (e.var == l.var && e.neg != l.neg) tautology = true;
            }
            if (!dup) lits.push_back(l);
        }
        if (tautology) continue;

        auto in_clause = [&](int v) {
            for (const auto& l : lits)
                if (l.var == v) return true;
            return false;
        };
        std::vector<int> fresh;
        for (int v = 1; v <= g.n && fresh.size() < 2; ++v)
            if (!in_clause(v)) fresh.push_back(v);

        if (lits.size() == 3) {
            out.push_back({{lits[0], lits[1], lits[2]}});
        } else if (lits.size() == 2) {
            Literal z{fresh[0], false};
            out.push_back({{lits[0], lits[1], z}});
            out.push_back({{lits[0], lits[1], {z.var, true}}});
        } else {
            Literal z1{fresh[0], false}, z2{fresh[1], false};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    out.push_back({{lits[0],
                                    {z1.var, a == 1},
                                    {z2.var, b == 1}}});
        }
    }

    // Densely reindex the variables that survive.
    std::set<int> used;
    for (const auto& c : out)
        for (const auto& l : c.lits) used.insert(l.var);
    std::map<int, int> remap;
    int next = 1;
    for (int v : used) remap[v] = next++;

    D3Result r;
    r.d3.n = static_cast<int>(used.size());
    for (auto c : out) {
        for (auto& l : c.lits) l.var = remap[l.var];
        r.d3.clauses.push_back(c);
    }
    r.dropped_vars = g.n - r.d3.n;
    return r;
}

bool clause_satisfied(const Clause3& c, const std::vector<bool>& assign) {
    for (const auto& l : c.lits) {
        bool v = assign[static_cast<size_t>(l.var - 1)];
        if (v != l.neg) return true;
    }
    return false;
}

bool formula_satisfied(const CNF3& g, const std::vector<bool>& assign) {
    for (const auto& c : g.clauses)
        if (!clause_satisfied(c, assign)) return false;
    return true;
}

BigInt brute_force_count(const CNF3& g) {
    if (g.n > 26) throw GuardError("brute_force_count: n > 26");
    BigInt count = 0;
    std::vector<bool> assign(static_cast<size_t>(g.n));
    for (uint64_t bits = 0; bits < (1ULL << g.n); ++bits) {
        for (int i = 0; i < g.n; ++i)
            assign[static_cast<size_t>(i)] = (bits >> i) & 1u;
        if (formula_satisfied(g, assign)) count += 1;
    }
    return count;
}

CNF3 xor_augment(const CNF3& d3) {
    if (!is_d3(d3)) throw InputError("xor_augment: input must be D3");
    if (d3.n < 2) throw InputError("xor_augment: needs at least 2 variables");
    CNF3 out;
    out.n = 2 * d3.n;
    out.clauses = d3.clauses;
    auto mk = [](Literal a, Literal b, Literal c) {
        Clause3 cl;
        cl.lits = {a, b, c};
        return cl;
    };
    for (int i = 1; i <= d3.n; ++i) {
        int w = d3.n + i;
        int vnext = (i == d3.n) ? 1 : i + 1;
        // v_i != w_i, with the sign of v_{i+1} free: four clauses per block.
        out.clauses.push_back(mk({i, false}, {w, false}, {vnext, false}));
        out.clauses.push_back(mk({i, false}, {w, false}, {vnext, true}));
        out.clauses.push_back(mk({i, true}, {w, true}, {vnext, false}));
        out.clauses.push_back(mk({i, true}, {w, true}, {vnext, true}));
    }
    return out;
}

}  // namespace medz
