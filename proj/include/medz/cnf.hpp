#pragma once
// Boolean-formula handling: DIMACS ingestion, the 3CNF -> distinct-variable
// 3CNF transform, XOR augmentation, and a brute-force model-count oracle.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "medz/weights.hpp"

namespace medz {

struct Literal {
    int var = 0;       // 1-based
    bool neg = false;
    bool operator==(const Literal& o) const { return var == o.var && neg == o.neg; }
};

struct Clause3 {
    std::array<Literal, 3> lits;
};

struct CNF3 {
    int n = 0;  // variable count
    std::vector<Clause3> clauses;
};

// Every clause has three distinct variables (no complementary pair possible).
bool is_d3(const CNF3& g);

// DIMACS CNF with clause width <= 3; width-1/2 clauses padded by repetition.
CNF3 parse_dimacs(std::istream& in);
std::string to_dimacs(const CNF3& g);

struct D3Result {
    CNF3 d3;            // valid D3 formula over densely reindexed variables
    int dropped_vars = 0;  // #SAT(input) = 2^dropped_vars * #SAT(d3)
};

// Rewrite rules: two-distinct-variable clause -> 2 clauses with a fresh third
// variable; one-variable clause -> 4 clauses with 2 fresh variables;
// tautologies dropped. Fresh variables are the lexicographically smallest
// existing variables not in the clause. Requires n >= 3.
D3Result to_d3cnf(const CNF3& g);

// Exhaustive count; guarded to n <= 26.
BigInt brute_force_count(const CNF3& g);

// Psi(Gamma): 2n variables (v's then w's), k + 4n clauses; each XOR block
// forces v_i != w_i, so the satisfying count is preserved. Requires D3, n >= 2.
CNF3 xor_augment(const CNF3& d3);

bool clause_satisfied(const Clause3& c, const std::vector<bool>& assign);
bool formula_satisfied(const CNF3& g, const std::vector<bool>& assign);

}  // namespace medz
