#pragma once
// String-gadget constructions: the 50-row clause block (with its 8-way key),
// the 26-row complement block, the modular-counting multiset D(p) with t(p)
// and K(p), and the threshold gadgets with their h0..h3 separation arithmetic.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "medz/cnf.hpp"
#include "medz/partition.hpp"

namespace medz {

struct GadgetRow {
    int row = 0;
    std::array<uint8_t, 6> support{};  // Column A
    int kappa = 0;                     // Column B fill for non-support pairs
    int extra = 0;                     // Column C
    // Printed distance entries per median class column; offset from n, or a
    // bare literal (one Table 1 cell prints the literal "5").
    struct Printed {
        bool literal = false;
        int value = 0;  // entry = literal ? value : n + value
        std::string str(const std::string& nsym = "n") const;
    };
    std::array<Printed, 8> printed{};
};

struct GadgetTable {
    std::string name;
    std::vector<GadgetRow> rows;
    int extra_sum = 0;
};

const GadgetTable& table1();  // 50 rows, extras sum 75
const GadgetTable& table3();  // 26 rows, extras sum 39

// The 8 median-class column headings (values of a median on the six clause
// coordinates read in canonical positive-literal order).
const std::array<std::array<uint8_t, 6>, 8>& class_headings();

// Key: for sign pattern (na, nb, nc) of the clause's three literals, slot[j]
// names which of the six clause coordinates receives Column A bit j
// (0=x_a, 1=y_a, 2=x_b, 3=y_b, 4=x_c, 5=y_c).
struct ClauseKeyEntry {
    std::array<int, 6> slot{};
};
const std::array<ClauseKeyEntry, 8>& clause_key();  // index na*4 + nb*2 + nc

// One blueprint string per table row for clause i of g: Column A placed via
// the key, non-support pairs filled with kappa, extras = Column C + q.
StringBlueprint clause_block(const CNF3& g, int clause_index,
                             const GadgetTable& table, long long q);

struct TableMismatch {
    std::string table;
    int row = 0;
    int column = 0;  // 1-based class column
    std::string printed;
    std::string recomputed;
};

struct TableReport {
    std::vector<TableMismatch> mismatches;
    bool table1_multisets_ok = false;  // recomputed columns vs the two
    bool table3_multisets_ok = false;  // published distance multisets
    bool extra_sums_ok = false;        // 75 and 39
    bool only_the_two_flagged = false; // mismatches == {row15/M1, row50/M8}
};

// Recompute every entry symbolically as H6(A, heading) + (n-3) + C, diff
// against the printed body, and check the per-column distance multisets.
TableReport verify_distance_tables();

// The published distance multisets (offsets from n -> multiplicity).
std::map<int, int> satisfying_multiset_table1();     // columns M1..M7
std::map<int, int> nonsatisfying_multiset_table1();  // column M8
std::map<int, int> satisfying_multiset_table3();
std::map<int, int> nonsatisfying_multiset_table3();

struct SharpGadget {
    StringBlueprint bp;
    int n = 0, k = 0;
    unsigned long p = 0;
    long long q = 0;
    long long t = 0;  // 2(q+4) + 2n(q+3) + k(75 + 50q)
};

// D(p): alpha pair with q+4 extras each, beta_j pairs with q+3 extras each,
// one 50-row clause block per clause at extras offset q.
SharpGadget build_sharp_gadget(const CNF3& d3, unsigned long p);

// K(p) = (p-6)!^{7k} (p-5)!^{6k} (p-4)!^{12k} (p-3)!^{12k}
//        (p-2)!^{6k+2n} (p-1)!^{7k+2}
unsigned long K_mod_p(int n, int k, unsigned long p);
unsigned long K_inv_mod_p(int n, int k, unsigned long p);
BigInt K_exact(int n, int k, unsigned long p);  // guarded to p <= 40

struct ThresholdGadget {
    StringBlueprint bp;
    std::string variant;  // "up" | "up2"
    int n = 0, k = 0;
    long long t = 0;          // extras actually consumed
    long long t_printed = 0;  // the published length formula's extras term
    long long string_count = 0;
};

// variant "up":  158k+28kn strings; copy schedule k/8k/18k/18k/8k/k on
//   alpha^(+0..+5), k/6k/6k/k on beta^(+1..+4), 50-row block + 1 extra.
// variant "up2":  98k+24kn strings; 4k/14k/14k/4k on alpha^(+1..+4),
//   6k/6k on beta^(+2..+3), 26-row block + 1 extra.
ThresholdGadget build_threshold_gadget(const CNF3& d3, const std::string& variant);

struct SeparationReport {
    std::string variant;
    int n = 0, k = 0;
    BigRat alpha_good, alpha_bad, beta_good, beta_bad, beta_min;
    BigRat gamma_good, gamma_bad, gamma_min;
    BigRat h0, h1, h2, h3;
    bool h3_lt_h0 = false, h3_lt_h1 = false, h3_lt_h2 = false;
    BigRat ratio;          // f(n-2)f(n+1)^3 f(n+2)^3 f(n+5) /
                           // f(n-1)f(n)^3 f(n+3)^3 f(n+4)
    bool ratio_gt_1 = false;
    bool hypothesis_holds = false;  // ">1" for up, "<1" for up2
    bool logf_strictly_convex = false;
};

SeparationReport verify_separation(const WeightFunction& f, int n, int k,
                                   const std::string& variant);

}  // namespace medz
