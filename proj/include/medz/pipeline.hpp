#pragma once
// End-to-end model counter: prime selection, per-prime modular partition
// sums T(p), inversion by K'(p), and Chinese-Remainder recovery of gamma.

#include "medz/gadget.hpp"

namespace medz {

struct PrimePlan {
    std::string mode;  // "theoretical" | "practical"
    std::vector<unsigned long> primes;
    double product_log2 = 0.0;
};

// theoretical: all primes in (n', 5n'] with n' = max(300, n+5).
// practical: smallest prefix of primes >= max(7, n+5) with product > 2^n.
PrimePlan select_primes(int n, const std::string& mode);

std::vector<unsigned long> primes_up_to(unsigned long limit);

// T(p) = sum over the 2^{2n} medians of D(p) of prod H! mod p, using the
// structural shortcut H = H_pairs + extras. With debug_classes, asserts each
// median's contribution is K(p) (satisfying) or 0 (everything else) mod p.
unsigned long T_of_p(const CNF3& d3, unsigned long p, bool debug_classes = false);

struct PrimeReport {
    unsigned long p = 0;
    long long q = 0, t = 0;
    unsigned long T_mod_p = 0, K_mod_p = 0, gamma_mod_p = 0;
};

// Garner combination of (residue mod prime) pairs into [0, prod).
BigInt crt_garner(const std::vector<std::pair<unsigned long, unsigned long>>& congruences);

struct CountSatResult {
    BigInt gamma;        // satisfying-assignment count of the input formula
    BigInt d3_gamma;     // count of the transformed D3 formula
    int n = 0, k = 0;    // transformed formula dimensions
    int dropped_vars = 0;
    std::string mode;
    std::vector<PrimeReport> reports;
};

CountSatResult count_sat(const CNF3& input, const std::string& mode,
                         int jobs = 1, int max_vars_guard = 12);

}  // namespace medz
