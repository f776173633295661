#pragma once
// Median sampling lab: the primer chain (lazy uniform bit-flip walk on the
// median set) and its Metropolis-Hastings reweighting, with exact small-scale
// stationary analysis, cut conductance, and the torpid instance.

#include <cstdint>

#include "medz/partition.hpp"

namespace medz {

// Counter-based generator: every draw is a pure function of (seed, counter),
// so runs are reproducible from the seed and step count alone.
struct CounterRng {
    uint64_t seed = 0;
    uint64_t counter = 0;

    explicit CounterRng(uint64_t s = 0) : seed(s) {}
    uint64_t next();
};

struct ChainModel {
    StringMultiset B;
    MedianSet ms;
    WeightFunction w = WeightFunction::make_factorial();
    bool metropolis = false;  // primer otherwise

    long long ambiguous_count() const {
        return static_cast<long long>(ms.ambiguous.size());
    }
    uint64_t state_count() const { return 1ULL << ms.ambiguous.size(); }
};

ChainModel make_chain(const StringMultiset& B, bool metropolis,
                      const WeightFunction& w = WeightFunction::make_factorial());

// Per-state weight prod w(H) (state = ambiguous-bit pattern).
BigRat state_weight(const ChainModel& c, uint64_t state);
std::vector<BigRat> all_state_weights(const ChainModel& c, uint64_t cap = 1 << 20);

// One step: stay w.p. 1/2, else propose flipping a uniform ambiguous bit;
// the Metropolis chain accepts with min{1, w'/w} (w = 0 always accepts,
// w' = 0 always rejects). Exactly three RNG draws per step.
uint64_t chain_step(const ChainModel& c, uint64_t state, CounterRng& rng);

// Dense exact transition matrix; guarded by max_states.
std::vector<std::vector<BigRat>> transition_matrix(const ChainModel& c,
                                                   uint64_t max_states = 1 << 12);

struct Diagnostics {
    std::vector<uint64_t> support;       // states with positive weight
    std::vector<BigRat> pi;              // stationary on the support
    bool stationary_exact = false;       // pi P = pi verified in rationals
    BigRat balance_residual;             // max |pi_i P_ij - pi_j P_ji|
    double spectral_gap = 0.0;           // 1 - second largest eigenvalue
};

Diagnostics chain_diagnostics(const ChainModel& c, uint64_t max_states = 1 << 12);

// F(S)/theta(S) with F(S) = sum_{mu in S, nu not in S} theta(mu) P(nu|mu);
// requires 0 < theta(S) <= 1/2. States are ambiguous-bit patterns.
BigRat conductance_of_cut(const ChainModel& c, const std::vector<uint64_t>& S,
                          uint64_t max_states = 1 << 12);

// t copies each of the all-zeros and all-ones strings of odd length n.
StringMultiset torpid_instance(int n, int t);
BigInt torpid_Z(int n, int t);                // sum_k C(n,k) (k!(n-k)!)^t
BigRat torpid_bound(int n, int t);            // C(n, floor(n/2))^{-(t-1)}
std::vector<uint64_t> torpid_half_cut(int n);  // states with <= floor(n/2) ones

}  // namespace medz
