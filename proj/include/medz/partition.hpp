#pragma once
// Exact and modular evaluation of the partition function Z(B, w) over the
// optimal medians of a multiset, threshold counting, and amplification.

#include <map>

#include "medz/median.hpp"
#include "medz/weights.hpp"

namespace medz {

using DistanceMultiset = std::map<long long, long long>;

DistanceMultiset distance_multiset(const StringMultiset& B, const BitString& mu);

BigRat weight_of_median(const StringMultiset& B, const BitString& mu,
                        const WeightFunction& w, bool check_median = true);

struct PartitionResult {
    BigRat Z;
    BigInt median_count;
    long long ambiguous_count = 0;
    long long min_total_distance = 0;
};

PartitionResult partition_function(const StringMultiset& B,
                                   const WeightFunction& w, int jobs = 1,
                                   long long max_ambiguous = kDefaultAmbiguousGuard);

// T = sum over medians of prod H! mod p (factorial weights).
unsigned long partition_function_mod_p(
    const StringMultiset& B, unsigned long p,
    long long max_ambiguous = kDefaultAmbiguousGuard);

// Count medians whose weight satisfies (<= D) when leq, else (>= D).
// Exact rational comparison with a log-domain prefilter.
BigInt count_medians_within_threshold(
    const StringMultiset& B, const WeightFunction& w, const BigRat& D,
    bool leq = true, int jobs = 1,
    long long max_ambiguous = kDefaultAmbiguousGuard);

// r-fold multiset union: multiplicities scaled by r; medians unchanged.
StringMultiset amplify(const StringMultiset& B, long long r);

// Independent oracle: counts star-tree scenarios by explicitly generating
// every per-edge flip ordering (std::next_permutation). Guarded on the
// minimum total distance.
BigInt scenario_count_star_oracle(const StringMultiset& B,
                                  long long max_total_distance = 8);

}  // namespace medz
