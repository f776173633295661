#pragma once
// Median-set machinery: ambiguous coordinates, majority medians, Gray-code
// enumeration of all optimal medians, and the median <-> truth-assignment map.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "medz/bitstring.hpp"

namespace medz {

inline constexpr long long kDefaultAmbiguousGuard = 24;

// Indices where exactly half the members (with multiplicity) carry a 0.
std::vector<long long> ambiguous_coordinates(const StringMultiset& B);

// Bitwise strict majority; ambiguous coordinates resolved to 0.
BitString majority_median(const StringMultiset& B);

struct MedianSet {
    BitString base;                     // majority median (ambiguous bits 0)
    std::vector<long long> ambiguous;   // ascending coordinate indices
    long long min_total_distance = 0;   // sum of H over the multiset at base
};

MedianSet median_set(const StringMultiset& B);

long long total_distance(const StringMultiset& B, const BitString& mu);

// Visit medians with state indices in [begin, end) of the 2^a Gray-code walk
// (a = |ambiguous|). The visitor receives the ambiguous-bit pattern (natural
// binary, i.e. gray(i)) and the per-member distances, updated incrementally.
using MedianVisitor =
    std::function<void(uint64_t pattern, const BitString& mu,
                       const std::vector<long long>& dists)>;

void scan_medians_range(const StringMultiset& B, const MedianSet& ms,
                        uint64_t begin, uint64_t end, const MedianVisitor& f);

// Full deterministic enumeration (Gray order); guarded on |ambiguous|.
void enumerate_medians(const StringMultiset& B,
                       long long max_ambiguous, const MedianVisitor& f);
std::vector<BitString> enumerate_medians_vec(
    const StringMultiset& B, long long max_ambiguous = kDefaultAmbiguousGuard);

// Reconstruct the median string for a given ambiguous-bit pattern.
BitString median_from_pattern(const MedianSet& ms, uint64_t pattern);

// Exhaustive argmin over all 2^len strings; guarded to len <= 20.
std::vector<BitString> brute_force_medians(const StringMultiset& B);

// Truth assignment read-off: requires mu[x_i] != mu[y_i] for all pairs and
// all extras zero; value i is true iff mu[x_i] = 1. nullopt = rejected.
std::optional<std::vector<bool>> assignment_of_median(const BitString& mu);

}  // namespace medz
