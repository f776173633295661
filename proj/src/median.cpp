#include "medz/median.hpp"

#include <algorithm>

namespace medz {

std::vector<long long> ambiguous_coordinates(const StringMultiset& B) {
    if (B.members.empty()) throw InputError("ambiguous_coordinates: empty multiset");
    long long m = static_cast<long long>(B.members.size());
    std::vector<long long> out;
    for (long long i = 0; i < B.layout.length(); ++i) {
        long long ones = 0;
        for (const auto& s : B.members) ones += s.get(i);
        if (2 * ones == m) out.push_back(i);
    }
    return out;
}

BitString majority_median(const StringMultiset& B) {
    if (B.members.empty()) throw InputError("majority_median: empty multiset");
    long long m = static_cast<long long>(B.members.size());
    BitString mu(B.layout);
    for (long long i = 0; i < B.layout.length(); ++i) {
        long long ones = 0;
        for (const auto& s : B.members) ones += s.get(i);
        if (2 * ones > m) mu.set(i, true);
    }
    return mu;
}

long long total_distance(const StringMultiset& B, const BitString& mu) {
    long long total = 0;
    for (const auto& s : B.members) total += hamming(s, mu);
    return total;
}

MedianSet median_set(const StringMultiset& B) {
    MedianSet ms;
    ms.base = majority_median(B);
    ms.ambiguous = ambiguous_coordinates(B);
    ms.min_total_distance = total_distance(B, ms.base);
    return ms;
}

BitString median_from_pattern(const MedianSet& ms, uint64_t pattern) {
    BitString mu = ms.base;
    for (size_t j = 0; j < ms.ambiguous.size(); ++j)
        if ((pattern >> j) & 1u) mu.flip(ms.ambiguous[j]);
    return mu;
}

void scan_medians_range(const StringMultiset& B, const MedianSet& ms,
                        uint64_t begin, uint64_t end, const MedianVisitor& f) {
    size_t a = ms.ambiguous.size();
    if (a >= 64) throw GuardError("scan_medians_range: too many ambiguous coordinates");
    uint64_t total = 1ULL << a;
    if (begin > end || end > total)
        throw InputError("scan_medians_range: bad index range");
    if (begin == end) return;

    auto gray = [](uint64_t i) { return i ^ (i >> 1); };

    uint64_t pat = gray(begin);
    BitString mu = median_from_pattern(ms, pat);
    std::vector<long long> dists(B.members.size());
    for (size_t j = 0; j < B.members.size(); ++j)
        dists[j] = hamming(B.members[j], mu);

    for (uint64_t i = begin;; ++i) {
        f(pat, mu, dists);
        if (i + 1 == end) break;
        uint64_t next = gray(i + 1);
        uint64_t diff = pat ^ next;
        int bit = 0;
        while (!((diff >> bit) & 1u)) ++bit;
        long long coord = ms.ambiguous[static_cast<size_t>(bit)];
        mu.flip(coord);
        bool now = mu.get(coord);
        for (size_t j = 0; j < B.members.size(); ++j)
            dists[j] += (B.members[j].get(coord) == now) ? -1 : +1;
        pat = next;
    }
}

void enumerate_medians(const StringMultiset& B, long long max_ambiguous,
                       const MedianVisitor& f) {
    MedianSet ms = median_set(B);
    if (static_cast<long long>(ms.ambiguous.size()) > max_ambiguous)
        throw GuardError("enumerate_medians: " + std::to_string(ms.ambiguous.size()) +
                         " ambiguous coordinates exceed the guard of " +
                         std::to_string(max_ambiguous));
    scan_medians_range(B, ms, 0, 1ULL << ms.ambiguous.size(), f);
}

std::vector<BitString> enumerate_medians_vec(const StringMultiset& B,
                                             long long max_ambiguous) {
    std::vector<BitString> out;
    enumerate_medians(B, max_ambiguous,
                      [&](uint64_t, const BitString& mu,
                          const std::vector<long long>&) { out.push_back(mu); });
    return out;
}

std::vector<BitString> brute_force_medians(const StringMultiset& B) {
    long long len = B.layout.length();
    if (len > 20) throw GuardError("brute_force_medians: length > 20");
    if (B.members.empty()) throw InputError("brute_force_medians: empty multiset");
    long long best = -1;
    std::vector<BitString> out;
    for (uint64_t bits = 0; bits < (1ULL << len); ++bits) {
        BitString mu(B.layout);
        for (long long i = 0; i < len; ++i)
            if ((bits >> i) & 1u) mu.set(i, true);
        long long d = total_distance(B, mu);
        if (best < 0 || d < best) {
            best = d;
            out.clear();
        }
        if (d == best) out.push_back(mu);
    }
    return out;
}

std::optional<std::vector<bool>> assignment_of_median(const BitString& mu) {
    const Layout& lay = mu.layout();
    for (long long i = 2LL * lay.n_pairs; i < lay.length(); ++i)
        if (mu.get(i)) return std::nullopt;
    std::vector<bool> assign(static_cast<size_t>(lay.n_pairs));
    for (int i = 0; i < lay.n_pairs; ++i) {
        bool x = mu.get(2LL * i), y = mu.get(2LL * i + 1);
        if (x == y) return std::nullopt;
        assign[static_cast<size_t>(i)] = x;
    }
    return assign;
}

}  // namespace medz
