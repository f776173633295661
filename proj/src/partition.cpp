#include "medz/partition.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace medz {

DistanceMultiset distance_multiset(const StringMultiset& B, const BitString& mu) {
    DistanceMultiset out;
    for (const auto& s : B.members) out[hamming(s, mu)]++;
    return out;
}

BigRat weight_of_median(const StringMultiset& B, const BitString& mu,
                        const WeightFunction& w, bool check_median) {
    if (check_median) {
        MedianSet ms = median_set(B);
        if (total_distance(B, mu) != ms.min_total_distance)
            throw InputError("weight_of_median: string is not an optimal median");
    }
    BigRat prod = 1;
    for (const auto& s : B.members) prod *= w.exact(hamming(s, mu));
    return prod;
}

namespace {

// Deterministic contiguous split of [0, total) into `jobs` chunks; chunk
// results are combined in index order so the output is independent of timing.
std::vector<std::pair<uint64_t, uint64_t>> chunk_ranges(uint64_t total, int jobs) {
    if (jobs < 1) throw InputError("jobs must be >= 1");
    uint64_t nchunks = std::min<uint64_t>(static_cast<uint64_t>(jobs), total ? total : 1);
    std::vector<std::pair<uint64_t, uint64_t>> out;
    uint64_t base = total / nchunks, rem = total % nchunks, cur = 0;
    for (uint64_t c = 0; c < nchunks; ++c) {
        uint64_t len = base + (c < rem ? 1 : 0);
        out.emplace_back(cur, cur + len);
        cur += len;
    }
    return out;
}

MedianSet guarded_median_set(const StringMultiset& B, long long max_ambiguous,
                             const char* who) {
    MedianSet ms = median_set(B);
    if (static_cast<long long>(ms.ambiguous.size()) > max_ambiguous)
        throw GuardError(std::string(who) + ": " + std::to_string(ms.ambiguous.size()) +
                         " ambiguous coordinates exceed the guard of " +
                         std::to_string(max_ambiguous));
    return ms;
}

}  // namespace

PartitionResult partition_function(const StringMultiset& B, const WeightFunction& w,
                                   int jobs, long long max_ambiguous) {
    MedianSet ms = guarded_median_set(B, max_ambiguous, "partition_function");
    uint64_t total = 1ULL << ms.ambiguous.size();
    auto ranges = chunk_ranges(total, jobs);

    std::vector<BigRat> partial(ranges.size(), BigRat(0));
    auto work = [&](size_t c) {
        BigRat acc = 0;
        scan_medians_range(B, ms, ranges[c].first, ranges[c].second,
                           [&](uint64_t, const BitString&,
                               const std::vector<long long>& dists) {
                               BigRat prod = 1;
                               for (long long d : dists) prod *= w.exact(d);
                               acc += prod;
                           });
        partial[c] = acc;
    };
    if (ranges.size() == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (size_t c = 0; c < ranges.size(); ++c) threads.emplace_back(work, c);
        for (auto& t : threads) t.join();
    }

    PartitionResult r;
    r.Z = 0;
    for (const auto& p : partial) r.Z += p;
    r.median_count = BigInt(1) << ms.ambiguous.size();
    r.ambiguous_count = static_cast<long long>(ms.ambiguous.size());
    r.min_total_distance = ms.min_total_distance;
    return r;
}

unsigned long partition_function_mod_p(const StringMultiset& B, unsigned long p,
                                       long long max_ambiguous) {
    MedianSet ms = guarded_median_set(B, max_ambiguous, "partition_function_mod_p");
    // Factorial residues; d! = 0 mod p once d >= p.
    std::vector<unsigned long> fact(static_cast<size_t>(p), 1);
    for (unsigned long d = 2; d < p; ++d)
        fact[d] = static_cast<unsigned long>(
            (static_cast<unsigned __int128>(fact[d - 1]) * d) % p);
    auto fmod = [&](long long d) -> unsigned long {
        return d >= static_cast<long long>(p) ? 0 : fact[static_cast<size_t>(d)];
    };

    unsigned long T = 0;
    scan_medians_range(B, ms, 0, 1ULL << ms.ambiguous.size(),
                       [&](uint64_t, const BitString&,
                           const std::vector<long long>& dists) {
                           unsigned __int128 prod = 1;
                           for (long long d : dists) {
                               unsigned long f = fmod(d);
                               if (f == 0) return;  // contribution vanishes mod p
                               prod = (prod * f) % p;
                           }
                           T = static_cast<unsigned long>(
                               (T + static_cast<unsigned long>(prod)) % p);
                       });
    return T;
}

BigInt count_medians_within_threshold(const StringMultiset& B,
                                      const WeightFunction& w, const BigRat& D,
                                      bool leq, int jobs, long long max_ambiguous) {
    MedianSet ms = guarded_median_set(B, max_ambiguous, "count_medians_within_threshold");
    if (D <= 0) throw InputError("threshold must be positive");
    // log via mantissa/exponent so huge rationals don't overflow a double.
    auto log_big = [](const BigInt& z) {
        signed long e = 0;
        double m = mpz_get_d_2exp(&e, z.get_mpz_t());
        return std::log(m) + static_cast<double>(e) * std::log(2.0);
    };
    double logD = log_big(D.get_num()) - log_big(D.get_den());
    uint64_t total = 1ULL << ms.ambiguous.size();
    auto ranges = chunk_ranges(total, jobs);

    std::vector<BigInt> partial(ranges.size(), BigInt(0));
    auto work = [&](size_t c) {
        BigInt acc = 0;
        scan_medians_range(
            B, ms, ranges[c].first, ranges[c].second,
            [&](uint64_t, const BitString&, const std::vector<long long>& dists) {
                double logw = 0;
                for (long long d : dists) logw += w.log_value(d);
                bool hit;
                // Decide in the log domain only when clearly away from the
                // threshold; borderline cases fall back to exact rationals.
                if (std::isinf(logw) || std::abs(logw - logD) > 0.5) {
                    hit = leq ? (logw <= logD) : (logw >= logD);
                } else {
                    BigRat prod = 1;
                    for (long long d : dists) prod *= w.exact(d);
                    hit = leq ? (prod <= D) : (prod >= D);
                }
                if (hit) acc += 1;
            });
        partial[c] = acc;
    };
    if (ranges.size() == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (size_t c = 0; c < ranges.size(); ++c) threads.emplace_back(work, c);
        for (auto& t : threads) t.join();
    }
    BigInt count = 0;
    for (const auto& p : partial) count += p;
    return count;
}

StringMultiset amplify(const StringMultiset& B, long long r) {
    if (r < 1) throw InputError("amplify: r must be >= 1");
    StringMultiset out;
    out.layout = B.layout;
    out.members.reserve(B.members.size() * static_cast<size_t>(r));
    for (long long c = 0; c < r; ++c)
        for (const auto& s : B.members) out.members.push_back(s);
    return out;
}

namespace {

// Orderings of the flip set of one edge, materialized with next_permutation.
// Positions are distinct, so this is just |diff|! — but counted explicitly to
// stay independent of the factorial shortcut used elsewhere.
BigInt count_flip_orderings(const BitString& a, const BitString& b) {
    std::vector<long long> diff;
    for (long long i = 0; i < a.size(); ++i)
        if (a.get(i) != b.get(i)) diff.push_back(i);
    std::sort(diff.begin(), diff.end());
    BigInt count = 0;
    do {
        count += 1;
    } while (std::next_permutation(diff.begin(), diff.end()));
    return count;
}

}  // namespace

BigInt scenario_count_star_oracle(const StringMultiset& B,
                                  long long max_total_distance) {
    MedianSet ms = guarded_median_set(B, kDefaultAmbiguousGuard,
                                      "scenario_count_star_oracle");
    if (ms.min_total_distance > max_total_distance)
        throw GuardError("scenario_count_star_oracle: minimum total distance " +
                         std::to_string(ms.min_total_distance) + " exceeds " +
                         std::to_string(max_total_distance));
    BigInt Z = 0;
    scan_medians_range(B, ms, 0, 1ULL << ms.ambiguous.size(),
                       [&](uint64_t, const BitString& mu,
                           const std::vector<long long>&) {
                           BigInt prod = 1;
                           for (const auto& s : B.members)
                               prod *= count_flip_orderings(s, mu);
                           Z += prod;
                       });
    return Z;
}

}  // namespace medz
