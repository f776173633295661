#include "medz/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace medz {

std::vector<unsigned long> primes_up_to(unsigned long limit) {
    std::vector<bool> sieve(limit + 1, true);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= limit; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (unsigned long j = i * i; j <= limit; j += i) sieve[j] = false;
    }
    return out;
}

PrimePlan select_primes(int n, const std::string& mode) {
    PrimePlan plan;
    plan.mode = mode;
    if (mode == "theoretical") {
        unsigned long np = static_cast<unsigned long>(std::max(300, n + 5));
        for (unsigned long p : primes_up_to(5 * np))
            if (p > np) plan.primes.push_back(p);
    } else if (mode == "practical") {
        unsigned long lo = static_cast<unsigned long>(std::max(7, n + 5));
        BigInt target = BigInt(1) << n;
        BigInt prod = 1;
        // Generous sieve ceiling; by Bertrand there are plenty of primes here.
        auto primes = primes_up_to(std::max<unsigned long>(64, 16 * lo + 16 * n));
        for (unsigned long p : primes) {
            if (p < lo) continue;
            plan.primes.push_back(p);
            prod *= static_cast<unsigned long>(p);
            if (prod > target) break;
        }
        if (prod <= target)
            throw InputError("select_primes: prime pool exhausted");
    } else {
        throw InputError("select_primes: mode must be 'theoretical' or 'practical'");
    }
    for (unsigned long p : plan.primes)
        plan.product_log2 += std::log2(static_cast<double>(p));
    return plan;
}

unsigned long T_of_p(const CNF3& d3, unsigned long p, bool debug_classes) {
    SharpGadget g = build_sharp_gadget(d3, p);
    int n = g.n;
    if (n > 14) throw GuardError("T_of_p: 2^{2n} scan guarded to n <= 14");

    std::vector<unsigned long> fact(static_cast<size_t>(p), 1);
    for (unsigned long d = 2; d < p; ++d)
        fact[d] = static_cast<unsigned long>(
            (static_cast<unsigned __int128>(fact[d - 1]) * d) % p);

    unsigned long K = debug_classes ? K_mod_p(n, g.k, p) : 0;
    unsigned long T = 0;
    uint64_t states = 1ULL << (2 * n);
    std::vector<bool> assign(static_cast<size_t>(n));
    for (uint64_t mu = 0; mu < states; ++mu) {
        // Extras of every median are zero, so each distance is the pair-part
        // Hamming distance plus the string's own extras count.
        unsigned __int128 prod = 1;
        for (const auto& s : g.bp.strings) {
            long long d = __builtin_popcountll(mu ^ s.pair_bits) + s.extras;
            unsigned long f =
                d >= static_cast<long long>(p) ? 0 : fact[static_cast<size_t>(d)];
            if (f == 0) {
                prod = 0;
                break;
            }
            if (s.copies == 1) {
                prod = (prod * f) % p;
            } else {
                unsigned __int128 b = f;
                long long e = s.copies;
                while (e) {
                    if (e & 1) prod = (prod * b) % p;
                    b = (b * b) % p;
                    e >>= 1;
                }
            }
        }
        unsigned long contrib = static_cast<unsigned long>(prod);
        if (debug_classes) {
            bool proper = true;
            for (int i = 0; i < n && proper; ++i) {
                bool x = (mu >> (2 * i)) & 1u, y = (mu >> (2 * i + 1)) & 1u;
                if (x == y)
                    proper = false;
                else
                    assign[static_cast<size_t>(i)] = x;
            }
            bool sat = proper && formula_satisfied(d3, assign);
            unsigned long expect = sat ? K : 0;
            if (contrib != expect)
                throw std::runtime_error(
                    "T_of_p: median class contribution check failed at pattern " +
                    std::to_string(mu));
        }
        T = (T + contrib) % p;
    }
    return T;
}

BigInt crt_garner(const std::vector<std::pair<unsigned long, unsigned long>>& congruences) {
    if (congruences.empty()) throw InputError("crt_garner: no congruences");
    // Mixed-radix accumulation: x = x + c_i * prod(m_0..m_{i-1}).
    BigInt x = 0, radix = 1;
    for (const auto& [r, m] : congruences) {
        BigInt mm(m);
        BigInt cur = x % mm;
        BigInt rad_inv;
        if (!mpz_invert(rad_inv.get_mpz_t(), BigInt(radix % mm).get_mpz_t(),
                        mm.get_mpz_t()))
            throw InputError("crt_garner: moduli not pairwise coprime");
        BigInt c = ((BigInt(r) - cur) * rad_inv) % mm;
        if (c < 0) c += mm;
        x += c * radix;
        radix *= mm;
    }
    return x;
}

CountSatResult count_sat(const CNF3& input, const std::string& mode, int jobs,
                         int max_vars_guard) {
    D3Result d3r = to_d3cnf(input);
    CountSatResult res;
    res.n = d3r.d3.n;
    res.k = static_cast<int>(d3r.d3.clauses.size());
    res.dropped_vars = d3r.dropped_vars;
    res.mode = mode;

    if (res.k == 0) {
        // No constraints survive; every assignment satisfies the formula.
        res.d3_gamma = BigInt(1) << res.n;
        res.gamma = res.d3_gamma << res.dropped_vars;
        return res;
    }
    if (res.n > max_vars_guard)
        throw GuardError("count_sat: transformed formula has " +
                         std::to_string(res.n) + " variables, over the guard of " +
                         std::to_string(max_vars_guard));

    PrimePlan plan = select_primes(res.n, mode);
    res.reports.resize(plan.primes.size());
    std::atomic<size_t> cursor{0};
    auto work = [&]() {
        for (;;) {
            size_t i = cursor.fetch_add(1);
            if (i >= plan.primes.size()) return;
            unsigned long p = plan.primes[i];
            PrimeReport rep;
            rep.p = p;
            rep.q = static_cast<long long>(p) - (res.n + 5);
            rep.t = 2 * (rep.q + 4) + 2LL * res.n * (rep.q + 3) +
                    static_cast<long long>(res.k) * (75 + 50 * rep.q);
            rep.T_mod_p = T_of_p(d3r.d3, p);
            rep.K_mod_p = K_mod_p(res.n, res.k, p);
            rep.gamma_mod_p = static_cast<unsigned long>(
                (static_cast<unsigned __int128>(rep.T_mod_p) *
                 K_inv_mod_p(res.n, res.k, p)) %
                p);
            res.reports[i] = rep;
        }
    };
    int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(plan.primes.size())));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        for (int i = 0; i < nthreads; ++i) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }

    std::vector<std::pair<unsigned long, unsigned long>> congs;
    for (const auto& rep : res.reports) congs.emplace_back(rep.gamma_mod_p, rep.p);
    res.d3_gamma = crt_garner(congs);
    res.gamma = res.d3_gamma << res.dropped_vars;
    return res;
}

}  // namespace medz
