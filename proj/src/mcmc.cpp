#include "medz/mcmc.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace medz {

uint64_t CounterRng::next() {
    // splitmix64 of (seed, counter): each draw is independent of call history.
    uint64_t z = seed + (++counter) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ChainModel make_chain(const StringMultiset& B, bool metropolis,
                      const WeightFunction& w) {
    ChainModel c;
    c.B = B;
    c.ms = median_set(B);
    c.w = w;
    c.metropolis = metropolis;
    if (c.ms.ambiguous.size() >= 62)
        throw GuardError("make_chain: too many ambiguous coordinates");
    return c;
}

BigRat state_weight(const ChainModel& c, uint64_t state) {
    BitString mu = median_from_pattern(c.ms, state);
    BigRat prod = 1;
    for (const auto& s : c.B.members) prod *= c.w.exact(hamming(s, mu));
    return prod;
}

std::vector<BigRat> all_state_weights(const ChainModel& c, uint64_t cap) {
    uint64_t N = c.state_count();
    if (N > cap) throw GuardError("all_state_weights: state count exceeds the cap");
    std::vector<BigRat> out(N, BigRat(0));
    scan_medians_range(c.B, c.ms, 0, N,
                       [&](uint64_t pattern, const BitString&,
                           const std::vector<long long>& dists) {
                           BigRat prod = 1;
                           for (long long d : dists) prod *= c.w.exact(d);
                           out[pattern] = prod;
                       });
    return out;
}

namespace {

// Metropolis acceptance probability for the move cur -> nxt; the zero-weight
// conventions (w' = 0 rejects; from w = 0 everything is accepted) keep the
// positive-support states closed under the dynamics.
BigRat accept_prob(const BigRat& w_cur, const BigRat& w_nxt) {
    if (w_nxt == 0) return BigRat(0);
    if (w_cur == 0) return BigRat(1);
    BigRat r = w_nxt / w_cur;
    return r >= 1 ? BigRat(1) : r;
}

}  // namespace

uint64_t chain_step(const ChainModel& c, uint64_t state, CounterRng& rng) {
    size_t a = c.ms.ambiguous.size();
    if (a == 0) {
        // Degenerate single-state chain; draws still advance the counter.
        rng.next();
        rng.next();
        rng.next();
        return state;
    }
    uint64_t r_lazy = rng.next();
    uint64_t r_bit = rng.next();
    uint64_t r_acc = rng.next();
    if (r_lazy & 1u) return state;  // lazy half-step
    uint64_t nxt = state ^ (1ULL << (r_bit % a));
    if (!c.metropolis) return nxt;
    BigRat acc = accept_prob(state_weight(c, state), state_weight(c, nxt));
    if (acc == 1) return nxt;
    if (acc == 0) return state;
    // Exact comparison of the uniform draw r_acc / 2^64 against acc.
    BigRat u(BigInt(r_acc), BigInt(1) << 64);
    u.canonicalize();
    return u < acc ? nxt : state;
}

std::vector<std::vector<BigRat>> transition_matrix(const ChainModel& c,
                                                   uint64_t max_states) {
    uint64_t N = c.state_count();
    if (N > max_states)
        throw GuardError("transition_matrix: state count exceeds the guard");
    size_t a = c.ms.ambiguous.size();
    std::vector<std::vector<BigRat>> P(N, std::vector<BigRat>(N, BigRat(0)));
    if (a == 0) {
        P[0][0] = 1;
        return P;
    }
    std::vector<BigRat> w;
    if (c.metropolis) w = all_state_weights(c, max_states);
    BigRat half(1, 2), per_bit = BigRat(1, 2) / static_cast<long>(a);
    for (uint64_t i = 0; i < N; ++i) {
        P[i][i] += half;
        for (size_t b = 0; b < a; ++b) {
            uint64_t j = i ^ (1ULL << b);
            BigRat acc = c.metropolis ? accept_prob(w[i], w[j]) : BigRat(1);
            P[i][j] += per_bit * acc;
            P[i][i] += per_bit * (BigRat(1) - acc);
        }
    }
    return P;
}

Diagnostics chain_diagnostics(const ChainModel& c, uint64_t max_states) {
    auto P = transition_matrix(c, max_states);
    uint64_t N = c.state_count();
    Diagnostics d;
    d.balance_residual = 0;

    std::vector<BigRat> theta(N, BigRat(0));
    if (c.metropolis) {
        auto w = all_state_weights(c, max_states);
        BigRat Z = 0;
        for (uint64_t i = 0; i < N; ++i) Z += w[i];
        if (Z == 0) throw InputError("chain_diagnostics: all weights are zero");
        for (uint64_t i = 0; i < N; ++i) {
            if (w[i] > 0) d.support.push_back(i);
            theta[i] = w[i] / Z;
        }
    } else {
        for (uint64_t i = 0; i < N; ++i) {
            d.support.push_back(i);
            theta[i] = BigRat(1, static_cast<unsigned long>(N));
        }
    }
    for (uint64_t i : d.support) d.pi.push_back(theta[i]);

    // pi P = pi, checked exactly on the support (which is closed).
    d.stationary_exact = true;
    for (uint64_t j : d.support) {
        BigRat colsum = 0;
        for (uint64_t i : d.support) colsum += theta[i] * P[i][j];
        if (colsum != theta[j]) d.stationary_exact = false;
    }
    for (uint64_t i : d.support)
        for (uint64_t j : d.support) {
            BigRat r = theta[i] * P[i][j] - theta[j] * P[j][i];
            if (r < 0) r = -r;
            if (r > d.balance_residual) d.balance_residual = r;
        }

    // Spectral gap of the similarity-symmetrized restriction.
    size_t m = d.support.size();
    Eigen::MatrixXd S(m, m);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            double pij = P[d.support[i]][d.support[j]].get_d();
            double ti = theta[d.support[i]].get_d();
            double tj = theta[d.support[j]].get_d();
            S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::sqrt(ti / tj) * pij;
        }
    // Reversibility makes S symmetric up to rounding; symmetrize explicitly.
    Eigen::MatrixXd Sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sym);
    if (m >= 2) {
        const auto& ev = es.eigenvalues();
        d.spectral_gap = 1.0 - ev(static_cast<Eigen::Index>(m) - 2);
    } else {
        d.spectral_gap = 1.0;
    }
    return d;
}

BigRat conductance_of_cut(const ChainModel& c, const std::vector<uint64_t>& S,
                          uint64_t max_states) {
    auto P = transition_matrix(c, max_states);
    uint64_t N = c.state_count();
    std::vector<BigRat> theta(N, BigRat(0));
    if (c.metropolis) {
        auto w = all_state_weights(c, max_states);
        BigRat Z = 0;
        for (uint64_t i = 0; i < N; ++i) Z += w[i];
        if (Z == 0) throw InputError("conductance_of_cut: all weights are zero");
        for (uint64_t i = 0; i < N; ++i) theta[i] = w[i] / Z;
    } else {
        for (uint64_t i = 0; i < N; ++i)
            theta[i] = BigRat(1, static_cast<unsigned long>(N));
    }
    std::vector<bool> in_S(N, false);
    for (uint64_t s : S) {
        if (s >= N) throw InputError("conductance_of_cut: state out of range");
        in_S[s] = true;
    }
    BigRat theta_S = 0, flow = 0;
    for (uint64_t i = 0; i < N; ++i) {
        if (!in_S[i]) continue;
        theta_S += theta[i];
        for (uint64_t j = 0; j < N; ++j)
            if (!in_S[j]) flow += theta[i] * P[i][j];
    }
    if (!(theta_S > 0) || theta_S > BigRat(1, 2))
        throw InputError("conductance_of_cut: need 0 < theta(S) <= 1/2");
    return flow / theta_S;
}

StringMultiset torpid_instance(int n, int t) {
    if (n < 1 || n % 2 == 0) throw InputError("torpid_instance: n must be odd");
    if (t < 1) throw InputError("torpid_instance: t must be >= 1");
    StringMultiset B;
    B.layout = Layout{0, n};
    BitString zeros(B.layout), ones(B.layout);
    for (int i = 0; i < n; ++i) ones.set(i, true);
    for (int c = 0; c < t; ++c) {
        B.members.push_back(zeros);
        B.members.push_back(ones);
    }
    return B;
}

BigInt torpid_Z(int n, int t) {
    BigInt Z = 0;
    for (int k = 0; k <= n; ++k) {
        BigInt term = factorial(k) * factorial(n - k);
        BigInt tp;
        mpz_pow_ui(tp.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(t));
        Z += binomial(n, k) * tp;
    }
    return Z;
}

BigRat torpid_bound(int n, int t) {
    BigInt c = binomial(n, n / 2);
    BigInt cp;
    mpz_pow_ui(cp.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(t - 1));
    BigRat b(BigInt(1), cp);
    b.canonicalize();
    return b;
}

std::vector<uint64_t> torpid_half_cut(int n) {
    std::vector<uint64_t> out;
    for (uint64_t s = 0; s < (1ULL << n); ++s)
        if (__builtin_popcountll(s) <= n / 2) out.push_back(s);
    return out;
}

}  // namespace medz
