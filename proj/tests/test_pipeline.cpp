#include <doctest.h>

#include "medz/pipeline.hpp"

using namespace medz;

namespace {

Clause3 clause(int a, int b, int c) {
    auto lit = [](int v) { return Literal{std::abs(v), v < 0}; };
    Clause3 cl;
    cl.lits = {lit(a), lit(b), lit(c)};
    return cl;
}

}  // namespace

TEST_CASE("prime selection") {
    auto p3 = select_primes(3, "practical");
    CHECK(p3.primes == std::vector<unsigned long>{11});
    auto p4 = select_primes(4, "practical");
    CHECK(p4.primes == std::vector<unsigned long>{11, 13});
    auto p5 = select_primes(5, "practical");
    CHECK(p5.primes == std::vector<unsigned long>{11, 13});
    auto p10 = select_primes(10, "practical");
    CHECK(p10.primes == std::vector<unsigned long>{17, 19, 23});

    auto th = select_primes(3, "theoretical");
    CHECK(th.primes.front() > 300);
    CHECK(th.primes.back() <= 1500);
    BigInt prod = 1;
    for (auto p : p10.primes) prod *= static_cast<unsigned long>(p);
    CHECK(prod > (BigInt(1) << 10));
    CHECK_THROWS_AS(select_primes(3, "bogus"), InputError);
}

TEST_CASE("garner reconstruction") {
    CHECK(crt_garner({{2, 11}}) == 2);
    // x = 7: 7 mod 11 = 7, 7 mod 13 = 7
    CHECK(crt_garner({{7, 11}, {7, 13}}) == 7);
    // x = 100: 100 mod 11 = 1, 100 mod 13 = 9
    CHECK(crt_garner({{1, 11}, {9, 13}}) == 100);
}

TEST_CASE("T(p) and the per-median class check") {
    CNF3 g{3, {clause(1, 2, 3)}};
    unsigned long T = T_of_p(g, 11, /*debug_classes=*/true);
    unsigned long K = K_mod_p(3, 1, 11);
    // T = gamma * K mod p with gamma = 7
    CHECK(T == (7 * K) % 11);
    CHECK((static_cast<unsigned long long>(T) * K_inv_mod_p(3, 1, 11)) % 11 == 7);
}

TEST_CASE("unsatisfiable formula gives T(p) = 0") {
    CNF3 all8{3, {}};
    for (int s = 0; s < 8; ++s)
        all8.clauses.push_back(clause((s & 4) ? -1 : 1, (s & 2) ? -2 : 2,
                                      (s & 1) ? -3 : 3));
    for (unsigned long p : {11ul, 13ul}) CHECK(T_of_p(all8, p, true) == 0);
}

TEST_CASE("count_sat equals brute force on fixed formulas") {
    CNF3 g{3, {clause(1, 2, 3)}};
    auto r = count_sat(g, "practical");
    CHECK(r.gamma == 7);
    CHECK(r.reports.size() == 1);
    CHECK(r.reports[0].p == 11);

    CNF3 two{3, {clause(1, 2, 3), clause(-1, -2, -3)}};
    CHECK(count_sat(two, "practical").gamma == 6);

    // Non-D3 input goes through the rewrite first.
    CNF3 unit{3, {clause(1, 1, 1)}};
    CHECK(count_sat(unit, "practical").gamma == brute_force_count(unit));

    // Only tautologies: the multiplier carries the whole count.
    CNF3 taut{4, {clause(1, -1, 2)}};
    CHECK(count_sat(taut, "practical").gamma == 16);
}

TEST_CASE("count_sat in theoretical mode on one small formula") {
    CNF3 g{3, {clause(1, 2, 3)}};
    auto r = count_sat(g, "theoretical", 4);
    CHECK(r.gamma == 7);
    CHECK(r.reports.size() > 50);
    for (const auto& rep : r.reports)
        CHECK((static_cast<unsigned long long>(rep.gamma_mod_p) * rep.K_mod_p) %
                  rep.p ==
              rep.T_mod_p);
}

TEST_CASE("count_sat is independent of --jobs") {
    CNF3 two{4, {clause(1, 2, 3), clause(-2, 3, -4)}};
    auto a = count_sat(two, "practical", 1);
    auto b = count_sat(two, "practical", 7);
    CHECK(a.gamma == b.gamma);
    REQUIRE(a.reports.size() == b.reports.size());
    for (size_t i = 0; i < a.reports.size(); ++i)
        CHECK(a.reports[i].gamma_mod_p == b.reports[i].gamma_mod_p);
}

TEST_CASE("guard refusal on oversized inputs") {
    CNF3 big{13, {clause(1, 2, 3), clause(4, 5, 6), clause(7, 8, 9),
                  clause(10, 11, 12), clause(13, 1, 2)}};
    CHECK_THROWS_AS(count_sat(big, "practical", 1, 12), GuardError);
}
