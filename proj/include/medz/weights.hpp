#pragma once
// Nonnegative weights w(d) on Hamming distances with exact big-integer /
// rational, modular, and log-domain evaluation.

#include <gmpxx.h>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace medz {

using BigInt = mpz_class;
using BigRat = mpq_class;

BigInt factorial(long long d);
BigInt binomial(long long n, long long k);

class WeightFunction {
public:
    enum class Kind { factorial, identity, table, custom };

    static WeightFunction make_factorial();
    static WeightFunction make_identity();
    static WeightFunction make_table(std::vector<BigRat> values);
    static WeightFunction make_custom(std::string name,
                                      std::function<BigRat(long long)> fn);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    BigRat exact(long long d) const;
    // Residue of w(d) mod p; requires w(d) to have a denominator coprime to p.
    unsigned long mod_p(long long d, unsigned long p) const;
    // log w(d); -inf when w(d) = 0.
    double log_value(long long d) const;

private:
    Kind kind_ = Kind::factorial;
    std::string name_ = "factorial";
    std::vector<BigRat> table_;
    std::function<BigRat(long long)> custom_;
};

// Two-column text: "<d> <w(d)>" per line, d dense from 0.
WeightFunction load_weight_table(std::istream& in);

}  // namespace medz
