#include "medz/weights.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include "medz/bitstring.hpp"

namespace medz {

BigInt factorial(long long d) {
    if (d < 0) throw InputError("factorial: negative argument");
    BigInt out;
    mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(d));
    return out;
}

BigInt binomial(long long n, long long k) {
    if (n < 0 || k < 0 || k > n) return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return out;
}

WeightFunction WeightFunction::make_factorial() {
    WeightFunction w;
    w.kind_ = Kind::factorial;
    w.name_ = "factorial";
    return w;
}

WeightFunction WeightFunction::make_identity() {
    WeightFunction w;
    w.kind_ = Kind::identity;
    w.name_ = "identity";
    return w;
}

WeightFunction WeightFunction::make_table(std::vector<BigRat> values) {
    for (const auto& v : values)
        if (v < 0) throw InputError("weight table: negative weight");
    WeightFunction w;
    w.kind_ = Kind::table;
    w.name_ = "table";
    w.table_ = std::move(values);
    return w;
}

WeightFunction WeightFunction::make_custom(std::string name,
                                           std::function<BigRat(long long)> fn) {
    WeightFunction w;
    w.kind_ = Kind::custom;
    w.name_ = std::move(name);
    w.custom_ = std::move(fn);
    return w;
}

BigRat WeightFunction::exact(long long d) const {
    if (d < 0) throw InputError("weight: negative distance");
    switch (kind_) {
        case Kind::factorial:
            return BigRat(factorial(d));
        case Kind::identity:
            return BigRat(static_cast<long>(d));
        case Kind::table: {
            if (static_cast<size_t>(d) >= table_.size())
                throw InputError("weight table: distance " + std::to_string(d) +
                                 " outside the table");
            return table_[static_cast<size_t>(d)];
        }
        case Kind::custom: {
            BigRat v = custom_(d);
            if (v < 0) throw InputError("custom weight: negative value");
            return v;
        }
    }
    throw InputError("weight: unknown kind");
}

unsigned long WeightFunction::mod_p(long long d, unsigned long p) const {
    if (kind_ == Kind::factorial) {
        // d! has p as a factor whenever d >= p.
        if (d >= static_cast<long long>(p)) return 0;
        unsigned long r = 1;
        for (long long i = 2; i <= d; ++i)
            r = static_cast<unsigned long>((static_cast<unsigned __int128>(r) * i) % p);
        return r;
    }
    BigRat v = exact(d);
    BigInt den = v.get_den();
    if (mpz_divisible_ui_p(den.get_mpz_t(), p))
        throw InputError("weight mod p: denominator divisible by p");
    BigInt pm(static_cast<unsigned long>(p));
    BigInt num_r = v.get_num() % pm;
    if (num_r < 0) num_r += pm;
    BigInt den_inv;
    if (!mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), pm.get_mpz_t()))
        throw InputError("weight mod p: denominator not invertible");
    BigInt r = (num_r * den_inv) % pm;
    return static_cast<unsigned long>(mpz_get_ui(r.get_mpz_t()));
}

double WeightFunction::log_value(long long d) const {
    if (kind_ == Kind::factorial) return std::lgamma(static_cast<double>(d) + 1.0);
    BigRat v = exact(d);
    if (v == 0) return -std::numeric_limits<double>::infinity();
    signed long exp_num = 0, exp_den = 0;
    double mn = mpz_get_d_2exp(&exp_num, v.get_num().get_mpz_t());
    double md = mpz_get_d_2exp(&exp_den, v.get_den().get_mpz_t());
    return std::log(mn / md) + (exp_num - exp_den) * std::log(2.0);
}

WeightFunction load_weight_table(std::istream& in) {
    std::vector<BigRat> values;
    std::string line;
    long long expect = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long d;
        std::string val;
        if (!(ls >> d >> val))
            throw InputError("weight table: expected '<d> <w(d)>' lines");
        if (d != expect)
            throw InputError("weight table: distances must be dense from 0");
        BigRat v;
        try {
            v = BigRat(val);
            v.canonicalize();
        } catch (const std::exception&) {
            throw InputError("weight table: invalid value '" + val + "'");
        }
        values.push_back(v);
        ++expect;
    }
    if (values.empty()) throw InputError("weight table: no entries");
    return WeightFunction::make_table(std::move(values));
}

}  // namespace medz
