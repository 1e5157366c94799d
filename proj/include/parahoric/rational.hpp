#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "parahoric/errors.hpp"

namespace parahoric {

// Exact rational scalar. GMP's mpq_class supplies arithmetic; the helpers
// here add the operations the rest of the library needs: l-adic valuations,
// unit-part extraction, integer powers and canonical string I/O.
using Rational = mpq_class;

inline Rational rat_from_string(const std::string& s) {
    try {
        Rational r(s);
        r.canonicalize();
        if (r.get_den() == 0) throw ValidationError("rational with zero denominator: " + s);
        return r;
    } catch (const std::invalid_argument&) {
        throw ValidationError("cannot parse rational: " + s);
    }
}

// Canonical form: "n" for integers, "n/d" otherwise, lowest terms, sign on
// the numerator.
inline std::string rat_to_string(const Rational& r) {
    return r.get_str();
}

// num/den in canonical form. The raw two-argument mpq_class constructor skips
// canonicalization and GMP arithmetic is undefined on such values; always
// build fractions through here.
inline Rational rat_frac(long num, long den) {
    if (den == 0) throw ValidationError("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational rat_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0) {
        if (e < 0) throw UnitError("negative power of zero");
        return Rational(0);
    }
    mpz_class num = base.get_num(), den = base.get_den();
    if (e < 0) {
        std::swap(num, den);
        e = -e;
        if (den < 0) { den = -den; num = -num; }
    }
    mpz_class pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(e));
    Rational r(pn, pd);
    r.canonicalize();
    return r;
}

// Multiplicity of the prime l in the integer z (z != 0).
inline long int_valuation(const mpz_class& z, long l) {
    if (z == 0) throw ShapeError("valuation of zero");
    mpz_class rest;
    mpz_class lz(l);
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), lz.get_mpz_t()));
}

// l-adic valuation of a nonzero rational.
inline long rat_valuation(const Rational& r, long l) {
    if (r == 0) throw ShapeError("valuation of zero");
    return int_valuation(r.get_num(), l) - int_valuation(r.get_den(), l);
}

// Writes r = u * l^v with u an l-adic unit; returns u and stores v.
inline Rational rat_unit_part(const Rational& r, long l, long& val_out) {
    val_out = rat_valuation(r, l);
    return r / rat_pow(Rational(l), val_out);
}

// The numerator of an l-adic unit rational reduced against its denominator
// modulo l^k, as an integer in [0, l^k).  Exact: the denominator is prime to
// l, hence invertible mod l^k.
inline mpz_class rat_mod_power(const Rational& r, long l, long k) {
    if (k <= 0) throw ShapeError("modulus exponent must be positive");
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(l), static_cast<unsigned long>(k));
    mpz_class den = r.get_den();
    mpz_class deninv;
    if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw UnitError("denominator not invertible modulo " + mod.get_str());
    mpz_class res = (r.get_num() % mod) * deninv % mod;
    if (res < 0) res += mod;
    return res;
}

// Ring customization points for Rational. They live here, next to the type
// alias, because mpq_class sits outside this namespace and argument-dependent
// lookup cannot reach overloads for it: the generic containers find these by
// ordinary lookup instead, so they must precede every template definition.
inline Rational ring_zero(const Rational&) { return Rational(0); }
inline Rational ring_one(const Rational&) { return Rational(1); }
inline bool is_zero(const Rational& x) { return x == 0; }

namespace detail {
// ADL trampoline: class members named is_zero shadow the scalar
// customization point inside member functions; calling through this free
// helper restores argument-dependent lookup for coefficient types declared
// in other headers.
template <typename K>
bool coeff_is_zero(const K& c) { return is_zero(c); }
} // namespace detail
inline std::string scalar_str(const Rational& x) { return rat_to_string(x); }
inline Rational scalar_from_int(const Rational&, long v) { return Rational(v); }
inline Rational divexact(const Rational& a, const Rational& b) {
    if (b == 0) throw UnitError("division by zero");
    return a / b;
}

inline std::int64_t mod_pow_i64(std::int64_t base, std::int64_t e, std::int64_t m) {
    if (m <= 0) throw ShapeError("modulus must be positive");
    __int128 acc = 1, b = ((base % m) + m) % m;
    while (e > 0) {
        if (e & 1) acc = acc * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(acc);
}

// Inverse of a mod m when gcd(a, m) = 1; throws UnitError otherwise.
inline std::int64_t mod_inv_i64(std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, newt = 1, r = m, newr = ((a % m) + m) % m;
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    if (r != 1) throw UnitError("value not invertible modulo " + std::to_string(m));
    return ((t % m) + m) % m;
}

} // namespace parahoric
