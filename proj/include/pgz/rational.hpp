#pragma once

#include <gmpxx.h>
#include <limits>
#include <stdexcept>
#include <string>

namespace pgz {

using Rat = mpq_class;
using Int = mpz_class;

// Valuations are small integers; this sentinel stands for v(0) = +infinity.
constexpr long VAL_INF = std::numeric_limits<long>::max() / 4;

inline Int int_pow(long base, unsigned long e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
    return r;
}

// p-adic valuation of a nonzero rational; VAL_INF for 0.
inline long valuation(const Rat& x, long p) {
    if (x == 0) return VAL_INF;
    Int pp(p), tmp;
    long vn = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_num().get_mpz_t(), pp.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_den().get_mpz_t(), pp.get_mpz_t()));
    return vn - vd;
}

// p^k as a rational, any sign of k.
inline Rat rat_pow(long p, long k) {
    if (k >= 0) return Rat(int_pow(p, static_cast<unsigned long>(k)));
    return Rat(1, int_pow(p, static_cast<unsigned long>(-k)));
}

// The unit x * p^{-v(x)} as a residue in (Z/p^m)^x, m >= 1.  Requires x != 0.
inline Int unit_part(const Rat& x, long p, long m) {
    if (x == 0) throw std::domain_error("unit_part of zero");
    long v = valuation(x, p);
    Rat u = x * rat_pow(p, -v);
    Int mod = int_pow(p, static_cast<unsigned long>(m));
    Int num = u.get_num() % mod, den = u.get_den() % mod, inv;
    if (num < 0) num += mod;
    if (den < 0) den += mod;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw std::logic_error("unit_part: denominator not invertible");
    return (num * inv) % mod;
}

// Legendre symbol of a p-adic unit (via its residue), p odd.
inline int legendre_of_unit(const Rat& x, long p) {
    Int u = unit_part(x, p, 1);
    return mpz_legendre(u.get_mpz_t(), Int(p).get_mpz_t());
}

inline std::string rat_str(const Rat& x) { return x.get_str(); }

} // namespace pgz
