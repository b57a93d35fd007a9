#pragma once

#include "pgz/localfield.hpp"

#include <vector>

namespace pgz {

// Unitary character of F^x with values in the fourth roots of unity.
// value_at_pi is i^k; conductor 0 (unramified) or 1 (Legendre symbol on units).
struct MultChar {
    long i_exp = 0;     // chi(p) = i^{i_exp}
    long conductor = 0; // 0 or 1

    static MultChar trivial() { return {0, 0}; }
    static MultChar quadratic_unramified() { return {2, 0}; }
    static MultChar order_four() { return {1, 0}; }
    static MultChar ramified_quadratic(long i_exp_at_pi = 0) { return {i_exp_at_pi, 1}; }

    bool is_unramified() const { return conductor == 0; }
    bool is_trivial() const { return i_exp % 4 == 0 && conductor == 0; }
    bool is_quadratic() const { return (2 * i_exp) % 4 == 0; } // chi^2 = 1
    MultChar inverse() const { return {(4 - (((i_exp % 4) + 4) % 4)) % 4, conductor}; }

    // chi(x) as an exact scalar; x != 0.
    ExactScalar eval(const LocalField& F, const Rat& x) const;
    // chi(pi)^k helper
    ExactScalar at_pi_pow(const LocalField& F, long k) const {
        return ExactScalar::i_pow(F.q(), i_exp * k);
    }

    friend bool operator==(const MultChar& a, const MultChar& b) {
        return ((a.i_exp - b.i_exp) % 4 == 0) && a.conductor == b.conductor;
    }
};

// Character of the torus T = F^x \ K^x.
//  - split K: chi = (chi1, chi1^{-1});
//  - inert K with unramified data: forced trivial;
//  - ramified K: unramified quadratic, determined by its sign on the
//    odd-valuation chart of T.
class TorusChar {
public:
    TorusChar() : kind_(Kind::InertTrivial), chi1_(), sign_(1) {}
    static TorusChar split(MultChar chi1) { return TorusChar(Kind::SplitChi, chi1, 1); }
    static TorusChar inert_trivial() { return TorusChar(Kind::InertTrivial, MultChar::trivial(), 1); }
    static TorusChar ramified(int sign_at_uniformizer) {
        return TorusChar(Kind::RamifiedQuad, MultChar::trivial(), sign_at_uniformizer);
    }

    bool is_split() const { return kind_ == Kind::SplitChi; }
    bool is_trivial() const;
    bool is_quadratic() const; // chi^2 = 1 on T
    const MultChar& chi1() const { return chi1_; }
    int ramified_sign() const { return sign_; }

    // chi(t) for t in K^x (class in T); t must be nonzero/invertible.
    ExactScalar eval(const LocalField& F, const KElem& t) const;

    // The Lemma's equivalence partner: chi factors through the norm.
    bool factors_via_norm(const LocalField& F) const;

private:
    enum class Kind { SplitChi, InertTrivial, RamifiedQuad };
    TorusChar(Kind k, MultChar c, int s) : kind_(k), chi1_(c), sign_(s) {}
    Kind kind_;
    MultChar chi1_;
    int sign_;
};

// Measure conventions: vol(o_F) = 1, vol^x(o_F^x) = 1, vol(GL2(o)) = 1.
struct Measure {
    long q;
    explicit Measure(long q_) : q(q_) {}
    // additive volume of a + p^m o
    Rat vol_add(long m) const { return rat_pow(q, -m); }
    // multiplicative volume of x(1 + p^m o), m >= 1
    Rat vol_mult(long m) const { return Rat(1) / (Rat(q - 1) * rat_pow(q, m - 1)); }
    // additive volume of the multiplicative cell u(1+p^m o) at v(u) = v
    Rat vol_add_mult_cell(long v, long m) const { return rat_pow(q, -v - m); }
};

// One coset of the compact torus T at a given refinement level.
//  chart 1: t = 1 + r*sqrt(disc), r in o/p^level   (rep stores r)
//  chart 2: t = s + sqrt(disc),   s in p/p^level   (rep stores s)
struct TorusCoset {
    int chart;  // 1 or 2
    Rat rep;    // r or s
    long level;
    Rat weight; // Haar weight, summing to vol_T(T)
    KElem t() const { return chart == 1 ? KElem{Rat(1), rep} : KElem{rep, Rat(1)}; }
};

// Exhaustive coset representatives of the compact torus at the given level,
// with Haar weights.  Throws NotCompactTorus for split K.
std::vector<TorusCoset> torus_cosets(const LocalField& F, long level);

// vol_T(T) under the chart normalization: 1 + 1/q (inert), 2 (ramified).
Rat torus_total_volume(const LocalField& F);

} // namespace pgz
