#pragma once

#include "pgz/character.hpp"
#include "pgz/pert.hpp"

#include <optional>

namespace pgz {

struct NoPreimage : std::runtime_error {
    NoPreimage() : std::runtime_error("x has no trace-zero preimage under P") {}
};

// Invertible 2x2 matrix over F, interpreted projectively (mod F^x).
struct GMat {
    Rat a, b, c, d;

    static GMat identity() { return {1, 0, 0, 1}; }
    static GMat diag(Rat x, Rat y) { return {std::move(x), 0, 0, std::move(y)}; }
    static GMat upper(Rat u) { return {1, std::move(u), 0, 1}; }
    static GMat lower(Rat l) { return {1, 0, std::move(l), 1}; }
    static GMat weyl() { return {0, -1, 1, 0}; } // antidiagonal w

    Rat det() const { return a * d - b * c; }
    GMat adj() const { return {d, -b, -c, a}; }
    friend GMat operator*(const GMat& x, const GMat& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const GMat& x, const GMat& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    // Equality in G (proportional matrices).
    bool proportional_to(const GMat& y) const;
    // Scale so the minimal-valuation entry is p^0 times a unit with leading
    // digit 1 (canonical representative used for hashing/memoization).
    GMat canonical_projective(const LocalField& F) const;

    PertMat lift(const LocalField& F) const {
        PertMat m;
        m.m[0] = PertScalar::exact(F, a);
        m.m[1] = PertScalar::exact(F, b);
        m.m[2] = PertScalar::exact(F, c);
        m.m[3] = PertScalar::exact(F, d);
        m.det_hint = PertScalar::exact(F, det());
        return m;
    }
};

// Embedding of K into M_2(F) for a field extension:
//   u + w*sqrt(disc)  ->  (u, w*disc; w, u),    eps -> (0, -disc; 1, 0).
// Then eps^2 = c_param = -disc and eps t = conj(t) eps.
GMat torus_matrix(const LocalField& F, const KElem& t);
GMat eps_matrix(const LocalField& F);
Rat c_param(const LocalField& F); // eps^2 = -disc

// K-coordinates of g in D = K + eps K (field case): g = g1 + eps*g2.
std::pair<KElem, KElem> k_coords(const LocalField& F, const GMat& g);
template <typename Mat>
std::pair<std::array<PertScalar, 2>, std::array<PertScalar, 2>> k_coords_pert(const LocalField& F,
                                                                              const Mat& g);

// The double-coset invariant P: split bc/(ad); field c*N(g2)/N(g1).
// nullopt encodes infinity.
std::optional<Rat> P_invariant(const LocalField& F, const GMat& g);

// Trace-zero representative gamma(x) with P(gamma) = x (to the given p-adic
// depth in the field case).  Throws NoPreimage when x is outside the image.
GMat tracefree_lift(const LocalField& F, const Rat& x, long depth);

// Mirabolic decomposition g = t * (y1, y2; 0, 1) with t in K^x (field case).
struct MirabolicCoords {
    KElem t;
    Rat y1, y2;
};
MirabolicCoords decompose_mirabolic(const LocalField& F, const GMat& g);

// Bruhat-type chart coordinates in the split case.
//   NN':  g = t * n(y2) n'(y3), defined when g.d != 0  (t diagonal torus)
//   NwN:  g = t * n(y1) w n(y4), defined when g.c != 0
struct ChartNN {
    Rat t1, t2; // diagonal torus part
    Rat y2, y3;
};
struct ChartNwN {
    Rat t1, t2;
    Rat y1, y4;
};
std::optional<ChartNN> decompose_nn(const LocalField& F, const GMat& g);
std::optional<ChartNwN> decompose_nwn(const LocalField& F, const GMat& g);

// chi * 1_{T GL2(o)} evaluated at g: searches z in F^x and torus cosets t with
// z t g in GL2(o) of unit determinant; chi must be unramified on T.
ExactScalar in_torus_times_maxcompact(const LocalField& F, const TorusChar& chi, const GMat& g,
                                      long level = 2);

// g in tau * b^{-1} H(b) with H(b) = {h in M2(o) : v(det h) = v(b)} and tau
// given through its matrix.  Exact test: integrality of b tau^{-1} g plus the
// determinant valuation.
bool in_tau_Hb(const LocalField& F, const GMat& g, const GMat& tau, const Rat& b);

} // namespace pgz
