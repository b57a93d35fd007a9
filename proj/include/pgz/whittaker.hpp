#pragma once

#include "pgz/schwartz.hpp"
#include "pgz/geometry.hpp"

namespace pgz {

// Germ of a Kirillov function near 0 (applies for v(a) >= cutoff):
//   Pair:    |a|^{1/2} (a1 mu1(a) + a2 mu2(a))
//   LogPair: |a|^{1/2} mu1(a) (a1 + a2 v(a))
//   None:    0 (supercuspidal)
struct KirillovStalk {
    enum class Kind { None, Pair, LogPair } kind = Kind::None;
    MultChar mu1, mu2;
    ExactScalar a1, a2;

    static KirillovStalk none() { return {}; }
    static KirillovStalk pair(MultChar m1, MultChar m2, ExactScalar c1, ExactScalar c2) {
        return {Kind::Pair, m1, m2, std::move(c1), std::move(c2)};
    }
    static KirillovStalk logpair(MultChar m1, ExactScalar c1, ExactScalar c2) {
        return {Kind::LogPair, m1, MultChar{}, std::move(c1), std::move(c2)};
    }
};

struct KirillovFunction {
    LocallyConstant1D compact; // supported on v(a) < cutoff
    KirillovStalk stalk;
    long cutoff = 0;

    ExactScalar eval(const LocalField& F, const Rat& a) const;
};

enum class RepKind { ThetaSeries, EisensteinSeries };

// Newform of the theta series Pi(chi) (split chi = (chi1, chi1^{-1})) or the
// Eisenstein series Pi(1, omega) at the central point, for unramified data.
// Engine normalization vol(o) = vol^x(o^x) = 1.
KirillovFunction newform(const LocalField& F, RepKind rep, const TorusChar& chi);
// Unevaluated finite geometric sum the closed form must reproduce.
ExactScalar newform_sum_oracle(const LocalField& F, const MultChar& mu1, const MultChar& mu2,
                               const Rat& a);
// The two unramified parameters (mu1, mu2) of the relevant principal series.
std::pair<MultChar, MultChar> newform_parameters(const LocalField& F, RepKind rep,
                                                 const TorusChar& chi);

struct WhittakerProduct {
    KirillovFunction w_theta, w_eisenstein;

    // W_theta(1 - xi) * W_E(xi); eta is recomputed from xi at every call.
    ExactScalar eval(const LocalField& F, const Rat& xi) const;
    // T_b W(xi, eta) = |b|^{-2} W(b xi, b eta)
    ExactScalar hecke_translate(const LocalField& F, const Rat& b, const Rat& xi) const;
};

// b -> 0 shape of W(b xi, b eta) at fixed x (xi = x/(x-1)); the shape is
// evaluable so fits can be validated against direct evaluation.
struct WhittakerAsymptotic {
    enum class Kind { ZeroCompactNonnorm, CompactOmegaPair, SplitPair, SplitLog } kind;
    // CompactOmegaPair: |b| |xi eta|^{1/2} chi1(b eta)(c1 + c2 w(b xi)) * indicator pair
    // SplitPair:  |b| |xi eta|^{1/2} (c1 chi1(b eta) + c2 chi1^{-1}(b eta)) (c3 v(b xi) + c4)
    // SplitLog:   |b| |xi eta|^{1/2} chi1(b eta) (c1 v(b eta) + c2)(c3 v(b xi) + c4)
    ExactScalar c1, c2, c3, c4;
    MultChar chi1;
    long valid_from = 0; // v(b) threshold

    ExactScalar eval(const LocalField& F, const Rat& x, const Rat& b) const;
};

WhittakerAsymptotic asymptotic_form(const LocalField& F, const WhittakerProduct& W,
                                    const TorusChar& chi, const Rat& x);

// f_Phi(1/2, g) = mu1(det g) |det g|^{1/2} int Phi((0,t)g) (mu1 mu2^{-1})(t) |t| d^x t,
// with exact geometric-series tail summation.  mu_i unramified.
ExactScalar principal_series_section(const LocalField& F, const LocallyConstant2D& Phi,
                                     const MultChar& mu1, const MultChar& mu2, const GMat& g);

} // namespace pgz
