#pragma once

#include "pgz/character.hpp"
#include "pgz/pert.hpp"

#include <optional>
#include <vector>

namespace pgz {

// One coset of F used as an indicator support piece.
//  Additive:   center + p^m o           (center may be 0)
//  Mult:       center (1 + p^m o), m>=1, center != 0
//  UnitShell:  center * o^x, bookkept modulo 1 + p^m
struct Coset1D {
    enum class Kind { Additive, Mult, UnitShell } kind;
    Rat center;
    long m;

    static Coset1D additive(Rat c, long m) { return {Kind::Additive, std::move(c), m}; }
    static Coset1D ball(long m) { return {Kind::Additive, Rat(0), m}; }
    static Coset1D mult(Rat c, long m) { return {Kind::Mult, std::move(c), m}; }
    static Coset1D unit_shell(Rat c, long m) { return {Kind::UnitShell, std::move(c), m}; }

    bool contains(const LocalField& F, const Rat& x) const;
    Cond contains_cell(const LocalField& F, const PertScalar& x) const;
    bool contains_zero(const LocalField& F) const;
    Rat vol_add(const LocalField& F) const;
    Rat vol_mult(const LocalField& F) const; // throws on divergence
    long level(const LocalField& F) const;   // invariance depth contribution
};

struct Term1D {
    ExactScalar coeff;
    Coset1D coset;
};
struct Term2D {
    ExactScalar coeff;
    Coset1D first, second;
};

// Finite linear combination of coset indicators.
struct LocallyConstant1D {
    std::vector<Term1D> terms;
    ExactScalar eval(const LocalField& F, const Rat& x) const;
    long level(const LocalField& F) const;
};

struct LocallyConstant2D {
    std::vector<Term2D> terms;
    ExactScalar eval(const LocalField& F, const Rat& a, const Rat& b) const;
    long level(const LocalField& F) const;
};

ExactScalar integrate_additive(const LocalField& F, const LocallyConstant1D& f);
ExactScalar integrate_mult(const LocalField& F, const LocallyConstant1D& f);

// \int_{F^x} phi(a^{-1} y, a) eta(a) d^x a by exact shell summation with a
// support-derived valuation window.
ExactScalar convolution_integral(const LocalField& F, const LocallyConstant2D& phi, const Rat& y,
                                 const std::optional<MultChar>& eta = std::nullopt);

// Closed forms of the four elementary convolution integrals; shape selected by
// whether each factor coset is centered at 0.  Factors must be additive cosets
// with v(center) < m when the center is nonzero.
ExactScalar lemma_closed_form(const LocalField& F, const Coset1D& first, const Coset1D& second,
                              const Rat& y);

} // namespace pgz
