#pragma once

#include "pgz/rational.hpp"
#include "pgz/scalar.hpp"

#include <optional>
#include <stdexcept>

namespace pgz {

enum class ExtKind { Split, Inert, Ramified };

struct NormEquationUnsolvable : std::runtime_error {
    NormEquationUnsolvable() : std::runtime_error("norm equation has no solution") {}
};
struct NotCompactTorus : std::runtime_error {
    NotCompactTorus() : std::runtime_error("torus is not compact (split K)") {}
};

// The local field F = Q_p read p-adically (q = p, uniformizer p) together with
// the quadratic algebra K/F.  K is F+F (split), F(sqrt A) with A a unit
// non-square (inert), or F(sqrt(p*A1)) (ramified).
class LocalField {
public:
    LocalField(long p, ExtKind kind, long default_depth = 12, std::optional<long> A = std::nullopt,
               long ramified_A1 = 1);

    long p() const { return p_; }
    long q() const { return p_; }
    ExtKind kind() const { return kind_; }
    bool is_field_ext() const { return kind_ != ExtKind::Split; }
    long default_depth() const { return depth_; }

    // Square-generator of K over F: A for inert, p*A1 for ramified.
    const Rat& disc() const { return disc_; }
    long A_param() const { return A_; }

    long val(const Rat& x) const { return valuation(x, p_); }
    Rat pi_pow(long k) const { return rat_pow(p_, k); }

    ExactScalar scalar(const Rat& r) const { return ExactScalar::from_rat(p_, r); }
    ExactScalar abs_half(const Rat& x) const { // |x|^{1/2} = q^{-v/2}
        return ExactScalar::q_half_pow(p_, -val(x));
    }

    // Quadratic character of F^x attached to K/F.  +1/-1; requires x != 0.
    int omega(const Rat& x) const;
    bool is_norm(const Rat& x) const { return omega(x) == 1; }

private:
    long p_;
    ExtKind kind_;
    long depth_;
    long A_;       // inert parameter (unit non-residue); ramified A1 for Ramified
    Rat disc_;     // A or p*A1; unused for split
};

// Element of K: x0 + x1*sqrt(disc) for a field extension, or the pair
// (first, second) when K = F+F.
struct KElem {
    Rat x0, x1;

    static KElem one() { return {Rat(1), Rat(0)}; }
};

KElem k_add(const KElem& a, const KElem& b);
KElem k_mul(const LocalField& F, const KElem& a, const KElem& b);
KElem k_conj(const LocalField& F, const KElem& a);
Rat k_norm(const LocalField& F, const KElem& a);
Rat k_trace(const LocalField& F, const KElem& a);
bool k_is_zero(const KElem& a);
// Valuation in K normalized so a uniformizer of K has valuation 1
// (inert: v_K = v_F on F; ramified: v_K = 2 v_F on F).  Field case only.
long k_val(const LocalField& F, const KElem& a);

// Solves N(g) = x to the requested p-adic depth: returns g with
// v(N(g) - x) >= depth.  Field case; brute force mod p then Hensel lifting
// (valid since p is odd).  Throws NormEquationUnsolvable if x is not a norm.
KElem solve_norm(const LocalField& F, const Rat& x, long depth);

} // namespace pgz
