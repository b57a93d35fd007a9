#include "pgz/localfield.hpp"

#include <cmath>

#include <ostream>
#include <sstream>

namespace pgz {

std::string ExactScalar::str() const {
    std::ostringstream os;
    os << "(" << a_.get_str() << ")+(" << b_.get_str() << ")i+[(" << c_.get_str() << ")+("
       << d_.get_str() << ")i]*sqrt(" << q_ << ")";
    return os.str();
}

double ExactScalar::approx() const {
    double sq = q_ > 0 ? std::sqrt(static_cast<double>(q_)) : 0.0;
    return a_.get_d() + c_.get_d() * sq; // real part only; advisory
}

std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.str(); }

namespace {
// smallest positive quadratic non-residue mod p
long smallest_nonresidue(long p) {
    for (long a = 2; a < p; ++a) {
        Int ai(a);
        if (mpz_legendre(ai.get_mpz_t(), Int(p).get_mpz_t()) == -1) return a;
    }
    throw std::logic_error("no non-residue found (p must be an odd prime)");
}
bool is_prime(long p) {
    Int pi(p);
    return mpz_probab_prime_p(pi.get_mpz_t(), 32) != 0;
}
} // namespace

LocalField::LocalField(long p, ExtKind kind, long default_depth, std::optional<long> A, long ramified_A1)
    : p_(p), kind_(kind), depth_(default_depth) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime");
    switch (kind_) {
        case ExtKind::Split:
            A_ = 0;
            break;
        case ExtKind::Inert: {
            A_ = A.value_or(smallest_nonresidue(p));
            Int ai(A_);
            if (A_ % p == 0 || mpz_legendre(ai.get_mpz_t(), Int(p).get_mpz_t()) != -1)
                throw std::invalid_argument("inert A must be a unit non-residue mod p");
            disc_ = Rat(A_);
            break;
        }
        case ExtKind::Ramified:
            A_ = ramified_A1;
            if (A_ % p == 0) throw std::invalid_argument("ramified A1 must be a unit");
            disc_ = Rat(p) * Rat(A_);
            break;
    }
}

int LocalField::omega(const Rat& x) const {
    if (x == 0) throw std::domain_error("omega(0)");
    switch (kind_) {
        case ExtKind::Split:
            return 1;
        case ExtKind::Inert:
            return val(x) % 2 == 0 ? 1 : -1;
        case ExtKind::Ramified: {
            // N(K^x) = <-p*A1> * (units^2); compare square classes.
            long v = val(x);
            Rat u = x * rat_pow(p_, -v);
            if (v % 2 == 0) return legendre_of_unit(u, p_);
            return legendre_of_unit(-u * Rat(A_), p_);
        }
    }
    return 1;
}

KElem k_add(const KElem& a, const KElem& b) { return {a.x0 + b.x0, a.x1 + b.x1}; }

KElem k_mul(const LocalField& F, const KElem& a, const KElem& b) {
    if (F.kind() == ExtKind::Split) return {a.x0 * b.x0, a.x1 * b.x1};
    return {a.x0 * b.x0 + F.disc() * a.x1 * b.x1, a.x0 * b.x1 + a.x1 * b.x0};
}

KElem k_conj(const LocalField& F, const KElem& a) {
    if (F.kind() == ExtKind::Split) return {a.x1, a.x0};
    return {a.x0, -a.x1};
}

Rat k_norm(const LocalField& F, const KElem& a) {
    if (F.kind() == ExtKind::Split) return a.x0 * a.x1;
    return a.x0 * a.x0 - F.disc() * a.x1 * a.x1;
}

Rat k_trace(const LocalField& F, const KElem& a) {
    if (F.kind() == ExtKind::Split) return a.x0 + a.x1;
    return 2 * a.x0;
}

bool k_is_zero(const KElem& a) { return a.x0 == 0 && a.x1 == 0; }

long k_val(const LocalField& F, const KElem& a) {
    if (F.kind() == ExtKind::Split) throw std::domain_error("k_val: not a field");
    if (k_is_zero(a)) return VAL_INF;
    long v0 = a.x0 == 0 ? VAL_INF : F.val(a.x0);
    long v1 = a.x1 == 0 ? VAL_INF : F.val(a.x1);
    if (F.kind() == ExtKind::Inert) return std::min(v0, v1);
    // ramified: v_K(x0) = 2 v(x0), v_K(x1 sqrt(pA1)) = 2 v(x1) + 1; parities differ
    long w0 = v0 == VAL_INF ? VAL_INF : 2 * v0;
    long w1 = v1 == VAL_INF ? VAL_INF : 2 * v1 + 1;
    return std::min(w0, w1);
}

namespace {

// Hensel-lift a simple root of f(t) = t^2*s2 + c (linear Newton step each digit).
// We lift u with u^2 * s2 ≡ target (mod p^k), derivative 2*u*s2 a unit.
Rat hensel_sqrt_like(const LocalField& F, Rat u, const Rat& s2, const Rat& target, long depth) {
    long p = F.p();
    for (long k = 1; k < depth + 2; ++k) {
        Rat f = u * u * s2 - target;
        if (f == 0) break;
        long vf = F.val(f);
        if (vf >= depth + 1) break;
        // u' = u - f / (2 u s2) truncated to keep coefficients small
        Rat corr = f / (2 * u * s2);
        // keep only the leading digit of corr to ensure monotone progress
        long vc = F.val(corr);
        Int digit = unit_part(corr, p, 1);
        u = u - Rat(digit) * rat_pow(p, vc);
    }
    return u;
}

} // namespace

KElem solve_norm(const LocalField& F, const Rat& x, long depth) {
    if (F.kind() == ExtKind::Split) {
        if (x == 0) throw NormEquationUnsolvable();
        return {x, Rat(1)};
    }
    if (x == 0 || !F.is_norm(x)) throw NormEquationUnsolvable();
    long p = F.p();
    long v = F.val(x);

    if (F.kind() == ExtKind::Inert) {
        // v even; scale to a unit target and search residues mod p.
        long h = v / 2;
        Rat xu = x * rat_pow(p, -v);
        // find (u0, w0) mod p with u0^2 - A w0^2 ≡ xu
        for (long w0 = 0; w0 < p; ++w0) {
            Rat rhs = xu + F.disc() * Rat(w0) * Rat(w0);
            if (F.val(rhs) > 0) {
                // u ≡ 0 branch: lift in w: -A w^2 ≡ xu - u^2 with u = 0 impossible unless
                // rhs has a square unit; handled by the u-branch below for some w0' instead.
                continue;
            }
            Int r = unit_part(rhs, p, 1);
            Int pi(p);
            if (mpz_legendre(r.get_mpz_t(), pi.get_mpz_t()) == 1) {
                // find square root of r mod p by scan (p is small here)
                for (long u0 = 1; u0 < p; ++u0) {
                    if ((Int(u0) * Int(u0) - r) % pi == 0) {
                        Rat u = hensel_sqrt_like(F, Rat(u0), Rat(1), rhs, depth);
                        KElem g{u * rat_pow(p, h), Rat(w0) * rat_pow(p, h)};
                        return g;
                    }
                }
            }
        }
        throw NormEquationUnsolvable();
    }

    // Ramified: N(u + w*piK) = u^2 - p*A1*w^2.
    if (v % 2 == 0) {
        long h = v / 2;
        Rat xu = x * rat_pow(p, -v); // unit square class must be a residue
        Int r = unit_part(xu, p, 1);
        Int pi(p);
        if (mpz_legendre(r.get_mpz_t(), pi.get_mpz_t()) != 1) throw NormEquationUnsolvable();
        for (long u0 = 1; u0 < p; ++u0) {
            if ((Int(u0) * Int(u0) - r) % pi == 0) {
                Rat u = hensel_sqrt_like(F, Rat(u0), Rat(1), xu, depth);
                return {u * rat_pow(p, h), Rat(0)};
            }
        }
        throw NormEquationUnsolvable();
    }
    // v odd: x = p^{2h+1} xu; take g = p^h (u + w piK) with u = p u', so
    // N = p^{2h} (p^2 u'^2 - p A1 w^2) = p^{2h+1}(p u'^2 - A1 w^2): need
    // -A1 w^2 ≡ xu (mod p).
    long h = (v - 1) / 2;
    Rat xu = x * rat_pow(p, -v);
    Rat target = xu; // solve -A1 w^2 + p u'^2 = xu; start u' = 0, lift w
    Rat s2 = -Rat(F.A_param());
    Int r = unit_part(target / s2, p, 1);
    Int pi(p);
    if (mpz_legendre(r.get_mpz_t(), pi.get_mpz_t()) != 1) throw NormEquationUnsolvable();
    for (long w0 = 1; w0 < p; ++w0) {
        if ((Int(w0) * Int(w0) - r) % pi == 0) {
            Rat w = hensel_sqrt_like(F, Rat(w0), s2, target, depth + 1);
            return {Rat(0), w * rat_pow(p, h)};
        }
    }
    throw NormEquationUnsolvable();
}

} // namespace pgz
