#include "pgz/schwartz.hpp"

#include <deque>

namespace pgz {

bool Coset1D::contains(const LocalField& F, const Rat& x) const {
    switch (kind) {
        case Kind::Additive: return F.val(x - center) >= m;
        case Kind::Mult:
            if (x == 0) return false;
            return F.val(x - center) >= m + F.val(center);
        case Kind::UnitShell:
            if (x == 0) return false;
            return F.val(x) == F.val(center);
    }
    return false;
}

Cond Coset1D::contains_cell(const LocalField& F, const PertScalar& x) const {
    switch (kind) {
        case Kind::Additive:
            return cond_val_ge(x - PertScalar::exact(F, center), m);
        case Kind::Mult:
            return cond_val_ge(x - PertScalar::exact(F, center), m + F.val(center));
        case Kind::UnitShell:
            return cond_val_eq(x, F.val(center));
    }
    return Cond::False;
}

bool Coset1D::contains_zero(const LocalField& F) const {
    switch (kind) {
        case Kind::Additive: return center == 0 || F.val(center) >= m;
        default: return false;
    }
}

Rat Coset1D::vol_add(const LocalField& F) const {
    Measure mu(F.q());
    switch (kind) {
        case Kind::Additive: return mu.vol_add(m);
        case Kind::Mult: return mu.vol_add_mult_cell(F.val(center), m);
        case Kind::UnitShell: return rat_pow(F.q(), -F.val(center)) * (Rat(1) - Rat(1, F.q()));
    }
    return 0;
}

Rat Coset1D::vol_mult(const LocalField& F) const {
    Measure mu(F.q());
    switch (kind) {
        case Kind::Additive: {
            if (contains_zero(F)) throw std::domain_error("divergent multiplicative integral");
            // x + p^m o = x(1 + p^{m-v(x)} o)
            return mu.vol_mult(m - F.val(center));
        }
        case Kind::Mult: return mu.vol_mult(m);
        case Kind::UnitShell: return 1;
    }
    return 0;
}

long Coset1D::level(const LocalField& F) const {
    switch (kind) {
        case Kind::Additive: return std::max<long>(1, m - (center == 0 ? m : std::min(F.val(center), m)));
        default: return std::max<long>(1, m);
    }
}

ExactScalar LocallyConstant1D::eval(const LocalField& F, const Rat& x) const {
    ExactScalar r = ExactScalar::zero(F.q());
    for (const auto& t : terms)
        if (t.coset.contains(F, x)) r += t.coeff;
    return r;
}

long LocallyConstant1D::level(const LocalField& F) const {
    long l = 1;
    for (const auto& t : terms) l = std::max(l, t.coset.level(F));
    return l;
}

ExactScalar LocallyConstant2D::eval(const LocalField& F, const Rat& a, const Rat& b) const {
    ExactScalar r = ExactScalar::zero(F.q());
    for (const auto& t : terms)
        if (t.first.contains(F, a) && t.second.contains(F, b)) r += t.coeff;
    return r;
}

long LocallyConstant2D::level(const LocalField& F) const {
    long l = 1;
    for (const auto& t : terms) l = std::max(l, std::max(t.first.level(F), t.second.level(F)));
    return l;
}

ExactScalar integrate_additive(const LocalField& F, const LocallyConstant1D& f) {
    ExactScalar r = ExactScalar::zero(F.q());
    for (const auto& t : f.terms) r += t.coeff * t.coset.vol_add(F);
    return r;
}

ExactScalar integrate_mult(const LocalField& F, const LocallyConstant1D& f) {
    ExactScalar r = ExactScalar::zero(F.q());
    for (const auto& t : f.terms) {
        if (!t.coeff.is_zero()) r += t.coeff * t.coset.vol_mult(F);
    }
    return r;
}

namespace {

// Valuation range of a inside one coset (for the window derivation).
// Returns {lo, hi}; hi may be VAL_INF (coset reaches 0).
std::pair<long, long> val_range(const LocalField& F, const Coset1D& c) {
    switch (c.kind) {
        case Coset1D::Kind::Additive:
            if (c.contains_zero(F)) return {c.m, VAL_INF};
            return {F.val(c.center), F.val(c.center)};
        case Coset1D::Kind::Mult:
            return {F.val(c.center), F.val(c.center)};
        case Coset1D::Kind::UnitShell:
            return {F.val(c.center), F.val(c.center)};
    }
    return {0, 0};
}

} // namespace

ExactScalar convolution_integral(const LocalField& F, const LocallyConstant2D& phi, const Rat& y,
                                 const std::optional<MultChar>& eta) {
    if (y == 0) throw std::domain_error("convolution_integral: y = 0");
    long q = F.q();
    Measure mu(q);
    ExactScalar total = ExactScalar::zero(q);
    long vy = F.val(y);

    for (const auto& term : phi.terms) {
        if (term.coeff.is_zero()) continue;
        // a ranges in (supp second) intersect y * (supp first)^{-1}
        auto [blo, bhi] = val_range(F, term.second);
        auto [alo, ahi] = val_range(F, term.first);
        // v(a^{ -1} y) in [alo, ahi]  =>  v(a) in [vy - ahi, vy - alo]
        long lo = std::max(blo, ahi == VAL_INF ? -VAL_INF : vy - ahi);
        long hi = std::min(bhi, vy - alo);
        if (lo > hi) continue;

        ExactScalar term_sum = ExactScalar::zero(q);
        for (long k = lo; k <= hi; ++k) {
            // adaptive unit-cell subdivision of the shell v(a) = k
            struct Cell {
                Rat rep;
                long lev;
            };
            std::deque<Cell> work;
            for (long u = 1; u < q; ++u) work.push_back({Rat(u) * rat_pow(q, k), 1});
            while (!work.empty()) {
                Cell c = work.front();
                work.pop_front();
                if (c.lev > 40) throw std::logic_error("convolution_integral: refinement overflow");
                PertScalar a = PertScalar::cell(F, c.rep, k + c.lev, VarClass::Inner);
                PertScalar ainv_y = PertScalar::cell(F, y / c.rep, (vy - k) + c.lev, VarClass::Inner);
                Cond c1 = term.first.contains_cell(F, ainv_y);
                Cond c2 = term.second.contains_cell(F, a);
                Cond unit_ok = Cond::True;
                if (eta && eta->conductor > 0) unit_ok = cond_unit_class_known(a, eta->conductor);
                if (c1 == Cond::False || c2 == Cond::False) continue;
                if (c1 == Cond::True && c2 == Cond::True && unit_ok == Cond::True) {
                    ExactScalar val = term.coeff * mu.vol_mult(c.lev);
                    if (eta) val = val * eta->eval(F, c.rep);
                    term_sum += val;
                    continue;
                }
                for (long d = 0; d < q; ++d)
                    work.push_back({c.rep * (1 + Rat(d) * rat_pow(q, c.lev)), c.lev + 1});
            }
        }
        total += term_sum;
    }
    return total;
}

ExactScalar lemma_closed_form(const LocalField& F, const Coset1D& first, const Coset1D& second,
                              const Rat& y) {
    if (first.kind != Coset1D::Kind::Additive || second.kind != Coset1D::Kind::Additive)
        throw std::invalid_argument("lemma_closed_form: additive cosets expected");
    long q = F.q();
    Measure mu(q);
    bool z1 = first.contains_zero(F), z2 = second.contains_zero(F);
    long n1 = first.m, n2 = second.m;
    ExactScalar zero = ExactScalar::zero(q);

    if (z1 && z2) {
        // 1_{p^{n1+n2}}(y) * (v(y) - n1 - n2 + 1) * vol^x(o^x)
        if (F.val(y) < n1 + n2) return zero;
        return ExactScalar::from_rat(q, Rat(F.val(y) - n1 - n2 + 1));
    }
    if (!z1 && z2) {
        long vx = F.val(first.center);
        if (F.val(y) < vx + n2) return zero;
        return ExactScalar::from_rat(q, mu.vol_mult(n1 - vx));
    }
    if (z1 && !z2) {
        long vz = F.val(second.center);
        if (F.val(y) < vz + n1) return zero;
        return ExactScalar::from_rat(q, mu.vol_mult(n2 - vz));
    }
    long vx = F.val(first.center), vz = F.val(second.center);
    // indicator level n - max(vx, vz); cell volume level n - min(vx, vz)
    long ind = std::min(n1 - vx, n2 - vz);
    long vol = std::max(n1 - vx, n2 - vz);
    Rat c = first.center * second.center;
    if (y == 0 || F.val(y / c - 1) < ind) return zero;
    return ExactScalar::from_rat(q, mu.vol_mult(vol));
}

} // namespace pgz
