#pragma once

#include "pgz/localfield.hpp"

#include <array>
#include <optional>

namespace pgz {

// Variable classes for the adaptive integrators.  A PertScalar tracks, for
// each class, a lower bound on the valuation of the deviation from the
// recorded representative value when all variables of that class and finer
// ones move inside their cells:
//   slot 0 (Search): internal existence-search variables only,
//   slot 1 (Inner):  search + inner integration variables,
//   slot 2 (Outer):  everything.
// Bounds are nonincreasing from slot 0 to slot 2.  A quantity is certain for
// the whole cell iff v(rep) < bound[2].
enum class VarClass { Search = 0, Inner = 1, Outer = 2 };

struct PertScalar {
    Rat rep;
    std::array<long, 3> pert{VAL_INF, VAL_INF, VAL_INF};
    long p = 0;

    PertScalar() = default;
    PertScalar(const LocalField& F, Rat value) : rep(std::move(value)), p(F.p()) {}

    static PertScalar exact(const LocalField& F, Rat value) { return PertScalar(F, std::move(value)); }
    // cell variable: representative `value`, deviations of valuation >= bound
    static PertScalar cell(const LocalField& F, Rat value, long bound, VarClass cls) {
        PertScalar s(F, std::move(value));
        for (int k = static_cast<int>(cls); k < 3; ++k) s.pert[k] = bound;
        return s;
    }

    long vrep() const { return rep == 0 ? VAL_INF : valuation(rep, p); }
    long bound_total() const { return pert[2]; }

    // true valuation is pinned to v(rep) across the whole cell
    bool val_certain() const { return vrep() < pert[2]; }
    // guaranteed lower bound on the valuation anywhere in the cell
    long val_lower_bound() const { return std::min(vrep(), pert[2]); }

    friend PertScalar operator+(const PertScalar& x, const PertScalar& y) {
        PertScalar r;
        r.rep = x.rep + y.rep;
        r.p = x.p ? x.p : y.p;
        for (int k = 0; k < 3; ++k) r.pert[k] = std::min(x.pert[k], y.pert[k]);
        return r;
    }
    friend PertScalar operator-(const PertScalar& x, const PertScalar& y) { return x + (-y); }
    PertScalar operator-() const {
        PertScalar r = *this;
        r.rep = -r.rep;
        return r;
    }
    friend PertScalar operator*(const PertScalar& x, const PertScalar& y) {
        PertScalar r;
        r.rep = x.rep * y.rep;
        r.p = x.p ? x.p : y.p;
        long vx = x.vrep(), vy = y.vrep();
        for (int k = 0; k < 3; ++k) {
            long a = sat_add(vx, y.pert[k]);
            long b = sat_add(vy, x.pert[k]);
            long c = sat_add(x.pert[k], y.pert[k]);
            r.pert[k] = std::min(a, std::min(b, c));
        }
        return r;
    }

    static long sat_add(long a, long b) {
        if (a >= VAL_INF || b >= VAL_INF) return VAL_INF;
        return a + b;
    }
};

// Outcome of a cell-wide condition test.
enum class Cond { True, False, Split0, Split1, Split2 };

inline Cond split_for(const PertScalar& s, long needed) {
    // refinement of the coarsest class whose bound is below `needed`
    if (s.pert[0] < needed) return Cond::Split0;
    if (s.pert[1] < needed) return Cond::Split1;
    return Cond::Split2;
}

// v(x) >= c for every point of the cell?
inline Cond cond_val_ge(const PertScalar& x, long c) {
    long v = x.vrep();
    if (v >= c && x.pert[2] >= c) return Cond::True;
    if (v < c && v < x.pert[2]) return Cond::False;
    return split_for(x, c);
}

// v(x) == c exactly, cell-wide?
inline Cond cond_val_eq(const PertScalar& x, long c) {
    long v = x.vrep();
    if (v == c && v < x.pert[2]) return Cond::True;
    if (v != c && v < x.pert[2]) return Cond::False;
    if (std::min(v, x.pert[2]) > c) return Cond::False; // valuation > c everywhere
    return split_for(x, c + 1);
}

// Is v(x) pinned (so it can be read off the representative)?
inline Cond cond_val_known(const PertScalar& x) {
    if (x.val_certain()) return Cond::True;
    if (x.rep == 0 && x.pert[2] >= VAL_INF) return Cond::True; // exact zero
    return split_for(x, x.vrep() >= VAL_INF ? VAL_INF : x.vrep() + 1);
}

// Unit class of x modulo 1 + p^m is pinned?
inline Cond cond_unit_class_known(const PertScalar& x, long m) {
    long v = x.vrep();
    if (v >= VAL_INF) return split_for(x, VAL_INF); // zero rep: class undefined, refine
    long needed = PertScalar::sat_add(v, m);
    if (x.pert[2] >= needed && v < x.pert[2]) return Cond::True;
    return split_for(x, needed);
}

// 2x2 matrix of cell scalars.  Matrix products destroy structural
// cancellations in the naive determinant (e.g. det(n(y2) n'(y3)) = 1), so
// builders attach the determinant separately and products propagate it.
struct PertMat {
    PertScalar m[4]; // (a b; c d) row major
    std::optional<PertScalar> det_hint;

    PertScalar det() const { return det_hint ? *det_hint : m[0] * m[3] - m[1] * m[2]; }
    PertMat adj() const {
        PertMat r;
        r.m[0] = m[3];
        r.m[1] = -m[1];
        r.m[2] = -m[2];
        r.m[3] = m[0];
        r.det_hint = det_hint;
        return r;
    }
    friend PertMat operator*(const PertMat& x, const PertMat& y) {
        PertMat r;
        r.m[0] = x.m[0] * y.m[0] + x.m[1] * y.m[2];
        r.m[1] = x.m[0] * y.m[1] + x.m[1] * y.m[3];
        r.m[2] = x.m[2] * y.m[0] + x.m[3] * y.m[2];
        r.m[3] = x.m[2] * y.m[1] + x.m[3] * y.m[3];
        r.det_hint = x.det() * y.det();
        return r;
    }
};

} // namespace pgz
