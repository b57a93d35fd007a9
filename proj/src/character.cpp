#include "pgz/character.hpp"

namespace pgz {

ExactScalar MultChar::eval(const LocalField& F, const Rat& x) const {
    if (x == 0) throw std::domain_error("character at 0");
    long v = F.val(x);
    long e = i_exp * v;
    ExactScalar r = ExactScalar::i_pow(F.q(), e);
    if (conductor == 1) {
        if (legendre_of_unit(x, F.p()) == -1) r = -r;
    }
    return r;
}

bool TorusChar::is_trivial() const {
    switch (kind_) {
        case Kind::SplitChi: return chi1_.is_trivial();
        case Kind::InertTrivial: return true;
        case Kind::RamifiedQuad: return sign_ == 1;
    }
    return true;
}

bool TorusChar::is_quadratic() const {
    switch (kind_) {
        case Kind::SplitChi: return chi1_.is_quadratic();
        case Kind::InertTrivial: return true;
        case Kind::RamifiedQuad: return true;
    }
    return true;
}

ExactScalar TorusChar::eval(const LocalField& F, const KElem& t) const {
    long q = F.q();
    switch (kind_) {
        case Kind::SplitChi: {
            // t = (t1, t2) mod F^x; chi(t) = chi1(t1/t2).
            if (t.x0 == 0 || t.x1 == 0) throw std::domain_error("torus char: degenerate split element");
            return chi1_.eval(F, t.x0 / t.x1);
        }
        case Kind::InertTrivial:
            return ExactScalar::one(q);
        case Kind::RamifiedQuad: {
            // Unramified on K^x: value depends on v_K(t) parity.
            long vk = k_val(F, t);
            if (vk == VAL_INF) throw std::domain_error("torus char at 0");
            return (vk % 2 == 0 || sign_ == 1) ? ExactScalar::one(q)
                                               : -ExactScalar::one(q);
        }
    }
    return ExactScalar::one(q);
}

bool TorusChar::factors_via_norm(const LocalField& F) const {
    // chi = chi1 o N for some character chi1 of F^x.
    switch (kind_) {
        case Kind::SplitChi:
            // (chi1, chi1^{-1}) factors via N(x,y) = xy iff chi1^2 = 1.
            return chi1_.is_quadratic();
        case Kind::InertTrivial:
            return true;
        case Kind::RamifiedQuad:
            // N(K^x) has index 2; any quadratic character trivial on it works.
            return true;
    }
    (void)F;
    return true;
}

Rat torus_total_volume(const LocalField& F) {
    if (!F.is_field_ext()) throw NotCompactTorus();
    long q = F.q();
    if (F.kind() == ExtKind::Inert) return Rat(1) + Rat(1, q);
    return Rat(2);
}

std::vector<TorusCoset> torus_cosets(const LocalField& F, long level) {
    if (!F.is_field_ext()) throw NotCompactTorus();
    if (level < 1) throw std::invalid_argument("torus_cosets: level >= 1");
    long q = F.q();
    std::vector<TorusCoset> out;
    Rat w1 = rat_pow(q, -level);
    // chart-2 density differs in the ramified case (multiplication by the
    // uniformizer of K contracts the s-chart by |p|).
    Rat w2 = F.kind() == ExtKind::Inert ? w1 : w1 * Rat(q);
    // chart 1: r over o/p^level
    Int mod = int_pow(q, static_cast<unsigned long>(level));
    for (Int r = 0; r < mod; ++r)
        out.push_back({1, Rat(r), level, w1});
    // chart 2: s over p/p^level (v(s) >= 1)
    Int mod2 = int_pow(q, static_cast<unsigned long>(level - 1));
    for (Int s = 0; s < mod2; ++s)
        out.push_back({2, Rat(s) * Rat(q), level, w2});
    return out;
}

} // namespace pgz
