#include "pgz/geometry.hpp"
#include "pgz/patches.hpp"

namespace pgz {

bool GMat::proportional_to(const GMat& y) const {
    // cross ratios: x = lambda y for some lambda
    const Rat* xs[4] = {&a, &b, &c, &d};
    const Rat* ys[4] = {&y.a, &y.b, &y.c, &y.d};
    int pivot = -1;
    for (int i = 0; i < 4; ++i)
        if (*ys[i] != 0) { pivot = i; break; }
    if (pivot < 0) return false;
    if (*xs[pivot] == 0) return false;
    Rat lambda = *xs[pivot] / *ys[pivot];
    for (int i = 0; i < 4; ++i)
        if (*xs[i] != lambda * *ys[i]) return false;
    return true;
}

GMat GMat::canonical_projective(const LocalField& F) const {
    const Rat* es[4] = {&a, &b, &c, &d};
    long best = VAL_INF;
    const Rat* lead = nullptr;
    for (int i = 0; i < 4; ++i) {
        if (*es[i] == 0) continue;
        long v = F.val(*es[i]);
        if (v < best) { best = v; lead = es[i]; }
    }
    if (!lead) throw std::domain_error("canonical_projective: zero matrix");
    // scale so the leading entry becomes p^0 * (1 + O(p^N)) with N = depth
    long m = F.default_depth();
    Int u = unit_part(*lead, F.p(), m);
    Rat scale = rat_pow(F.p(), -best) / Rat(u);
    return {a * scale, b * scale, c * scale, d * scale};
}

GMat torus_matrix(const LocalField& F, const KElem& t) {
    if (F.kind() == ExtKind::Split) return GMat::diag(t.x0, t.x1);
    return {t.x0, t.x1 * F.disc(), t.x1, t.x0};
}

GMat eps_matrix(const LocalField& F) {
    if (F.kind() == ExtKind::Split) return GMat::weyl(); // (0,1;1,0) up to sign convention
    return {0, -F.disc(), 1, 0};
}

Rat c_param(const LocalField& F) { return -F.disc(); }

std::pair<KElem, KElem> k_coords(const LocalField& F, const GMat& g) {
    if (F.kind() == ExtKind::Split) throw std::domain_error("k_coords: field case only");
    // g = (u - disc*t, disc*(w - s); w + s, u + disc*t) for g1 = u + w sqrt,
    // g2 = s + t sqrt; invert the linear system (p odd, disc != 0).
    Rat u = (g.a + g.d) / 2;
    Rat t = (g.d - g.a) / (2 * F.disc());
    Rat w = (g.b / F.disc() + g.c) / 2;
    Rat s = (g.c - g.b / F.disc()) / 2;
    return {KElem{u, w}, KElem{s, t}};
}

template <typename Mat>
std::pair<std::array<PertScalar, 2>, std::array<PertScalar, 2>> k_coords_pert(const LocalField& F,
                                                                              const Mat& g) {
    Rat half(1, 2);
    PertScalar u = (g.m[0] + g.m[3]) * PertScalar::exact(F, half);
    PertScalar t = (g.m[3] - g.m[0]) * PertScalar::exact(F, half / F.disc());
    PertScalar w = (g.m[1] * PertScalar::exact(F, 1 / F.disc()) + g.m[2]) * PertScalar::exact(F, half);
    PertScalar s = (g.m[2] - g.m[1] * PertScalar::exact(F, 1 / F.disc())) * PertScalar::exact(F, half);
    return {std::array<PertScalar, 2>{u, w}, std::array<PertScalar, 2>{s, t}};
}
template std::pair<std::array<PertScalar, 2>, std::array<PertScalar, 2>> k_coords_pert<PertMat>(
    const LocalField&, const PertMat&);

std::optional<Rat> P_invariant(const LocalField& F, const GMat& g) {
    if (g.det() == 0) throw std::domain_error("P_invariant: singular matrix");
    if (F.kind() == ExtKind::Split) {
        Rat num = g.b * g.c, den = g.a * g.d;
        if (den == 0) return std::nullopt;
        return num / den;
    }
    auto [g1, g2] = k_coords(F, g);
    Rat n1 = k_norm(F, g1);
    if (n1 == 0) return std::nullopt;
    return c_param(F) * k_norm(F, g2) / n1;
}

GMat tracefree_lift(const LocalField& F, const Rat& x, long depth) {
    if (x == 0) throw NoPreimage();
    if (F.kind() == ExtKind::Split) {
        if (x == 1) throw NoPreimage();
        return {-1, x, -1, 1};
    }
    // gamma = sqrt(disc) + eps*g2 with c*N(g2)/N(sqrt disc) = N(g2) = x
    if (!F.is_norm(x)) throw NoPreimage();
    KElem g2 = solve_norm(F, x, depth);
    // matrix of sqrt(disc) is (0, disc; 1, 0); eps*g2 = (-disc*t, -disc*s; s, disc*t)
    Rat s = g2.x0, t = g2.x1, D = F.disc();
    return {-D * t, D - D * s, 1 + s, D * t};
}

MirabolicCoords decompose_mirabolic(const LocalField& F, const GMat& g) {
    if (F.kind() == ExtKind::Split) throw std::domain_error("mirabolic chart: field case only");
    // g = (alpha, beta*D; beta, alpha)(z, y; 0, 1): alpha = a/z, beta = c/z;
    // solving the second column gives w2 = det(g)/(a^2 - c^2 D), z = 1/w2.
    Rat D = F.disc();
    Rat denom = g.a * g.a - g.c * g.c * D;
    if (denom == 0) throw std::domain_error("mirabolic chart: degenerate (a^2 = c^2 disc)");
    Rat w2 = g.det() / denom;
    Rat w1 = (g.a * g.b - g.c * g.d * D) / denom;
    Rat z = 1 / w2;
    Rat y = w1 * z;
    return {KElem{g.a / z, g.c / z}, z, y};
}

std::optional<ChartNN> decompose_nn(const LocalField& F, const GMat& g) {
    (void)F;
    if (g.d == 0) return std::nullopt;
    Rat det = g.det();
    Rat t2 = g.d, t1 = det / g.d;
    return ChartNN{t1, t2, g.b * g.d / det, g.c / g.d};
}

std::optional<ChartNwN> decompose_nwn(const LocalField& F, const GMat& g) {
    (void)F;
    if (g.c == 0) return std::nullopt;
    Rat det = g.det();
    Rat t2 = g.c, t1 = det / g.c;
    return ChartNwN{t1, t2, g.a * g.c / det, g.d / g.c};
}

ExactScalar in_torus_times_maxcompact(const LocalField& F, const TorusChar& chi, const GMat& g,
                                      long level) {
    (void)level;
    MaxCompactEvaluator ev(F, chi);
    if (F.kind() == ExtKind::Split) return ev.eval_exact(g);
    EvalOut r = ev.eval_field_search(g.lift(F));
    if (!r.is_value()) throw std::logic_error("max-compact search: exact input cannot split");
    return r.value;
}

bool in_tau_Hb(const LocalField& F, const GMat& g, const GMat& tau, const Rat& b) {
    if (F.val(b) < 0) throw std::invalid_argument("in_tau_Hb: v(b) >= 0 required");
    // b tau^{-1} g integral with det valuation v(b); work with adj to stay
    // polynomial: M := b adj(tau) g must lie in det(tau) M2(o) and
    // v(det M) = v(b) + 2 v(det tau).
    GMat M = tau.adj() * g;
    Rat dt = tau.det();
    if (dt == 0) throw std::invalid_argument("in_tau_Hb: singular tau");
    long vdt = F.val(dt);
    const Rat* es[4] = {&M.a, &M.b, &M.c, &M.d};
    long vb = F.val(b);
    for (int i = 0; i < 4; ++i) {
        if (*es[i] == 0) continue;
        if (vb + F.val(*es[i]) < vdt) return false;
    }
    Rat detM = M.det() * b * b;
    if (detM == 0) return false;
    return F.val(detM) == vb + 2 * vdt;
}

} // namespace pgz
