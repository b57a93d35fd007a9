#include "pgz/patches.hpp"

#include <deque>

namespace pgz {

SchwartzOnG SchwartzOnG::max_compact(const LocalField& F, TorusChar chi) {
    if (chi.is_split() && !chi.chi1().is_unramified()) throw NotFundamental();
    SchwartzOnG f;
    f.chi = chi;
    f.terms.push_back({ExactScalar::one(F.q()), MaxCompactPatch{}});
    f.level = 1;
    return f;
}

MaxCompactEvaluator::MaxCompactEvaluator(const LocalField& F, TorusChar chi) : F_(F), chi_(chi) {
    if (chi.is_split() && !chi.chi1().is_unramified()) throw NotFundamental();
}

namespace {

// Row minimum of two entry valuations, cell-wide.  Returns the minimum or a
// split request.
struct RowMin {
    bool known;
    long v;
    VarClass cls;
};

RowMin row_min(const PertScalar& e1, const PertScalar& e2) {
    long v1 = e1.vrep(), v2 = e2.vrep();
    bool c1 = e1.val_certain(), c2 = e2.val_certain();
    long lb1 = e1.val_lower_bound(), lb2 = e2.val_lower_bound();
    if (c1 && v1 <= lb2) return {true, v1, VarClass::Search};
    if (c2 && v2 <= lb1) return {true, v2, VarClass::Search};
    if (c1 && c2) return {true, std::min(v1, v2), VarClass::Search};
    // undecided: refine whichever entry is uncertain
    const PertScalar& bad = !c1 ? e1 : e2;
    auto sp = cond_to_split(split_for(bad, bad.vrep() >= VAL_INF ? VAL_INF : bad.vrep() + 1));
    return {false, 0, sp.value_or(VarClass::Outer)};
}

} // namespace

EvalOut MaxCompactEvaluator::eval_split(const PertMat& g) const {
    PertScalar det = g.det();
    if (!det.val_certain())
        return EvalOut::split(cond_to_split(cond_val_known(det)).value_or(VarClass::Outer));
    RowMin r1 = row_min(g.m[0], g.m[1]);
    if (!r1.known) return EvalOut::split(r1.cls);
    RowMin r2 = row_min(g.m[2], g.m[3]);
    if (!r2.known) return EvalOut::split(r2.cls);
    long q = F_.q();
    if (r1.v + r2.v != det.vrep()) return EvalOut::val(ExactScalar::zero(q));
    return EvalOut::val(chi_.chi1().at_pi_pow(F_, r1.v - r2.v));
}

// Closed form: the unit part of the torus is absorbed into GL2(o), so
// membership reduces to comparing v(det) with twice the minimal entry
// valuation; the odd-defect case only occurs for ramified K, through the
// uniformizer chart, and contributes chi at the K-uniformizer.
EvalOut MaxCompactEvaluator::eval_field(const PertMat& g) const {
    PertScalar det = g.det();
    if (!det.val_certain())
        return EvalOut::split(cond_to_split(cond_val_known(det)).value_or(VarClass::Outer));
    // global minimum of the four entry valuations, cell-wide
    long best = VAL_INF;
    long lb_all = VAL_INF;
    int uncertain = -1;
    for (int i = 0; i < 4; ++i) {
        const PertScalar& e = g.m[i];
        lb_all = std::min(lb_all, e.val_lower_bound());
        if (e.val_certain()) best = std::min(best, e.vrep());
        else if (uncertain < 0 || g.m[i].val_lower_bound() < g.m[uncertain].val_lower_bound())
            uncertain = i;
    }
    long q = F_.q();
    if (best > lb_all) {
        // an uncertain entry might realize the minimum
        const PertScalar& bad = g.m[uncertain];
        auto sp = cond_to_split(split_for(bad, bad.vrep() >= VAL_INF ? VAL_INF : bad.vrep() + 1));
        return EvalOut::split(sp.value_or(VarClass::Outer));
    }
    long defect = det.vrep() - 2 * best;
    if (defect == 0) return EvalOut::val(ExactScalar::one(q));
    if (defect == 1 && F_.kind() == ExtKind::Ramified)
        return EvalOut::val(ExactScalar::from_rat(q, chi_.ramified_sign()));
    return EvalOut::val(ExactScalar::zero(q));
}

EvalOut MaxCompactEvaluator::eval_field_search(const PertMat& g) const {
    PertScalar det = g.det();
    if (!det.val_certain())
        return EvalOut::split(cond_to_split(cond_val_known(det)).value_or(VarClass::Outer));
    long vdet = det.vrep();
    long q = F_.q();

    // Adaptive search for a torus coset t and z = p^vz with z t g integral of
    // unit determinant.  Torus cells are internal (Search class) variables.
    struct TCell {
        int chart;
        Rat rep;
        long lev;
    };
    std::deque<TCell> work;
    work.push_back({1, Rat(0), 0});  // r in o
    work.push_back({2, Rat(0), 1});  // s in p
    const Rat D = F_.disc();
    std::optional<VarClass> pending;

    while (!work.empty()) {
        TCell c = work.front();
        work.pop_front();
        if (c.lev > 60) throw std::logic_error("max-compact search: refinement overflow");
        // torus matrix with the chart variable as a Search-class cell
        PertScalar var = PertScalar::cell(F_, c.rep, c.lev, VarClass::Search);
        PertMat t;
        if (c.chart == 1) {
            // 1 + r sqrt(D) -> (1, rD; r, 1)
            t.m[0] = PertScalar::exact(F_, 1);
            t.m[1] = var * PertScalar::exact(F_, D);
            t.m[2] = var;
            t.m[3] = PertScalar::exact(F_, 1);
        } else {
            // s + sqrt(D) -> (s, D; 1, s)
            t.m[0] = var;
            t.m[1] = PertScalar::exact(F_, D);
            t.m[2] = PertScalar::exact(F_, 1);
            t.m[3] = var;
        }
        t.det_hint = t.m[0] * t.m[3] - t.m[1] * t.m[2];
        PertScalar dt = t.det();
        Cond dk = cond_val_known(dt);
        if (dk != Cond::True) {
            // refine this torus cell (det valuation not pinned yet)
            for (long d = 0; d < F_.q(); ++d)
                work.push_back({c.chart, c.rep + Rat(d) * rat_pow(F_.p(), c.lev), c.lev + 1});
            continue;
        }
        long vdt = dt.vrep();
        if ((vdt + vdet) % 2 != 0) continue; // no z can fix the determinant
        long vz = -(vdt + vdet) / 2;

        PertMat m = t * g;
        bool all_true = true;
        std::optional<VarClass> need;
        for (int i = 0; i < 4 && all_true; ++i) {
            Cond cc = cond_val_ge(m.m[i], -vz);
            if (cc == Cond::False) { all_true = false; need.reset(); }
            else if (cc != Cond::True) { all_true = false; need = cond_to_split(cc); }
        }
        if (all_true) {
            // found: value chi(t)^{-1}; g = z^{-1} t^{-1} k
            KElem trep = c.chart == 1 ? KElem{Rat(1), c.rep} : KElem{c.rep, Rat(1)};
            ExactScalar chit = chi_.eval(F_, trep);
            return EvalOut::val(chit.conj()); // chi unitary: inverse = conjugate
        }
        if (need) {
            if (*need == VarClass::Search) {
                for (long d = 0; d < F_.q(); ++d)
                    work.push_back({c.chart, c.rep + Rat(d) * rat_pow(F_.p(), c.lev), c.lev + 1});
            } else if (!pending || static_cast<int>(*need) < static_cast<int>(*pending)) {
                // blocked by an integration variable; keep scanning in case
                // another coset is decidedly inside
                pending = *need;
            }
            continue;
        }
        // decided false for the whole torus cell: drop it
    }
    if (pending) return EvalOut::split(*pending);
    return EvalOut::val(ExactScalar::zero(q));
}

EvalOut MaxCompactEvaluator::eval(const PertMat& g) const {
    return F_.kind() == ExtKind::Split ? eval_split(g) : eval_field(g);
}

ExactScalar MaxCompactEvaluator::eval_exact(const GMat& g, long /*level*/) const {
    EvalOut r = eval(g.lift(F_));
    if (!r.is_value()) throw std::logic_error("max-compact eval: exact input cannot split");
    return r.value;
}

namespace {

long norm_level(const LocalField& F, long k_rel) {
    // level of N(1 + p_K^k) as a subgroup 1 + p_F^* (p odd)
    if (F.kind() == ExtKind::Inert) return k_rel;
    return (k_rel + 1) / 2;
}

long vk_from_norm_val(const LocalField& F, long vnorm) {
    if (F.kind() == ExtKind::Inert) {
        if (vnorm % 2 != 0) throw std::logic_error("inert norm has even valuation");
        return vnorm / 2;
    }
    return vnorm;
}

// v_K of a K-element with PertScalar coordinates; components must have pinned
// valuations (or be exact zero).
struct VK {
    bool known;
    long v;
    VarClass cls;
};

VK vk_of(const LocalField& F, const std::array<PertScalar, 2>& g) {
    auto comp = [&](const PertScalar& x, bool odd_part) -> std::pair<long, bool> {
        if (x.rep == 0 && x.pert[2] >= VAL_INF) return {VAL_INF, true};
        long v = x.val_lower_bound();
        bool certain = x.val_certain();
        long vk = v >= VAL_INF ? VAL_INF : (F.kind() == ExtKind::Inert ? v : 2 * v + (odd_part ? 1 : 0));
        return {vk, certain};
    };
    auto [v0, c0] = comp(g[0], false);
    auto [v1, c1] = comp(g[1], true);
    // minimum with certainty analysis as in row_min
    if (c0 && v0 <= v1) return {true, v0, VarClass::Search};
    if (c1 && v1 <= v0) return {true, v1, VarClass::Search};
    if (c0 && c1) return {true, std::min(v0, v1), VarClass::Search};
    const PertScalar& bad = !c0 ? g[0] : g[1];
    auto sp = cond_to_split(split_for(bad, bad.vrep() >= VAL_INF ? VAL_INF : bad.vrep() + 1));
    return {false, 0, sp.value_or(VarClass::Outer)};
}

PertScalar kp_norm(const LocalField& F, const std::array<PertScalar, 2>& g) {
    return g[0] * g[0] - PertScalar::exact(F, F.disc()) * (g[1] * g[1]);
}

ExactScalar chi_on_k(const LocalField& F, const TorusChar& chi, long vk) {
    // field-case chi on an element with v_K = vk (chi trivial or ramified
    // quadratic in the supported set)
    if (chi.is_split()) throw std::logic_error("chi_on_k: field case only");
    if (chi.is_trivial()) return ExactScalar::one(F.q());
    return vk % 2 == 0 ? ExactScalar::one(F.q())
                       : ExactScalar::from_rat(F.q(), chi.ramified_sign());
}

EvalOut eval_kball(const LocalField& F, const TorusChar& chi, const KBallPatch& p, const PertMat& g) {
    long q = F.q();
    auto [g1, g2] = k_coords_pert(F, g);

    if (p.g1.kind == KBall::Kind::AroundCenter) {
        // w pinned by g1: w in g1/center (1 + p_K^rel); value chi(w)^{-1} ... chi(t)
        VK v1 = vk_of(F, g1);
        if (!v1.known) return EvalOut::split(v1.cls);
        if (v1.v >= VAL_INF) return EvalOut::val(ExactScalar::zero(q));
        long vkc = k_val(F, p.g1.center);

        if (std::holds_alternative<NormShell>(p.g2)) {
            const auto& shell = std::get<NormShell>(p.g2);
            long tol = std::min(shell.n, norm_level(F, p.g1.level));
            // condition: N(g2) N(center) / (N(g1) n0) in 1 + p^tol
            PertScalar lhs = kp_norm(F, g2) * PertScalar::exact(F, k_norm(F, p.g1.center));
            PertScalar rhs = kp_norm(F, g1) * PertScalar::exact(F, shell.n0);
            Cond c = cond_val_ge(lhs - rhs, tol + F.val(shell.n0) + [&] {
                // need v(rhs) pinned: v(N(g1)) from vk
                return F.kind() == ExtKind::Inert ? 2 * v1.v : v1.v;
            }());
            if (c == Cond::False) return EvalOut::val(ExactScalar::zero(q));
            if (c != Cond::True) return EvalOut::split(*cond_to_split(c));
            ExactScalar val = chi_on_k(F, chi, v1.v - vkc);
            return EvalOut::val(val);
        }
        const auto& ball = std::get<KBall>(p.g2);
        VK v2 = vk_of(F, g2);
        if (!v2.known) return EvalOut::split(v2.cls);
        if (ball.kind == KBall::Kind::ZeroBall) {
            // v_K(g2) - v_K(w) >= level, v_K(w) = v_K(g1) - v_K(center)
            bool ok = v2.v - (v1.v - vkc) >= ball.level;
            if (!ok) return EvalOut::val(ExactScalar::zero(q));
            ExactScalar val = chi_on_k(F, chi, v1.v - vkc);
            return EvalOut::val(val);
        }
        // g2 around a center: g2 / conj(w) in center(1+p_K^rel):
        // N and component conditions; realized sets never need this shape.
        throw std::logic_error("KBallPatch: unsupported g2 ball shape");
    }

    // g1 zero-ball, g2 norm shell (stalk-at-infinity sets)
    if (!std::holds_alternative<NormShell>(p.g2))
        throw std::logic_error("KBallPatch: zero-ball g1 needs a norm-shell g2");
    const auto& shell = std::get<NormShell>(p.g2);
    PertScalar n2 = kp_norm(F, g2);
    Cond nk = cond_val_known(n2);
    if (nk != Cond::True) return EvalOut::split(*cond_to_split(nk));
    long vk_w = vk_from_norm_val(F, n2.vrep() - F.val(shell.n0));
    VK v1 = vk_of(F, g1);
    if (!v1.known) return EvalOut::split(v1.cls);
    if (v1.v - vk_w < p.g1.level) return EvalOut::val(ExactScalar::zero(q));
    // unit-part condition on N(g2)/n0 within 1 + p^n up to the w-ball slack:
    // any w with matching norm works; the coset automatically meets N(K^x).
    // value chi(w): quadratic chi sees only the parity of v_K(w).
    return EvalOut::val(chi_on_k(F, chi, vk_w));
}

Cond coset_cond_ratio(const LocalField& F, const Coset1D& coset, const PertScalar& num,
                      const PertScalar& den) {
    // membership of num/den in coset, polynomialized
    switch (coset.kind) {
        case Coset1D::Kind::Additive: {
            Cond dk = cond_val_known(den);
            if (dk != Cond::True) return dk;
            return cond_val_ge(num - PertScalar::exact(F, coset.center) * den, coset.m + den.vrep());
        }
        case Coset1D::Kind::Mult: {
            Cond dk = cond_val_known(den);
            if (dk != Cond::True) return dk;
            return cond_val_ge(num - PertScalar::exact(F, coset.center) * den,
                               coset.m + F.val(coset.center) + den.vrep());
        }
        case Coset1D::Kind::UnitShell: {
            Cond dk = cond_val_known(den);
            if (dk != Cond::True) return dk;
            Cond nk = cond_val_known(num);
            if (nk != Cond::True) return nk;
            if (num.rep == 0) return Cond::False;
            return num.vrep() - den.vrep() == F.val(coset.center) ? Cond::True : Cond::False;
        }
    }
    return Cond::False;
}

EvalOut eval_chart_nn(const LocalField& F, const TorusChar& chi, const ChartPatchNN& p,
                      const PertMat& g) {
    long q = F.q();
    PertScalar det = g.det();
    // y3 = c/d, y2 = b d / det, chi-factor chi1(det / d^2)
    Cond c3 = coset_cond_ratio(F, p.y3, g.m[2], g.m[3]);
    if (c3 == Cond::False) return EvalOut::val(ExactScalar::zero(q));
    if (c3 != Cond::True) return EvalOut::split(*cond_to_split(c3));
    Cond c2 = coset_cond_ratio(F, p.y2, g.m[1] * g.m[3], det);
    if (c2 == Cond::False) return EvalOut::val(ExactScalar::zero(q));
    if (c2 != Cond::True) return EvalOut::split(*cond_to_split(c2));

    const MultChar& chi1 = chi.chi1();
    Cond dk = cond_val_known(det), ek = cond_val_known(g.m[3]);
    if (dk != Cond::True) return EvalOut::split(*cond_to_split(dk));
    if (ek != Cond::True) return EvalOut::split(*cond_to_split(ek));
    ExactScalar val = chi1.at_pi_pow(F, det.vrep() - 2 * g.m[3].vrep());
    if (chi1.conductor == 1) {
        // unit part of d^2 is a square, so only det's unit class matters
        Cond u1 = cond_unit_class_known(det, 1);
        if (u1 != Cond::True) return EvalOut::split(*cond_to_split(u1));
        if (legendre_of_unit(det.rep, F.p()) == -1) val = -val;
    }
    return EvalOut::val(val);
}

EvalOut eval_chart_nwn(const LocalField& F, const TorusChar& chi, const ChartPatchNwN& p,
                       const PertMat& g) {
    long q = F.q();
    PertScalar det = g.det();
    // y4 = d/c, y1 = a c / det, chi-factor chi1(det / c^2)
    Cond c4 = coset_cond_ratio(F, p.y4, g.m[3], g.m[2]);
    if (c4 == Cond::False) return EvalOut::val(ExactScalar::zero(q));
    if (c4 != Cond::True) return EvalOut::split(*cond_to_split(c4));
    Cond c1 = coset_cond_ratio(F, p.y1, g.m[0] * g.m[2], det);
    if (c1 == Cond::False) return EvalOut::val(ExactScalar::zero(q));
    if (c1 != Cond::True) return EvalOut::split(*cond_to_split(c1));

    const MultChar& chi1 = chi.chi1();
    Cond dk = cond_val_known(det), ck = cond_val_known(g.m[2]);
    if (dk != Cond::True) return EvalOut::split(*cond_to_split(dk));
    if (ck != Cond::True) return EvalOut::split(*cond_to_split(ck));
    ExactScalar val = chi1.at_pi_pow(F, det.vrep() - 2 * g.m[2].vrep());
    if (chi1.conductor == 1) {
        Cond u1 = cond_unit_class_known(det, 1);
        if (u1 != Cond::True) return EvalOut::split(*cond_to_split(u1));
        if (legendre_of_unit(det.rep, F.p()) == -1) val = -val;
    }
    return EvalOut::val(val);
}

EvalOut eval_mirabolic(const LocalField& F, const TorusChar& chi, const MirabolicPatch& p,
                       const PertMat& g) {
    long q = F.q();
    const Rat D = F.disc();
    // z = (a^2 - c^2 D)/det, y = (ab - cd D)/(a^2 - c^2 D)
    PertScalar det = g.det();
    PertScalar denom = g.m[0] * g.m[0] - g.m[2] * g.m[2] * PertScalar::exact(F, D);
    Cond cz = coset_cond_ratio(F, p.y1, denom, det);
    if (cz == Cond::False) return EvalOut::val(ExactScalar::zero(q));
    if (cz != Cond::True) return EvalOut::split(*cond_to_split(cz));
    PertScalar ynum = g.m[0] * g.m[1] - g.m[2] * g.m[3] * PertScalar::exact(F, D);
    Cond cy = coset_cond_ratio(F, p.y2, ynum, denom);
    if (cy == Cond::False) return EvalOut::val(ExactScalar::zero(q));
    if (cy != Cond::True) return EvalOut::split(*cond_to_split(cy));
    // chi-factor: t ~ a + c sqrt(D) projectively
    if (chi.is_trivial()) return EvalOut::val(ExactScalar::one(q));
    VK vk = vk_of(F, std::array<PertScalar, 2>{g.m[0], g.m[2]});
    if (!vk.known) return EvalOut::split(vk.cls);
    return EvalOut::val(chi_on_k(F, chi, vk.v));
}

} // namespace

EvalOut eval_schwartz(const LocalField& F, const SchwartzOnG& phi, const PertMat& g) {
    ExactScalar sum = ExactScalar::zero(F.q());
    std::optional<VarClass> need;
    for (const auto& term : phi.terms) {
        EvalOut r = std::visit(
            [&](const auto& p) -> EvalOut {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, MaxCompactPatch>) {
                    MaxCompactEvaluator ev(F, phi.chi);
                    return ev.eval(g);
                } else if constexpr (std::is_same_v<T, KBallPatch>) {
                    return eval_kball(F, phi.chi, p, g);
                } else if constexpr (std::is_same_v<T, ChartPatchNN>) {
                    return eval_chart_nn(F, phi.chi, p, g);
                } else if constexpr (std::is_same_v<T, ChartPatchNwN>) {
                    return eval_chart_nwn(F, phi.chi, p, g);
                } else {
                    return eval_mirabolic(F, phi.chi, p, g);
                }
            },
            term.patch);
        if (!r.is_value()) {
            if (!need || static_cast<int>(r.split_class) < static_cast<int>(*need))
                need = r.split_class;
            continue;
        }
        sum += term.coeff * r.value;
    }
    if (need) return EvalOut::split(*need);
    return EvalOut::val(sum);
}

ExactScalar eval_schwartz_exact(const LocalField& F, const SchwartzOnG& phi, const GMat& g) {
    EvalOut r = eval_schwartz(F, phi, g.lift(F));
    if (!r.is_value()) throw std::logic_error("eval_schwartz: exact input cannot split");
    return r.value;
}

long patch_window_hint(const LocalField& F, const SchwartzOnG& phi) {
    long w = phi.level;
    auto coset_hint = [&](const Coset1D& c) {
        long h = std::max<long>(1, std::abs(c.m));
        if (c.center != 0) h = std::max(h, std::abs(F.val(c.center)));
        return h;
    };
    for (const auto& t : phi.terms) {
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, KBallPatch>) {
                    w = std::max(w, std::abs(p.g1.level));
                    if (p.g1.kind == KBall::Kind::AroundCenter && !k_is_zero(p.g1.center))
                        w = std::max(w, std::abs(k_val(F, p.g1.center)));
                    if (std::holds_alternative<NormShell>(p.g2)) {
                        const auto& s = std::get<NormShell>(p.g2);
                        w = std::max(w, std::abs(s.n) );
                        if (s.n0 != 0) w = std::max(w, std::abs(F.val(s.n0)));
                    } else {
                        w = std::max(w, std::abs(std::get<KBall>(p.g2).level));
                    }
                } else if constexpr (std::is_same_v<T, ChartPatchNN>) {
                    w = std::max(w, std::max(coset_hint(p.y2), coset_hint(p.y3)));
                } else if constexpr (std::is_same_v<T, ChartPatchNwN>) {
                    w = std::max(w, std::max(coset_hint(p.y1), coset_hint(p.y4)));
                } else if constexpr (std::is_same_v<T, MirabolicPatch>) {
                    w = std::max(w, std::max(coset_hint(p.y1), coset_hint(p.y2)));
                }
            },
            t.patch);
    }
    return w;
}

} // namespace pgz
