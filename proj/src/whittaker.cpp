#include "pgz/whittaker.hpp"

#include <deque>

namespace pgz {

ExactScalar KirillovFunction::eval(const LocalField& F, const Rat& a) const {
    long q = F.q();
    if (a == 0) return ExactScalar::zero(q);
    ExactScalar r = compact.eval(F, a);
    if (F.val(a) >= cutoff) {
        switch (stalk.kind) {
            case KirillovStalk::Kind::None:
                break;
            case KirillovStalk::Kind::Pair:
                r += F.abs_half(a) * (stalk.a1 * stalk.mu1.eval(F, a) + stalk.a2 * stalk.mu2.eval(F, a));
                break;
            case KirillovStalk::Kind::LogPair:
                r += F.abs_half(a) * stalk.mu1.eval(F, a) *
                     (stalk.a1 + stalk.a2 * ExactScalar::from_rat(q, Rat(F.val(a))));
                break;
        }
    }
    return r;
}

std::pair<MultChar, MultChar> newform_parameters(const LocalField& F, RepKind rep,
                                                 const TorusChar& chi) {
    if (rep == RepKind::EisensteinSeries) {
        // Pi(1, omega)
        MultChar om = F.kind() == ExtKind::Inert ? MultChar::quadratic_unramified()
                      : F.kind() == ExtKind::Split ? MultChar::trivial()
                                                   : MultChar::ramified_quadratic();
        return {MultChar::trivial(), om};
    }
    // theta series
    if (F.kind() == ExtKind::Split) {
        MultChar c1 = chi.chi1();
        if (!c1.is_unramified()) throw std::invalid_argument("newform: unramified data required");
        return {c1, c1.inverse()};
    }
    if (F.kind() == ExtKind::Inert) {
        if (!chi.is_trivial()) throw std::invalid_argument("newform: inert chi must be trivial");
        // Pi(chi1, chi1 omega) with chi = chi1 o N; chi1 trivial works
        return {MultChar::trivial(), MultChar::quadratic_unramified()};
    }
    throw std::invalid_argument("newform: ramified K has no unramified newform data here");
}

ExactScalar newform_sum_oracle(const LocalField& F, const MultChar& mu1, const MultChar& mu2,
                               const Rat& a) {
    long q = F.q();
    if (a == 0 || F.val(a) < 0) return ExactScalar::zero(q);
    if (!mu1.is_unramified() || !mu2.is_unramified())
        throw std::invalid_argument("newform oracle: unramified mu required");
    ExactScalar sum = ExactScalar::zero(q);
    MultChar ratio{mu1.i_exp - mu2.i_exp, 0};
    for (long j = -F.val(a); j <= 0; ++j) sum += ratio.at_pi_pow(F, j);
    return mu1.eval(F, a) * F.abs_half(a) * sum;
}

KirillovFunction newform(const LocalField& F, RepKind rep, const TorusChar& chi) {
    auto [mu1, mu2] = newform_parameters(F, rep, chi);
    long q = F.q();
    KirillovFunction W;
    W.cutoff = 0; // the closed form holds on all of o
    if (mu1 == mu2) {
        W.stalk = KirillovStalk::logpair(mu1, ExactScalar::one(q), ExactScalar::one(q));
        // |a|^{1/2} mu1(a) (v(a) + 1)
    } else {
        // (mu1(a pi) - mu2(a pi)) / (mu1(pi) - mu2(pi)) split into mu1/mu2 parts
        ExactScalar denom = mu1.at_pi_pow(F, 1) - mu2.at_pi_pow(F, 1);
        W.stalk = KirillovStalk::pair(mu1, mu2, mu1.at_pi_pow(F, 1) / denom,
                                      -(mu2.at_pi_pow(F, 1)) / denom);
    }
    return W;
}

ExactScalar WhittakerProduct::eval(const LocalField& F, const Rat& xi) const {
    if (xi == 0 || xi == 1) throw std::domain_error("whittaker product: xi outside {0,1}");
    Rat eta = 1 - xi;
    return w_theta.eval(F, eta) * w_eisenstein.eval(F, xi);
}

ExactScalar WhittakerProduct::hecke_translate(const LocalField& F, const Rat& b, const Rat& xi) const {
    if (b == 0) throw std::domain_error("hecke translate: b != 0");
    Rat eta = 1 - xi;
    // |b|^{-2} = q^{2 v(b)}
    ExactScalar scale = ExactScalar::from_rat(F.q(), rat_pow(F.q(), 2 * F.val(b)));
    return scale * (w_theta.eval(F, b * eta) * w_eisenstein.eval(F, b * xi));
}

ExactScalar WhittakerAsymptotic::eval(const LocalField& F, const Rat& x, const Rat& b) const {
    long q = F.q();
    Rat xi = x / (x - 1), eta = Rat(1) - xi;
    ExactScalar scale = ExactScalar::from_rat(q, rat_pow(q, -F.val(b))) // |b|
                        * F.abs_half(xi) * F.abs_half(eta);
    switch (kind) {
        case Kind::ZeroCompactNonnorm:
            return ExactScalar::zero(q);
        case Kind::CompactOmegaPair: {
            ExactScalar om = ExactScalar::from_rat(q, Rat(F.omega(b * xi)));
            return scale * chi1.eval(F, b * eta) * (c1 + c2 * om);
        }
        case Kind::SplitPair: {
            ExactScalar lin =
                c3 * ExactScalar::from_rat(q, Rat(F.val(b * xi))) + c4;
            return scale * (c1 * chi1.eval(F, b * eta) + c2 * chi1.inverse().eval(F, b * eta)) * lin;
        }
        case Kind::SplitLog: {
            ExactScalar l1 = c1 * ExactScalar::from_rat(q, Rat(F.val(b * eta))) + c2;
            ExactScalar l2 = c3 * ExactScalar::from_rat(q, Rat(F.val(b * xi))) + c4;
            return scale * chi1.eval(F, b * eta) * l1 * l2;
        }
    }
    return ExactScalar::zero(q);
}

WhittakerAsymptotic asymptotic_form(const LocalField& F, const WhittakerProduct& W,
                                    const TorusChar& chi, const Rat& x) {
    long q = F.q();
    WhittakerAsymptotic A;
    A.valid_from = std::max(W.w_theta.cutoff, W.w_eisenstein.cutoff) + std::abs(F.val(x)) +
                   std::abs(F.val(1 - x)) + 1;
    const KirillovStalk& st = W.w_theta.stalk;
    const KirillovStalk& se = W.w_eisenstein.stalk;
    ExactScalar zero = ExactScalar::zero(q), one = ExactScalar::one(q);

    if (F.is_field_ext()) {
        if (!chi.factors_via_norm(F) || st.kind == KirillovStalk::Kind::None) {
            A.kind = WhittakerAsymptotic::Kind::ZeroCompactNonnorm;
            A.c1 = A.c2 = A.c3 = A.c4 = zero;
            return A;
        }
        // theta stalk |eta|^{1/2} chi1(eta)(a1 + a2 w(eta)); eisenstein stalk
        // |xi|^{1/2}(b1 + b2 w(xi)); w(b eta) = w(-x) w(b xi) collapses the
        // product to a single pair in w(b xi).
        A.kind = WhittakerAsymptotic::Kind::CompactOmegaPair;
        A.chi1 = st.mu1;
        ExactScalar ta1 = st.a1, ta2 = st.a2;
        ExactScalar eb1 = se.kind == KirillovStalk::Kind::Pair ? se.a1 : zero;
        ExactScalar eb2 = se.kind == KirillovStalk::Kind::Pair ? se.a2 : zero;
        ExactScalar om_x = ExactScalar::from_rat(q, Rat(F.omega(-x)));
        A.c1 = ta1 * eb1 + ta2 * eb2 * om_x;
        A.c2 = ta1 * eb2 + ta2 * eb1 * om_x;
        A.c3 = A.c4 = one;
        return A;
    }
    if (chi.chi1().is_quadratic()) {
        A.kind = WhittakerAsymptotic::Kind::SplitLog;
        A.chi1 = st.kind == KirillovStalk::Kind::LogPair ? st.mu1 : chi.chi1();
        ExactScalar ta1 = st.kind == KirillovStalk::Kind::LogPair ? st.a2 : zero; // v-coefficient
        ExactScalar ta2 = st.kind == KirillovStalk::Kind::LogPair ? st.a1 : zero;
        ExactScalar eb1 = se.kind == KirillovStalk::Kind::LogPair ? se.a2 : zero;
        ExactScalar eb2 = se.kind == KirillovStalk::Kind::LogPair ? se.a1 : zero;
        A.c1 = ta1;
        A.c2 = ta2;
        A.c3 = eb1;
        A.c4 = eb2;
        return A;
    }
    A.kind = WhittakerAsymptotic::Kind::SplitPair;
    A.chi1 = chi.chi1();
    A.c1 = st.kind == KirillovStalk::Kind::Pair ? st.a1 : zero;
    A.c2 = st.kind == KirillovStalk::Kind::Pair ? st.a2 : zero;
    A.c3 = se.kind == KirillovStalk::Kind::LogPair ? se.a2 : zero;
    A.c4 = se.kind == KirillovStalk::Kind::LogPair ? se.a1 : zero;
    return A;
}

ExactScalar principal_series_section(const LocalField& F, const LocallyConstant2D& Phi,
                                     const MultChar& mu1, const MultChar& mu2, const GMat& g) {
    if (!mu1.is_unramified() || !mu2.is_unramified())
        throw std::invalid_argument("principal series section: unramified mu required");
    long q = F.q();
    Rat det = g.det();
    if (det == 0) throw std::domain_error("principal series section: singular g");
    MultChar ratio{mu1.i_exp - mu2.i_exp, 0};

    // (0, t) g = (t g.c, t g.d); per Phi-term the t-support is a shell range
    // plus, when both factors' cosets reach 0, a geometric tail.
    ExactScalar total = ExactScalar::zero(q);
    for (const auto& term : Phi.terms) {
        if (term.coeff.is_zero()) continue;
        // stable-membership threshold for deep t
        auto deep_bound = [&](const Coset1D& c, const Rat& coord) -> std::optional<long> {
            // v(t) >= bound makes t*coord a member for every t; nullopt if the
            // coset never contains arbitrarily deep values
            if (!c.contains_zero(F)) return std::nullopt;
            if (coord == 0) return -VAL_INF; // coordinate identically zero
            return c.m - F.val(coord);
        };
        auto zero_member = [&](const Coset1D& c) { return c.contains_zero(F); };
        bool c_zero = g.c == 0, d_zero = g.d == 0;
        // coordinate identically zero: membership is the constant 1_{coset}(0)
        if (c_zero && !zero_member(term.first)) continue;
        if (d_zero && !zero_member(term.second)) continue;
        std::optional<long> tail1 = c_zero ? std::optional<long>(-VAL_INF) : deep_bound(term.first, g.c);
        std::optional<long> tail2 = d_zero ? std::optional<long>(-VAL_INF) : deep_bound(term.second, g.d);

        long W = 2 * (Phi.level(F) + std::abs(F.val(det)) + (g.c != 0 ? std::abs(F.val(g.c)) : 0) +
                      (g.d != 0 ? std::abs(F.val(g.d)) : 0) + 2);
        long tail_from = VAL_INF;
        if (tail1 && tail2) tail_from = std::max({*tail1, *tail2, -W});

        ExactScalar term_sum = ExactScalar::zero(q);
        for (long k = -W; k < std::min(tail_from, W + 1); ++k) {
            // shell v(t) = k; adaptive unit cells
            std::deque<std::pair<Rat, long>> cells;
            for (long u = 1; u < q; ++u) cells.push_back({Rat(u) * F.pi_pow(k), 1});
            while (!cells.empty()) {
                auto [rep, lev] = cells.front();
                cells.pop_front();
                if (lev > 40) throw std::logic_error("principal series: refinement overflow");
                PertScalar t = PertScalar::cell(F, rep, k + lev, VarClass::Inner);
                Cond c1 = c_zero ? Cond::True
                                 : term.first.contains_cell(F, t * PertScalar::exact(F, g.c));
                Cond c2 = d_zero ? Cond::True
                                 : term.second.contains_cell(F, t * PertScalar::exact(F, g.d));
                if (c1 == Cond::False || c2 == Cond::False) continue;
                if (c1 == Cond::True && c2 == Cond::True) {
                    // (mu1 mu2^{-1})(t) |t| d^x t over the cell
                    term_sum += ratio.at_pi_pow(F, k) *
                                ExactScalar::from_rat(q, rat_pow(q, -k) * Measure(q).vol_mult(lev));
                    continue;
                }
                for (long d = 0; d < q; ++d)
                    cells.push_back({rep * (1 + Rat(d) * rat_pow(F.p(), lev)), lev + 1});
            }
        }
        if (tail_from < W + 1) {
            // sum_{k >= tail_from} ratio(pi)^k q^{-k} = r^{tail_from} / (1 - r)
            ExactScalar r = ratio.at_pi_pow(F, 1) * Rat(1, q);
            ExactScalar rpow = ratio.at_pi_pow(F, tail_from) *
                               ExactScalar::from_rat(q, rat_pow(q, -tail_from));
            term_sum += rpow * (ExactScalar::one(q) - r).inverse();
        } else {
            // no tail: boundary shells must be empty (guard)
            // (checked implicitly: deep shells fail a non-zero-reaching coset)
        }
        total += term.coeff * term_sum;
    }
    ExactScalar pre = mu1.eval(F, det) * F.abs_half(det);
    return pre * total;
}

} // namespace pgz
