#include "pgz/hecke.hpp"

#include <deque>
#include <functional>

namespace pgz {

ExactScalar geometric_hecke(LinkingEngine& eng, const Rat& x, const Rat& b) {
    const LocalField& F = eng.field();
    if (F.val(b) < 0) throw std::invalid_argument("geometric_hecke: v(b) >= 0");
    long q = F.q();
    long vb = F.val(b);
    bool split = F.kind() == ExtKind::Split;
    const TorusChar& chi = eng.phi().chi;
    if (split && !chi.chi1().is_quadratic()) throw UnsupportedVariant();

    ExactScalar sum = ExactScalar::zero(q);
    int om = split ? 1 : F.omega(b * (1 - x));
    for (int s = 0; s <= 1; ++s) {
        for (long i = 0; i <= vb; ++i) {
            long e = (s == 0) ? (vb - i) : -(vb - i);
            ExactScalar t = eng.translated(x, F.pi_pow(e)).value;
            if (t.is_zero()) continue;
            ExactScalar w = ExactScalar::from_rat(q, rat_pow(q, vb - i)); // |pi^{v(b)-i}|^{-1}
            if (split) {
                long ce = (s == 0) ? i : -i; // chi1^{-1}(pi)^{i(-1)^s}, quadratic chi1
                w = w * chi.chi1().inverse().at_pi_pow(F, ce);
            } else if (om == -1 && (i + s) % 2 == 1) {
                w = -w;
            }
            sum += w * t;
        }
    }
    return sum * Rat(1, 2);
}

namespace {

// tau-sum pairing for split K; exact shell counting (all membership conditions
// are monomial in a, so each valuation shell is all-in or all-out).
ExactScalar zhang_split(const LocalField& F, const MultChar& chi1, const Rat& x, const Rat& b,
                        const EngineConfig& cfg) {
    long q = F.q();
    if (x == 1) return ExactScalar::zero(q);
    GMat gamma = tracefree_lift(F, x, F.default_depth());
    long vb = F.val(b), v1x = F.val(1 - x), vx = F.val(x);
    ExactScalar total = ExactScalar::zero(q);

    long j2lo = std::min({v1x, vb, 0L}) - cfg.window_slack;
    long j2hi = std::max({v1x, vb, 0L}) + cfg.window_slack;
    long W = std::abs(vb) + std::abs(vx) + std::abs(v1x) + 4;
    for (long j2 = j2lo; j2 <= j2hi; ++j2) {
        long j1 = vb + v1x - j2;
        GMat tau = GMat::diag(F.pi_pow(j1), F.pi_pow(j2));
        long count = 0;
        bool boundary = false;
        for (long k = -W; k <= W; ++k) {
            Rat a = F.pi_pow(k);
            GMat g{-1, x / a, -a, 1}; // t^{-1} gamma(x) t
            (void)gamma;
            if (in_tau_Hb(F, g, tau, b)) {
                ++count;
                if (k <= -W + 1 || k >= W - 1) boundary = true;
                if (j2 <= j2lo + 1 || j2 >= j2hi - 1) boundary = true;
            }
        }
        if (boundary) throw std::logic_error("zhang pairing: enumeration window too small");
        if (count == 0) continue;
        total += chi1.at_pi_pow(F, j1 - j2) * Rat(count);
    }
    return total; // vol(GL2(o))^2 vol^x(o^x) = 1
}

ExactScalar zhang_inert(const LocalField& F, const Rat& x, const Rat& b, const EngineConfig& cfg) {
    long q = F.q();
    if (!F.is_norm(x)) return ExactScalar::zero(q);
    GMat gamma = tracefree_lift(F, x, F.default_depth() + 2 * std::abs(F.val(x)) + 8);
    long vb = F.val(b);
    long vdet = F.val(gamma.det());
    if ((vb + vdet) % 2 != 0) return ExactScalar::zero(q);
    long j = (vb + vdet) / 2;

    // integrate the H(b)-membership indicator over the compact torus
    const Rat D = F.disc();
    ExactScalar total = ExactScalar::zero(q);
    struct TCell {
        int chart;
        Rat rep;
        long lev;
    };
    std::deque<TCell> work;
    work.push_back({1, Rat(0), 0});
    work.push_back({2, Rat(0), 1});
    Rat density2 = F.kind() == ExtKind::Inert ? Rat(1) : Rat(q);
    while (!work.empty()) {
        TCell tc = work.front();
        work.pop_front();
        if (tc.lev > cfg.max_depth) throw std::logic_error("zhang pairing: refinement overflow");
        PertScalar var = PertScalar::cell(F, tc.rep, tc.lev, VarClass::Inner);
        PertMat t;
        if (tc.chart == 1) {
            t.m[0] = PertScalar::exact(F, 1);
            t.m[1] = var * PertScalar::exact(F, D);
            t.m[2] = var;
            t.m[3] = PertScalar::exact(F, 1);
        } else {
            t.m[0] = var;
            t.m[1] = PertScalar::exact(F, D);
            t.m[2] = PertScalar::exact(F, 1);
            t.m[3] = var;
        }
        t.det_hint = t.m[0] * t.m[3] - t.m[1] * t.m[2];
        PertScalar dt = t.det();
        Cond dk = cond_val_known(dt);
        auto refine = [&] {
            for (long d = 0; d < F.q(); ++d)
                work.push_back({tc.chart, tc.rep + Rat(d) * rat_pow(F.p(), tc.lev), tc.lev + 1});
        };
        if (dk != Cond::True) { refine(); continue; }
        // b p^{-j} t^{-1} gamma t in M2(o), det condition holds by the choice
        // of j; entries: v(b) - j + v((adj t * gamma * t)_i) - v(det t) >= 0.
        PertMat gm;
        gm.m[0] = PertScalar::exact(F, gamma.a);
        gm.m[1] = PertScalar::exact(F, gamma.b);
        gm.m[2] = PertScalar::exact(F, gamma.c);
        gm.m[3] = PertScalar::exact(F, gamma.d);
        gm.det_hint = PertScalar::exact(F, gamma.det());
        PertMat m = (t.adj() * gm) * t;
        long need = dt.vrep() + j - vb;
        bool ok = true, undecided = false;
        for (int i = 0; i < 4 && ok; ++i) {
            Cond c = cond_val_ge(m.m[i], need);
            if (c == Cond::False) ok = false;
            else if (c != Cond::True) { undecided = true; break; }
        }
        if (undecided) { refine(); continue; }
        if (!ok) continue;
        Rat w = rat_pow(q, -tc.lev);
        if (tc.chart == 2) w *= density2;
        total += ExactScalar::from_rat(q, w);
    }
    return total; // vol(GL2(o))^2 = 1, chi = 1
}

} // namespace

ExactScalar zhang_hecke_pairing(const LocalField& F, const TorusChar& chi, const Rat& x, const Rat& b,
                                const EngineConfig& cfg) {
    if (F.val(b) < 0) throw std::invalid_argument("zhang_hecke_pairing: v(b) >= 0");
    if (x == 0) throw std::domain_error("zhang_hecke_pairing: x != 0");
    if (F.kind() == ExtKind::Split) {
        if (!chi.is_split() || !chi.chi1().is_unramified()) throw NotFundamental();
        return zhang_split(F, chi.chi1(), x, b, cfg);
    }
    if (!chi.is_trivial()) throw NotFundamental();
    return zhang_inert(F, x, b, cfg);
}

std::vector<ExactScalar> solve_linear(std::vector<std::vector<ExactScalar>> A,
                                      std::vector<ExactScalar> rhs) {
    size_t n = rhs.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::domain_error("solve_linear: singular system");
        std::swap(A[piv], A[col]);
        std::swap(rhs[piv], rhs[col]);
        ExactScalar inv = A[col][col].inverse();
        for (size_t j = col; j < n; ++j) A[col][j] = A[col][j] * inv;
        rhs[col] = rhs[col] * inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col].is_zero()) continue;
            ExactScalar f = A[r][col];
            for (size_t j = col; j < n; ++j) A[r][j] = A[r][j] - f * A[col][j];
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }
    return rhs;
}

ExactScalar AsymptoticFit::predict(const LocalField& F, const MultChar& chi1, long vb,
                                   int norm_class_sign) const {
    long q = F.q();
    ExactScalar v = ExactScalar::from_rat(q, Rat(vb));
    switch (tag) {
        case ShapeTag::CompactNormClassPair:
            return norm_class_sign == 1 ? coeffs[0] : coeffs[1];
        case ShapeTag::SplitQuadratic:
            return chi1.at_pi_pow(F, vb) * (coeffs[2] * v * v + coeffs[1] * v + coeffs[0]);
        case ShapeTag::SplitLinearPair:
            return chi1.at_pi_pow(F, vb) * (coeffs[1] * v + coeffs[0]) +
                   chi1.inverse().at_pi_pow(F, vb) * (coeffs[3] * v + coeffs[2]);
        case ShapeTag::SplitLinear:
            return chi1.at_pi_pow(F, vb) * (coeffs[1] * v + coeffs[0]);
    }
    return ExactScalar::zero(q);
}

AsymptoticFit fit_asymptotics(const LocalField& F, const MultChar& chi1, ShapeTag tag,
                              const std::vector<std::pair<long, ExactScalar>>& samples,
                              const std::function<int(long)>& norm_sign) {
    long q = F.q();
    size_t unknowns = 4;
    if (tag == ShapeTag::CompactNormClassPair || tag == ShapeTag::SplitLinear) unknowns = 2;
    if (tag == ShapeTag::SplitQuadratic) unknowns = 3;
    if (samples.size() < 2 * unknowns)
        throw std::invalid_argument("fit_asymptotics: need at least 2x the coefficient count");

    auto try_threshold = [&](long n) -> std::optional<AsymptoticFit> {
        std::vector<std::pair<long, ExactScalar>> in;
        for (const auto& s : samples)
            if (s.first >= n) in.push_back(s);
        if (in.size() < 2 * unknowns) return std::nullopt;
        AsymptoticFit fit;
        fit.threshold = n;
        fit.tag = tag;
        if (tag == ShapeTag::CompactNormClassPair) {
            std::optional<ExactScalar> c1, c2;
            for (const auto& s : in) {
                int sign = norm_sign(s.first);
                if (sign == 1 && !c1) c1 = s.second;
                if (sign == -1 && !c2) c2 = s.second;
            }
            fit.coeffs = {c1.value_or(ExactScalar::zero(q)), c2.value_or(ExactScalar::zero(q))};
        } else {
            std::vector<std::vector<ExactScalar>> A;
            std::vector<ExactScalar> rhs;
            for (size_t i = 0; i < unknowns; ++i) {
                long vb = in[i].first;
                ExactScalar v = ExactScalar::from_rat(q, Rat(vb));
                std::vector<ExactScalar> row;
                if (tag == ShapeTag::SplitQuadratic) {
                    ExactScalar c = chi1.at_pi_pow(F, vb);
                    row = {c, c * v, c * v * v};
                } else if (tag == ShapeTag::SplitLinear) {
                    ExactScalar c = chi1.at_pi_pow(F, vb);
                    row = {c, c * v};
                } else {
                    ExactScalar c = chi1.at_pi_pow(F, vb), ci = chi1.inverse().at_pi_pow(F, vb);
                    row = {c, c * v, ci, ci * v};
                }
                A.push_back(row);
                rhs.push_back(in[i].second);
            }
            try {
                fit.coeffs = solve_linear(A, rhs);
            } catch (const std::domain_error&) {
                return std::nullopt;
            }
        }
        for (const auto& s : in) {
            int sign = norm_sign ? norm_sign(s.first) : 1;
            if (fit.predict(F, chi1, s.first, sign) != s.second) return std::nullopt;
        }
        return fit;
    };

    long max_n = samples.back().first;
    for (long n = samples.front().first; n + 2 * static_cast<long>(unknowns) <= max_n + 1; ++n) {
        if (auto fit = try_threshold(n)) return *fit;
    }
    throw ShapeMismatch("no threshold admits an exact fit on the sampled shells");
}

} // namespace pgz
