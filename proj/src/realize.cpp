#include "pgz/realize.hpp"

namespace pgz {

namespace {

long ceil_div2(long a) { return (a >= 0 ? a + 1 : a) / 2; }

} // namespace

Realization realize_as_linking_number(const LocalField& F, const TorusChar& chi,
                                      const RealizeTarget& target, const EngineConfig& cfg) {
    if (!F.is_field_ext()) throw UnsupportedRealization();
    long q = F.q();
    bool inert = F.kind() == ExtKind::Inert;
    ExactScalar zero = ExactScalar::zero(q);

    // validate the target against the characterizing properties
    if (!target.a1.is_zero() && !chi.is_quadratic())
        throw InvalidTarget("nonzero stalk at infinity needs a quadratic chi");
    for (const auto& s : target.steps) {
        if (s.x == 0 || s.n < 1) throw InvalidTarget("step with x = 0 or level < 1");
        if (!F.is_norm(s.x) && !s.value.is_zero())
            throw InvalidTarget("nonzero step off the norm classes");
        if (target.n0 > 0 && F.val(s.x) >= target.n0)
            throw InvalidTarget("step inside the zero-stalk region");
        if (target.n1 > 0 && F.val(s.x) <= -target.n1)
            throw InvalidTarget("step inside the infinity-stalk region");
    }
    for (size_t i = 0; i < target.steps.size(); ++i)
        for (size_t j = i + 1; j < target.steps.size(); ++j) {
            const auto& a = target.steps[i];
            const auto& b = target.steps[j];
            long lev = std::min(a.n, b.n);
            if (a.x != 0 && F.val(b.x / a.x - 1) >= lev)
                throw InvalidTarget("overlapping step sets");
        }

    // levels: inert halves the depths through the norm, ramified doubles them
    long n0 = target.n0, n1 = target.n1;
    if (inert) {
        if (n0 % 2 != 0) n0 += 1; // p^{n0} and p^{n0+1} meet the norms equally
        if (n1 % 2 != 0) n1 += 1;
    }
    long nt0 = n0 > 0 ? (inert ? n0 / 2 : n0) : 1;
    long nt1 = n1 > 0 ? (inert ? n1 / 2 : n1) : 1;
    auto step_level = [&](long n) { return inert ? n : 2 * n; };

    long k = std::max<long>({1, nt0, nt1});
    long m = std::max<long>({2, nt0 + 1, nt1 + 1});
    std::vector<long> vkg; // v_K(gamma_j)
    for (const auto& s : target.steps) {
        long nt = step_level(s.n);
        long vx = F.val(s.x);
        long vkj = inert ? vx / 2 : vx;
        vkg.push_back(vkj);
        k = std::max(k, nt);
        m = std::max<long>({m, nt + 1, 1 - vkj + (inert ? -vx / 2 : -vx) + 1,
                            nt + 1 + std::abs(inert ? ceil_div2(std::abs(vx)) : vx)});
    }

    KElem sqrtD{Rat(0), Rat(1)};
    long vk_sqrtD = k_val(F, sqrtD); // 0 inert, 1 ramified
    long vk_c = inert ? 0 : 2;       // v_K(-disc)

    SchwartzOnG psi;
    psi.chi = chi;
    psi.terms.push_back({ExactScalar::one(q), KBallPatch{KBall::around(KElem::one(), k),
                                                         KBall::zero_ball(m)}});
    psi.level = std::max(k, m);

    SchwartzOnG phi;
    phi.chi = chi;
    phi.level = std::max(k, m);

    struct Piece {
        Patch patch;
        Rat sample_x;       // reference point inside the piece's region
        ExactScalar value;  // target value at the reference point
    };
    std::vector<Piece> pieces;

    for (size_t j = 0; j < target.steps.size(); ++j) {
        const auto& s = target.steps[j];
        if (s.value.is_zero()) continue;
        long nt = step_level(s.n);
        long k1 = std::min(k, vk_c + vkg[j] + m - vk_sqrtD);
        pieces.push_back({KBallPatch{KBall::around(sqrtD, k1), NormShell{s.x, s.n}}, s.x, s.value});
    }
    if (n0 > 0 && !target.a0.is_zero()) {
        Rat x0 = F.pi_pow(n0);
        if (!F.is_norm(x0)) x0 = x0 * F.pi_pow(1); // pick a norm representative
        pieces.push_back({KBallPatch{KBall::around(sqrtD, k), KBall::zero_ball(nt0)}, x0, target.a0});
    }
    Rat xinf = 0;
    std::optional<MultChar> inf_pattern;
    if (n1 > 0 && !target.a1.is_zero()) {
        xinf = F.pi_pow(-n1 - (inert ? 2 : 1));
        if (!F.is_norm(xinf)) xinf = xinf * F.pi_pow(-1);
        long j1 = std::min(nt1 + vk_sqrtD, vk_c + m);
        pieces.push_back({KBallPatch{KBall::zero_ball(j1), NormShell{Rat(1), k}}, xinf, target.a1});
    }

    // normalize each piece by its raw linking value at the reference point
    for (const auto& pc : pieces) {
        SchwartzOnG unit;
        unit.chi = chi;
        unit.terms.push_back({ExactScalar::one(q), pc.patch});
        unit.level = phi.level;
        LinkingEngine eng(F, unit, psi, cfg);
        ExactScalar raw = eng.linking(pc.sample_x).value;
        if (raw.is_zero()) throw std::logic_error("realization: reference value vanished");
        phi.terms.push_back({pc.value / raw, pc.patch});
    }
    if (phi.terms.empty())
        phi.terms.push_back({zero, KBallPatch{KBall::around(sqrtD, k), KBall::zero_ball(m)}});

    // detect the infinity pattern chi1(x) from the realized function itself
    if (n1 > 0 && !target.a1.is_zero()) {
        if (chi.is_trivial()) {
            inf_pattern = MultChar::trivial();
        } else {
            LinkingEngine probe(F, phi, psi, cfg);
            Rat x2 = xinf * F.pi_pow(inert ? -2 : -1);
            for (long u = 1; u < q && !F.is_norm(x2); ++u) x2 = Rat(u + 1) * xinf * F.pi_pow(-1);
            ExactScalar v2 = probe.linking(x2).value;
            for (const MultChar& cand :
                 {MultChar::trivial(), MultChar::quadratic_unramified(),
                  MultChar::ramified_quadratic(0), MultChar::ramified_quadratic(2)}) {
                if (target.a1 * cand.eval(F, x2) / cand.eval(F, xinf) == v2) {
                    inf_pattern = cand;
                    break;
                }
            }
            if (!inf_pattern) throw std::logic_error("realization: no quadratic infinity pattern");
        }
    }

    RealizeTarget tgt = target;
    const LocalField* FF = &F;
    auto target_fn = [FF, tgt, n0, n1, xinf, inf_pattern, q](const Rat& x) {
        if (x == 0 || !FF->is_norm(x)) return ExactScalar::zero(q);
        for (const auto& s : tgt.steps)
            if (FF->val(x / s.x - 1) >= s.n) return s.value;
        if (tgt.n0 > 0 && FF->val(x) >= tgt.n0 && n0 > 0) return tgt.a0;
        if (tgt.n1 > 0 && FF->val(x) <= -tgt.n1 && n1 > 0 && inf_pattern) {
            ExactScalar pat = inf_pattern->eval(*FF, x) / inf_pattern->eval(*FF, xinf);
            return tgt.a1 * pat;
        }
        return ExactScalar::zero(q);
    };

    Realization out;
    out.phi = std::move(phi);
    out.psi = std::move(psi);
    out.k = k;
    out.m = m;
    out.target = target_fn;
    return out;
}

} // namespace pgz
