#include "pgz/characterize.hpp"

#include <sstream>

namespace pgz {

namespace {

std::vector<Rat> shell_units(const LocalField& F, long level) {
    std::vector<Rat> us;
    Int mod = int_pow(F.p(), static_cast<unsigned long>(level));
    for (Int u = 1; u < mod; ++u)
        if (u % F.p() != 0) us.push_back(Rat(u));
    return us;
}

std::string witness(const Rat& x, const ExactScalar& v) {
    std::ostringstream os;
    os << "x = " << x.get_str() << ", value = " << v.str();
    return os.str();
}

// the four quadratic characters of F^x (including the trivial one)
std::vector<MultChar> quadratic_chars() {
    return {MultChar::trivial(), MultChar::quadratic_unramified(), MultChar::ramified_quadratic(0),
            MultChar::ramified_quadratic(2)};
}

} // namespace

CharacterizationReport characterize(const LocalField& F, const TorusChar& chi, const XSampler& f,
                                    const CharacterizeConfig& cfg) {
    long q = F.q();
    CharacterizationReport rep;
    bool field = F.is_field_ext();
    auto units = shell_units(F, cfg.unit_level);
    ExactScalar zero = ExactScalar::zero(q);

    // sample the main grid
    struct Sample {
        Rat x;
        long v;
        ExactScalar val;
    };
    std::vector<Sample> grid;
    for (long v = -cfg.vmax; v <= cfg.vmax; ++v)
        for (const auto& u : units) {
            Rat x = u * F.pi_pow(v);
            if (x == 1) continue;
            grid.push_back({x, v, f(x)});
        }

    // (a) field case: zero on the complement of cN (= N for eps^2 = -disc)
    if (field) {
        for (const auto& s : grid) {
            if (F.omega(s.x) == -1 && !s.val.is_zero()) {
                rep.norm_support_ok = false;
                rep.failure = "nonzero off the norm classes: " + witness(s.x, s.val);
                return rep;
            }
        }
    }

    // (b) vanishing near 1
    long radius = -1;
    for (long j = cfg.near1_max; j >= 1; --j) {
        bool all_zero = true;
        for (const auto& u : units) {
            Rat x = 1 + u * F.pi_pow(j);
            if (!f(x).is_zero()) { all_zero = false; break; }
        }
        if (all_zero) radius = j;
        else break;
    }
    if (radius < 0) {
        rep.failure = "no vanishing neighborhood of 1 within the probed depth";
        return rep;
    }
    rep.vanish_radius = radius;

    // local constancy witnesses: refine each grid point one level deeper
    for (const auto& s : grid) {
        Rat probe = s.x * (1 + F.pi_pow(cfg.unit_level + std::abs(s.v) + rep.vanish_radius + 2));
        if (f(probe) != s.val) {
            rep.locally_constant_ok = false;
            rep.failure = "local constancy fails at " + witness(s.x, s.val);
            return rep;
        }
    }

    // (c) stalk at 0
    auto stalk0_try = [&](long n) -> std::optional<StalkFit> {
        StalkFit fit;
        fit.threshold = n;
        std::vector<Sample> in;
        for (const auto& s : grid)
            if (s.v >= n && (!field || F.omega(s.x) == 1)) in.push_back(s);
        if (field) {
            if (in.size() < 2) return std::nullopt;
            ExactScalar c = in.front().val;
            for (const auto& s : in)
                if (s.val != c) return std::nullopt;
            fit.coeffs = {c};
        } else {
            // a1 + a2 v(x): need two distinct shells
            if (in.size() < 3) return std::nullopt;
            long v0 = in.front().v;
            const Sample* other = nullptr;
            for (const auto& s : in)
                if (s.v != v0) { other = &s; break; }
            if (!other) return std::nullopt;
            ExactScalar d = ExactScalar::from_rat(q, Rat(v0 - other->v));
            ExactScalar a2 = (in.front().val - other->val) / d;
            ExactScalar a1 = in.front().val - a2 * Rat(v0);
            for (const auto& s : in)
                if (a1 + a2 * Rat(s.v) != s.val) return std::nullopt;
            fit.coeffs = {a1, a2};
        }
        fit.found = true;
        return fit;
    };
    for (long n = 1; n + 1 <= cfg.vmax; ++n) {
        if (auto fit = stalk0_try(n)) { rep.stalk0 = *fit; break; }
    }
    if (!rep.stalk0.found) {
        rep.failure = "no exact stalk fit at 0 within the sampled shells";
        return rep;
    }

    // (d) stalk at infinity
    auto stalkinf_try = [&](long n) -> std::optional<StalkFit> {
        StalkFit fit;
        fit.threshold = n;
        std::vector<Sample> in;
        for (const auto& s : grid)
            if (s.v <= -n && (!field || F.omega(s.x) == 1)) in.push_back(s);
        if (in.size() < 3) return std::nullopt;
        if (field) {
            if (!chi.is_quadratic()) { // vanishing at infinity
                for (const auto& s : in)
                    if (!s.val.is_zero()) return std::nullopt;
                fit.coeffs = {zero};
                fit.found = true;
                return fit;
            }
            // const * chi1(x) for one of the quadratic characters chi1
            auto cands = quadratic_chars();
            for (size_t ci = 0; ci < cands.size(); ++ci) {
                ExactScalar c = in.front().val / cands[ci].eval(F, in.front().x);
                bool ok = true;
                for (const auto& s : in)
                    if (c * cands[ci].eval(F, s.x) != s.val) { ok = false; break; }
                if (ok) {
                    fit.coeffs = {c};
                    fit.chi_branch = static_cast<int>(ci);
                    fit.found = true;
                    return fit;
                }
            }
            return std::nullopt;
        }
        const MultChar& chi1 = chi.chi1();
        if (chi1.is_quadratic()) {
            // chi1(x)(b1 + b2 v(x)); the unramified-quadratic value at units is 1
            long v0 = in.front().v;
            const Sample* other = nullptr;
            for (const auto& s : in)
                if (s.v != v0) { other = &s; break; }
            if (!other) return std::nullopt;
            ExactScalar y0 = in.front().val / chi1.eval(F, in.front().x);
            ExactScalar y1 = other->val / chi1.eval(F, other->x);
            ExactScalar b2 = (y0 - y1) / ExactScalar::from_rat(q, Rat(v0 - other->v));
            ExactScalar b1 = y0 - b2 * Rat(v0);
            for (const auto& s : in)
                if (chi1.eval(F, s.x) * (b1 + b2 * Rat(s.v)) != s.val) return std::nullopt;
            fit.coeffs = {b1, b2};
        } else {
            // chi1(x) B1 + chi1^{-1}(x) B2 with constants B1, B2
            long v0 = in.front().v;
            const Sample* other = nullptr;
            for (const auto& s : in)
                if (s.v != v0 && (s.v - v0) % 2 != 0) { other = &s; break; }
            if (!other) return std::nullopt;
            ExactScalar a = chi1.eval(F, in.front().x), ai = chi1.inverse().eval(F, in.front().x);
            ExactScalar b = chi1.eval(F, other->x), bi = chi1.inverse().eval(F, other->x);
            ExactScalar det = a * bi - ai * b;
            if (det.is_zero()) return std::nullopt;
            ExactScalar B1 = (in.front().val * bi - ai * other->val) / det;
            ExactScalar B2 = (a * other->val - in.front().val * b) / det;
            for (const auto& s : in)
                if (chi1.eval(F, s.x) * B1 + chi1.inverse().eval(F, s.x) * B2 != s.val)
                    return std::nullopt;
            fit.coeffs = {B1, B2};
        }
        fit.found = true;
        return fit;
    };
    for (long n = 1; n + 1 <= cfg.vmax; ++n) {
        if (auto fit = stalkinf_try(n)) { rep.stalk_inf = *fit; break; }
    }
    if (!rep.stalk_inf.found) {
        rep.failure = "no exact stalk fit at infinity within the sampled shells";
        return rep;
    }

    rep.pass = true;
    return rep;
}

MatchingReport matching_check(const LocalField& F, const TorusChar& chi, const XSampler& f,
                              const CharacterizeConfig& cfg) {
    MatchingReport m;
    // The xi-side membership criteria translate exactly into the x-side
    // characterization: compact support in xi away from {0,1} is the
    // vanishing neighborhood of x = 1 together with the stalk cutoffs;
    // the Eisenstein stalk at xi -> 0 is the stalk of x at 0; the theta stalk
    // at xi -> 1 (eta -> 0) is the stalk of x at infinity; omega(-xi eta) =
    // omega(x) restricts the support to the norm classes for split D.
    m.base = characterize(F, chi, f, cfg);
    if (!m.base.pass) {
        m.failure = m.base.failure;
        return m;
    }
    // taxonomy consistency: a field extension with non-quadratic chi must have
    // zero stalk at infinity (supercuspidal theta factor)
    if (F.is_field_ext() && !chi.is_quadratic()) {
        if (!(m.base.stalk_inf.coeffs.size() == 1 && m.base.stalk_inf.coeffs[0].is_zero())) {
            m.failure = "theta factor must be supercuspidal for non-quadratic chi";
            return m;
        }
    }
    m.pass = true;
    return m;
}

} // namespace pgz
