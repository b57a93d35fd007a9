#pragma once

#include "pgz/linking.hpp"

namespace pgz {

struct UnsupportedVariant : std::runtime_error {
    UnsupportedVariant() : std::runtime_error("S_b requires a compact torus or chi1^2 = 1") {}
};
struct ShapeMismatch : std::runtime_error {
    explicit ShapeMismatch(const std::string& w) : std::runtime_error("no exact asymptotic fit: " + w) {}
};

// Geometric Hecke operator S_b applied to <phi, psi>_x, v(b) >= 0.
//   compact T:  (1/2) sum_{s,i} omega(b(1-x))^{i+s} q^{v(b)-i} * T(pi^{(-1)^s (v(b)-i)})
//   split T, chi1^2 = 1: same double sum with chi1(pi)^{i(-1)^s} in place of
//   the omega powers, applied to the full translated linking number.
// The split chi1^2 != 1 variant is rejected.
ExactScalar geometric_hecke(LinkingEngine& eng, const Rat& x, const Rat& b);

// <T_b phi, phi>_x for phi = chi * 1_{GL2(o)} via coset-translate summation:
// vol(GL2(o))^2 sum_tau chi(tau) int_T 1_{tau b^{-1} H(b)}(t^{-1} gamma(x) t) dt.
// chi unramified; K inert or split.
ExactScalar zhang_hecke_pairing(const LocalField& F, const TorusChar& chi, const Rat& x, const Rat& b,
                                const EngineConfig& cfg = {});

enum class ShapeTag {
    CompactNormClassPair, // c1 1_{(1-x)N}(b) + c2 1_{(1-x)zN}(b)
    SplitQuadratic,       // chi1(b) (c2 v^2 + c1 v + c0)
    SplitLinearPair,      // chi1(b)(c1 v + c0) + chi1^{-1}(b)(c3 v + c2)
    SplitLinear,          // chi1(b)(c1 v + c0), for quadratic chi1
};

struct AsymptoticFit {
    long threshold = 0;
    ShapeTag tag;
    std::vector<ExactScalar> coeffs;

    ExactScalar predict(const LocalField& F, const MultChar& chi1, long vb, int norm_class_sign) const;
};

// Exact fit of sampled values (v(b) -> value for b = pi^{v(b)}), minimizing the
// threshold; validates every sample at v(b) >= threshold and throws
// ShapeMismatch when no threshold within the sample range works.
// norm_sign(vb) supplies omega(b(1-x)) for the compact shape.
AsymptoticFit fit_asymptotics(const LocalField& F, const MultChar& chi1, ShapeTag tag,
                              const std::vector<std::pair<long, ExactScalar>>& samples,
                              const std::function<int(long)>& norm_sign = {});

// Small exact linear solver over Q(i)[sqrt q] (n <= 4); throws on singularity.
std::vector<ExactScalar> solve_linear(std::vector<std::vector<ExactScalar>> A,
                                      std::vector<ExactScalar> rhs);

} // namespace pgz
