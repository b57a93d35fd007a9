#pragma once

#include "pgz/geometry.hpp"
#include "pgz/schwartz.hpp"

#include <memory>
#include <variant>
#include <vector>

namespace pgz {

struct NotFundamental : std::runtime_error {
    NotFundamental() : std::runtime_error("set is not fundamental for this character") {}
};

// Result of evaluating a function on a cell of matrices: either a value valid
// across the whole cell, or a request to refine a variable class.
struct EvalOut {
    enum class Kind { Value, NeedSplit } kind;
    ExactScalar value;          // valid iff kind == Value
    VarClass split_class{};     // valid iff kind == NeedSplit

    static EvalOut val(ExactScalar v) { return {Kind::Value, std::move(v), VarClass::Search}; }
    static EvalOut split(VarClass c) { return {Kind::NeedSplit, ExactScalar(), c}; }
    bool is_value() const { return kind == Kind::Value; }
};

inline std::optional<VarClass> cond_to_split(Cond c) {
    switch (c) {
        case Cond::Split0: return VarClass::Search;
        case Cond::Split1: return VarClass::Inner;
        case Cond::Split2: return VarClass::Outer;
        default: return std::nullopt;
    }
}

// --- patch descriptions ------------------------------------------------

// chi * 1_{T GL2(o)} (requires chi unramified; GL2(o) is fundamental then).
struct MaxCompactPatch {};

// Ball in K: center(1 + p_K^rel_level) for center != 0, or p_K^abs_level.
struct KBall {
    enum class Kind { AroundCenter, ZeroBall } kind;
    KElem center; // used by AroundCenter
    long level;   // relative level (AroundCenter) or absolute v_K bound (ZeroBall)

    static KBall around(KElem c, long rel) { return {Kind::AroundCenter, std::move(c), rel}; }
    static KBall zero_ball(long abs) { return {Kind::ZeroBall, KElem{0, 0}, abs}; }
};

// Norm shell in K: {g2 : N(g2) in n0 (1 + p^n o)}.
struct NormShell {
    Rat n0;
    long n;
};

// Field-case patch in D-coordinates g = g1 + eps g2: g1 constrained by a ball,
// g2 by a ball or a norm shell.  Covers the constructive realization sets.
struct KBallPatch {
    KBall g1;
    std::variant<KBall, NormShell> g2;
};

// Split-case chart patches (canonical chart sections, chi-equivariant by
// construction).
struct ChartPatchNN {
    Coset1D y2, y3;
};
struct ChartPatchNwN {
    Coset1D y1, y4;
};
// Field-case mirabolic chart patch: y1 in F^x coset, y2 in additive coset.
struct MirabolicPatch {
    Coset1D y1, y2;
};

using Patch = std::variant<MaxCompactPatch, KBallPatch, ChartPatchNN, ChartPatchNwN, MirabolicPatch>;

struct PatchTerm {
    ExactScalar coeff;
    Patch patch;
};

// chi-equivariant Schwartz function on G given as a finite list of patches.
struct SchwartzOnG {
    TorusChar chi;
    std::vector<PatchTerm> terms;
    long level = 1; // invariance / window hint

    static SchwartzOnG max_compact(const LocalField& F, TorusChar chi);
};

// --- evaluators ---------------------------------------------------------

// Evaluates chi * 1_{T GL2(o)}; the field case runs an adaptive search over
// torus cosets, the split case uses the row-minimum criterion.
class MaxCompactEvaluator {
public:
    MaxCompactEvaluator(const LocalField& F, TorusChar chi);
    EvalOut eval(const PertMat& g) const;
    ExactScalar eval_exact(const GMat& g, long level = 2) const;

    EvalOut eval_field_search(const PertMat& g) const; // torus-coset search (cross-check path)

private:
    EvalOut eval_split(const PertMat& g) const;
    EvalOut eval_field(const PertMat& g) const;
    const LocalField& F_;
    TorusChar chi_;
};

// Full patch-sum evaluation of phi at a matrix cell.
EvalOut eval_schwartz(const LocalField& F, const SchwartzOnG& phi, const PertMat& g);
ExactScalar eval_schwartz_exact(const LocalField& F, const SchwartzOnG& phi, const GMat& g);

// Window hint: largest coset level / center valuation appearing in phi.
long patch_window_hint(const LocalField& F, const SchwartzOnG& phi);

} // namespace pgz
