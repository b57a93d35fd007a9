#pragma once

#include "pgz/linking.hpp"

namespace pgz {

struct InvalidTarget : std::runtime_error {
    explicit InvalidTarget(const std::string& w) : std::runtime_error("invalid target: " + w) {}
};
struct UnsupportedRealization : std::runtime_error {
    UnsupportedRealization() : std::runtime_error("realization construction requires a field K") {}
};

// Step function plus stalk data to be realized as a local linking number
// (field case).  The target function is
//   H(x) = 1_{cN}(x) [ a0 1_{p^{n0}}(x) + a1 chi1(x)/chi1(x*) 1_{F \ p^{-n1}}(x)
//            + sum_j value_j 1_{x_j(1+p^{n_j})}(x) ],
// where chi1 is the quadratic pattern attached to chi (constant for chi = 1)
// and x* is the reference point p^{-n1'} of the infinity stalk.
struct RealizeTarget {
    struct Step {
        Rat x;
        ExactScalar value;
        long n;
    };
    std::vector<Step> steps;
    ExactScalar a0;
    long n0 = 0; // 0: no zero-stalk piece
    ExactScalar a1;
    long n1 = 0; // 0: no infinity-stalk piece
};

struct Realization {
    SchwartzOnG phi;
    SchwartzOnG psi;
    // the realized target as a directly evaluable function
    std::function<ExactScalar(const Rat&)> target;
    long k = 0, m = 0; // chosen fundamental-domain parameters
};

Realization realize_as_linking_number(const LocalField& F, const TorusChar& chi,
                                      const RealizeTarget& target, const EngineConfig& cfg = {});

} // namespace pgz
