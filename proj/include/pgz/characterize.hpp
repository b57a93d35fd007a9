#pragma once

#include "pgz/character.hpp"

#include <functional>
#include <vector>

namespace pgz {

// Sampled function of x in F^x (a linking number or a scaled Whittaker
// product); evaluation must be exact.
using XSampler = std::function<ExactScalar(const Rat&)>;

struct CharacterizeConfig {
    long vmax = 4;        // shells |v(x)| <= vmax
    long unit_level = 1;  // unit refinement of each shell
    long near1_max = 4;   // probe x in 1 + p^j up to j = near1_max
};

struct StalkFit {
    bool found = false;
    long threshold = 0;
    std::vector<ExactScalar> coeffs;
    int chi_branch = 0; // stalk-at-infinity: index of the matching quadratic character
};

// Verification of the four characterizing properties of local linking
// numbers, with exact stalk fits and counterexample witnesses.
struct CharacterizationReport {
    bool pass = false;
    std::string failure; // first violated property, with a witness

    bool norm_support_ok = true; // field case: zero off cN
    long vanish_radius = -1;     // zero on 1 + p^r
    bool locally_constant_ok = true;
    StalkFit stalk0, stalk_inf;
};

CharacterizationReport characterize(const LocalField& F, const TorusChar& chi, const XSampler& f,
                                    const CharacterizeConfig& cfg = {});

// Whittaker-product membership of xi -> |xi eta|^{1/2} f(x(xi)): compact
// support away from {0,1}, the taxonomy-correct stalk shapes at xi -> 0 and
// xi -> 1, and the omega(-xi eta) support restriction for split D.
struct MatchingReport {
    bool pass = false;
    std::string failure;
    CharacterizationReport base;
};

MatchingReport matching_check(const LocalField& F, const TorusChar& chi, const XSampler& f,
                              const CharacterizeConfig& cfg = {});

} // namespace pgz
