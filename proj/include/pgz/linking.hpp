#pragma once

#include "pgz/patches.hpp"

#include <atomic>
#include <map>

namespace pgz {

// instrumentation counters (debug)
extern std::atomic<long> dbg_psi_evals, dbg_inner_runs, dbg_inner_cells, dbg_pair_splits,
    dbg_inner_memo_hits, dbg_split_psi, dbg_split_inner, dbg_region_runs[5];

struct EngineConfig {
    long start_level = 1;   // initial unit-cell refinement
    long max_depth = 40;    // adaptive subdivision cap
    long window_slack = 2;  // extra shells beyond the derived support bound
    long max_window = 40;   // widening cap for truncated directions
};

struct LinkingValue {
    ExactScalar value;
    bool no_preimage = false; // x outside the image of P
    long window_used = 0;     // certificate: final window after widening
};

// Evaluator for <phi, diag(b,1).psi>_x with the quotient measures
//   split:  dy2 dy3 on the NN' chart, dy1 dy4 on the NwN chart,
//   field:  d^x y1 dy2 on the mirabolic chart,
// and the inner T-integral by exact weighted cell summation.  The inner
// integral is cached per (x, y-cell) and reused across translations, so
// b-scans with a fixed x share work.  All results carry cell-wide exactness
// certificates; truncated directions are widened until the outermost shells
// are identically zero.
class LinkingEngine {
public:
    LinkingEngine(const LocalField& F, SchwartzOnG phi, SchwartzOnG psi, EngineConfig cfg = {});

    LinkingValue translated(const Rat& x, const Rat& b);
    LinkingValue linking(const Rat& x) { return translated(x, 1); }

    const LocalField& field() const { return F_; }
    const SchwartzOnG& phi() const { return phi_; }
    const SchwartzOnG& psi() const { return psi_; }

private:
    struct XState {
        GMat gamma;
        bool no_preimage = false;
        std::map<std::string, ExactScalar> inner_memo;
    };
    XState& state_for(const Rat& x);

    ExactScalar translated_split(XState& st, const Rat& x, const Rat& b, long window);
    ExactScalar translated_field(XState& st, const Rat& x, const Rat& b, long window);

    // Inner integral over T at a 2-cell of outer coordinates; value must be
    // decided cell-wide.  Throws SplitRequest{} upwards via EvalOut contract.
    struct InnerResult {
        bool decided;
        ExactScalar value; // if decided
    };
    InnerResult inner_split(XState& st, const std::string& key, const PertMat& y, long window);
    // window is widened by the y-cell's own coordinate sizes
    InnerResult inner_field(XState& st, const std::string& key, const PertMat& y);

    const LocalField& F_;
    SchwartzOnG phi_, psi_;
    EngineConfig cfg_;
    std::map<std::string, XState> xstates_;
    long base_hint_;
};

} // namespace pgz
