#pragma once

#include "pgz/characterize.hpp"
#include "pgz/hecke.hpp"
#include "pgz/realize.hpp"
#include "pgz/whittaker.hpp"

#include <iosfwd>

namespace pgz {

struct RunConfig {
    long p = 3;
    ExtKind ext = ExtKind::Inert;
    std::optional<long> A;              // inert parameter override
    std::string chi = "trivial";        // trivial | quadratic | i
    long level = 2;
    long xwin = 3;                      // |v(x)| <= xwin
    long bwin = 4;                      // 0 <= v(b) <= bwin (shape scans use +-2*bwin)
    std::string format = "json";        // json | csv
    std::string out;                    // output path; empty = stdout
    int jobs = 1;
    unsigned seed = 20240811;
};

struct SuitePoint {
    std::string inputs;
    ExactScalar engine, oracle, diff;
    bool ok = true;
};

struct SuiteResult {
    std::string suite;
    bool pass = false;
    std::vector<SuitePoint> points;
    std::vector<std::pair<std::string, ExactScalar>> fitted_constants;
    std::vector<std::string> notes;
};

// registered suites: one per acceptance criterion (c1 .. c13)
std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

// grid scans of engine quantities; deterministic row order
struct ScanRow {
    std::string inputs;
    ExactScalar value;
};
std::vector<ScanRow> scan(const std::string& quantity, const RunConfig& cfg);

// serialization: exact scalars as four rational strings plus an advisory
// decimal; identical configs give byte-identical output
void write_suite_result(std::ostream& os, const SuiteResult& r, const std::string& format);
void write_scan(std::ostream& os, const std::vector<ScanRow>& rows, const std::string& format);

} // namespace pgz
