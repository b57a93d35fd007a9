// Batch verification harness and computation front-end for the exact local
// linking number engine.  Suites are keyed to the closed-form identities they
// reproduce; scans emit machine-readable tables of exact values.
#include "pgz/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

using namespace pgz;

namespace {

int apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open config file: " << path << "\n";
        return 2;
    }
    nlohmann::json j;
    in >> j;
    if (j.contains("p")) cfg.p = j["p"].get<long>();
    if (j.contains("ext")) {
        std::string e = j["ext"].get<std::string>();
        cfg.ext = e == "split" ? ExtKind::Split : e == "ramified" ? ExtKind::Ramified : ExtKind::Inert;
    }
    if (j.contains("A")) cfg.A = j["A"].get<long>();
    if (j.contains("chi")) cfg.chi = j["chi"].get<std::string>();
    if (j.contains("level")) cfg.level = j["level"].get<long>();
    if (j.contains("xwin")) cfg.xwin = j["xwin"].get<long>();
    if (j.contains("bwin")) cfg.bwin = j["bwin"].get<long>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
    return 0;
}

std::ostream* open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return &std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return &file;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact local linking numbers, Hecke operators and Whittaker products"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string ext = "inert", config_file;
    long A = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "odd prime residue field size");
        sub->add_option("--ext", ext, "quadratic algebra kind")->check(CLI::IsMember({"split", "inert", "ramified"}));
        sub->add_option("--A", A, "inert non-residue parameter");
        sub->add_option("--chi", cfg.chi, "character selection")->check(CLI::IsMember({"trivial", "quadratic", "i"}));
        sub->add_option("--level", cfg.level, "unit refinement level");
        sub->add_option("--xwin", cfg.xwin, "|v(x)| window");
        sub->add_option("--bwin", cfg.bwin, "v(b) window");
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--jobs", cfg.jobs, "worker threads");
        sub->add_option("--seed", cfg.seed, "random seed for property suites");
        sub->add_option("--config", config_file, "JSON config file (flags override)");
    };

    auto* verify = app.add_subcommand("verify", "run named verification suites");
    std::vector<std::string> suites;
    verify->add_option("suites", suites, "suite names (default: all)");
    add_common(verify);

    auto* scan_cmd = app.add_subcommand("scan", "tabulate a quantity over a grid");
    std::string quantity;
    scan_cmd->add_option("quantity", quantity, "lln | lln-translated | sb | tb | whittaker-product")
        ->required();
    add_common(scan_cmd);

    auto* realize_cmd = app.add_subcommand("realize", "realize a random admissible target");
    add_common(realize_cmd);

    auto* list_cmd = app.add_subcommand("list", "list registered suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!config_file.empty()) {
            int rc = apply_config_file(config_file, cfg);
            if (rc != 0) return rc;
            // re-parse so that command line flags override the file
            app.clear();
            app.parse(argc, argv);
        }
        cfg.ext = ext == "split" ? ExtKind::Split : ext == "ramified" ? ExtKind::Ramified : ExtKind::Inert;
        if (A != 0) cfg.A = A;

        if (list_cmd->parsed()) {
            for (const auto& n : suite_names()) std::cout << n << "\n";
            return 0;
        }
        if (scan_cmd->parsed()) {
            auto rows = scan(quantity, cfg);
            std::ofstream file;
            std::ostream* os = open_output(cfg.out, file);
            write_scan(*os, rows, cfg.format);
            return 0;
        }
        if (realize_cmd->parsed()) {
            RunConfig rc = cfg;
            rc.jobs = 1;
            SuiteResult r = run_suite("c5-realization", rc);
            std::ofstream file;
            std::ostream* os = open_output(cfg.out, file);
            write_suite_result(*os, r, cfg.format);
            return r.pass ? 0 : 1;
        }
        // verify
        if (suites.empty()) suites = suite_names();
        bool all_pass = true;
        std::ofstream file;
        std::ostream* os = open_output(cfg.out, file);
        for (const auto& name : suites) {
            auto t0 = std::chrono::steady_clock::now();
            SuiteResult r = run_suite(name, cfg);
            auto t1 = std::chrono::steady_clock::now();
            write_suite_result(*os, r, cfg.format);
            std::cerr << r.suite << (r.pass ? " PASS" : " FAIL") << "  ("
                      << std::chrono::duration<double>(t1 - t0).count() << "s, "
                      << r.points.size() << " points)\n";
            if (!r.pass) all_pass = false;
        }
        return all_pass ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
