#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "xmc/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Crossed-module cohomology, obstructions, nerves and unitary checks"};
    std::string bundle, out, golden;
    std::uint64_t seed = 0;
    double budget = 0;
    bool quiet = false;
    auto* b = app.add_option("--bundle", bundle, "problem bundle (JSON file, - for stdin)");
    app.add_option("--out", out, "write the report here instead of stdout");
    auto* s = app.add_option("--seed", seed, "master seed");
    auto* bu = app.add_option("--budget", budget, "enumeration budget");
    auto* g = app.add_option("--golden", golden, "re-verify every bundle in a directory");
    app.add_flag("--quiet", quiet, "no summary line on stderr");
    b->excludes(g);
    CLI11_PARSE(app, argc, argv);
    if (bundle.empty() && golden.empty()) {
        std::cerr << app.help();
        return 3;
    }

    xmc::RunOverrides ov;
    if (*s) ov.seed = seed;
    if (*bu) ov.budget = budget;
    xmc::RunResult r;
    if (!golden.empty()) {
        r = xmc::golden_verify(golden, ov);
    } else {
        std::ostringstream text;
        if (bundle == "-") {
            text << std::cin.rdbuf();
        } else {
            std::ifstream in(bundle, std::ios::binary);
            if (!in) {
                r = xmc::run_bundle_text("", ov);
                r.report["error"] = "cannot read " + bundle;
            }
            text << in.rdbuf();
        }
        if (r.report.is_null()) r = xmc::run_bundle_text(text.str(), ov);
    }

    std::string dumped = xmc::dump_report(r.report);
    if (out.empty()) {
        std::cout << dumped;
    } else {
        std::ofstream o(out, std::ios::binary);
        o << dumped;
        if (!o) {
            std::cerr << "cannot write " << out << "\n";
            return 3;
        }
    }
    if (!quiet) {
        std::cerr << r.summary << "\n";
        if (r.report.contains("result") && r.report["result"].contains("drift")) {
            for (const auto& d : r.report["result"]["drift"]) std::cerr << d["diff"].get<std::string>();
        }
    }
    return xmc::exit_code(r.status);
}
