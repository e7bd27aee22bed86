#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "xmc/cli.hpp"

using namespace xmc;
namespace fs = std::filesystem;

TEST_CASE("bundles")
{
    RunResult r = run_bundle_text(R"({"task":"h-n","group":"C2","module":"Z2-trivial","n":2})");
    CHECK(r.status == Status::Ok);
    CHECK(r.report["result"]["factors"] == json::array({2}));
    RunResult p = run_bundle_text(R"({"task":"validate","xmod":"S3->1"})");
    CHECK(p.status == Status::Violation);
    CHECK(p.report["result"]["issues"][0]["what"].get<std::string>().find("Peiffer") != std::string::npos);
    RunResult m = run_bundle_text("{\"task\":");
    CHECK(m.status == Status::InputError);
    CHECK(exit_code(m.status) == 3);
    RunResult k = run_bundle_text(R"({"task":"h-n","group":"C2","module":"Z2-trivial","n":2,"extra":1})");
    CHECK(k.status == Status::InputError);
    CHECK(k.report["error"].get<std::string>().rfind("/extra", 0) == 0);
    RunResult b = run_bundle_text(R"({"task":"h-n","group":{"order":2,"mul":[[0,1],[1,7]]},"module":"Z2-trivial","n":2})");
    CHECK(b.report["error"].get<std::string>().rfind("/group/mul", 0) == 0);
    CHECK(run_bundle_text(R"({"task":"lemma"})").status == Status::InputError);
    RunResult res = run_bundle_text(R"({"task":"h1","group":"C2xC2","xmod":"1->S3","budget":5})");
    CHECK(res.status == Status::ResourceError);
    CHECK(exit_code(res.status) == 2);
}

TEST_CASE("replay determinism")
{
    const std::string text = R"({"task":"unitary-check","seed":3,"checks":{"exp_pairs":50,"hom_pairs":20,"su_samples":20,"sandwich_pairs":20,"conj_samples":20,"max_n":3}})";
    CHECK(dump_report(run_bundle_text(text).report) == dump_report(run_bundle_text(text).report));
    RunOverrides ov;
    ov.seed = 4;
    CHECK(run_bundle_text(text, ov).report["provenance"]["seed"] == 4);
}

TEST_CASE("golden verification")
{
    fs::path dir = fs::temp_directory_path() / "xmc_golden_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    RunResult empty = golden_verify(dir.string());
    CHECK(empty.status == Status::Ok);
    CHECK(empty.report["result"]["cases"] == 0);
    const std::string bundle = R"({"task":"h-n","group":"C2","module":"Z2-trivial","n":2})";
    std::ofstream(dir / "a.bundle.json") << bundle;
    CHECK(golden_verify(dir.string()).status == Status::InputError);
    std::string good = dump_report(run_bundle_text(bundle).report);
    std::ofstream(dir / "a.expected.json") << good;
    CHECK(golden_verify(dir.string()).status == Status::Ok);
    std::string bad = good;
    bad.replace(bad.find("\"n\": 2"), 6, "\"n\": 3");
    std::ofstream(dir / "a.expected.json") << bad;
    RunResult drift = golden_verify(dir.string());
    CHECK(drift.status == Status::Violation);
    std::string diff = drift.report["result"]["drift"][0]["diff"];
    CHECK(diff.find("-    \"n\": 3,") != std::string::npos);
    CHECK(diff.find("+    \"n\": 2,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("command line exit codes")
{
    std::string cli = XMC_CLI;
    fs::path tmp = fs::temp_directory_path() / "xmc_cli_test.json";
    std::ofstream(tmp) << "{not json";
    int rc = std::system((cli + " --quiet --bundle " + tmp.string() + " --out /dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 3);
    std::ofstream(tmp) << R"({"task":"validate","xmod":"S3->1"})";
    rc = std::system((cli + " --quiet --bundle " + tmp.string() + " --out /dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 1);
    std::ofstream(tmp) << R"({"task":"h-n","group":"C2","module":"Z2-trivial","n":2})";
    rc = std::system((cli + " --quiet --bundle " + tmp.string() + " --out /dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    fs::remove(tmp);
}
