#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "acmlab/catalog.hpp"

using namespace acmlab;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

// Runs the CLI with `args`; stdout is captured, stderr is folded in when `merge`.
CliRun run(const std::string& args, bool merge = false, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string(ACMLAB_CLI) + " " + args +
                            (merge ? " 2>&1" : " 2>/dev/null");
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path temp_dir() {
    const fs::path d = fs::temp_directory_path() / "acmlab_cli_test";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST(Cli, CatalogList) {
    const CliRun r = run("catalog-list");
    EXPECT_EQ(r.code, 0);
    for (const std::string& name : catalog_names()) EXPECT_NE(r.out.find(name), std::string::npos) << name;
}

TEST(Cli, ClassifyCatalogModel) {
    const CliRun r = run("classify --catalog hyperbolic --params n=2,c=1,k1=1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"type\": \"C5\""), std::string::npos);
    EXPECT_NE(r.out.find("\"harmonic_structure\": true"), std::string::npos);
}

TEST(Cli, ClassifyModelFile) {
    const fs::path good = temp_dir() / "good.json";
    write_spec_file(catalog_spec("heisenberg", {{"n", 2}}), good.string());
    const CliRun r = run("classify --model " + good.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"type\": \"C6\""), std::string::npos);
}

TEST(Cli, NonUnitReebVectorIsAValidationError) {
    ModelSpec s = catalog_spec("heisenberg", {{"n", 1}});
    s.zeta = 2.0 * s.zeta;
    const fs::path bad = temp_dir() / "bad.json";
    write_spec_file(s, bad.string());
    const CliRun r = run("classify --model " + bad.string(), true);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("validation error at zeta"), std::string::npos) << r.out;
}

TEST(Cli, MalformedInputsNameTheField) {
    const fs::path bad = temp_dir() / "malformed.json";
    std::ofstream(bad) << R"({"n": 1, "c": [{"i": 1, "j": 2, "k": 9, "value": 1}], "phi": [[0,-1,0],[1,0,0],[0,0,0]]})";
    CliRun r = run("classify --model " + bad.string(), true);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("validation error at c[0].k"), std::string::npos) << r.out;

    r = run("classify --catalog hyperbolic --params n=2,c=1,k1=0.6,k5=0.6", true);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("validation error at params.k"), std::string::npos) << r.out;

    r = run("classify --model " + (temp_dir() / "missing.json").string(), true);
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, StrictExitsThreeOnIdentityFailure) {
    EXPECT_EQ(run("classify --catalog heisenberg --params n=2 --strict").code, 3);
    EXPECT_EQ(run("classify --catalog flat-cosymplectic --params n=2 --strict").code, 0);
    EXPECT_EQ(run("verify --catalog heisenberg --params n=2 --strict").code, 3);
    EXPECT_EQ(run("verify --catalog heisenberg --params n=2").code, 1);
    EXPECT_EQ(run("verify --catalog flat-cosymplectic --params n=3").code, 0);
}

TEST(Cli, ToleranceFromEnvironment) {
    const CliRun r = run("classify --catalog flat-cosymplectic", false, "ACMLAB_TOL=1e-6");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"tolerance\": 1e-06"), std::string::npos) << r.out.substr(0, 400);
    const CliRun flag = run("classify --catalog flat-cosymplectic --tol 1e-4", false, "ACMLAB_TOL=1e-6");
    EXPECT_NE(flag.out.find("\"tolerance\": 0.0001"), std::string::npos);
    EXPECT_EQ(run("classify --catalog flat-cosymplectic", false, "ACMLAB_TOL=abc").code, 2);
}

TEST(Cli, VerifyIsByteIdenticalAndWritesAtomically) {
    const fs::path a = temp_dir() / "a.json";
    const fs::path b = temp_dir() / "b.json";
    run("verify --random 6 --seed 7 --out " + a.string());
    run("verify --random 6 --seed 7 --out " + b.string());
    const std::string ta = read_file(a);
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, read_file(b));
    EXPECT_FALSE(fs::exists(a.string() + ".tmp"));
}

TEST(Cli, FlowConvergesOnHyperbolic) {
    const CliRun r = run("flow --catalog hyperbolic --params n=2,c=1,k1=0.6,k5=0.8");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"converged\": true"), std::string::npos);
    EXPECT_EQ(run("flow --catalog hyperbolic --seed 3").code, 0);
}
