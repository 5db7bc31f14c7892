#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <sys/wait.h>
#include <unistd.h>

#include "hexcap/io.hpp"

using namespace hexcap;
namespace fs = std::filesystem;

namespace {

ModelParams desk_params() { return {6, 8, 5.0, 0.3, 2.1, 1.2}; }

const Sequence& desk_solution()
{
    static const Sequence u = [] {
        auto r = find_solution(desk_params(), 0, 30, {1e-11, 60, 1.0, 1e-3});
        REQUIRE(r);
        return r->newton.u;
    }();
    return u;
}

bool same(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }

fs::path scratch()
{
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("hexcap_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args)
{
    std::string cmd = std::string(HEXCAP_CLI) + " " + args + " > " + (scratch() / "stdout.txt").string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

} // namespace

TEST_SUITE("io") {

TEST_CASE("solution round trip is bit exact")
{
    SolutionFile s{desk_params(), desk_solution(), 1.25e-13, 42};
    SolutionFile r = solution_from_json(parse_json(to_json(s).dump(), "solution"));
    CHECK(r.params.j == 6);
    CHECK(r.params.mu == 0.3);
    CHECK(r.params.nu == 1.2);
    CHECK(*r.residual == 1.25e-13);
    CHECK(*r.seed == 42u);
    REQUIRE(r.u.size() == s.u.size());
    for (Eigen::Index i = 0; i < s.u.size(); ++i) CHECK(r.u[i] == s.u[i]);
    CHECK(to_json(r).dump() == to_json(s).dump());
}

TEST_CASE("solution validation")
{
    json j = to_json(SolutionFile{desk_params(), desk_solution(), std::nullopt, std::nullopt});
    json bad = j;
    bad["format"] = "something";
    CHECK_THROWS_AS(solution_from_json(bad), IoError);
    bad = j;
    bad["version"] = 99;
    CHECK_THROWS_AS(solution_from_json(bad), IoError);
    bad = j;
    bad["reps"][3] = json::array({7, 7});
    CHECK_THROWS_AS(solution_from_json(bad), IoError);
    bad = j;
    bad["coefficients"].erase(bad["coefficients"].size() - 1);
    CHECK_THROWS_AS(solution_from_json(bad), IoError);
    bad = j;
    bad["params"]["nu"] = "0x1p-1";
    CHECK_THROWS(solution_from_json(bad));
    CHECK_THROWS_AS(parse_json("{not json", "solution"), IoError);
    CHECK_THROWS_AS(read_text(path("does_not_exist.json")), IoError);
}

TEST_CASE("certificate round trip")
{
    Certificate c = prove_solution(desk_solution(), desk_params());
    c.digest = digest("abc");
    Certificate r = certificate_from_json(parse_json(to_json(c).dump(), "certificate"));
    CHECK(same(r.Y0, c.Y0));
    CHECK(same(r.Z0, c.Z0));
    CHECK(same(r.Z1, c.Z1));
    CHECK(same(r.Z2_base, c.Z2_base));
    CHECK(same(r.Z2_slope, c.Z2_slope));
    CHECK(r.r0 == c.r0);
    CHECK(r.success == c.success);
    CHECK(r.digest == c.digest);
    CHECK(r.recheck().success == c.success);
}

TEST_CASE("branch and branch certificate round trip")
{
    ChebBranch b = continue_branch({0.3, desk_solution()}, desk_params(), 0.02, 3, 1);
    ChebBranch r = branch_from_json(parse_json(to_json(b).dump(), "branch"));
    CHECK(r.Nc == 3);
    CHECK(r.s_fix == 0.02);
    CHECK(r.n_fft == b.n_fft);
    for (size_t k = 0; k < b.mu.size(); ++k) {
        CHECK(r.mu[k] == b.mu[k]);
        CHECK(r.mu_dot[k] == b.mu_dot[k]);
        CHECK((r.u[k].coeffs - b.u[k].coeffs).norm() == 0.0);
        CHECK((r.u_dot[k].coeffs - b.u_dot[k].coeffs).norm() == 0.0);
    }
    json bad = to_json(b);
    bad["mu"].erase(0);
    CHECK_THROWS_AS(branch_from_json(bad), IoError);

    BranchCertificate c = prove_branch(b);
    BranchCertificate rc = branch_certificate_from_json(parse_json(to_json(c).dump(), "branch certificate"));
    CHECK(same(rc.Y0s, c.Y0s));
    CHECK(same(rc.Z2s_slope, c.Z2s_slope));
    CHECK(same(rc.LNK, c.LNK));
    CHECK(rc.lnk_mode == c.lnk_mode);
    CHECK(rc.success == c.success);
}

TEST_CASE("csv and digest")
{
    std::string csv = to_csv({{0.5, -1.0, 0.1}, {1.0 / 3.0, 2.0, -7.0}});
    CHECK(csv.rfind("x1,x2,u\n", 0) == 0);
    CHECK(csv.find("0.33333333333333331") != std::string::npos);
    CHECK(csv.find("0.10000000000000001") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    CHECK(digest("") == "cbf29ce484222325");
    CHECK(digest("a") == "af63dc4c8601ec8c");
    CHECK(digest("abc") != digest("abd"));
}

}

TEST_SUITE("cli") {

TEST_CASE("find, prove, recheck and verify")
{
    const std::string sol = path("sol.json"), cert = path("cert.json");
    REQUIRE(run("find --group d6 --N 8 --mu 0.3 --gamma 2.1 --nu 1.2 --seed 0 -o " + sol) == 0);
    CHECK(run("prove " + sol + " -o " + cert) == 0);
    CHECK(run("prove --recheck " + cert) == 0);
    CHECK(run("verify " + sol) == 0);

    Certificate c = certificate_from_json(parse_json(read_text(cert), "certificate"));
    CHECK(c.success);
    CHECK(c.digest == digest(read_text(sol)));

    // a tampered certificate is caught
    json j = parse_json(read_text(cert), "certificate");
    j["success"] = false;
    write_text(path("tampered.json"), j.dump());
    CHECK(run("prove --recheck " + path("tampered.json")) == 2);

    // forcing a radius below Y0 fails
    CHECK(run("prove " + sol + " --r0 1e-14") == 2);
}

TEST_CASE("find is deterministic")
{
    const std::string a = path("a.json"), b = path("b.json");
    REQUIRE(run("find --group d3 --N 8 --mu 0.3 --gamma 2.1 --nu 1.2 --seed 3 -o " + a) == 0);
    REQUIRE(run("find --group d3 --N 8 --mu 0.3 --gamma 2.1 --nu 1.2 --seed 3 -o " + b) == 0);
    CHECK(read_text(a) == read_text(b));
}

TEST_CASE("render")
{
    const std::string sol = path("sol3.json"), csv = path("out.csv");
    REQUIRE(run("find --group d3 --N 8 --mu 0.3 --gamma 2.1 --nu 1.2 --seed 0 -o " + sol) == 0);
    CHECK(run("render " + sol + " --domain delta1 --resolution 32 -o " + csv) == 0);
    std::string text = read_text(csv);
    CHECK(text.rfind("x1,x2,u\n", 0) == 0);
    auto rows = std::count(text.begin(), text.end(), '\n') - 1;
    CHECK(rows > 0);
    CHECK(rows <= 32 * 32);
    CHECK(run("render " + sol + " --domain hexagon0") == 4);
    CHECK(run("render " + sol + " --domain hexagon0 --resolution 8 --force -o " + csv) == 0);
    CHECK(run("render " + sol + " --domain circle") == 4);
}

TEST_CASE("continue and replay")
{
    const std::string br = path("branch.json"), bc = path("bcert.json"), csv = path("b.csv");
    CHECK(run("continue --group d6 --N 8 --mu 0.3 --gamma 2.1 --nu 1.2 --seed 0 --ncheb 3 --sfix 0.02 -o " + br +
              " --cert " + bc) == 0);
    BranchCertificate c = branch_certificate_from_json(parse_json(read_text(bc), "branch certificate"));
    CHECK(c.success);
    CHECK(c.digest == digest(read_text(br)));
    CHECK(run("render " + br + " --s 0.5 --resolution 16 -o " + csv) == 0);
    CHECK(run("render " + br + " --s 2") == 4);
    CHECK(run("continue --sfix 0") == 4);

    CHECK(run("prove --replay-constants Y0=9.64e-6,Z0=2.042e-9,Z1=0.175,Z2=25886.81,r0=3e-5") == 0);
    CHECK(run("prove --replay-constants Y0=9.64e-5,Z0=2.042e-9,Z1=0.175,Z2=25886.81,r0=3e-5") == 2);
}

TEST_CASE("errors map to exit codes")
{
    CHECK(run("prove " + path("missing.json")) == 4);
    CHECK(run("find --group d5 -o " + path("x.json")) == 4);
    CHECK(run("find --nu 0.5 -o " + path("x.json")) == 4);
    CHECK(run("bogus") == 4);
    write_text(path("garbage.json"), "{\"format\": \"hexcap-solution\"");
    CHECK(run("verify " + path("garbage.json")) == 4);
    // no converged start within the retry budget
    CHECK(run("find --mu 0.3 --gamma 2.1 --nu 1.2 --maxit 1 --retries 0 -o " + path("x.json")) == 3);
}

}
