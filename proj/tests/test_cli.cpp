#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "fracvar/cases.hpp"
#include "fracvar/io.hpp"

using namespace fracvar;

namespace {

std::string g_cli;

int run(const std::string& args) {
    const int rc = std::system((g_cli + " " + args).c_str());
    return WEXITSTATUS(rc);
}

std::string tmp_path(const std::string& name) { return "cli_test_" + name; }

void write_config(const std::string& path, const std::string& kmatrix) {
    std::ofstream out(path);
    out << R"({
  "alpha": 0.5,
  "time": {"a": 0, "b": 1, "n": 16},
  "box": {"lo": [0], "hi": [1], "n": [16]},
  "coefficients": {"gamma": [1.0], "K": )"
        << kmatrix << R"(, "beta": 0.5},
  "source": {"kind": "named", "id": "manu-cd-1d"},
  "u0": {"kind": "named", "id": "manu-cd-1d"},
  "scheme": "GL"
})";
}

}  // namespace

TEST_CASE("lemmas exit codes") {
    CHECK(run("lemmas --alpha 1.5 --n 64 >/dev/null 2>&1") == 2);
    CHECK(run("lemmas --bogus-flag >/dev/null 2>&1") == 2);
    // guard rail: n too small for trends reports pass=false but exits 0
    const auto out = tmp_path("lemmas_small.json");
    CHECK(run("lemmas --n 4 --out " + out + " >/dev/null") == 0);
    std::ifstream in(out);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("\"pass\": false") != std::string::npos);
    CHECK(text.find("insufficient_levels") != std::string::npos);
}

TEST_CASE("config diagnostics name the offending field") {
    const auto cfg = tmp_path("bad_k.json");
    write_config(cfg, "[[0.1, 0.2]]");  // wrong shape for dim 1
    CHECK(run("elcheck " + cfg + " >/dev/null 2>&1") == 2);

    write_config(cfg, "[[-0.1]]");  // not positive definite
    const std::string err = tmp_path("err.txt");
    CHECK(run("elcheck " + cfg + " >/dev/null 2>" + err) == 2);
    std::ifstream in(err);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("K") != std::string::npos);

    CHECK(run("solve no_such_file.json >/dev/null 2>&1") == 2);
    CHECK(run("elcheck " + cfg + " --directions 0 >/dev/null 2>&1") == 2);
}

TEST_CASE("solve + compare round trip") {
    const auto cfg = tmp_path("manu.json");
    write_config(cfg, "[[0.1]]");
    const auto fa = tmp_path("a.csv"), fb = tmp_path("b.csv");
    CHECK(run("solve " + cfg + " --solver variational --out " + fa + " >/dev/null") == 0);
    // theta = 1/2 so the reference run actually differs (at alpha = 1/2 the
    // GL march and implicit-Euler upwind coincide to roundoff)
    CHECK(run("solve " + cfg + " --solver reference --theta 0.5 --out " + fb +
              " >/dev/null") == 0);
    // identical files compare at zero
    CHECK(run("compare " + fa + " " + fa + " --tol 0 >/dev/null") == 0);
    // distinct discretizations differ at dt scale: tiny tol fails
    CHECK(run("compare " + fa + " " + fb + " --tol 1e-12 >/dev/null") == 1);
    CHECK(run("compare " + fa + " " + fb + " --norm linf --tol 0.5 >/dev/null") == 0);

    // CSV round trip is bit exact
    const auto mc = get_case("manu-cd-1d");
    const auto sr =
        variational_solve(mc.coeffs, TimeGrid(0.0, 1.0, 16),
                          BoxDomain({0.0}, {1.0}, {16}));
    const auto path = tmp_path("rt.csv");
    write_field_csv(path, sr.u);
    const auto back = read_field_csv(path);
    REQUIRE(back.values.size() == sr.u.values.size());
    for (size_t i = 0; i < back.values.size(); ++i)
        CHECK(back.values[i] == sr.u.values[i]);

    // grid mismatch is a usage error
    const auto small = tmp_path("small.csv");
    write_field_csv(small, SpaceTimeField::zeros(TimeGrid(0.0, 1.0, 4),
                                                 BoxDomain({0.0}, {1.0}, {4})));
    CHECK(run("compare " + fa + " " + small + " >/dev/null 2>&1") == 2);
}

TEST_CASE("converge exit codes") {
    CHECK(run("converge manu-cd-1d --levels 16,32 >/dev/null 2>&1") == 2);
    CHECK(run("converge manu-cd-1d --levels 16,32,64 >/dev/null") == 0);
    CHECK(run("converge no-such-case --levels 8,16,32 >/dev/null 2>&1") == 2);
    const auto out = tmp_path("aff.json");
    CHECK(run("converge affine-exact --levels 8,12,16 --out " + out + " >/dev/null") == 0);
    std::ifstream in(out);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("\"exact\"") != std::string::npos);
}

TEST_CASE("zero case solves to a zero field") {
    const auto cfg = tmp_path("zero.json");
    std::ofstream(cfg) << R"({
  "time": {"a": 0, "b": 1, "n": 8},
  "box": {"lo": [0], "hi": [1], "n": [8]},
  "coefficients": {"gamma": [0.0], "K": [[0.1]], "beta": 0.0},
  "source": {"kind": "named", "id": "zero"},
  "u0": {"kind": "named", "id": "zero"}
})";
    const auto out = tmp_path("zero.csv");
    CHECK(run("solve " + cfg + " --out " + out + " >/dev/null") == 0);
    const auto f = read_field_csv(out);
    for (double v : f.values) CHECK(v == 0.0);
}

int main(int argc, char** argv) {
    doctest::Context ctx;
    int shift = 0;
    if (argc > 1 && argv[1][0] != '-') {
        g_cli = argv[1];
        shift = 1;
    } else {
        g_cli = "./fracvar";
    }
    ctx.applyCommandLine(argc - shift, argv + shift);
    return ctx.run();
}
