// Black-box tests of the command-line tool. The binary path arrives in the
// EBMTOOL environment variable, a scratch directory in EBM_TEST_TMPDIR.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "ebm/inversion.hpp"
#include "ebm/io.hpp"
#include "ebm/model.hpp"
#include "ebm/spectrum.hpp"

using namespace ebm;

namespace {

std::string tool() {
    const char* t = std::getenv("EBMTOOL");
    REQUIRE(t != nullptr);
    return t;
}

std::filesystem::path scratch() {
    const char* d = std::getenv("EBM_TEST_TMPDIR");
    REQUIRE(d != nullptr);
    std::filesystem::create_directories(d);
    return d;
}

int run(const std::string& args, bool raw_command = false) {
    std::string cmd = (raw_command ? args : tool() + " " + args) + " > /dev/null 2> /dev/null";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::filesystem::path write_reference_model() {
    EBMModel m{0, 1.0, {{2.0, 1.0, 1.0}}};
    auto path = scratch() / "model_ref.json";
    write_file(path.string(), model_to_json(m));
    return path;
}

} // namespace

TEST_CASE("forward writes clusters, modes, and kernel table") {
    auto model = write_reference_model();
    auto out = scratch() / "fwd";
    int code = run("forward --model " + model.string() + " --ell 1,2 --t-grid 0:1:0.1 --out " +
                   out.string());
    CHECK(code == 0);

    ClusterSpectrum c1 = cluster_from_json(read_file((out / "cluster_ell1.json").string()));
    ClusterSpectrum c2 = cluster_from_json(read_file((out / "cluster_ell2.json").string()));
    CHECK(c1.ell == 1);
    CHECK(c2.ell == 2);
    // interlacing of the nonzero real root between the poles
    REQUIRE(c1.real_roots.size() == 2);
    CHECK(c1.real_roots[0] == 0.0);
    CHECK(c1.real_roots[1] > -8.0);
    CHECK(c1.real_roots[1] < -2.0);

    std::string csv = read_file((out / "kernel.csv").string());
    CHECK(csv.rfind("t,g00,", 0) == 0);
    int rows = -1; // header
    for (char ch : csv)
        if (ch == '\n') ++rows;
    CHECK(rows == 11);
    CHECK(csv.find("\n0,1,1,8,2\n") != std::string::npos);

    std::string modes = read_file((out / "modes.csv").string());
    CHECK(modes.rfind("ell,r_ell,k_b\n", 0) == 0);
}

TEST_CASE("ell = 0 is a usage error") {
    auto model = write_reference_model();
    CHECK(run("forward --model " + model.string() + " --ell 0 --out " +
              (scratch() / "usage").string()) == 64);
}

TEST_CASE("missing and malformed inputs exit 2") {
    CHECK(run("forward --model /nonexistent/m.json --ell 1 --out " +
              (scratch() / "x").string()) == 2);

    auto bad = scratch() / "bad.json";
    write_file(bad.string(), "{\"n\": 0");
    CHECK(run("forward --model " + bad.string() + " --ell 1 --out " +
              (scratch() / "y").string()) == 2);

    auto invalid = scratch() / "invalid.json";
    write_file(invalid.string(),
               "{\"n\": 0, \"R\": 1.0, \"elements\": [{\"lambda\": 2, \"mu\": 1, \"eta\": 0}]}");
    CHECK(run("forward --model " + invalid.string() + " --ell 1 --out " +
              (scratch() / "z").string()) == 2);
}

TEST_CASE("invert round trip through files") {
    auto model = write_reference_model();
    auto out = scratch() / "rt";
    REQUIRE(run("forward --model " + model.string() + " --ell 1,2 --out " + out.string()) == 0);

    auto inv_out = scratch() / "rt_inv";
    int code = run("invert --clusters " + (out / "cluster_ell1.json").string() + " " +
                   (out / "cluster_ell2.json").string() + " --mode known-c --out " +
                   inv_out.string());
    CHECK(code == 0);
    std::string report = read_file((inv_out / "inversion.json").string());
    CHECK(report.find("\"mu0\": 1.0000000") != std::string::npos);
    CHECK(report.find("\"lambda0\": 1.99999") != std::string::npos);

    int code_sc = run("invert --clusters " + (out / "cluster_ell1.json").string() + " " +
                      (out / "cluster_ell2.json").string() + " --mode self-consistent --out " +
                      (scratch() / "rt_inv_sc").string());
    CHECK(code_sc == 0);
}

TEST_CASE("clusters from different models exit 3") {
    auto model_a = write_reference_model();
    EBMModel other{0, 1.0, {{1.0, 3.0, 0.5}}};
    auto model_b = scratch() / "model_other.json";
    write_file(model_b.string(), model_to_json(other));

    auto out_a = scratch() / "mix_a";
    auto out_b = scratch() / "mix_b";
    REQUIRE(run("forward --model " + model_a.string() + " --ell 1 --out " + out_a.string()) == 0);
    REQUIRE(run("forward --model " + model_b.string() + " --ell 2 --out " + out_b.string()) == 0);

    CHECK(run("invert --clusters " + (out_a / "cluster_ell1.json").string() + " " +
              (out_b / "cluster_ell2.json").string() + " --mode self-consistent --out " +
              (scratch() / "mix_inv").string()) == 3);
    CHECK(run("invert --clusters " + (out_a / "cluster_ell1.json").string() + " missing.json" +
              " --out " + (scratch() / "mix_inv2").string()) == 2);
}

TEST_CASE("byte-identical outputs across identical runs and thread counts") {
    auto model = write_reference_model();
    auto out1 = scratch() / "det1";
    auto out2 = scratch() / "det2";
    auto out3 = scratch() / "det3";
    REQUIRE(run("forward --model " + model.string() + " --ell 1,3 --t-grid 0:2:0.5 --out " +
                out1.string()) == 0);
    REQUIRE(run("forward --model " + model.string() + " --ell 1,3 --t-grid 0:2:0.5 --out " +
                out2.string()) == 0);
    REQUIRE(run("env EBM_THREADS=1 " + tool() + " forward --model " + model.string() +
                " --ell 1,3 --t-grid 0:2:0.5 --out " + out3.string(), true) == 0);
    for (const char* name : {"cluster_ell1.json", "cluster_ell3.json", "kernel.csv", "modes.csv"}) {
        CHECK(read_file((out1 / name).string()) == read_file((out2 / name).string()));
        CHECK(read_file((out1 / name).string()) == read_file((out3 / name).string()));
    }
}

TEST_CASE("verify subcommand smoke run") {
    CHECK(run("verify --seed 3 --cases 5 --only tensor") == 0);
    CHECK(run("verify --seed 3 --cases 5 --only interlacing") == 0);
}
