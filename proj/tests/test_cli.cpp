// End-to-end checks of the ptlab binary: exit codes, config handling,
// determinism, and the report contents of each subcommand. The binary path
// comes in through PTLAB_CLI_PATH at compile time.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ptlab/grid.hpp"
#include "ptlab/potential.hpp"

namespace {

using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(PTLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json run_json(const std::string& args, int expect_exit = 0) {
    RunResult r = run_cli(args);
    INFO("args: " << args << "\noutput: " << r.out);
    REQUIRE(r.exit_code == expect_exit);
    return json::parse(r.out);
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "ptlab_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::complex<double> as_cplx(const json& z) {
    return {z[0].get<double>(), z[1].get<double>()};
}

} // namespace

TEST_CASE("exit codes separate usage, config, and numerical failures", "[cli]") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("scatter --A 1 --k 1 --badflag").exit_code == 2);
    CHECK(run_cli("bogus").exit_code == 2);
    CHECK(run_cli("--A 1 --k 1").exit_code == 2);

    CHECK(run_cli("scatter --A 1 --k 1 --n-points 8000").exit_code == 2);
    CHECK(run_cli("scatter --A 1 --k 1 --tol 0").exit_code == 2);
    CHECK(run_cli("scatter --A 1").exit_code == 2);
    CHECK(run_cli("scatter --A 1 --k -1").exit_code == 2);
    CHECK(run_cli("scatter --A 1 --custom nowhere.csv --k 1").exit_code == 2);
    CHECK(run_cli("scatter --custom nowhere.csv --k 1").exit_code == 2);
    CHECK(run_cli("scatter --A 1 --k-range 1:2 ").exit_code == 2);
    CHECK(run_cli("scatter --A 1 --k-range 2:1:5").exit_code == 2);
    CHECK(run_cli("spectrum --A 1 --emin 5 --emax 2").exit_code == 2);
    CHECK(run_cli("spectrum --A 1 --seeds 0").exit_code == 2);
    CHECK(run_cli("scatter --A 1 --k 1 --format yaml").exit_code == 2);
    CHECK(run_cli("scatter --A 1 --k 1 --variant guess").exit_code == 2);
    CHECK(run_cli("phase-diagram --A 0.5").exit_code == 2);
    CHECK(run_cli("scarf2-validate --alpha 1").exit_code == 2);
}

TEST_CASE("hermitian scatter example reports unitary scattering", "[cli]") {
    json d = run_json("scatter --A 2.5 --B 0 --alpha 1 --k 1.0 --n-points 8001");
    REQUIRE(d["command"] == "scatter");
    REQUIRE(d["results"].size() == 1);
    const json& r = d["results"][0];
    CHECK(r["k"].get<double>() == 1.0);
    CHECK(r["defects"]["unitarity"].get<double>() < 1e-6);
    CHECK(r["defects"]["symmetry"].get<double>() < 1e-6);
    CHECK(r["analytic"]["variant"] == "sin_corrected");

    // M22 carries 1/t, so the S-matrix transmission must invert it.
    auto t = as_cplx(r["S"]["m12"]);
    auto m22 = as_cplx(r["M"]["m22"]);
    CHECK(std::abs(t * m22 - 1.0) < 1e-10);
}

TEST_CASE("spectrum example finds the three levels", "[cli]") {
    json d = run_json("spectrum --A 2.5 --B 0.5 --alpha 1 --n-points 8001");
    REQUIRE(d["points"].size() == 3);
    const double expected[3] = {0.0, 4.0, 6.0};
    for (int i = 0; i < 3; ++i) {
        auto e = as_cplx(d["points"][i]["E"]);
        CHECK(std::abs(e - expected[i]) < 1e-6);
        CHECK(d["points"][i]["class"] == "bound");
        CHECK(d["points"][i]["n"].get<int>() == i);
    }
    CHECK(d["phase"] == "unbroken");
    REQUIRE(d["pole_candidates"]["family1"].size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(d["pole_candidates"]["family1"][i].get<double>() == Catch::Approx(expected[i]));
    CHECK(d["pole_candidates"]["family2"].empty());
    for (const auto& f : d["non_converged"]) {
        CHECK(f["iterations"].get<int>() <= 40);
        CHECK(std::isfinite(f["last_mismatch"].get<double>()));
    }
}

TEST_CASE("identical jobs produce byte-identical reports", "[cli]") {
    auto dir = scratch_dir();
    auto cfg = dir / "job.json";
    {
        std::ofstream f(cfg);
        f << R"({"command":"scatter","A":2.5,"B":0.5,"alpha":1.0,"k":[1.0],"n-points":8001})";
    }
    RunResult r1 = run_cli("--config " + cfg.string());
    RunResult r2 = run_cli("--config " + cfg.string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r1.out == r2.out);

    auto out1 = dir / "r1.json";
    RunResult r3 = run_cli("--config " + cfg.string() + " --out " + out1.string());
    REQUIRE(r3.exit_code == 0);
    std::ifstream f(out1);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == r1.out);
}

TEST_CASE("flags override config file fields", "[cli]") {
    auto dir = scratch_dir();
    auto cfg = dir / "override.json";
    {
        std::ofstream f(cfg);
        f << R"({"command":"scatter","A":2.5,"B":0.5,"k":[1.0],"n-points":8001})";
    }
    RunResult direct = run_cli("scatter --A 2.5 --B 0 --k 1.0 --n-points 8001");
    RunResult merged = run_cli("--config " + cfg.string() + " --B 0");
    REQUIRE(direct.exit_code == 0);
    CHECK(merged.out == direct.out);

    auto bad = dir / "bad.json";
    {
        std::ofstream f(bad);
        f << "{ \"A\": 2.5, \"k\": [1.0,";
    }
    CHECK(run_cli("scatter --config " + bad.string()).exit_code == 2);

    auto unknown = dir / "unknown.json";
    {
        std::ofstream f(unknown);
        f << R"({"A":2.5,"frobnicate":3})";
    }
    CHECK(run_cli("scatter --config " + unknown.string()).exit_code == 2);

    auto conflict = dir / "conflict.json";
    {
        std::ofstream f(conflict);
        f << R"({"command":"spectrum","A":1.0})";
    }
    CHECK(run_cli("scatter --config " + conflict.string()).exit_code == 2);
}

TEST_CASE("scarf2-validate decides the reflection variant", "[cli]") {
    json d = run_json("scarf2-validate --A 1 --B 0 --alpha 1 --k-range 0.5:2:4 --n-points 8001");
    CHECK(d["winner"] == "sin_corrected");
    CHECK(d["variants"]["sin_corrected"]["max_rel_R"].get<double>() < 1e-4);
    CHECK(d["variants"]["as_printed"]["max_rel_R"].get<double>() > 1.0);
    CHECK(d["max_rel_T"].get<double>() < 1e-4);
    CHECK(d["max_flux_diff"].get<double>() < 1e-8);

    json d2 = run_json(
        "scarf2-validate --A 2.5 --B 0.5 --alpha 1 --k 0.5 --k 1 --k 2 --n-points 8001");
    std::string winner = d2["winner"].get<std::string>();
    CHECK(d2["variants"][winner]["max_rel_R"].get<double>() < 1e-4);
    CHECK(d2["max_rel_T"].get<double>() < 1e-4);
}

TEST_CASE("custom tables reproduce the closed-form potential", "[cli]") {
    auto dir = scratch_dir();
    auto table = dir / "well.csv";
    {
        auto pot = ptlab::PotentialSpec::scarf2(1.0, 0.0, 1.0);
        ptlab::Grid grid(25.0, 20001);
        std::ofstream f(table);
        ptlab::write_potential_csv(f, pot, grid);
    }
    json custom = run_json("scatter --custom " + table.string() + " --k 1 --n-points 8001");
    json closed = run_json("scatter --A 1 --B 0 --k 1 --n-points 8001");
    auto t_custom = as_cplx(custom["results"][0]["S"]["m12"]);
    auto t_closed = as_cplx(closed["results"][0]["S"]["m12"]);
    CHECK(custom["potential"]["kind"] == "custom");
    // The table is read back through linear interpolation, so agreement is
    // limited by the table spacing, not the integrator.
    CHECK(std::abs(t_custom - t_closed) < 1e-5);
    CHECK_FALSE(custom["results"][0].contains("analytic"));
}

TEST_CASE("correlation reports a flat correlation current", "[cli]") {
    json d = run_json("correlation --A 1.7 --B 0.6 --alpha 1 --k 0.8 --n-points 8001");
    CHECK(d["q_drift_rel"].get<double>() < 1e-5);
    CHECK(d["continuity_residual"].get<double>() < 1e-8);
    CHECK(d["rho_max"].get<double>() > 0.0);

    RunResult csv = run_cli(
        "correlation --A 1.7 --B 0.6 --alpha 1 --k 0.8 --n-points 8001 --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind("x,re_rho,im_rho,re_q,im_q\n", 0) == 0);
    CHECK(run_cli("correlation --A 1.7 --k 0.8 --k 1.2").exit_code == 2);
}

TEST_CASE("phase diagram sweeps report per-B phases", "[cli]") {
    json d = run_json(
        "phase-diagram --A 0.5 --B-range 0.8:1.2:3 --n-points 8001 --seeds 5 --eimax 0.4");
    REQUIRE(d["sweep"].size() == 3);
    const double bs[3] = {0.8, 1.0, 1.2};
    for (int i = 0; i < 3; ++i) {
        CHECK(d["sweep"][i]["B"].get<double>() == Catch::Approx(bs[i]));
        CHECK(d["sweep"][i]["phase"] == "unbroken");
        CHECK(d["sweep"][i]["max_im"].get<double>() < 1e-6);
        CHECK(d["sweep"][i]["n_found"].get<int>() >= 1);
    }

    RunResult csv = run_cli(
        "phase-diagram --A 0.5 --B-range 0.8:1.2:3 --n-points 8001 --seeds 5 --eimax 0.4"
        " --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.rfind("B,phase,n_found,max_im\n", 0) == 0);
}

TEST_CASE("csv reports begin with a header row", "[cli]") {
    RunResult r = run_cli("spectrum --A 1 --B 0 --n-points 8001 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("re_E,im_E,re_kappa,im_kappa,class,n,mismatch,pt_defect\n", 0) == 0);

    RunResult s = run_cli("scatter --A 1 --B 0 --k 1 --n-points 8001 --format csv");
    REQUIRE(s.exit_code == 0);
    CHECK(s.out.rfind("k,re_t,im_t,re_r_left,im_r_left,re_r_right,im_r_right,", 0) == 0);
}

TEST_CASE("deep tunneling failure still writes an explicit report", "[cli]") {
    auto dir = scratch_dir();
    auto table = dir / "tall_barrier.csv";
    {
        std::ofstream f(table);
        f << "x,re_v,im_v\n";
        f.precision(17);
        int n = 2001;
        for (int j = 0; j < n; ++j) {
            double x = -15.0 + 30.0 * j / (n - 1);
            f << x << ',' << 1e5 / std::pow(std::cosh(x), 2) << ",0\n";
        }
    }
    auto out = dir / "failed.json";
    RunResult r = run_cli("scatter --custom " + table.string() +
                          " --k 1 --n-points 8001 --L 14 --out " + out.string());
    CHECK(r.exit_code == 3);
    std::ifstream f(out);
    json d = json::parse(f);
    CHECK(d["command"] == "scatter");
    CHECK(d.contains("error"));
}
