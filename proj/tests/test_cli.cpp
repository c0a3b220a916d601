#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "irfkit/csv.hpp"
#include "irfkit/rng.hpp"
#include "irfkit/series.hpp"

using namespace irfkit;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(IRFKIT_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "irfkit_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long count_data_rows(const std::string& csv) {
    long rows = 0;
    bool header_seen = false;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

}  // namespace

TEST_CASE("cli: simulate writes csv with config echo and manifest") {
    fs::path dir = fresh_dir("simulate");
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"kind":"extended","t":100,"seed":7,"gamma":0.2})";
    RunResult r = run_cli("simulate --config " + cfg.string() + " --out " + dir.string());
    CHECK(r.exit_code == 0);

    const std::string data = read_file(dir / "data.csv");
    CHECK(count_data_rows(data) == 100);
    CHECK(data.find("# rng=") != std::string::npos);
    CHECK(data.find("seed=7") != std::string::npos);

    json manifest = json::parse(read_file(dir / "manifest.json"));
    CHECK(manifest["command"] == "simulate");
    CHECK(manifest["config"]["t"] == 100);
    CHECK(manifest["rng_algorithm"].get<std::string>().find("splitmix64") != std::string::npos);
}

TEST_CASE("cli: irf on simulated data emits the documented schema") {
    fs::path dir = fresh_dir("irf");
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"kind":"extended","t":20000,"seed":3,"gamma":0.2})";
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + dir.string()).exit_code == 0);

    RunResult r = run_cli("irf --input " + (dir / "data.csv").string() +
                          " --period period --response y --shock x --estimator lp --horizon 5 "
                          "--controls y:1,x:1 --out " +
                          dir.string());
    CHECK(r.exit_code == 0);
    json irf = json::parse(read_file(dir / "irf.json"));
    CHECK(irf["estimator"] == "lp");
    REQUIRE(irf["horizons"].size() == 6);
    CHECK(irf["point"].size() == 6);
    CHECK(irf["se"].size() == 6);
    CHECK(irf["ci_lo"].size() == 6);
    CHECK(irf["ci_hi"].size() == 6);
    CHECK(irf["nobs"].size() == 6);
    CHECK(irf.contains("warnings"));
    const std::string csv = read_file(dir / "irf.csv");
    CHECK(csv.rfind("path,h,point,se,ci_lo,ci_hi,nobs", 0) == 0);
}

TEST_CASE("cli: multiplier on proportional paths") {
    fs::path dir = fresh_dir("multiplier");
    std::ofstream(dir / "num.json") << R"({"point":[2.0,1.0,0.5]})";
    std::ofstream(dir / "den.json") << R"({"point":[1.0,0.5,0.25]})";
    RunResult r = run_cli("multiplier --num " + (dir / "num.json").string() + " --den " +
                          (dir / "den.json").string() + " --out " + dir.string());
    CHECK(r.exit_code == 0);
    json m = json::parse(read_file(dir / "multiplier.json"));
    for (const auto& v : m["multiplier"]) CHECK(v.get<double>() == doctest::Approx(2.0));
}

TEST_CASE("cli: test command emits table, json detail, and correlogram bands") {
    fs::path dir = fresh_dir("testcmd");
    Rng rng(99);
    std::vector<double> v(400);
    for (auto& z : v) z = rng.next_normal();
    write_csv((dir / "wn.csv").string(), {Series("x", v)});

    RunResult r = run_cli("test --input " + (dir / "wn.csv").string() +
                          " --lags 5 --lags 10 --acf-lags 12 --out " + dir.string());
    CHECK(r.exit_code == 0);
    const std::string table = read_file(dir / "report.txt");
    CHECK(table.find("Box-Pierce (5)") != std::string::npos);
    CHECK(table.find("Box-Pierce (10)") != std::string::npos);
    json report = json::parse(read_file(dir / "report.json"));
    CHECK(report["series"][0]["name"] == "x");
    CHECK(report["series"][0]["tests"].size() == 2);
    CHECK(report["series"][0]["tests"][0]["per_lag"].size() == 5);
    const std::string cg = read_file(dir / "correlogram_x.csv");
    CHECK(cg.rfind("lag,acf,bartlett_se,band_lo,band_hi", 0) == 0);
    CHECK(count_data_rows(cg) == 12);

    // the uncorrected statistic is smaller and reported on request
    RunResult r2 = run_cli("test --input " + (dir / "wn.csv").string() +
                           " --lags 10 --acf-lags 5 --uncorrected --out " + dir.string());
    CHECK(r2.exit_code == 0);
    json rep2 = json::parse(read_file(dir / "report.json"));
    REQUIRE(rep2["series"].size() == 2);
    CHECK(rep2["series"][1]["tests"][0]["kind"] == "box_pierce");
    CHECK(rep2["series"][1]["tests"][0]["statistic"].get<double>() <
          rep2["series"][0]["tests"][0]["statistic"].get<double>());
}

TEST_CASE("cli: test command size and power over seeded fixtures") {
    fs::path dir = fresh_dir("size_power");
    int size_ok = 0, power_hits = 0;
    const int fixtures = 100;
    for (int i = 0; i < fixtures; ++i) {
        {
            Rng rng = Rng::for_replicate(31000, i);
            std::vector<double> v(500);
            for (auto& z : v) z = rng.next_normal();
            write_csv((dir / "wn.csv").string(), {Series("x", v)});
            run_cli("test --input " + (dir / "wn.csv").string() + " --lags 40 --acf-lags 5 --out " +
                    dir.string());
            json report = json::parse(read_file(dir / "report.json"));
            if (report["series"][0]["tests"][0]["p_value"].get<double>() > 0.05) ++size_ok;
        }
        {
            Rng rng = Rng::for_replicate(32000, i);
            std::vector<double> v(500);
            double prev = 0.0;
            for (int t = 0; t < 600; ++t) {
                prev = 0.2 * prev + rng.next_normal();
                if (t >= 100) v[t - 100] = prev;
            }
            write_csv((dir / "ar.csv").string(), {Series("x", v)});
            run_cli("test --input " + (dir / "ar.csv").string() + " --lags 10 --acf-lags 5 --out " +
                    dir.string());
            json report = json::parse(read_file(dir / "report.json"));
            if (report["series"][0]["tests"][0]["p_value"].get<double>() < 0.05) ++power_hits;
        }
    }
    CHECK(size_ok >= 90);     // white noise rarely flagged
    CHECK(power_hits >= 80);  // persistent fixture usually flagged
}

TEST_CASE("cli: panel input routes to the panel test") {
    fs::path dir = fresh_dir("panel");
    std::ostringstream csv;
    csv << "entity,t,v\n";
    for (int i = 0; i < 8; ++i) {
        Rng rng = Rng::for_replicate(777, i);
        for (int t = 1; t <= 40; ++t)
            csv << "e" << i << "," << t << "," << rng.next_normal() << "\n";
    }
    std::ofstream(dir / "panel.csv") << csv.str();
    RunResult r = run_cli("test --input " + (dir / "panel.csv").string() +
                          " --period t --entity entity --lags 5 --out " + dir.string());
    CHECK(r.exit_code == 0);
    json report = json::parse(read_file(dir / "report.json"));
    CHECK(report["series"][0]["tests"][0]["kind"] == "panel_joint");
    CHECK(read_file(dir / "report.txt").find("Panel joint (5)") != std::string::npos);
}

TEST_CASE("cli: replicate fig1 produces the three documented curves") {
    fs::path dir = fresh_dir("fig1");
    RunResult r = run_cli("replicate --figure fig1 --t 30000 --horizon 4 --out " + dir.string());
    CHECK(r.exit_code == 0);
    json manifest = json::parse(read_file(dir / "manifest.json"));
    REQUIRE(manifest["config"]["curves"].size() == 3);

    auto curve_value_at = [&](const std::string& id, int h) {
        for (const auto& c : manifest["config"]["curves"]) {
            if (c["id"] == id) {
                const std::string body = read_file(dir / c["file"].get<std::string>());
                std::stringstream ss(body);
                std::string line;
                std::getline(ss, line);  // header
                for (int i = 0; i <= h; ++i) std::getline(ss, line);
                return std::stod(line.substr(line.find(',') + 1));
            }
        }
        FAIL("curve not found: ", id);
        return 0.0;
    };
    CHECK(curve_value_at("gamma02_noleads", 1) == doctest::Approx(2.65).epsilon(0.05));
    CHECK(curve_value_at("gamma02_leads", 1) == doctest::Approx(2.35).epsilon(0.05));
    CHECK(curve_value_at("gamma0_noleads", 1) == doctest::Approx(2.35).epsilon(0.05));
}

TEST_CASE("cli: replicate figB3 without data names the requirement") {
    RunResult r = run_cli("replicate --figure figB3 --out " +
                          fresh_dir("figB3").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("figB3") != std::string::npos);
    CHECK(r.output.find("--shock-csv") != std::string::npos);
}

TEST_CASE("cli: replicate figB3 with a supplied shock runs end to end") {
    fs::path dir = fresh_dir("figB3_ok");
    Rng rng(5);
    std::vector<double> v(120);
    for (auto& z : v) z = rng.next_normal() * 0.5;
    write_csv((dir / "shock.csv").string(), {Series("shock", v)});
    RunResult r = run_cli("replicate --figure figB3 --replications 8 --horizon 3 --shock-csv " +
                          (dir / "shock.csv").string() + " --out " + dir.string());
    CHECK(r.exit_code == 0);
    json manifest = json::parse(read_file(dir / "manifest.json"));
    CHECK(manifest["config"]["curves"].size() == 4);
}

TEST_CASE("cli: usage errors exit 1, data errors exit 2") {
    CHECK(run_cli("replicate --figure nope --out /tmp").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("irf --input /nonexistent.csv --response y --shock x").exit_code == 2);

    fs::path dir = fresh_dir("badcell");
    std::ofstream(dir / "bad.csv") << "t,x\n1,1.0\n2,abc\n";
    RunResult r = run_cli("test --input " + (dir / "bad.csv").string() + " --out " + dir.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("row 2") != std::string::npos);
}

TEST_CASE("cli: outputs byte-identical across thread counts") {
    fs::path dir1 = fresh_dir("det1");
    fs::path dir2 = fresh_dir("det2");
    const fs::path cfg = dir1 / "cfg.json";
    std::ofstream(cfg) << R"({"kind":"extended","t":15000,"seed":11,"gamma":0.2})";

    for (const auto& [dir, threads] : {std::pair{dir1, 1}, std::pair{dir2, 4}}) {
        CHECK(run_cli("simulate --config " + cfg.string() + " --out " + dir.string())
                  .exit_code == 0);
        CHECK(run_cli("--threads " + std::to_string(threads) + " irf --input " +
                      (dir / "data.csv").string() +
                      " --period period --response y --shock x --estimator lp-leads "
                      "--leads conservative --horizon 6 --controls y:1,x:1 --out " +
                      dir.string())
                  .exit_code == 0);
    }
    CHECK(read_file(dir1 / "data.csv") == read_file(dir2 / "data.csv"));
    CHECK(read_file(dir1 / "irf.json") == read_file(dir2 / "irf.json"));
    CHECK(read_file(dir1 / "irf.csv") == read_file(dir2 / "irf.csv"));
}

TEST_CASE("cli: nonlinear estimator reports one path per regime") {
    fs::path dir = fresh_dir("nonlinear");
    Rng rng(61);
    const long T = 8000;
    std::vector<double> x(T), y(T), s(T);
    double yprev = 0.0, xprev = 0.0;
    for (long t = 0; t < T; ++t) {
        const double xt = 0.2 * xprev + rng.next_normal();
        const double yt = 0.9 * yprev + 1.5 * xt + 1.0 * xprev + rng.next_normal();
        x[t] = xt;
        y[t] = yt;
        s[t] = yt < 0 ? 1.0 : 0.0;
        xprev = xt;
        yprev = yt;
    }
    write_csv((dir / "data.csv").string(), {Series("y", y), Series("x", x), Series("s", s)});
    RunResult r = run_cli("irf --input " + (dir / "data.csv").string() +
                          " --response y --shock x --estimator nonlinear-lp --state s "
                          "--horizon 2 --controls y:1,x:1 --out " +
                          dir.string());
    CHECK(r.exit_code == 0);
    json irf = json::parse(read_file(dir / "irf.json"));
    REQUIRE(irf["paths"].size() == 2);
    CHECK(irf["paths"][0]["label"] == "state=1");
    CHECK(irf["paths"][1]["label"] == "state=0");
}

TEST_CASE("cli: var estimators run through the same surface") {
    fs::path dir = fresh_dir("varcli");
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"kind":"extended","t":20000,"seed":9,"gamma":0.2})";
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + dir.string()).exit_code == 0);

    RunResult endog = run_cli("irf --input " + (dir / "data.csv").string() +
                              " --period period --response y --shock x --estimator var-endog "
                              "--horizon 4 --out " +
                              (dir / "endog").string());
    CHECK(endog.exit_code == 0);
    json je = json::parse(read_file(dir / "endog" / "irf.json"));
    CHECK(je["paths"].size() == 2);  // response and shock own-path
    CHECK(je["paths"][0]["label"] == "y");
    CHECK(je["point"][0].get<double>() == doctest::Approx(1.5).epsilon(0.05));

    RunResult varx = run_cli("irf --input " + (dir / "data.csv").string() +
                             " --period period --response y --shock x --estimator var-x "
                             "--horizon 4 --out " +
                             (dir / "varx").string());
    CHECK(varx.exit_code == 0);
    json jx = json::parse(read_file(dir / "varx" / "irf.json"));
    CHECK(jx["point"][1].get<double>() == doctest::Approx(2.35).epsilon(0.05));
}

TEST_CASE("cli: numerical failures exit 3") {
    fs::path dir = fresh_dir("numerr");
    std::ostringstream csv;
    csv << "y,x\n";
    Rng rng(62);
    for (int t = 0; t < 50; ++t) csv << rng.next_normal() << ",1.0\n";  // constant shock
    std::ofstream(dir / "data.csv") << csv.str();
    RunResult r = run_cli("irf --input " + (dir / "data.csv").string() +
                          " --response y --shock x --estimator lp --horizon 1 --out " +
                          dir.string());
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("numerical error") != std::string::npos);
}

TEST_CASE("cli: lead-cap flag bounds the lead count") {
    fs::path dir = fresh_dir("leadcap");
    const fs::path cfg = dir / "cfg.json";
    std::ofstream(cfg) << R"({"kind":"extended","t":8000,"seed":13,"gamma":0.2})";
    CHECK(run_cli("simulate --config " + cfg.string() + " --out " + dir.string()).exit_code == 0);
    RunResult r = run_cli("irf --input " + (dir / "data.csv").string() +
                          " --period period --response y --shock x --estimator lp-leads "
                          "--lead-cap 2 --horizon 5 --controls y:1,x:1 --out " +
                          dir.string());
    CHECK(r.exit_code == 0);
    json irf = json::parse(read_file(dir / "irf.json"));
    // nobs at h=5 loses 5 + min(5, 2) = 7 tail rows plus the one lag row
    CHECK(irf["nobs"][5].get<long>() == 8000 - 1 - 7);
}

TEST_CASE("cli: replicate figB4 separates biased and instrumented impacts") {
    fs::path dir = fresh_dir("figB4");
    RunResult r = run_cli("replicate --figure figB4 --t 60000 --horizon 2 --out " + dir.string());
    CHECK(r.exit_code == 0);
    json manifest = json::parse(read_file(dir / "manifest.json"));
    REQUIRE(manifest["config"]["curves"].size() == 6);
    auto impact = [&](const std::string& id) {
        for (const auto& c : manifest["config"]["curves"])
            if (c["id"] == id) {
                std::stringstream ss(read_file(dir / c["file"].get<std::string>()));
                std::string line;
                std::getline(ss, line);
                std::getline(ss, line);
                return std::stod(line.substr(line.find(',') + 1));
            }
        FAIL("curve not found: ", id);
        return 0.0;
    };
    CHECK(impact("lpiv_gamma02") == doctest::Approx(2.0).epsilon(0.05));
    CHECK(impact("ols_gamma02") == doctest::Approx(2.98).epsilon(0.05));
    CHECK(impact("benchmark") == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("cli: remaining replicate batteries land on their reference paths") {
    auto curve_at = [](const fs::path& dir, const json& manifest, const std::string& id, int h) {
        for (const auto& c : manifest["config"]["curves"])
            if (c["id"] == id) {
                std::stringstream ss(read_file(dir / c["file"].get<std::string>()));
                std::string line;
                std::getline(ss, line);
                for (int i = 0; i <= h; ++i) std::getline(ss, line);
                return std::stod(line.substr(line.find(',') + 1));
            }
        FAIL("curve not found: ", id);
        return 0.0;
    };

    SUBCASE("fig2: distributed lags and the innovation form") {
        fs::path dir = fresh_dir("fig2");
        CHECK(run_cli("replicate --figure fig2 --t 40000 --horizon 3 --out " + dir.string())
                  .exit_code == 0);
        json m = json::parse(read_file(dir / "manifest.json"));
        CHECK(curve_at(dir, m, "gamma02_dlm", 1) == doctest::Approx(2.35).epsilon(0.05));
        CHECK(curve_at(dir, m, "gamma0_dlm", 1) == doctest::Approx(2.35).epsilon(0.05));
        CHECK(curve_at(dir, m, "gamma02_dlm_innov", 1) == doctest::Approx(2.65).epsilon(0.05));
    }
    SUBCASE("figB1 and figB2: shock endogenous vs exogenous") {
        fs::path dir = fresh_dir("figB1");
        CHECK(run_cli("replicate --figure figB1 --t 40000 --horizon 3 --out " + dir.string())
                  .exit_code == 0);
        json m1 = json::parse(read_file(dir / "manifest.json"));
        CHECK(curve_at(dir, m1, "var_y_gamma02", 1) == doctest::Approx(2.65).epsilon(0.05));
        CHECK(curve_at(dir, m1, "var_x_gamma02", 1) == doctest::Approx(0.2).epsilon(0.2));
        CHECK(curve_at(dir, m1, "lp_y_gamma02", 1) == doctest::Approx(2.65).epsilon(0.05));

        fs::path dir2 = fresh_dir("figB2");
        CHECK(run_cli("replicate --figure figB2 --t 40000 --horizon 3 --out " + dir2.string())
                  .exit_code == 0);
        json m2 = json::parse(read_file(dir2 / "manifest.json"));
        CHECK(curve_at(dir2, m2, "endogenous_gamma02", 1) == doctest::Approx(2.65).epsilon(0.05));
        CHECK(curve_at(dir2, m2, "exogenous_gamma02", 1) == doctest::Approx(2.35).epsilon(0.05));
    }
    SUBCASE("figB5: residual adjustment keeps the propagation") {
        fs::path dir = fresh_dir("figB5");
        CHECK(run_cli("replicate --figure figB5 --t 40000 --horizon 3 --out " + dir.string())
                  .exit_code == 0);
        json m = json::parse(read_file(dir / "manifest.json"));
        CHECK(curve_at(dir, m, "gamma02_residadj", 1) == doctest::Approx(2.65).epsilon(0.06));
        CHECK(curve_at(dir, m, "gamma02_leads", 1) == doctest::Approx(2.35).epsilon(0.05));
    }
}
