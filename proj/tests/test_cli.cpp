#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// run the binary under test with the given arguments, capture stdout
RunResult run(const std::string& args) {
    const char* bin = std::getenv("CLR_LAB_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.exit_code = WEXITSTATUS(status);
    return r;
}

json parse_report(const RunResult& r) {
    json j = json::parse(r.out);
    CHECK(j["schema_version"] == "1");
    CHECK(j.contains("command"));
    CHECK(j.contains("operator"));
    CHECK(j.contains("result"));
    CHECK(j.contains("seed"));
    return j;
}

}  // namespace

TEST_CASE("count: rank-one closed form and zero potential") {
    auto r = run("count --family lattice1d --potential delta:site=0,amp=3 "
                 "--box 256 --canonical");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["command"] == "count");
    CHECK(j["result"]["n0"] == 1);
    CHECK(j["result"]["converged"] == true);
    CHECK(!j.contains("timestamp"));

    auto z = run("count --family lattice1d --potential zero --box 64");
    CHECK(z.exit_code == 0);
    auto jz = parse_report(z);
    CHECK(jz["result"]["n0"] == 0);
    CHECK(jz.contains("timestamp"));
}

TEST_CASE("count: usage errors exit 2") {
    CHECK(run("count --family lattice1d --potential zero").exit_code == 2);
    CHECK(run("count --family nosuch --potential zero --box 8").exit_code == 2);
    CHECK(run("count --family lattice1d --potential garbage --box 8")
              .exit_code == 2);
    CHECK(run("nosuchcommand").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
}

TEST_CASE("bound and lt: closed-form values through the CLI") {
    auto r = run("bound --method bargmann --potential delta:site=3,amp=2 "
                 "--canonical");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    // weighted sum 3*2 = 6 plus the additive 1
    CHECK(j["result"]["value"].get<double>() == doctest::Approx(7.0));
    CHECK(j["result"]["certified"] == true);

    auto l = run("lt --gamma 1 --variant weight --potential delta:site=5,amp=2"
                 " --canonical");
    CHECK(l.exit_code == 0);
    auto jl = parse_report(l);
    // Lambda^gamma + |x| V^{1+gamma} = 2 + 5*4
    CHECK(jl["result"]["value"].get<double>() == doctest::Approx(22.0));
}

TEST_CASE("kernel: alpha = 1.5 table contains a negative value") {
    auto r = run("kernel --family p_alpha --alpha 1.5 --t 1 --range 20 "
                 "--canonical");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    double mn = 1e300;
    for (double v : j["result"]["values"]) mn = std::min(mn, v);
    CHECK(mn < 0.0);
}

TEST_CASE("witness: dyadic certificate through the CLI") {
    auto r = run("witness --family dyadic1d --potential inv_linear --kmax 17 "
                 "--canonical");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["result"]["certified_count"].get<int>() >= 5);
    CHECK(j["result"]["disjointness_checked"] == true);
    for (const auto& w : j["result"]["witnesses"])
        CHECK(w["quotient"].get<double>() < 0.0);
}

TEST_CASE("witness: capacity overflow exits 3") {
    auto r = run("witness --family sparse_delta --max-half-width 10");
    CHECK(r.exit_code == 3);
}

TEST_CASE("verify: seeded sweep reports zero violations") {
    auto r = run("verify --suite bargmann1d --n 5 --seed 7 --canonical");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["result"]["violations"] == 0);
    CHECK(j["seed"] == 7);
    CHECK(run("verify --suite bargmann1d --n 5").exit_code == 2);  // no seed
}

TEST_CASE("determinism: equal seeds give byte-identical canonical output") {
    auto a = run("sweep --suite lt1d --n 3 --seed 11 --canonical");
    auto b = run("sweep --suite lt1d --n 3 --seed 11 --canonical");
    auto c = run("sweep --suite lt1d --n 3 --seed 12 --canonical");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
}

TEST_CASE("round trip: serialized reports re-parse to an equal value") {
    auto r = run("sweep --suite bargmann1d --n 3 --seed 5 --canonical");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(json::parse(j.dump()) == j);
}

TEST_CASE("report: sweep file round-trips and flattens to CSV") {
    std::string path = "/tmp/clr_lab_test_sweep.json";
    auto s = run("sweep --suite lt1d --n 2 --seed 3 --canonical --out " + path);
    CHECK(s.exit_code == 0);
    auto r = run("report --in " + path);
    CHECK(r.exit_code == 0);
    // header plus one row per record
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
    CHECK(r.out.find("exact") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("config file: flags mirror and override") {
    std::string path = "/tmp/clr_lab_test_cfg";
    {
        std::ofstream f(path);
        f << "family=lattice1d\npotential=delta:site=0,amp=3\nbox=128\n";
    }
    auto r = run("count --config " + path + " --canonical");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["operator"]["box"] == 128);
    CHECK(j["result"]["n0"] == 1);

    auto o = run("count --config " + path + " --box 64 --canonical");
    CHECK(parse_report(o)["operator"]["box"] == 64);
    std::remove(path.c_str());
}

TEST_CASE("suites: remaining families run clean on small sweeps") {
    for (std::string s :
         {"fractional1d --alpha 0.7", "green2d", "bessel --d 3",
          "continuum1d"}) {
        auto r = run("verify --suite " + s + " --n 3 --seed 2 --canonical");
        CHECK(r.exit_code == 0);
        CHECK(parse_report(r)["result"]["violations"] == 0);
    }
}
