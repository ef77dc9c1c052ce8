#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "plankforge/cli.hpp"

using namespace plankforge;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

struct TempPolyDir {
    std::string path;
    explicit TempPolyDir(const std::string& name) : path("/tmp/plankforge_" + name) {
        std::filesystem::create_directories(path);
    }
    ~TempPolyDir() { std::filesystem::remove_all(path); }
    void add(const std::string& name, const Polynomial& p) {
        save_polynomial(p, path + "/" + name);
    }
};

}  // namespace

TEST_CASE("constants eq2 at k=(1,1) prints ln 4", "[cli]") {
    auto r = run_cli({"constants", "--kind", "eq2", "--k", "1,1"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["version"] == "0.1.0");
    CHECK(std::abs(j["result"]["log_value"].get<double>() - std::log(4.0)) <= 1e-14);
    CHECK(std::abs(j["result"]["value_if_finite"].get<double>() - 4.0) <= 1e-13);
}

TEST_CASE("constants prop12 defaults to the derived variant", "[cli]") {
    auto derived = run_cli({"constants", "--kind", "prop12", "--field", "real", "--d", "1",
                            "--k", "1"});
    CHECK(derived.code == 0);
    CHECK(derived.err.empty());
    auto as_stated = run_cli({"constants", "--kind", "prop12", "--variant", "as-stated",
                              "--field", "real", "--d", "1", "--k", "1"});
    CHECK(as_stated.code == 0);
    CHECK(as_stated.err.find("warning") != std::string::npos);
    CHECK(json::parse(as_stated.out)["result"]["log_value"].get<double>() < 0.0);
}

TEST_CASE("constants sweep emits the documented CSV columns", "[cli]") {
    auto r = run_cli({"constants", "sweep", "--kinds", "eq4,eq6", "--d", "1..2", "--n", "2..3",
                      "--k", "5"});
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("# plankforge", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "kind,field,d,p,n,k,log_value");
    int rows = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 8);  // 2 kinds x 2 dims x 2 counts
}

TEST_CASE("norm subcommand round trips a monomial", "[cli]") {
    TempPolyDir dir("norm");
    Polynomial p(2, Field::complex);
    p.add_term({1, 1}, Coeff{1, 0});
    dir.add("m.json", p);
    auto r = run_cli({"norm", "--poly", dir.path + "/m.json", "--p", "2", "--field", "complex",
                      "--starts", "64", "--seed", "7"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["seed"] == 7);
    CHECK(std::abs(j["result"]["value"].get<double>() - 0.5) <= 1e-9);
}

TEST_CASE("extremal subcommand reports the equality", "[cli]") {
    auto r = run_cli({"extremal", "--d", "2", "--n", "3", "--k", "1"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["result"]["pass"] == true);
    CHECK(std::abs(j["result"]["log_product_norm"].get<double>() - std::log(1.0 / 16.0)) <=
          1e-12);
}

TEST_CASE("plank gate violation exits with code 3 and names the gate", "[cli]") {
    TempPolyDir dir("plankgate");
    dir.add("p0.json", Polynomial::coordinate(2, Field::complex, 0));
    dir.add("p1.json", Polynomial::coordinate(2, Field::complex, 1));
    auto r = run_cli({"plank", "--polys", dir.path, "--space", "lp:p=2,d=2,field=complex",
                      "--radii", "0.4,0.2", "--regime", "bst", "--seed", "1"});
    CHECK(r.code == 3);
    CHECK(r.err.find("gate") != std::string::npos);
}

TEST_CASE("plank succeeds end to end and writes the report file", "[cli]") {
    TempPolyDir dir("plankrun");
    dir.add("p0.json", Polynomial::coordinate(2, Field::complex, 0));
    dir.add("p1.json", Polynomial::coordinate(2, Field::complex, 1));
    const std::string outfile = "/tmp/plankforge_report.json";
    auto r = run_cli({"plank", "--polys", dir.path, "--space", "lp:p=2,d=2,field=complex",
                      "--radii", "0.25,0.25", "--regime", "bst", "--seed", "1", "--out",
                      outfile});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["result"]["success"] == true);
    CHECK(j["result"]["allocation"]["method"] == "symmetric");
    std::ifstream f(outfile);
    REQUIRE(f.good());
    json file_json;
    f >> file_json;
    CHECK(file_json == j["result"]);
    std::remove(outfile.c_str());
}

TEST_CASE("verify-inequality passes on the coordinate pair", "[cli]") {
    TempPolyDir dir("verify");
    dir.add("p0.json", Polynomial::coordinate(2, Field::complex, 0));
    dir.add("p1.json", Polynomial::coordinate(2, Field::complex, 1));
    auto r = run_cli({"verify-inequality", "--polys", dir.path, "--space",
                      "lp:p=2,d=2,field=complex", "--kind", "eq3", "--seed", "3"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["result"]["pass"] == true);
}

TEST_CASE("remez subcommands run and enforce their bounds", "[cli]") {
    TempPolyDir dir("remez");
    Polynomial p(1, Field::real);
    p.add_term({1}, 1.0);
    dir.add("z.json", p);
    auto sub = run_cli({"remez", "sublevel", "--poly", dir.path + "/z.json", "--p", "2", "--t",
                        "0.25", "--samples", "20000", "--seed", "3"});
    CHECK(sub.code == 0);
    CHECK(json::parse(sub.out)["result"]["pass"] == true);
    auto l8 = run_cli({"remez", "lemma8", "--poly", dir.path + "/z.json", "--p", "2",
                       "--samples", "20000", "--seed", "4"});
    CHECK(l8.code == 0);
    auto j = json::parse(l8.out);
    CHECK(j["result"]["pass"] == true);

    // unnormalized input is a usage error unless --normalize is passed
    Polynomial q(1, Field::real);
    q.add_term({1}, 3.0);
    dir.add("q.json", q);
    auto bad = run_cli({"remez", "sublevel", "--poly", dir.path + "/q.json", "--p", "2", "--t",
                        "0.25", "--samples", "1000", "--seed", "3"});
    CHECK(bad.code == 2);
    auto good = run_cli({"remez", "sublevel", "--poly", dir.path + "/q.json", "--p", "2",
                         "--t", "0.25", "--samples", "20000", "--seed", "3", "--normalize"});
    CHECK(good.code == 0);
}

TEST_CASE("mn-estimate and polarization subcommands", "[cli]") {
    auto mn = run_cli({"mn-estimate", "--space", "lp:p=1,d=2,field=real", "--n", "1",
                       "--budget", "5", "--seed", "2"});
    CHECK(mn.code == 0);
    CHECK(json::parse(mn.out)["result"]["constant"] == 1.0);
    auto pol = run_cli({"polarization", "--space", "lp:p=2,d=2,field=complex", "--k", "1",
                        "--budget", "5", "--seed", "2"});
    CHECK(pol.code == 0);
    CHECK(json::parse(pol.out)["result"]["constant"] == 1.0);
}

TEST_CASE("a failed check exits with 1", "[cli]") {
    // the equality-attaining pair has margin ~0, so a strict zero-slack check
    // fails by floating error and exercises the check-failure exit path
    TempPolyDir dir("verifyfail");
    dir.add("p0.json", Polynomial::coordinate(2, Field::complex, 0));
    dir.add("p1.json", Polynomial::coordinate(2, Field::complex, 1));
    auto r = run_cli({"verify-inequality", "--polys", dir.path, "--space",
                      "lp:p=2,d=2,field=complex", "--kind", "eq3", "--seed", "3", "--rtol",
                      "-1e-6"});
    CHECK(r.code == 1);
    CHECK(json::parse(r.out)["result"]["pass"] == false);
}

TEST_CASE("unknown flags and subcommands exit with 2", "[cli]") {
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"constants", "--kind", "eq2", "--k", "1,1", "--bogus"}).code == 2);
    CHECK(run_cli({"norm"}).code == 2);  // missing required --poly
}

TEST_CASE("every subcommand has a help path", "[cli]") {
    for (const char* sub : {"norm", "constants", "mn-estimate", "polarization", "remez",
                            "plank", "extremal", "verify-inequality"}) {
        auto r = run_cli({sub, "--help"});
        INFO(sub);
        CHECK(r.code == 0);
        CHECK(r.out.find("Usage") != std::string::npos);
    }
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("identical argv and seed give byte-identical output", "[cli]") {
    TempPolyDir dir("det");
    Polynomial p(2, Field::complex);
    p.add_term({1, 1}, Coeff{1, 0});
    p.add_term({2, 0}, Coeff{0, 0.5});
    dir.add("p.json", p);
    const std::vector<std::string> argv{"norm",      "--poly", dir.path + "/p.json",
                                        "--p",       "1.5",    "--field",
                                        "complex",   "--seed", "11",
                                        "--threads", "2"};
    auto a = run_cli(argv);
    auto b = run_cli(argv);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("PLANKFORGE_SEED is the seed fallback", "[cli]") {
    TempPolyDir dir("envseed");
    Polynomial p(1, Field::real);
    p.add_term({1}, 1.0);
    dir.add("p.json", p);
    setenv("PLANKFORGE_SEED", "42", 1);
    auto r = run_cli({"norm", "--poly", dir.path + "/p.json", "--p", "2", "--field", "real"});
    unsetenv("PLANKFORGE_SEED");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["seed"] == 42);
}
