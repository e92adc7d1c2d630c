#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dqm/cli.hpp"
#include "dqm/qdilog.hpp"
#include "oracles.hpp"

using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
    std::ostringstream out, err;
    std::istringstream in(input);
    const int code = dqm::cli::run(args, out, err, in);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("amplitude sweep as CSV") {
    const auto r = run({"scatter", "amplitudes", "--gamma", "0.5", "--h", "2", "--k-grid", "0.1:6:60"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# ", 0) == 0);
    CHECK(r.out.find("k,re_t,im_t,re_r,im_r,defect\n") != std::string::npos);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 60);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 6);
        CHECK(row[5] < 1e-8);
        CHECK(std::hypot(row[3], row[4]) < 1e-9);  // h = 2 is reflectionless
    }
    CHECK(rows.front()[0] == doctest::Approx(0.1));
    CHECK(rows.back()[0] == doctest::Approx(6.0));
}

TEST_CASE("output is deterministic and independent of the worker count") {
    const std::vector<std::string> base{"scatter", "amplitudes", "--gamma", "0.6", "--h", "1.3", "--k-grid", "0.2:4:17"};
    auto one = base, many = base;
    one.insert(one.end(), {"--jobs", "1"});
    many.insert(many.end(), {"--jobs", "3"});
    const auto a = run(one), b = run(many), c = run(one);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    auto js = base;
    js.insert(js.end(), {"--format", "json"});
    const auto j = json::parse(run(js).out);
    CHECK(j["schema"] == 1);
    CHECK(j["rows"].size() == 17);
}

TEST_CASE("output file") {
    const std::string path = "cli_test_amplitudes.csv";
    const auto r = run({"scatter", "amplitudes", "--gamma", "0.5", "--h", "1.5", "--k-grid", "0.5:1:3", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(csv_rows(ss.str()).size() == 3);
    std::remove(path.c_str());
}

TEST_CASE("reflectionless table") {
    const auto empty = run({"refless", "table", "--gamma", "0.5", "--seeds", "-"}, "[]");
    REQUIRE(empty.code == 0);
    const auto rows = csv_rows(empty.out);
    CHECK(rows.size() == 21);
    for (const auto& row : rows) {
        CHECK(row[1] == 1.0);
        CHECK(row[2] == 0.0);
    }
    const auto two = run({"refless", "table", "--gamma", "0.5", "--seeds", "-", "--format", "json", "--x-grid", "-1:1:5"},
                         R"([{"k": 1, "c_tilde": 1}, {"k": 2, "c_tilde": -1}])");
    REQUIRE(two.code == 0);
    const auto j = json::parse(two.out);
    CHECK(j["rows"].size() == 5);
    CHECK(j["energies"].size() == 2);
    const auto range = run({"refless", "table", "--gamma", "0.5", "--seeds", "-", "--x-range", "-1:1:0.25"}, "[]");
    REQUIRE(range.code == 0);
    const auto rr = csv_rows(range.out);
    REQUIRE(rr.size() == 9);
    CHECK(rr[4][0] == 0.0);
    CHECK(rr[8][0] == 1.0);
    CHECK(run({"refless", "table", "--gamma", "0.5", "--seeds", "-", "--x-range", "0:1:0.5", "--x-grid", "0:1:3"}, "[]")
              .code == 2);
    const auto bad = run({"refless", "table", "--gamma", "0.5", "--seeds", "-"}, R"([{"k": 1, "c_tilde": -1}])");
    CHECK(bad.code == 2);
    CHECK(bad.err.find("sign") != std::string::npos);
}

TEST_CASE("quantum dilogarithm and series commands") {
    const auto r = run({"qdilog", "eval", "--gamma", "1", "--z", "1,0.5"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    const auto v = dqm::eval(dqm::QdilogParam(1.0), dqm::cplx(1.0, 0.5)).value;
    CHECK(j["value"][0].get<double>() == doctest::Approx(v.real()).epsilon(1e-15));
    CHECK(j["value"][1].get<double>() == doctest::Approx(v.imag()).epsilon(1e-15));

    const auto pole = run({"qdilog", "eval", "--gamma", "1", "--z", "0,4.141592653589793"});
    CHECK(pole.code == 1);
    CHECK(json::parse(pole.out)["error"]["kind"] == "PoleError");

    const auto s = run({"qseries", "phi21", "--gamma", "0.4", "--a", "0.5", "--b", "0.3", "--c", "0.2", "--z", "0.1"});
    CHECK(s.code == 0);
    CHECK(json::parse(s.out)["converged"] == true);
    const auto d = run({"qseries", "phi21", "--gamma", "0.4", "--a", "0.5", "--b", "0.3", "--c", "0.2", "--z", "3"});
    CHECK(d.code == 1);
    CHECK(json::parse(d.out)["error"]["kind"] == "DivergenceError");
}

TEST_CASE("solvable commands") {
    const auto e = run({"solvable", "eigen", "--gamma", "0.4", "--h", "2.5"});
    REQUIRE(e.code == 0);
    const auto j = json::parse(e.out);
    CHECK(j["levels"].size() == 3);
    for (const auto& l : j["levels"]) CHECK(l["max_relative_residual"].get<double>() < 1e-7);
    const auto id = run({"solvable", "identify", "--gamma", "0.5", "--N", "2"});
    CHECK(id.code == 0);
    CHECK(json::parse(id.out)["result"] == "PASS");
}

TEST_CASE("connection evidence suites") {
    for (const std::string suite : {"terminating", "qeuler", "double", "residual", "pipeline", "random"}) {
        const auto r = run({"scatter", "verify-conjecture", "--suite", suite, "--cases", "3"});
        CHECK(r.code == 0);
        const auto j = json::parse(r.out);
        CHECK(j["result"] == "PASS");
        for (const auto& c : j["cases"]) CHECK(c["result"] == "PASS");
    }
    // An impossible tolerance turns the report into FAIL with exit code 1.
    const auto strict = run({"scatter", "verify-conjecture", "--suite", "double", "--cases", "3", "--tol", "1e-300"});
    CHECK(strict.code == 1);
    CHECK(json::parse(strict.out)["result"] == "FAIL");
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"scatter", "amplitudes", "--gamma", "0.5", "--h", "9"}).code == 2);
    CHECK(run({"scatter", "amplitudes", "--gamma", "-1", "--h", "1"}).code == 2);
    CHECK(run({"scatter", "amplitudes", "--gamma", "0.5", "--h", "1", "--k-grid", "1:0:3"}).code == 2);
    CHECK(run({"qdilog", "eval", "--gamma", "1", "--z", "abc"}).code == 2);
    CHECK(run({"solvable", "eigen", "--gamma", "0.5", "--h", "1.5", "--n", "3"}).code == 2);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("verify-all") != std::string::npos);
}
