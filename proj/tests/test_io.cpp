#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tfold/io.hpp"

using namespace tfold;
namespace fs = std::filesystem;

namespace {

io::json scalar6() {
    return io::json::parse(R"({"schema": "tfold.model/1", "type": "scalar6",
        "params": {"mu": -1.0, "nu": 1.0, "eta": 2.0, "gamma": 0.0}, "seeds": {"nu": 1.0, "mu": -1.0}})");
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("tfold_test_" + name);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("scalar6 model parses with overrides") {
    const auto m = io::parse_model(scalar6(), {{"eta", 3.5}});
    REQUIRE(std::holds_alternative<ScalarSixthOrder>(m.spec));
    CHECK(std::get<ScalarSixthOrder>(m.spec).eta == 3.5);
    CHECK(m.source["params"]["eta"] == 3.5);
    CHECK(*m.nu_seed == 1.0);
    CHECK_THROWS_AS(io::parse_model(scalar6(), {{"zeta", 1.0}}), io::InputError);
}

TEST_CASE("malformed model files are rejected") {
    auto j = scalar6();
    j["params"]["eta"] = "two";
    CHECK_THROWS_AS(io::parse_model(j), io::InputError);
    j = scalar6();
    j.erase("schema");
    CHECK_THROWS_AS(io::parse_model(j), io::InputError);
    j = scalar6();
    j["type"] = "quintic";
    CHECK_THROWS_AS(io::parse_model(j), io::InputError);
    CHECK_THROWS_AS(io::parse_model(io::json::array()), io::InputError);
    CHECK_THROWS_AS(io::load_model("/nonexistent/model.json"), io::InputError);
}

TEST_CASE("rd builtin parses") {
    const auto j = io::json::parse(R"({"schema": "tfold.model/1", "type": "rd", "builtin": "fold_turing3",
        "builtin_params": {"kappa": 1.5, "c": 1.0, "s": 0.0}, "D": [0.05, 1.0, 10.0],
        "params": {"mu": 0.3, "nu": 0.05}})");
    const auto m = io::parse_model(j);
    CHECK(std::holds_alternative<RDModel>(m.spec));
    CHECK(component_count(m.spec) == 3);
}

TEST_CASE("report round trip") {
    const auto m = io::parse_model(scalar6());
    const auto r = locate_turing_fold(m.spec, 1.0, -1.0);
    const auto j = io::to_json(r);
    CHECK(j["schema"] == io::kReportSchema);
    const auto back = io::report_from_json(j);
    CHECK(back.mu_star == r.mu_star);
    CHECK(back.nu_star == r.nu_star);
    CHECK(back.k_star == r.k_star);
    CHECK(io::to_json(back) == j);
    auto bad = j;
    bad["schema"] = "other/1";
    CHECK_THROWS_AS(io::report_from_json(bad), io::InputError);
}

TEST_CASE("CSV rows use twelve significant digits") {
    const auto p = scratch("csv") / "t.csv";
    {
        io::CsvWriter w(p.string(), {"a", "b"});
        w << 1.0 / 3.0 << std::string("x");
        w.end_row();
        w << 1.0;
        CHECK_THROWS(w.end_row());
    }
    std::ifstream in(p);
    std::string head, row;
    std::getline(in, head);
    std::getline(in, row);
    CHECK(head == "a,b");
    CHECK(row == "0.333333333333,x");
}

TEST_CASE("CLI exit codes and outputs") {
    const fs::path dir = scratch("cli");
    const std::string cli = TFOLD_CLI_PATH;
    const auto run = [&](const std::string& args) {
        const int st = std::system((cli + " --out-dir " + dir.string() + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(st);
    };
    {
        std::ofstream(dir / "model.json") << scalar6().dump();
        std::ofstream(dir / "broken.json") << "{\"schema\": \"tfold.model/1\", \"type\": ";
    }
    CHECK(run("locate --model " + (dir / "model.json").string()) == 0);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "locate_manifest.json"));
    const auto manifest = io::read_json((dir / "locate_manifest.json").string());
    CHECK(manifest["schema"] == io::kManifestSchema);
    CHECK(run("locate --model " + (dir / "broken.json").string()) == 2);
    CHECK(run("locate --model " + (dir / "model.json").string() + " --param zeta=1") == 2);
    CHECK(run("no-such-command") == 2);
}

}
