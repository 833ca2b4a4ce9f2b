#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = ksep::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result& r) {
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out);
}

}  // namespace

TEST_CASE("criterion commands") {
    auto j = json_of(run({"criterion1", "--n", "4", "--m", "2", "--k", "2", "--p", "0.3"}));
    CHECK(j["violated"] == true);
    CHECK(j["params"]["n"] == 4);
    CHECK(j["params"]["p"] == 0.3);
    CHECK(j["tolerance"] == 1e-9);
    CHECK(j.contains("lhs"));
    CHECK(j.contains("rhs"));
    CHECK(j.contains("margin"));

    j = json_of(run({"criterion1", "--n", "4", "--m", "2", "--k", "2", "--p", "0.9"}));
    CHECK(j["violated"] == false);

    j = json_of(run({"criterion2", "--n", "3", "--k", "3", "--p", "0"}));
    CHECK(j["violated"] == true);
    CHECK(j["lhs"] == 1.5);

    j = json_of(run({"criterion1", "--n", "4", "--m", "4", "--k", "2"}));
    CHECK(j["violated"] == false);
    CHECK(j.contains("note"));
}

TEST_CASE("threshold command") {
    auto j = json_of(run({"threshold", "--family", "dicke", "--n", "4", "--m", "2", "--k", "2"}));
    CHECK(j["threshold"] == 0.470588235294);
    CHECK(j["bisection"] == 0.470588235294);

    j = json_of(run({"threshold", "--family", "wqudit", "--n", "3", "--k", "2"}));
    CHECK(j["threshold"] == 0.692307692308);

    j = json_of(run({"threshold", "--family", "dicke", "--n", "4", "--m", "4", "--k", "2"}));
    CHECK(j["threshold"] == 0.0);
    CHECK(j["note"].get<std::string>().find("degenerate") != std::string::npos);

    const auto csv = run({"threshold", "--family", "wqudit", "--n", "3", "--k", "2", "--format", "csv"});
    CHECK(csv.out == "family,n,m,d,k,threshold,bisection\nwqudit,3,,3,2,0.692307692308,0.692307692308\n");
}

TEST_CASE("sweep command") {
    const auto one = run({"sweep", "--family", "dicke", "--n", "4", "--m", "2", "--k", "2", "--p", "0.25"});
    REQUIRE(one.code == 0);
    std::istringstream lines(one.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    CHECK(count == 2);
    CHECK(one.out.rfind("family,n,m,d,k,p,value,violated\n", 0) == 0);

    const auto grid = run({"sweep", "--family", "wqudit", "--n", "3-5", "--k", "2,n", "--p-points", "4"});
    REQUIRE(grid.code == 0);
    std::istringstream g(grid.out);
    count = 0;
    while (std::getline(g, line)) ++count;
    CHECK(count == 1 + 3 * 2 * 4);

    const auto table = run({"sweep", "--family", "dicke", "--n", "4-24", "--m", "2-20", "--k", "2", "--mode",
                            "thresholds"});
    REQUIRE(table.code == 0);
    CHECK(table.out.find("dicke,24,2,,2,") != std::string::npos);

    CHECK(run({"sweep", "--family", "dicke", "--n", "4", "--m", "2", "--k", "2"}).code == 2);
    CHECK(run({"sweep", "--family", "dicke", "--n", "4", "--m", "2", "--k", "2", "--p", "0.5,0.2"}).code == 2);
    CHECK(run({"sweep", "--family", "dicke", "--n", "4", "--m", "9", "--k", "2", "--p", "0.5"}).code == 2);
}

TEST_CASE("oracle command") {
    auto j = json_of(run({"oracle", "--n", "4", "--k", "3", "--m", "2", "--samples", "50", "--seed", "1"}));
    CHECK(j["pass"] == true);
    CHECK(j["samples"] == 50);
    CHECK(j["violations"] == 0);
    CHECK(j["max_margin"].get<double>() <= 1e-9);

    j = json_of(run({"oracle", "--n", "3", "--k", "3", "--d", "3", "--samples", "50", "--seed", "2"}));
    CHECK(j["criterion"] == "criterion2");
    CHECK(j["pass"] == true);

    const auto zero = run({"oracle", "--n", "3", "--k", "3", "--d", "3", "--samples", "0", "--seed", "2"});
    CHECK(zero.code == 2);
    CHECK(!zero.err.empty());
    CHECK(run({"oracle", "--n", "3", "--k", "3", "--m", "1", "--samples", "5"}).code == 2);
    CHECK(run({"oracle", "--n", "3", "--k", "3", "--d", "2", "--samples", "5", "--seed", "1"}).code == 2);

    // a negative tolerance is rejected; a tiny one still passes on separable samples
    CHECK(run({"oracle", "--n", "3", "--k", "2", "--m", "1", "--samples", "5", "--seed", "1", "--tolerance", "-1"}).code == 2);
}

TEST_CASE("partitions command") {
    auto j = json_of(run({"partitions", "--n", "6", "--k", "3"}));
    CHECK(j["count"] == 90);
    CHECK(j["enumerated"] == 90);
    j = json_of(run({"partitions", "--n", "3", "--k", "2", "--list"}));
    CHECK(j["partitions"].size() == 3);
    CHECK(j["partitions"][0] == nlohmann::json::parse("[[1,2],[3]]"));
    CHECK(run({"partitions", "--n", "3", "--k", "4"}).code == 2);
}

TEST_CASE("observables command") {
    auto j = json_of(run({"observables", "--family", "dicke", "--n", "5", "--row", "7"}));
    REQUIRE(j.is_array());
    CHECK(j.size() == 32);
    bool found = false;
    for (const auto& t : j) {
        if (t["factors"] == nlohmann::json::parse(R"(["I","Z","I","Z","Z"])")) {
            found = true;
            CHECK(t["coefficient"] == -0.03125);
        }
    }
    CHECK(found);

    j = json_of(run({"observables", "--family", "dicke", "--n", "4", "--row", "4", "--col", "6", "--part", "real"}));
    CHECK(j.size() == 8);
    j = json_of(run({"observables", "--family", "wqudit", "--n", "3", "--row", "6", "--col", "8", "--part", "imag"}));
    CHECK(j.size() == 2);
    j = json_of(run({"observables", "--family", "dicke", "--n", "4", "--m", "2", "--inventory"}));
    CHECK(j["count"] == 112);
    CHECK(j["formula"] == 112);
    j = json_of(run({"observables", "--family", "wqudit", "--n", "3", "--inventory"}));
    CHECK(j["count"] == 63);

    CHECK(run({"observables", "--family", "dicke", "--n", "4", "--row", "4", "--col", "6"}).code == 2);
    CHECK(run({"observables", "--family", "dicke", "--n", "4", "--row", "4", "--col", "5", "--part", "real"}).code == 2);
}

TEST_CASE("invalid invocations") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"criterion1", "--n", "4"}).code == 2);
    CHECK(run({"criterion1", "--n", "4", "--m", "2", "--k", "5"}).code == 2);
    CHECK(run({"criterion1", "--n", "4", "--m", "2", "--k", "2", "--p", "1.5"}).code == 2);
    CHECK(run({"threshold", "--family", "ghz", "--n", "4", "--k", "2"}).code == 2);
    CHECK(run({"threshold", "--family", "wqudit", "--n", "3", "--d", "4", "--k", "2"}).code == 2);
    const auto r = run({"criterion1", "--n", "x", "--m", "2", "--k", "2"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output files are byte identical across runs") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = (dir / "ksep_cli_test_a.csv").string();
    const auto b = (dir / "ksep_cli_test_b.csv").string();
    const std::vector<std::string> base{"sweep", "--family", "dicke", "--n", "4-9", "--m", "all", "--k", "all",
                                        "--p-points", "25", "--output"};
    auto args_a = base;
    args_a.push_back(a);
    auto args_b = base;
    args_b.push_back(b);
    REQUIRE(run(args_a).code == 0);
    REQUIRE(run(args_b).code == 0);
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const auto ca = slurp(a);
    CHECK(!ca.empty());
    CHECK(ca == slurp(b));
    CHECK(ca.find('\r') == std::string::npos);
    std::remove(a.c_str());
    std::remove(b.c_str());

    const auto o1 = run({"oracle", "--n", "4", "--k", "2", "--m", "1", "--samples", "20", "--seed", "9"});
    const auto o2 = run({"oracle", "--n", "4", "--k", "2", "--m", "1", "--samples", "20", "--seed", "9"});
    CHECK(o1.out == o2.out);
}

TEST_CASE("list parsing") {
    using ksep::cli::parse_int_list;
    CHECK(parse_int_list("4,6,8") == std::vector<int>{4, 6, 8});
    CHECK(parse_int_list("2-5") == std::vector<int>{2, 3, 4, 5});
    CHECK(parse_int_list("2-8:3") == std::vector<int>{2, 5, 8});
    CHECK(parse_int_list("2,n", true) == std::vector<int>{2, 0});
    CHECK_THROWS(parse_int_list("2,n"));
    CHECK_THROWS(parse_int_list("5-2"));
    CHECK_THROWS(parse_int_list(""));
    CHECK_THROWS(parse_int_list("1,,2"));
    CHECK(ksep::cli::parse_real_list("0.1,0.5") == std::vector<double>{0.1, 0.5});
    CHECK_THROWS(ksep::cli::parse_real_list("0.1,x"));
}
