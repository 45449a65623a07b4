#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"

using namespace nasolv;
using namespace nasolv::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the nasolv binary with stderr discarded.
Run run(const std::string& args) {
    const char* bin = std::getenv("NASOLV_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "NASOLV_BIN not set");
    const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("nasolv_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d / name;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("number formatting") {
    CHECK(num(1.5) == "1.5");
    CHECK(num(0.1) == "0.1");
    CHECK(num(2e6) == "2.0000000000e+06");
    CHECK(num(-3e7) == "-3.0000000000e+07");
    CHECK(num(std::int64_t{42}) == "42");
    CHECK(parse_list("1,2.5,-3") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK_THROWS_AS(parse_list("1,x"), std::invalid_argument);
}

TEST_CASE("table CSV has a header row") {
    Table t({"a", "b"});
    t.add({"1", "2"});
    CHECK(t.csv() == "a,b\n1,2\n");
}

TEST_CASE("point parsing follows the group dimension") {
    const GroupModel m = GroupModel::abelian(2);
    const GPoint x = parse_point(m, "1,2,-0.5");
    CHECK(x.z[0] == 1.0);
    CHECK(x.z[1] == 2.0);
    CHECK(x.u == -0.5);
    CHECK_THROWS_AS(parse_point(m, "1,2"), std::invalid_argument);
    CHECK(parse_point(GroupModel::heisenberg1(), "0,0,1,0").z[2] == 1.0);
}

TEST_CASE("config loading") {
    const fs::path good = scratch("good.json");
    write(good, R"({"M": 4.0, "tGrid": [1, 2], "seed": 3})");
    const Config c = load_config(good.string());
    CHECK(c.M == 4.0);
    CHECK(c.tGrid.size() == 2);
    CHECK(c.seed == 3);
    CHECK(c.r0 == 1.2);
    const fs::path unknown = scratch("unknown.json");
    write(unknown, R"({"Mx": 4.0})");
    CHECK_THROWS_AS(load_config(unknown.string()), ConfigError);
    const fs::path typed = scratch("typed.json");
    write(typed, R"({"M": "big"})");
    CHECK_THROWS_AS(load_config(typed.string()), ConfigError);
    CHECK_THROWS_AS(load_config(scratch("missing.json").string()), ConfigError);
}

TEST_CASE("geom dist reports arccosh 3") {
    const Run r = run("geom dist --from 0,0,0 --to 2,0,0");
    CHECK(r.code == kExitOk);
    std::stringstream row(r.out.substr(r.out.find('\n') + 1));
    std::string from, to, value;
    std::getline(row, from, ',');
    std::getline(row, to, ',');
    std::getline(row, value, ',');
    CHECK(from == "0;0;0");
    CHECK(std::stod(value) == doctest::Approx(std::acosh(3.0)).epsilon(1e-11));
    CHECK(r.out.rfind("from,to,value,oracle,residual\n", 0) == 0);
}

TEST_CASE("exit codes") {
    CHECK(run("").code == kExitUsage);
    CHECK(run("frobnicate").code == kExitUsage);
    CHECK(run("geom dist --from 0,0").code == kExitUsage);
    CHECK(run("geom dist --from 0,0 --to 1,1,1").code == kExitUsage);
    CHECK(run("--help").code == kExitOk);
    const fs::path bad = scratch("bad.json");
    write(bad, "{ not json");
    CHECK(run("--config " + bad.string() + " cz verify").code == kExitConfig);
    const fs::path weak = scratch("weak.json");
    write(weak, R"({"M": 1.0})");
    CHECK(run("--config " + weak.string() + " cz verify").code == kExitValidation);
    const fs::path heis = scratch("heis.json");
    write(heis, R"({"group": "heisenberg1"})");
    CHECK(run("--config " + heis.string() + " heat gradnorm --t-list 1").code == kExitConfig);
    CHECK(run("mult bounds --F exp").code == kExitUsage);
}

TEST_CASE("cz decompose writes JSON and the good part") {
    const fs::path in = scratch("f.csv");
    write(in, "z0,z1,u,value\n0.5,0.5,-11,10\n0.2,0.3,-10.5,-2\n");
    const fs::path out = scratch("cz");
    const Run r = run("--out " + out.string() + " cz decompose --alpha 0.5 --input " + in.string());
    CHECK(r.code == kExitOk);
    const std::string json = read(out / "decomposition.json");
    CHECK(json.find("\"parts\"") != std::string::npos);
    CHECK(json.find("\"g\": \"g.csv\"") != std::string::npos);
    CHECK(fs::exists(out / "g.csv"));
    write(in, "0.5,0.5,5,1\n");
    CHECK(run("cz decompose --alpha 0.5 --input " + in.string()).code == kExitUsage);
}

TEST_CASE("outputs are byte-identical for a fixed seed") {
    const std::string a = run("--seed 5 geom ball-volume --r 0.5,1 --samples 20000").out;
    const std::string b = run("--seed 5 geom ball-volume --r 0.5,1 --samples 20000").out;
    CHECK(a == b);
    CHECK(a != run("--seed 6 geom ball-volume --r 0.5,1 --samples 20000").out);
}

TEST_CASE("heat and multiplier commands") {
    const fs::path pts = scratch("pts.csv");
    write(pts, "z0,z1,u\n0,0,0\n1,0,0.5\n");
    const Run h = run("heat eval --t 1 --points " + pts.string());
    CHECK(h.code == kExitOk);
    CHECK(h.out.rfind("z0,z1,u,h,oracle,residual\n", 0) == 0);
    CHECK(run("mult plancherel --F exp:1").code == kExitOk);
    CHECK(run("mult kernel --F exp:1 --n 5 --r-max 3").code == kExitOk);
    CHECK(run("mult decompose --F psi").code == kExitOk);
}
