#include <doctest.h>

#include "nlsubdiv/cli.hpp"
#include "nlsubdiv/io.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace nlsd;
namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "subdiv");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("nlsd_cli_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

std::string random_csv(std::size_t n) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return io::sequence_to_csv(Sequence(v, 0, 6, Boundary::Periodic));
}

int count_lines(const std::string& s, const std::string& needle) {
    int n = 0;
    for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("table commands") {
    const auto t2 = call({"table2"});
    CHECK(t2.status == 0);
    CHECK(count_lines(t2.out, "\n") == 7);
    CHECK(count_lines(t2.out, "PASS") + count_lines(t2.out, "FAIL") == 6);
    CHECK(t2.out.find("475/512") != std::string::npos);

    const auto t1 = call({"table1"});
    CHECK(t1.status == 0);
    CHECK(count_lines(t1.out, "FAIL") == 0);
    CHECK(t1.out.find("- 429/32768 D^4 f[n+4]") != std::string::npos);

    TempDir dir;
    CHECK(call({"table2", "-o", dir / "t2.json"}).status == 0);
    const auto j = io::Json::parse(slurp(dir / "t2.json"));
    CHECK(j.size() == 6);
    CHECK(j[0]["status"] == "PASS");

    const auto lemma = call({"lemma-suite", "--trials", "2000"});
    CHECK(lemma.status == 0);
    CHECK(count_lines(lemma.out, "PASS") == 8);
}

TEST_CASE("subdivide with zero levels rewrites the input") {
    TempDir dir;
    spit(dir / "in.csv", random_csv(64));
    const auto r = call({"subdivide", "-s", "power_p:2", "-i", dir / "in.csv", "-L", "0", "-o", dir / "out.csv"});
    CHECK(r.status == 0);
    CHECK(slurp(dir / "out.csv") == slurp(dir / "in.csv"));

    const auto r2 = call({"subdivide", "-s", "centered:2", "-i", dir / "in.csv", "-L", "2", "--format", "json"});
    CHECK(r2.status == 0);
    const auto s = io::sequence_from_json(io::Json::parse(r2.out));
    CHECK(s.size() == 256);
    CHECK(s.level() == 8);
}

TEST_CASE("decompose then reconstruct round trips the values") {
    TempDir dir;
    spit(dir / "in.csv", random_csv(64));
    for (const std::string scheme : {"centered:4", "uncentered:9", "weno6", "power_p:3", "spherical:reference"}) {
        CAPTURE(scheme);
        for (const std::string ext : {".json", ".bin"}) {
            REQUIRE(call({"decompose", "-s", scheme, "-i", dir / "in.csv", "-L", "5", "-o", dir / ("p" + ext)}).status == 0);
            const auto r = call({"reconstruct", "-i", dir / ("p" + ext), "-o", dir / "back.csv"});
            REQUIRE(r.status == 0);
            CHECK(slurp(dir / "back.csv") == slurp(dir / "in.csv"));
        }
    }
    const auto j = io::Json::parse(slurp(dir / "p.json"));
    CHECK(j["scheme"]["family"] == "spherical");
    CHECK(j.contains("x"));
}

TEST_CASE("threshold") {
    TempDir dir;
    spit(dir / "in.csv", random_csv(64));
    REQUIRE(call({"decompose", "-s", "power_p:2", "-i", dir / "in.csv", "-L", "3", "-o", dir / "p.json"}).status == 0);
    const auto r = call({"threshold", "-i", dir / "p.json", "--tolerance", "0.2", "-o", dir / "t.json"});
    REQUIRE(r.status == 0);
    const auto summary = io::Json::parse(r.out);
    CHECK(summary["details"] == 56);
    CHECK(summary["zeroed"].get<int>() > 0);
    const auto t = io::pyramid_from_json(io::Json::parse(slurp(dir / "t.json")));
    for (const auto& d : t.details()) {
        for (double v : d.values()) CHECK((v == 0.0 || std::abs(v) > 0.2));
    }
    const auto s = call({"threshold", "-s", "power_p:2", "-L", "3", "-i", dir / "in.csv", "--tolerance", "0.01"});
    REQUIRE(s.status == 0);
    CHECK(io::Json::parse(s.out).contains("max_error"));
}

TEST_CASE("analysis commands are deterministic") {
    const std::vector<std::string> args{"contraction", "-s", "weno6", "--trials", "300", "--seed", "17"};
    auto a = args;
    a.insert(a.end(), {"--threads", "1"});
    auto b = args;
    b.insert(b.end(), {"--threads", "3"});
    const auto ra = call(a);
    const auto rb = call(b);
    CHECK(ra.status == 0);
    CHECK(ra.out == rb.out);
    const auto j = io::Json::parse(ra.out);
    CHECK(j["seed"] == 17);
    CHECK(j["delta"] == "max(d,D)");
    CHECK(j["c_estimate"].get<double>() <= 0.75);

    const auto lin = io::Json::parse(call({"contraction", "-s", "uncentered:6", "--delta", "D^2", "--trials", "50"}).out);
    CHECK(lin["exact"].dump() == "[87,128]");
    CHECK(lin["c_estimate"].get<double>() == doctest::Approx(87.0 / 128.0));

    const auto sp = io::Json::parse(call({"spectral", "-s", "uncentered:10"}).out);
    CHECK(sp["rho"].get<double>() > 1.0);
    const auto h = io::Json::parse(call({"holder", "-s", "centered:2"}).out);
    CHECK(h["beta_estimate"].get<double>() == doctest::Approx(1.0).epsilon(0.05));
    const auto m = io::Json::parse(call({"contraction", "-s", "power_p:2", "--mode", "perturbation", "--trials", "200"}).out);
    CHECK(m["perturbation_bound"].get<double>() <= 0.125 + 1e-9);
}

TEST_CASE("figure1 writes csv") {
    TempDir dir;
    const auto r = call({"figure1", "--points", "9", "-o", dir / "fig.csv"});
    REQUIRE(r.status == 0);
    const auto csv = slurp(dir / "fig.csv");
    CHECK(csv.rfind("points,level,abscissa,value\n", 0) == 0);
    // 257 + 513 + ... + 8193 samples
    CHECK(count_lines(csv, "\n") == 1 + 257 + 513 + 1025 + 2049 + 4097 + 8193);
    CHECK(io::Json::parse(r.out)[0]["points"] == 9);
}

TEST_CASE("config files, flags and the seed variable") {
    TempDir dir;
    spit(dir / "cfg.json", R"({"command": "contraction", "scheme": {"family": "power_p", "params": {"p": 5}},
                              "trials": 40, "seed": 3, "window": 32})");
    const char* argv1[] = {"subdiv", "--config", nullptr};
    const auto cfg_path = dir / "cfg.json";
    argv1[2] = cfg_path.c_str();
    auto c = cli::parse_command_line(3, argv1, "99");
    CHECK(c.command == "contraction");
    CHECK(c.seed == 3);
    CHECK(*c.trials == 40);
    CHECK(c.window == 32);

    const char* argv2[] = {"subdiv", "--config", cfg_path.c_str(), "--seed", "8", "--trials", "20"};
    c = cli::parse_command_line(7, argv2, "99");
    CHECK(c.seed == 8);
    CHECK(*c.trials == 20);
    CHECK(*c.scheme == R"({"family":"power_p","params":{"p":5}})");

    const char* argv3[] = {"subdiv", "table2"};
    CHECK(cli::parse_command_line(2, argv3, "99").seed == 99);
    CHECK(cli::parse_command_line(2, argv3, nullptr).seed == cli::default_seed);
    CHECK_THROWS_AS(cli::parse_command_line(2, argv3, "12x"), cli::UsageError);

    const auto r = call({"--config", cfg_path});
    CHECK(r.status == 0);
    CHECK(io::Json::parse(r.out)["trials"] == 40);
}

TEST_CASE("usage and compute errors") {
    TempDir dir;
    auto usage = [](const Result& r) {
        CHECK(r.status == 2);
        CHECK(io::Json::parse(r.err)["error"] == "UsageError");
    };
    usage(call({}));
    usage(call({"frobnicate"}));
    usage(call({"subdivide", "-s", "centered:4"}));
    usage(call({"subdivide", "-s", "centered:4", "-i", dir / "missing.csv"}));
    usage(call({"contraction", "-s", "cubic:3"}));
    usage(call({"contraction", "-s", "weno6", "--delta", "q"}));
    usage(call({"table2", "--levels", "x"}));
    usage(call({"table2", "-o", dir / "no/such/dir/out.json"}));
    usage(call({"table2", "--config", dir / "missing.json"}));
    spit(dir / "bad.json", R"({"trails": 3})");
    usage(call({"table2", "--config", dir / "bad.json"}));

    spit(dir / "in.csv", random_csv(48));
    const auto r = call({"decompose", "-s", "centered:4", "-i", dir / "in.csv", "-L", "5"});
    CHECK(r.status == 1);
    const auto rec = io::Json::parse(r.err);
    CHECK(rec["error"] == "IncompatibleWindow");
    CHECK(rec["command"] == "decompose");

    spit(dir / "junk.json", "{\"details\": 3}");
    const auto p = call({"reconstruct", "-i", dir / "junk.json"});
    CHECK(p.status == 1);
    CHECK(io::Json::parse(p.err)["error"] == "ParseError");

    const auto help = call({"--help"});
    CHECK(help.status == 0);
    CHECK(help.out.find("--scheme") != std::string::npos);
}
