#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wicklab/quasifree.hpp"
#include "wicklab/scenario.hpp"

using namespace wicklab;
using namespace wicklab::scenario;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("wicklab-" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("config parser: sections, repeats, comments") {
    Config cfg = Config::parse("# leading comment\n"
                               "[a]\n"
                               "x = 1\n"
                               "x = 2\n"
                               "y = hello world  # trailing\n"
                               "[b]\n"
                               "list = 1, 2,3\n"
                               "[a]\n"
                               "z = -4.5\n");
    REQUIRE(cfg.find("a"));
    CHECK(cfg.find("a")->get_all("x").size() == 2);
    CHECK(cfg.find("a")->require("y") == "hello world");
    CHECK(cfg.find_all("a").size() == 2);
    CHECK(parse_int_list(cfg.find("b")->require("list")) ==
          std::vector<int>{1, 2, 3});
    CHECK(!cfg.find("missing"));
    CHECK_THROWS_AS(Config::parse("[broken\n"), config_error);
    CHECK_THROWS_AS(Config::parse("keyvalue\n"), config_error);
}

TEST_CASE("bundled scenarios are listed and parse") {
    auto names = bundled_names();
    CHECK(names.size() >= 4);
    for (const auto& n : names) {
        Config cfg = Config::parse(bundled_text(n));
        REQUIRE(cfg.find("scenario"));
        CHECK(cfg.find("scenario")->require("name") == n);
    }
    CHECK_THROWS_AS(bundled_text("nope"), config_error);
}

TEST_CASE("derivative scenario runs and reports") {
    RunOptions opts;
    opts.seed = 99;
    std::string text = bundled_text("oscillator-derivative");
    RunReport rep = run_scenario(Config::parse(text), text, opts);
    CHECK(rep.overall_pass);
    CHECK(rep.rows.size() >= 5);
    // csv has one line per certificate plus a header
    std::istringstream csv(rep.csv(true));
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == static_cast<int>(rep.rows.size()) + 1);
    // json is well formed enough to mention every certificate
    std::string js = rep.json();
    for (const auto& row : rep.rows)
        CHECK(js.find("\"" + row.name + "\"") != std::string::npos);
}

TEST_CASE("adversarial wuest scenario fails with a recorded row") {
    RunOptions opts;
    std::string text = bundled_text("adversarial-wuest");
    RunReport rep = run_scenario(Config::parse(text), text, opts);
    CHECK(!rep.overall_pass);
    bool found = false;
    for (const auto& row : rep.rows)
        if (row.name == "wuest_bound" && !row.pass) found = true;
    CHECK(found);
}

TEST_CASE("run_cli writes outputs and reflects failures in the exit code") {
    fs::path dir = fresh_dir("cli");
    RunOptions opts;
    opts.out_dir = dir.string();
    opts.workers = 1;

    CHECK(run_cli("oscillator-derivative", opts) == 0);
    CHECK(fs::exists(dir / "oscillator-derivative.csv"));
    CHECK(fs::exists(dir / "oscillator-derivative.json"));

    CHECK(run_cli("adversarial-wuest", opts) == 1);
    fs::remove_all(dir);
}

TEST_CASE("custom state files drive a full scenario") {
    fs::path dir = fresh_dir("custom");
    fs::path wfile = dir / "osc_w.txt";
    {
        // an exported oscillator state read back through the custom path
        quasifree::TwoPointMatrix w;
        const int d = 6;
        w.W = Mat::Zero(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                w.W(a, b) = 0.5 * 1.21 * std::exp(cplx(0.0, -1.1 * (a - b)));
        w.save(wfile.string());
    }
    fs::path cfgfile = dir / "custom.cfg";
    {
        std::ofstream out(cfgfile);
        out << "[scenario]\nname = custom-state\n"
            << "[model]\ntype = custom\nw_file = " << wfile.string()
            << "\ndt = 1.1\n"
            << "[truncation]\nn_max = 4\n"
            << "[smearing]\ntype = bump\nshape = gaussian\ncenter = 2.5\n"
            << "width = 1.2\n"
            << "[certificates]\nrun = state_moments,wick,konrady,t1_scan\n"
            << "probes = 30\n";
    }
    RunOptions opts;
    opts.out_dir = (dir / "out").string();
    opts.workers = 1;
    CHECK(run_cli(cfgfile.string(), opts) == 0);
    CHECK(fs::exists(dir / "out" / "custom-state.csv"));
    fs::remove_all(dir);
}

TEST_CASE("non-positive custom state exits 2 without partial files") {
    fs::path dir = fresh_dir("exit2");
    fs::path wfile = dir / "bad_w.txt";
    {
        quasifree::TwoPointMatrix bad;
        bad.W = -Mat::Identity(3, 3);
        bad.save(wfile.string());
    }
    fs::path cfgfile = dir / "bad.cfg";
    {
        std::ofstream out(cfgfile);
        out << "[scenario]\nname = bad-state\n"
            << "[model]\ntype = custom\nw_file = " << wfile.string() << "\n"
            << "[truncation]\nn_max = 3\n"
            << "[smearing]\ntype = indicator\nsites = 0\n"
            << "[certificates]\nrun = t1_scan\n";
    }

    fs::path outdir = dir / "out";
    RunOptions opts;
    opts.out_dir = outdir.string();
    opts.workers = 1;
    CHECK(run_cli(cfgfile.string(), opts) == 2);
    CHECK(!fs::exists(outdir / "bad-state.csv"));
    fs::remove_all(dir);
}

TEST_CASE("unknown certificate names are config errors") {
    std::string text = "[scenario]\nname = bogus-cert\n"
                       "[model]\ntype = oscillator\nd_test = 6\ndt = 0.5\n"
                       "[truncation]\nn_max = 3\n"
                       "[smearing]\ntype = bump\nshape = triangle\n"
                       "center = 3\nhalf_width = 2\n"
                       "[certificates]\nrun = not_a_certificate\n";
    RunOptions opts;
    CHECK_THROWS_AS(run_scenario(Config::parse(text), text, opts), config_error);
}

TEST_CASE("same seed reproduces the csv byte for byte") {
    RunOptions opts;
    opts.seed = 1234;
    std::string text = bundled_text("oscillator-derivative");
    RunReport a = run_scenario(Config::parse(text), text, opts);
    RunReport b = run_scenario(Config::parse(text), text, opts);
    CHECK(a.csv(true) == b.csv(true));

    RunOptions other = opts;
    other.seed = 4321;
    RunReport c = run_scenario(Config::parse(text), text, other);
    CHECK(a.csv(true) != c.csv(true));  // probes actually depend on the seed
}

TEST_CASE("cli binary: list, run, exit codes") {
    fs::path dir = fresh_dir("bin");
    std::string bin = WICKLAB_CLI_PATH;

    std::string list_cmd = bin + " --list-scenarios > " +
                           (dir / "list.txt").string() + " 2>&1";
    REQUIRE(std::system(list_cmd.c_str()) == 0);
    std::string listing = slurp(dir / "list.txt");
    CHECK(listing.find("oscillator-wick-square") != std::string::npos);

    std::string run_cmd = bin + " oscillator-derivative --workers 1 --out " +
                          (dir / "out").string() + " > /dev/null 2>&1";
    CHECK(std::system(run_cmd.c_str()) == 0);
    CHECK(fs::exists(dir / "out" / "oscillator-derivative.csv"));

    std::string bad_cmd = bin + " adversarial-wuest --workers 1 --out " +
                          (dir / "out2").string() + " > /dev/null 2>&1";
    int rc = std::system(bad_cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 1);

    // an unknown scenario name is a config error, not a crash
    std::string unknown_cmd = bin + " no-such-scenario --out " +
                              (dir / "out3").string() + " > /dev/null 2>&1";
    int rc2 = std::system(unknown_cmd.c_str());
    CHECK(WEXITSTATUS(rc2) == 2);
    fs::remove_all(dir);
}
