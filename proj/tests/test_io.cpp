#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mfspin/errors.hpp"
#include "mfspin/io.hpp"

using namespace mfspin;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mfspin_io_" + name);
    fs::create_directories(p);
    return p.string();
}

std::string write_temp(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p);
    out << content;
    return p.string();
}

} // namespace

TEST_CASE("config serialization round-trips exactly") {
    RunConfig cfg;
    cfg.command = "invert";
    cfg.model = "ms";
    cfg.sizes = {600, 400};
    cfg.coupling_matrix = {{1.2, 0.98}, {0.98, 0.8}};
    cfg.field_vector = {0.1, 0.2};
    cfg.sample_count = 12345;
    cfg.replicates = 7;
    cfg.seed = 987654321;
    cfg.coupling = 0.6180339887498949; // full-precision doubles must survive
    cfg.output_dir = "/tmp/x";
    cfg.output_stem = "roundtrip";
    cfg.format = "json";
    const RunConfig back = config_from_json_text(config_to_json_text(cfg));
    CHECK(back == cfg);
}

TEST_CASE("unknown config keys are rejected by name") {
    CHECK_THROWS_WITH_AS((void)config_from_json_text(R"({"command":"exact","bogus":1})"),
                         "unknown config key 'bogus'", UsageError);
}

TEST_CASE("underscore-prefixed manifest keys are ignored on load") {
    const RunConfig cfg = config_from_json_text(
        R"({"command":"exact","N":12,"_wall_time_s":1.5,"_outputs":["a.csv"]})");
    CHECK(cfg.command == "exact");
    CHECK(cfg.n_spins == 12);
}

TEST_CASE("command line overrides a config file") {
    const std::string path = write_temp(
        "override.json", R"({"command":"forward","J":0.6,"h":0.1,"stem":"filestem"})");
    const RunConfig cfg = parse_config({"--config", path, "--J", "0.9", "--out", "/tmp/y"});
    CHECK(cfg.command == "forward");
    CHECK(cfg.coupling == 0.9); // flag wins
    CHECK(cfg.field == 0.1);    // file survives where no flag is given
    CHECK(cfg.output_stem == "filestem");
}

TEST_CASE("missing or unknown commands are usage errors") {
    CHECK_THROWS_AS((void)parse_config({}), UsageError);
    CHECK_THROWS_AS((void)parse_config({"frobnicate"}), UsageError);
    CHECK_THROWS_AS((void)parse_config({"--N", "10"}), UsageError);
}

TEST_CASE("ms model demands explicit sizes and couplings") {
    CHECK_THROWS_AS((void)parse_config({"exact", "--model", "ms"}), UsageError);
    CHECK_NOTHROW((void)parse_config({"exact", "--model", "ms", "--sizes", "4,3",
                                      "--J-matrix", "[[1.0,0.2],[0.2,0.9]]", "--h-vector",
                                      "0.1,-0.1"}));
}

TEST_CASE("flag value validation") {
    CHECK_THROWS_AS((void)parse_config({"exact", "--model", "xx"}), UsageError);
    CHECK_THROWS_AS((void)parse_config({"exact", "--format", "xml"}), UsageError);
    CHECK_THROWS_AS((void)parse_config({"exact", "--N", "ten"}), UsageError);
    CHECK_THROWS_AS((void)parse_config({"exact", "--sizes", "4,three"}), UsageError);
}

TEST_CASE("study commands materialize their default grids into the config") {
    const RunConfig n = parse_config({"study-n"});
    REQUIRE(n.n_list.size() == 10);
    CHECK(n.n_list.front() == 1000);
    CHECK(n.n_list.back() == 10000);
    CHECK(n.output_stem == "study-n");
    CHECK(!n.output_dir.empty());

    const RunConfig m = parse_config({"study-m"});
    CHECK(m.m_list == std::vector<std::uint64_t>{100, 1000, 10000, 100000});

    const RunConfig j = parse_config({"sweep-cw"});
    REQUIRE(j.j_list.size() == 7);
    CHECK(j.j_list.front() == doctest::Approx(0.6));
    CHECK(j.j_list.back() == doctest::Approx(1.2));

    const RunConfig s = parse_config({"sweep-ms"});
    CHECK(s.cases.size() == 20);

    CHECK(parse_config({"sample"}).seed == kDefaultSeed);
}

TEST_CASE("forward run writes a csv, a json report, and a manifest") {
    const std::string dir = temp_dir("forward");
    RunConfig cfg = parse_config({"forward", "--J", "1.5", "--h", "0.0", "--out", dir,
                                  "--stem", "fw"});
    const auto paths = run_and_emit(cfg);
    REQUIRE(paths.size() == 3);
    const std::string csv = slurp(dir + "/fw.csv");
    CHECK(csv.rfind("m_1,residual,stable,marginal,jacobian_radius,chi_11\n", 0) == 0);
    // three fixed points at J=1.5, h=0: header + 3 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    const std::string manifest = slurp(dir + "/fw_manifest.json");
    CHECK(manifest.find("\"_outputs\"") != std::string::npos);
    CHECK(manifest.find("\"command\": \"forward\"") != std::string::npos);
    // the manifest reloads as a valid config for the same command
    const RunConfig back = config_from_json_text(manifest);
    CHECK(back.command == "forward");
    CHECK(back.coupling == 1.5);
}

TEST_CASE("exact run emits the full distribution with probabilities summing to one") {
    const std::string dir = temp_dir("exact");
    RunConfig cfg =
        parse_config({"exact", "--N", "4", "--J", "0.8", "--h", "0.1", "--out", dir});
    (void)run_and_emit(cfg);
    std::istringstream csv(slurp(dir + "/exact.csv"));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "count_1,magnetization_1,probability");
    double total = 0.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto last = line.rfind(',');
        total += std::stod(line.substr(last + 1));
        ++rows;
    }
    CHECK(rows == 5);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sample runs are byte-identical across reruns and output directories") {
    const std::string d1 = temp_dir("sample1");
    const std::string d2 = temp_dir("sample2");
    RunConfig cfg = parse_config({"sample", "--N", "10", "--J", "0.7", "--h", "0.05", "--M",
                                  "50", "--R", "2", "--seed", "31415", "--out", d1});
    (void)run_and_emit(cfg);
    const std::string first = slurp(d1 + "/sample.csv");
    (void)run_and_emit(cfg); // same directory: overwrite in place
    CHECK(slurp(d1 + "/sample.csv") == first);
    cfg.output_dir = d2;
    (void)run_and_emit(cfg);
    CHECK(slurp(d2 + "/sample.csv") == first);
    // header and row count: 2 replicates x 50 draws
    CHECK(first.rfind("replicate,draw_index,m_1\n", 0) == 0);
    CHECK(std::count(first.begin(), first.end(), '\n') == 101);
}

TEST_CASE("invert run reports replicate-mean estimates near the truth") {
    const std::string dir = temp_dir("invert");
    RunConfig cfg = parse_config({"invert", "--N", "200", "--J", "0.6", "--h", "0.1", "--M",
                                  "5000", "--R", "4", "--out", dir});
    (void)run_and_emit(cfg);
    const std::string report = slurp(dir + "/invert.json");
    CHECK(report.find("\"j_exp\"") != std::string::npos);
    CHECK(report.find("\"replicate_std\"") != std::string::npos);
    const std::string csv = slurp(dir + "/invert.csv");
    CHECK(csv.rfind("replicate,m_exp_1,chi_exp_11,j_exp_11,h_exp_1,asymmetry\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("a written manifest parses back into the exact run configuration") {
    const std::string dir = temp_dir("manifest_rt");
    const RunConfig cfg = parse_config({"study-n", "--n-list", "100,200,400", "--J",
                                        "0.73000000000000009", "--h", "0.1", "--seed", "42",
                                        "--out", dir, "--stem", "rt"});
    (void)run_and_emit(cfg);
    const RunConfig back = parse_config({"--config", dir + "/rt_manifest.json"});
    CHECK(back == cfg);
}

TEST_CASE("config json uses enough digits to reproduce doubles exactly") {
    RunConfig cfg;
    cfg.command = "exact";
    cfg.coupling = 0.1 + 0.2; // 0.30000000000000004
    const RunConfig back = config_from_json_text(config_to_json_text(cfg));
    CHECK(back.coupling == cfg.coupling);
}
