#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mvnlab/csv.hpp"

using namespace mvnlab;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp_or_empty(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return {};
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

int run_cli(const std::string& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    static int counter = 0;
    ++counter;
    const std::string out = temp_path("mvnlab_cli_out_" + std::to_string(counter));
    const std::string err = temp_path("mvnlab_cli_err_" + std::to_string(counter));
    const char* cli = std::getenv("MVNLAB_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "MVNLAB_CLI must point at the command-line binary");
    const std::string cmd =
        std::string("\"") + cli + "\" " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    if (out_text) *out_text = slurp_or_empty(out);
    if (err_text) *err_text = slurp_or_empty(err);
    std::remove(out.c_str());
    std::remove(err.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

CsvTable load_csv(const std::string& path) {
    const std::string text = slurp_or_empty(path);
    REQUIRE_FALSE(text.empty());
    return parse_csv(text);
}

std::size_t column_of(const CsvTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
        if (table.header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
}

struct Cleanup {
    std::vector<std::string> paths;
    ~Cleanup() {
        for (const auto& p : paths) std::remove(p.c_str());
    }
    std::string add(const std::string& p) {
        paths.push_back(p);
        return p;
    }
};

const std::string kDiagSkewA =
    "algebra: shapes=[2] weights_prefix=[1]\n"
    "block 0:\n"
    "  0+0.7i 0+0i\n"
    "  0+0i 0-0.4i\n";
const std::string kDiagSkewB =
    "algebra: shapes=[2] weights_prefix=[1]\n"
    "block 0:\n"
    "  0-1.1i 0+0i\n"
    "  0+0i 0+0.25i\n";

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run_cli("--help") == 0);
    std::string err;
    CHECK(run_cli("no-such-command", nullptr, &err) == 2);
    CHECK(run_cli("trotter --no-such-flag", nullptr, &err) == 2);
    CHECK(run_cli("", nullptr, &err) == 2);
    CHECK(err.find("ERROR:") != std::string::npos);
}

TEST_CASE("law sweep emits a verdict table deterministically") {
    Cleanup files;
    const auto& csv1 = files.add(temp_path("mvnlab_ops1.csv"));
    const auto& csv2 = files.add(temp_path("mvnlab_ops2.csv"));
    std::string out;
    CHECK(run_cli("ops-check --count 20 --seed 5 --out " + csv1, &out) == 0);
    CHECK(out.find("command: ops-check") != std::string::npos);
    CHECK(out.find("result: PASS") != std::string::npos);
    CHECK(run_cli("ops-check --count 20 --seed 5 --out " + csv2) == 0);
    CHECK(slurp_or_empty(csv1) == slurp_or_empty(csv2));

    const CsvTable table = load_csv(csv1);
    CHECK(table.header == std::vector<std::string>{"index", "law", "residual", "verdict"});
    CHECK(table.rows.size() == 7 * 20);
    const auto vcol = column_of(table, "verdict");
    for (const auto& row : table.rows) CHECK(row[vcol] == "pass");
}

TEST_CASE("metric comparison on the moving-spike sequence") {
    Cleanup files;
    const auto& csv = files.add(temp_path("mvnlab_topo.csv"));
    CHECK(run_cli("topology-compare --family spike --seed 1 --out " + csv) == 0);
    const CsvTable table = load_csv(csv);
    CHECK(table.header ==
          std::vector<std::string>{"index", "srt", "srt_bound", "set", "set_bound", "measure",
                                   "sot", "sot_bound"});
    CHECK(table.rows.size() == 26);
    const auto srt = column_of(table, "srt");
    const auto sot = column_of(table, "sot");
    // values shrink monotonically once the spike starts moving out
    for (std::size_t i = 2; i < table.rows.size(); ++i)
        CHECK(std::stod(table.rows[i][srt]) <= std::stod(table.rows[i - 1][srt]) + 1e-15);
    for (const auto& row : table.rows) CHECK(row[sot] != "nan");
}

TEST_CASE("divergent families fail the comparison with exit code 1") {
    std::string out;
    CHECK(run_cli("topology-compare --family constant-offset --seed 1", &out) == 1);
    CHECK(out.find("result: FAIL") != std::string::npos);
}

TEST_CASE("product formula on commuting generators is exact at every step") {
    Cleanup files;
    const auto& fa = files.add(temp_path("mvnlab_comm_a.txt"));
    const auto& fb = files.add(temp_path("mvnlab_comm_b.txt"));
    const auto& csv = files.add(temp_path("mvnlab_trotter.csv"));
    spit(fa, kDiagSkewA);
    spit(fb, kDiagSkewB);
    CHECK(run_cli("trotter --out " + csv + " " + fa + " " + fb) == 0);
    const CsvTable table = load_csv(csv);
    CHECK(table.header == std::vector<std::string>{"n", "t", "error"});
    CHECK_FALSE(table.rows.empty());
    const auto err = column_of(table, "error");
    for (const auto& row : table.rows) CHECK(std::stod(row[err]) <= 1e-12);
}

TEST_CASE("commutator formula defaults converge") {
    Cleanup files;
    const auto& csv = files.add(temp_path("mvnlab_nelson.csv"));
    CHECK(run_cli("nelson --seed 2 --out " + csv) == 0);
    const CsvTable table = load_csv(csv);
    const auto err = column_of(table, "error");
    CHECK(std::stod(table.rows.back()[err]) <= 1e-2);
}

TEST_CASE("closure sweep covers all four subgroup kinds") {
    for (const std::string kind :
         {"full-unitary", "commutant", "block-determinant-one", "diagonal"}) {
        Cleanup files;
        const auto& csv = files.add(temp_path("mvnlab_lie_" + kind + ".csv"));
        CHECK(run_cli("lie-closure --kind " + kind + " --seed 3 --out " + csv) == 0);
        const CsvTable table = load_csv(csv);
        CHECK(table.header ==
              std::vector<std::string>{"element", "test", "t", "verdict", "residual"});
        const auto vcol = column_of(table, "verdict");
        for (const auto& row : table.rows) CHECK(row[vcol] == "pass");
    }
}

TEST_CASE("generators outside the Lie algebra exit with a property failure") {
    Cleanup files;
    const auto& fa = files.add(temp_path("mvnlab_notskew.txt"));
    spit(fa, "algebra: shapes=[2] weights_prefix=[1]\n"
             "block 0:\n"
             "  1+0i 0+0i\n"
             "  0+0i 1+0i\n");
    std::string err;
    CHECK(run_cli("lie-closure " + fa + " " + fa, nullptr, &err) == 1);
    CHECK(err.find("ERROR: liealg:") != std::string::npos);
    CHECK(err.find("closure check needs generators inside the Lie algebra") != std::string::npos);
}

TEST_CASE("bad input files exit with an input error") {
    Cleanup files;
    const auto& bad = files.add(temp_path("mvnlab_badweights.txt"));
    spit(bad, "algebra: shapes=[1] weights_prefix=[0.9]\nblock 0:\n  0+0i\n");
    std::string err;
    CHECK(run_cli("ops-check " + bad, nullptr, &err) == 2);
    CHECK(err.find("ERROR: blockvn:") != std::string::npos);

    CHECK(run_cli("trotter /no/such/file.txt /no/such/other.txt", nullptr, &err) == 2);
    CHECK(err.find("ERROR:") != std::string::npos);
}

TEST_CASE("tensor laws and injectivity probes run clean") {
    Cleanup files;
    const auto& tcsv = files.add(temp_path("mvnlab_tensor.csv"));
    CHECK(run_cli("tensor-laws --seed 4 --out " + tcsv) == 0);
    const CsvTable tt = load_csv(tcsv);
    CHECK(tt.header == std::vector<std::string>{"check", "size", "verdict", "residual"});

    const auto& ecsv = files.add(temp_path("mvnlab_expinj.csv"));
    CHECK(run_cli("exp-injectivity --seed 4 --out " + ecsv) == 0);
    const CsvTable et = load_csv(ecsv);
    CHECK(et.header == std::vector<std::string>{"element", "test", "t", "verdict", "residual"});
    const auto vcol = column_of(et, "verdict");
    for (const auto& row : et.rows) CHECK(row[vcol] == "pass");
}

TEST_CASE("configs drive the tool and subcommands override them") {
    Cleanup files;
    const auto& cfg = files.add(temp_path("mvnlab_config.cfg"));
    const auto& csv = files.add(temp_path("mvnlab_config_out.csv"));
    spit(cfg, "command=nelson\nseed=2\nout=" + csv + "\n");
    std::string out;
    CHECK(run_cli("--config " + cfg, &out) == 0);
    CHECK(out.find("command: nelson") != std::string::npos);
    CHECK(std::filesystem::exists(csv));

    // an explicit subcommand beats the config's command
    std::string out2;
    CHECK(run_cli("trotter --config " + cfg, &out2) == 0);
    CHECK(out2.find("command: trotter") != std::string::npos);
}
