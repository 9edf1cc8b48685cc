#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliResult {
    int exit_code;
    std::string out;
};

std::string temp_path(const std::string& name) {
    return std::string("/tmp/tracelab_test_") + name;
}

// Runs the built binary through the shell, capturing stdout.
CliResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string out_path = temp_path("stdout");
    const std::string cmd =
        env + (env.empty() ? "" : " ") + TRACELAB_CLI_PATH + " " + args + " > " + out_path + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream f(out_path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    r.out = ss.str();
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli: simulate matches the frozen diagram byte for byte") {
    const CliResult ascii =
        run_cli("simulate --p 3 --q 2 --value 1 --steps 30 --window=-20..10 --format ascii");
    REQUIRE(ascii.exit_code == 0);
    REQUIRE(ascii.out == read_file(std::string(TRACELAB_GOLDEN_DIR) + "/diagram_32_one_30.txt"));

    const CliResult pgm =
        run_cli("simulate --p 3 --q 2 --value 1 --steps 30 --window=-20..10 --format pgm");
    REQUIRE(pgm.exit_code == 0);
    REQUIRE(pgm.out == read_file(std::string(TRACELAB_GOLDEN_DIR) + "/diagram_32_one_30.pgm"));
}

TEST_CASE("cli: simulate blanks and markers") {
    const CliResult blank = run_cli("simulate --p 3 --q 2 --value 0 --steps 3 --window=-2..2");
    REQUIRE(blank.exit_code == 0);
    REQUIRE(blank.out == ".....\n.....\n.....\n");

    const std::string cfg = temp_path("marker.cfg");
    std::ofstream(cfg) << "0|3.|0\n";
    const CliResult marker =
        run_cli("simulate --p 3 --q 2 --config " + cfg + " --steps 3 --window=0..4");
    REQUIRE(marker.exit_code == 0);
    // marker digit drifts right one column per row
    REQUIRE(marker.out == "3....\n43...\n.43..\n");
}

TEST_CASE("cli: language table") {
    const CliResult r = run_cli("language --p 3 --q 2 --n-max 2");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out ==
            "n,count,formula,wide_count,wide_formula,count_match,wide_match\n"
            "1,6,6,2,2,MATCH,MATCH\n"
            "2,24,24,4,4,MATCH,MATCH\n");

    const CliResult empty = run_cli("language --p 3 --q 2 --n-max 0");
    REQUIRE(empty.exit_code == 0);
    REQUIRE(empty.out == "n,count,formula,wide_count,wide_formula,count_match,wide_match\n");
}

TEST_CASE("cli: identical output for any thread count") {
    const CliResult one = run_cli("language --p 3 --q 2 --n-max 4 --threads 1");
    const CliResult two = run_cli("language --p 3 --q 2 --n-max 4 --threads 2");
    REQUIRE(one.exit_code == 0);
    REQUIRE(one.out == two.out);
}

TEST_CASE("cli: exit code contract") {
    // parse problems -> 2
    REQUIRE(run_cli("verify --p 4 --q 2").exit_code == 2);
    REQUIRE(run_cli("companion --p 3 --q 2 --value=-1/2 --range 0..3").exit_code == 2);
    REQUIRE(run_cli("simulate --p 3 --q 2 --value 1/7 --steps 3").exit_code == 2);
    REQUIRE(run_cli("simulate --p 3 --q 2 --value 1 --window bogus").exit_code == 2);
    REQUIRE(run_cli("nonsense --p 3 --q 2").exit_code == 2);

    // budget refusals -> 3
    REQUIRE(run_cli("language --p 3 --q 2 --n-max 6 --budget 100").exit_code == 3);
    REQUIRE(run_cli("language --p 3 --q 2 --n-max 6", "TRACELAB_BUDGET=100").exit_code == 3);

    // malformed edge list -> 2
    const std::string bad = temp_path("bad.graph");
    std::ofstream(bad) << "u v\n";
    REQUIRE(run_cli("sofic --graph file --path " + bad + " --n-max 2").exit_code == 2);
    REQUIRE(run_cli("sofic --graph file --path /nonexistent --n-max 2").exit_code == 2);
}

TEST_CASE("cli: sofic sources") {
    const CliResult trans = run_cli("sofic --graph trans32 --n-max 3 --find-sync 2");
    REQUIRE(trans.exit_code == 0);
    REQUIRE(trans.out ==
            "n,count,formula,match\n"
            "1,6,6,MATCH\n"
            "2,24,24,MATCH\n"
            "3,84,84,MATCH\n"
            "# synchronizing_word,c\n");

    const CliResult zpq = run_cli("sofic --graph zpq --p 5 --q 2 --n-max 3");
    REQUIRE(zpq.exit_code == 0);
    REQUIRE(zpq.out ==
            "n,count,formula,match\n"
            "1,10,10,MATCH\n"
            "2,60,60,MATCH\n"
            "3,320,320,MATCH\n");

    const std::string loop = temp_path("loop.graph");
    std::ofstream(loop) << "v v x\n";
    const CliResult file = run_cli("sofic --graph file --path " + loop + " --n-max 3");
    REQUIRE(file.exit_code == 0);
    REQUIRE(file.out ==
            "n,count,formula,match\n"
            "1,1,,\n"
            "2,1,,\n"
            "3,1,,\n");
}

TEST_CASE("cli: verify suites pass") {
    const CliResult lemmas = run_cli("verify --p 3 --q 2 --suite lemmas");
    REQUIRE(lemmas.exit_code == 0);
    REQUIRE(lemmas.out.find("FAIL") == std::string::npos);
}

TEST_CASE("cli: companion table") {
    const CliResult r = run_cli("companion --p 3 --q 2 --value 1/2 --range 0..2");
    REQUIRE(r.exit_code == 0);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    REQUIRE(line ==
            "i,trace_t,trace_t1,companion_from_trace,companion_from_value,match,"
            "compfrac_partial,compfrac_error,compfrac_bound,bound_ok");
    std::getline(is, line);
    REQUIRE(line == "0,0,0,0,0,MATCH,0,1/2,2/3,OK");
    std::getline(is, line);
    REQUIRE(line == "1,0,1,2,2,MATCH,4/9,1/18,4/9,OK");
    std::getline(is, line);
    REQUIRE(line == "2,1,1,-1,-1,MATCH,8/27,11/54,8/27,OK");
}

TEST_CASE("cli: search and prefix commands") {
    const CliResult search =
        run_cli("mahler-search --p 3 --q 2 --max-num 20 --max-den-exp 1 --steps 8 --top 3");
    REQUIRE(search.exit_code == 0);
    std::istringstream is(search.out);
    std::string header;
    std::getline(is, header);
    REQUIRE(header == "numerator,den_exp,run_length,first_violation");
    int rows = 0;
    std::string line;
    while (std::getline(is, line)) ++rows;
    REQUIRE(rows == 3);

    const CliResult prefix = run_cli("constrained-prefix --p 3 --q 2 --steps 5");
    REQUIRE(prefix.exit_code == 0);
    REQUIRE(prefix.out.rfind("step,position,chosen_digit,trace_digit\n", 0) == 0);
}

TEST_CASE("cli: output file option") {
    const std::string out = temp_path("language.csv");
    const CliResult r = run_cli("language --p 3 --q 2 --n-max 1 --out " + out);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.empty());
    REQUIRE(read_file(out) ==
            "n,count,formula,wide_count,wide_formula,count_match,wide_match\n"
            "1,6,6,2,2,MATCH,MATCH\n");
}
