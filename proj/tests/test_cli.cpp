#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#include "helpers.hpp"
#include "qsat/circuit.hpp"

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output; // stdout only
};

CommandResult run_cli(const std::string& arguments) {
    std::string command = std::string(QSAT_CLI_PATH) + " " + arguments + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult result;
    std::array<char, 4096> buffer;
    std::size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), got);
    }
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string write_temp(const std::string& name, const std::string& contents) {
    std::string path = std::string("/tmp/qsat_cli_") + name;
    std::ofstream out(path);
    out << contents;
    return path;
}

const std::string kExample = write_temp("example.cnf", qsat::test::kRunningExampleDimacs);

} // namespace

TEST_CASE("compile reports nine qubits for the parallel running example") {
    std::string command = std::string(QSAT_CLI_PATH) + " compile " + kExample +
                          " --mode parallel -o /dev/null 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string all;
    std::array<char, 4096> buffer;
    std::size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) all.append(buffer.data(), got);
    pclose(pipe);
    CHECK(all.find("qubits: 9") != std::string::npos);
}

TEST_CASE("compile emits parseable circuit JSON") {
    CommandResult parallel = run_cli("compile " + kExample + " --mode parallel");
    CHECK(parallel.exit_code == 0);
    qsat::Circuit circuit = qsat::Circuit::from_json_text(parallel.output);
    CHECK(circuit.qubit_count() == 9);

    CommandResult sequential = run_cli("compile " + kExample + " --mode sequential");
    CHECK(qsat::Circuit::from_json_text(sequential.output).qubit_count() == 7);
}

TEST_CASE("a missing input exits with the usage code") {
    CommandResult result = run_cli("compile /tmp/does_not_exist.cnf");
    CHECK(result.exit_code == 2);
}

TEST_CASE("malformed DIMACS exits with the usage code") {
    std::string bad = write_temp("bad.cnf", "p cnf 2 1\n1 -1 0\n");
    CommandResult result = run_cli("solve " + bad);
    CHECK(result.exit_code == 2);
}

TEST_CASE("exact solve prints the amplified probability") {
    CommandResult result =
        run_cli("solve " + kExample + " --mode parallel --iterations 1 --exact");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("111,0.78125") != std::string::npos);
}

TEST_CASE("solve output is byte-identical across repeats and worker counts") {
    std::string flags = "solve " + kExample + " --mode parallel --shots 500 --seed 11";
    CommandResult first = run_cli(flags + " --workers 1");
    CommandResult second = run_cli(flags + " --workers 1");
    CommandResult threaded = run_cli(flags + " --workers 2");
    CHECK(first.exit_code == 0);
    CHECK(first.output == second.output);
    CHECK(first.output == threaded.output);

    CommandResult reseeded = run_cli(flags + " --seed 12 --workers 1");
    CHECK(reseeded.output != first.output);
}

TEST_CASE("an unsatisfiable input warns and stays uniform") {
    std::string unsat = write_temp("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    CommandResult result = run_cli("solve " + unsat + " --shots 4000 --seed 3");
    CHECK(result.exit_code == 0);
    // Two lines of history plus header: both outcomes near 2000.
    CHECK(result.output.find("bitstring,count") != std::string::npos);
    std::size_t zero_pos = result.output.find("0,");
    REQUIRE(zero_pos != std::string::npos);
    long zero_count = std::strtol(result.output.c_str() + zero_pos + 2, nullptr, 10);
    CHECK(zero_count > 1700);
    CHECK(zero_count < 2300);
}

TEST_CASE("json output carries stats, exact probabilities and the trace") {
    CommandResult result = run_cli("solve " + kExample +
                                   " --mode distributed --iterations 1 --exact --format json");
    CHECK(result.exit_code == 0);
    nlohmann::json doc = nlohmann::json::parse(result.output);
    CHECK(doc["stats"]["qubits"] == 15);
    CHECK(doc["stats"]["protocol_invocations"] == 7);
    CHECK(doc["exact"]["111"].get<double>() == doctest::Approx(0.78125).epsilon(1e-9));

    CommandResult sampled = run_cli("solve " + kExample +
                                    " --mode distributed --iterations 1 --shots 20 --seed 1 "
                                    "--format json");
    CHECK(sampled.exit_code == 0);
    CHECK(sampled.output.find("\"message_trace\"") != std::string::npos);
    CHECK(sampled.output.find("\"step\": 1") != std::string::npos);
}

TEST_CASE("the message trace file is JSON lines") {
    std::string trace_path = "/tmp/qsat_cli_trace.jsonl";
    CommandResult result = run_cli("solve " + kExample +
                                   " --mode distributed --iterations 1 --shots 4 --seed 2 "
                                   "--trace " + trace_path);
    CHECK(result.exit_code == 0);
    std::ifstream in(trace_path);
    REQUIRE(in.good());
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            ++lines;
            CHECK(line.find("\"step\"") != std::string::npos);
            CHECK(line.find("\"sender\"") != std::string::npos);
        }
    }
    CHECK(lines == 24); // 12 remote legs, two messages each
}

TEST_CASE("the qubit cap maps to the resource exit code") {
    // Fresh pairs push the running example's distributed circuit to 33 qubits.
    CommandResult result = run_cli("solve " + kExample +
                                   " --mode distributed --iterations 1 --no-reuse --shots 1");
    CHECK(result.exit_code == 3);
}

TEST_CASE("a partition file reshapes the distributed run") {
    // Fig-style split: one node per clause, the third node doubling as the
    // diffuser master; the extra node 3 holds the formula qubit.
    std::string partition = write_temp("partition.json", R"({
      "master": 3,
      "nodes": {
        "0": ["a[e1]", "C1"],
        "1": ["a[e2]", "b", "C2"],
        "2": ["a[e3]", "c", "C3"],
        "3": ["F"]
      }
    })");
    CommandResult result = run_cli("solve " + kExample +
                                   " --mode distributed --iterations 1 --exact --partition " +
                                   partition);
    CHECK(result.exit_code == 0);
    std::size_t row = result.output.find("111,");
    REQUIRE(row != std::string::npos);
    double p = std::strtod(result.output.c_str() + row + 4, nullptr);
    CHECK(p == doctest::Approx(0.78125).epsilon(1e-9));

    std::string bad = write_temp("partition_bad.json", R"({
      "master": 0,
      "nodes": {"0": ["a[e1]"]}
    })");
    CommandResult broken = run_cli("solve " + kExample +
                                   " --mode distributed --partition " + bad);
    CHECK(broken.exit_code == 2);
}

TEST_CASE("the qubit cap honors the environment override") {
    std::string command = std::string("QSAT_MAX_QUBITS=8 ") + QSAT_CLI_PATH + " solve " +
                          kExample + " --mode parallel --shots 1 2>/dev/null";
    int status = std::system(command.c_str());
    CHECK(WEXITSTATUS(status) == 3); // nine qubits no longer fit
}

TEST_CASE("verify passes on the running example and fails on a broken mode name") {
    CommandResult ok = run_cli("verify " + kExample + " --mode parallel --trials 5");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("pass parallel_oracle_phases") != std::string::npos);

    CommandResult bad_flag = run_cli("verify " + kExample + " --mode bogus");
    CHECK(bad_flag.exit_code == 2);
}

TEST_CASE("verify --json emits a machine-readable report") {
    CommandResult result = run_cli("verify " + kExample + " --mode parallel --trials 5 --json");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("\"ok\": true") != std::string::npos);
}
