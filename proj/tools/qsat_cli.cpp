#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsat/distnet.hpp"
#include "qsat/formula.hpp"
#include "qsat/grover.hpp"
#include "qsat/sim.hpp"
#include "qsat/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct CommonArgs {
    std::string input;
    std::string mode = "parallel";
    std::string partition_file;
    std::optional<int> iterations;
    bool no_reuse = false;
};

qsat::Formula load_formula(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qsat::ParseError("cannot open '" + path + "'");
    std::vector<std::string> warnings;
    qsat::Formula f = qsat::parse_dimacs(in, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
    return f;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw qsat::Error("cannot write '" + path + "'");
    out << text;
}

std::optional<qsat::Partition> load_partition(const CommonArgs& args,
                                              const qsat::QubitLayout& layout) {
    if (args.partition_file.empty()) return std::nullopt;
    std::ifstream in(args.partition_file);
    if (!in) throw qsat::ParseError("cannot open '" + args.partition_file + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return qsat::Partition::from_json_text(buffer.str(), layout);
}

qsat::GroverPlan make_plan(const qsat::Formula& f, const CommonArgs& args, qsat::Mode mode) {
    std::uint64_t space = std::uint64_t(1) << f.variable_count();
    std::uint64_t solutions = qsat::brute_force_solutions(f).size();
    qsat::GroverPlan plan = qsat::plan_iterations(space, solutions, args.iterations, mode);
    if (!plan.diagnostic.empty()) std::cerr << "warning: " << plan.diagnostic << '\n';
    return plan;
}

struct Compiled {
    qsat::Circuit circuit;
    qsat::QubitLayout layout;
    qsat::GroverPlan plan;
    std::optional<qsat::DistCompiled> dist;
};

Compiled compile(const qsat::Formula& f, const CommonArgs& args) {
    qsat::Mode mode = qsat::mode_from_name(args.mode);
    qsat::GroverPlan plan = make_plan(f, args, mode);
    if (mode != qsat::Mode::Distributed) {
        qsat::CompiledGrover grover = qsat::build_grover(f, mode, plan);
        return {std::move(grover.circuit), std::move(grover.layout), grover.plan, std::nullopt};
    }
    qsat::ExpandedFormula expanded = qsat::expand(f);
    qsat::QubitLayout layout = qsat::QubitLayout::make(expanded, qsat::Mode::Distributed);
    std::optional<qsat::Partition> partition = load_partition(args, layout);
    qsat::DistOptions options;
    options.reuse = !args.no_reuse;
    qsat::DistCompiled dist = qsat::build_distributed_grover(
        f, plan, partition ? &*partition : nullptr, options);
    qsat::Circuit circuit = dist.circuit;
    return {std::move(circuit), dist.layout, plan, std::move(dist)};
}

nlohmann::json stats_json(const Compiled& compiled) {
    nlohmann::json stats;
    stats["mode"] = std::string(qsat::mode_name(compiled.plan.mode));
    stats["qubits"] = compiled.circuit.qubit_count();
    stats["gates"] = compiled.circuit.size();
    stats["iterations"] = compiled.plan.iterations;
    stats["search_space"] = compiled.plan.search_space;
    stats["solutions"] = compiled.plan.solution_count;
    stats["depth"] = compiled.circuit.depth();
    nlohmann::json depths = nlohmann::json::object();
    for (const char* name : {"prep", "clauses", "oracle", "diffuser", "measure"}) {
        if (!compiled.circuit.segments_named(name).empty()) {
            depths[name] = compiled.circuit.depth(name);
        }
    }
    stats["segment_depth"] = std::move(depths);
    if (compiled.dist) {
        stats["protocol_invocations"] = compiled.dist->invocations.size();
        stats["pool_qubits"] = compiled.dist->pool_qubit_count;
        stats["planned_messages"] = compiled.dist->messages.size();
    }
    return stats;
}

void print_stats_text(const Compiled& compiled, std::ostream& out) {
    nlohmann::json stats = stats_json(compiled);
    out << "mode: " << stats["mode"].get<std::string>() << '\n';
    out << "qubits: " << stats["qubits"] << '\n';
    out << "gates: " << stats["gates"] << '\n';
    out << "iterations: " << stats["iterations"] << '\n';
    out << "depth: " << stats["depth"] << '\n';
    for (const auto& [name, value] : stats["segment_depth"].items()) {
        out << "depth[" << name << "]: " << value << '\n';
    }
    if (compiled.dist) {
        out << "protocol_invocations: " << stats["protocol_invocations"] << '\n';
        out << "pool_qubits: " << stats["pool_qubits"] << '\n';
    }
}

int cmd_compile(const CommonArgs& args, const std::string& output) {
    qsat::Formula f = load_formula(args.input);
    Compiled compiled = compile(f, args);
    write_output(output, compiled.circuit.to_json_text());
    print_stats_text(compiled, std::cerr);
    return kExitOk;
}

int cmd_solve(const CommonArgs& args, std::uint64_t shots, std::uint64_t seed, bool exact,
              const std::string& format, int workers, const std::string& output,
              const std::string& trace_file) {
    qsat::Formula f = load_formula(args.input);
    Compiled compiled = compile(f, args);
    const std::vector<int>& readout = compiled.layout.readout();

    qsat::RunOutcome outcome;
    if (exact) {
        outcome = qsat::run_exact(compiled.circuit, readout);
        outcome.seed = seed;
    } else {
        qsat::ShotRecord first;
        outcome = qsat::run_shots(compiled.circuit, shots, seed, readout, workers,
                                  compiled.dist ? &first : nullptr);
        if (compiled.dist && !trace_file.empty()) {
            qsat::MessageTrace trace = qsat::trace_messages(*compiled.dist, first.bits);
            write_output(trace_file, trace.to_jsonl());
        }
    }

    if (format == "csv") {
        write_output(output, outcome.to_csv());
        print_stats_text(compiled, std::cerr);
    } else {
        nlohmann::json doc = nlohmann::json::parse(outcome.to_json_text());
        doc["stats"] = stats_json(compiled);
        if (compiled.dist && !exact) {
            qsat::ShotRecord first = qsat::run_single_shot(compiled.circuit, seed, 0, readout);
            qsat::MessageTrace trace = qsat::trace_messages(*compiled.dist, first.bits);
            doc["message_trace"] = nlohmann::json::array();
            for (const qsat::MessageEvent& e : trace.events) {
                doc["message_trace"].push_back({{"step", e.step},
                                                {"sender", e.sender},
                                                {"receiver", e.receiver},
                                                {"bit", e.bit},
                                                {"value", e.value}});
            }
        }
        write_output(output, doc.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_verify(const CommonArgs& args, int trials, std::uint64_t seed, bool as_json) {
    qsat::Formula f = load_formula(args.input);
    qsat::ExpandedFormula expanded = qsat::expand(f);
    bool all = args.mode == "all";
    nlohmann::json report = nlohmann::json::object();
    bool ok = true;

    auto note = [&](const std::string& name, bool clean, const std::string& text) {
        ok = ok && clean;
        report[name] = clean;
        if (!as_json) std::cout << (clean ? "pass " : "FAIL ") << name << ": " << text;
    };

    if (all || args.mode == "sequential") {
        qsat::QubitLayout layout = qsat::QubitLayout::make(expanded, qsat::Mode::Sequential);
        qsat::PhaseReport phases = qsat::check_oracle_phases(
            expanded, layout, qsat::build_oracle(expanded, layout, qsat::Mode::Sequential));
        note("sequential_oracle_phases", phases.clean(), phases.to_text());
    }
    if (all || args.mode == "parallel") {
        qsat::QubitLayout layout = qsat::QubitLayout::make(expanded, qsat::Mode::Parallel);
        qsat::PhaseReport phases = qsat::check_oracle_phases(
            expanded, layout, qsat::build_oracle(expanded, layout, qsat::Mode::Parallel));
        note("parallel_oracle_phases", phases.clean(), phases.to_text());
        qsat::DiffuserReport diffuser = qsat::check_diffuser_equivalence(
            expanded, layout, qsat::build_parallel_diffuser(expanded, layout), trials, seed);
        note("parallel_diffuser_equivalence", diffuser.clean(), diffuser.to_text());
    }
    if (all || args.mode == "distributed") {
        qsat::QubitLayout layout = qsat::QubitLayout::make(expanded, qsat::Mode::Distributed);
        qsat::Partition partition = qsat::Partition::clause_partition(expanded, layout);
        qsat::DistCompiled oracle = qsat::build_distributed_oracle(expanded, partition);
        qsat::PhaseReport phases = qsat::check_oracle_phases(expanded, oracle);
        note("distributed_oracle_phases", phases.clean(), phases.to_text());

        qsat::LocalityReport locality = qsat::check_locality(oracle);
        note("distributed_oracle_locality", locality.clean(), locality.to_text());

        int m = std::min(3, std::max(1, f.variable_count()));
        qsat::ProtocolReport protocol =
            qsat::check_protocol_equivalence(m, qsat::GateKind::X, std::min(trials, 20), seed);
        note("protocol_equivalence", protocol.clean(), protocol.to_text());

        // End-to-end: distributed and parallel exact distributions agree.
        qsat::GroverPlan plan = qsat::plan_iterations(
            std::uint64_t(1) << f.variable_count(), qsat::brute_force_solutions(f).size());
        qsat::CompiledGrover parallel = qsat::build_grover(f, qsat::Mode::Parallel, plan);
        qsat::DistCompiled dist = qsat::build_distributed_grover(f, plan);
        auto parallel_exact =
            qsat::run_exact(parallel.circuit, parallel.layout.readout()).exact_distribution;
        auto dist_exact = qsat::run_exact(dist.circuit, dist.readout).exact_distribution;
        double max_delta = 0.0;
        for (const auto& [key, p] : *parallel_exact) {
            double q = dist_exact->count(key) ? dist_exact->at(key) : 0.0;
            max_delta = std::max(max_delta, std::abs(p - q));
        }
        for (const auto& [key, q] : *dist_exact) {
            if (!parallel_exact->count(key)) max_delta = std::max(max_delta, q);
        }
        std::ostringstream text;
        text << "max probability delta " << max_delta << "\n";
        note("distributed_matches_parallel", max_delta < 1e-10, text.str());

        qsat::ShotRecord first = qsat::run_single_shot(dist.circuit, seed, 0, dist.readout);
        qsat::MessageTrace trace = qsat::trace_messages(dist, first.bits);
        qsat::DisciplineReport discipline = qsat::check_message_discipline(dist, trace);
        std::string summary = discipline.clean()
                                  ? "2 messages per control, ordered\n"
                                  : discipline.problems.front() + "\n";
        note("message_discipline", discipline.clean(), summary);
    }

    if (as_json) {
        report["ok"] = ok;
        std::cout << report.dump(2) << '\n';
    } else {
        std::cout << (ok ? "all checks passed" : "verification FAILED") << '\n';
    }
    return ok ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grover-based SAT solving over an in-process statevector simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string output;
    std::string format = "csv";
    std::string trace_file;
    std::uint64_t shots = 1024;
    std::uint64_t seed = 0;
    int workers = 0;
    int trials = 100;
    bool exact = false;
    bool as_json = false;

    auto add_common = [&](CLI::App* cmd, const std::vector<std::string>& modes) {
        cmd->add_option("input", args.input, "DIMACS CNF file")->required();
        cmd->add_option("--mode", args.mode, "compilation mode")
            ->check(CLI::IsMember(modes))
            ->capture_default_str();
        cmd->add_option("--iterations", [&](const CLI::results_t& values) {
            args.iterations = std::stoi(values[0]);
            return true;
        }, "Grover iteration override");
        cmd->add_option("--partition", args.partition_file,
                        "partition spec JSON (distributed mode)");
        cmd->add_flag("--no-reuse", args.no_reuse,
                      "fresh entangled pair per protocol leg instead of reuse");
    };
    const std::vector<std::string> plain_modes = {"sequential", "parallel", "distributed"};
    const std::vector<std::string> verify_modes = {"sequential", "parallel", "distributed",
                                                   "all"};

    CLI::App* compile_cmd = app.add_subcommand("compile", "compile a formula to circuit JSON");
    add_common(compile_cmd, plain_modes);
    compile_cmd->add_option("-o,--output", output, "write the circuit JSON here");

    CLI::App* solve_cmd = app.add_subcommand("solve", "compile and simulate");
    add_common(solve_cmd, plain_modes);
    solve_cmd->add_option("--shots", shots, "number of sampled shots")->capture_default_str();
    solve_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    solve_cmd->add_flag("--exact", exact, "exact distribution via branch enumeration");
    solve_cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    solve_cmd->add_option("--workers", workers, "worker threads (0 = auto)");
    solve_cmd->add_option("-o,--output", output, "write the histogram here");
    solve_cmd->add_option("--trace", trace_file, "write the message trace (JSON lines) here");

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the correctness checkers");
    add_common(verify_cmd, verify_modes);
    verify_cmd->add_option("--trials", trials, "random trials per check")->capture_default_str();
    verify_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    verify_cmd->add_flag("--json", as_json, "machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (compile_cmd->parsed()) return cmd_compile(args, output);
        if (solve_cmd->parsed()) {
            return cmd_solve(args, shots, seed, exact, format, workers, output, trace_file);
        }
        if (verify_cmd->count("--mode") == 0) args.mode = "all";
        return cmd_verify(args, trials, seed, as_json);
    } catch (const qsat::ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    } catch (const qsat::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const qsat::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
