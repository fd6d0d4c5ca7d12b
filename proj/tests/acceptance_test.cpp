// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "qsat/distnet.hpp"
#include "qsat/formula.hpp"
#include "qsat/grover.hpp"
#include "qsat/sim.hpp"
#include "qsat/verify.hpp"

using namespace qsat;
using qsat::test::running_example;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    if (!pass) ++failures;
    std::ostringstream line;
    line << "criterion " << id << " (" << name << "): " << (pass ? "PASS" : "FAIL");
    line.precision(3);
    line << " [" << std::fixed << seconds << " s] " << detail;
    std::cout << line.str() << std::endl;
}

void run_criterion(int id, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [ok, text] = body();
        pass = ok;
        detail = text;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
    report(id, name, pass, detail, seconds);
}

// Shared corpora. Random formulas keep d ≤ 4, m ≤ 5 with short clauses so
// the expanded register stays simulable; the distributed sub-corpus is
// bounded to d ≤ 3, m ≤ 3 because each remote leg adds two pool qubits.
std::vector<Formula> full_corpus() {
    std::vector<Formula> corpus{running_example()};
    for (Formula& f : [] {
             auto v = qsat::test::all_two_variable_formulas();
             return v;
         }()) {
        corpus.push_back(std::move(f));
    }
    ShotRng rng(2026, 0);
    for (int i = 0; i < 50; ++i) {
        corpus.push_back(qsat::test::random_formula(rng, 4, 5, 3, 10));
    }
    return corpus;
}

std::vector<Formula> distributed_corpus() {
    std::vector<Formula> corpus{running_example()};
    for (Formula& f : [] {
             auto v = qsat::test::all_two_variable_formulas();
             return v;
         }()) {
        corpus.push_back(std::move(f));
    }
    ShotRng rng(2027, 0);
    for (int i = 0; i < 20; ++i) {
        corpus.push_back(qsat::test::random_formula(rng, 3, 3, 2, 6));
    }
    return corpus;
}

GroverPlan default_plan(const Formula& f) {
    return plan_iterations(std::uint64_t(1) << f.variable_count(),
                           brute_force_solutions(f).size());
}

std::string run_cli_capture(const std::string& arguments, int* exit_code) {
    std::string command = std::string(QSAT_CLI_PATH) + " " + arguments + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw Error("cannot spawn the CLI");
    std::string output;
    std::array<char, 4096> buffer;
    std::size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        output.append(buffer.data(), got);
    }
    int status = pclose(pipe);
    *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return output;
}

std::pair<bool, std::string> running_example_criterion(Mode mode, double time_limit,
                                                       std::uint64_t seed) {
    auto start = std::chrono::steady_clock::now();
    Formula f = running_example();
    GroverPlan plan = plan_iterations(8, 1, 1, mode);

    Circuit circuit;
    std::vector<int> readout;
    int expected_qubits;
    if (mode == Mode::Parallel) {
        CompiledGrover compiled = build_grover(f, mode, plan);
        expected_qubits = 9;
        if (compiled.circuit.qubit_count() != expected_qubits) {
            return {false, "expected 9 qubits, got " +
                               std::to_string(compiled.circuit.qubit_count())};
        }
        readout = compiled.layout.readout();
        circuit = std::move(compiled.circuit);
    } else {
        DistCompiled compiled = build_distributed_grover(f, plan);
        readout = compiled.readout;
        circuit = std::move(compiled.circuit);
    }

    RunOutcome exact = run_exact(circuit, readout);
    double p = exact.exact_distribution->at("111");
    if (std::abs(p - 0.78125) > 1e-9) {
        return {false, "exact P(111) = " + std::to_string(p)};
    }

    RunOutcome sampled = run_shots(circuit, 8192, seed, readout);
    std::uint64_t count = sampled.histogram.count("111") ? sampled.histogram.at("111") : 0;
    bool in_range = count >= 6200 && count <= 6600;
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = seconds < time_limit;
    std::ostringstream detail;
    detail << "P(111) = " << p << ", count(111) = " << count << "/8192, " << seconds
           << " s (limit " << time_limit << ")";
    return {in_range && in_time, detail.str()};
}

} // namespace

int main() {
    // 1. Running-example reproduction, parallel mode: nine qubits, the
    //    analytic single-iteration probability 25/32, and a sampled count
    //    near the reported histogram.
    run_criterion(1, "running example, parallel", [] {
        auto result = running_example_criterion(Mode::Parallel, 5.0, 2026);
        return result;
    });

    // 2. Running-example reproduction, distributed mode.
    run_criterion(2, "running example, distributed", [] {
        return running_example_criterion(Mode::Distributed, 30.0, 2026);
    });

    // 3. Oracle phase property across modes and the corpus.
    run_criterion(3, "oracle phase property", [] {
        int checked = 0;
        for (const Formula& f : full_corpus()) {
            ExpandedFormula e = expand(f);
            for (Mode mode : {Mode::Sequential, Mode::Parallel}) {
                QubitLayout layout = QubitLayout::make(e, mode);
                PhaseReport report =
                    check_oracle_phases(e, layout, build_oracle(e, layout, mode));
                if (!report.clean(1e-10)) {
                    return std::make_pair(false, "sign mismatch (" +
                                                     std::string(mode_name(mode)) + ") on " +
                                                     to_dimacs(f));
                }
                ++checked;
            }
        }
        for (const Formula& f : distributed_corpus()) {
            ExpandedFormula e = expand(f);
            QubitLayout layout = QubitLayout::make(e, Mode::Distributed);
            Partition partition = Partition::clause_partition(e, layout);
            DistCompiled oracle = build_distributed_oracle(e, partition);
            PhaseReport report = check_oracle_phases(e, oracle);
            if (!report.clean(1e-10)) {
                return std::make_pair(false, "sign mismatch (distributed) on " + to_dimacs(f));
            }
            ++checked;
        }
        return std::make_pair(true, std::to_string(checked) + " oracle checks clean");
    });

    // 4. Diffuser equivalence, plus the broken flat construction failing.
    run_criterion(4, "diffuser equivalence", [] {
        std::vector<Formula> corpus{running_example()};
        ShotRng rng(2028, 0);
        for (int i = 0; i < 10; ++i) {
            corpus.push_back(qsat::test::random_formula(rng, 3, 4, 2, 8));
        }
        double worst = 0.0;
        for (const Formula& f : corpus) {
            ExpandedFormula e = expand(f);
            QubitLayout layout = QubitLayout::make(e, Mode::Parallel);
            DiffuserReport report = check_diffuser_equivalence(
                e, layout, build_parallel_diffuser(e, layout), 100, 515);
            worst = std::max(worst, report.max_error);
            if (!report.clean(1e-10)) {
                return std::make_pair(false, "diffuser mismatch on " + to_dimacs(f));
            }
        }
        ExpandedFormula e = expand(running_example());
        QubitLayout layout = QubitLayout::make(e, Mode::Parallel);
        DiffuserReport broken = check_diffuser_equivalence(
            e, layout, build_naive_expanded_diffuser(e, layout), 100, 515);
        if (broken.max_error <= 1e-3) {
            return std::make_pair(false, std::string("the copy-blind diffuser slipped through"));
        }
        std::ostringstream detail;
        detail << "max error " << worst << "; negative control error " << broken.max_error;
        return std::make_pair(true, detail.str());
    });

    // 5. Teleported m-controlled-U equals the local gate on every branch,
    //    splits at one half, and the message discipline holds.
    run_criterion(5, "teleported controlled gates", [] {
        double worst_error = 0.0, worst_split = 0.0;
        for (int controls = 1; controls <= 4; ++controls) {
            for (GateKind u : {GateKind::X, GateKind::Z}) {
                ProtocolReport report = check_protocol_equivalence(controls, u, 100, 99);
                worst_error = std::max(worst_error, report.max_error);
                worst_split = std::max(worst_split, report.max_split_deviation);
                if (!report.clean(1e-10) || report.max_split_deviation > 1e-9) {
                    return std::make_pair(false, "protocol mismatch at m = " +
                                                     std::to_string(controls));
                }
            }
            DistCompiled mcu = build_distributed_mcu(controls, GateKind::X);
            if (static_cast<int>(mcu.messages.size()) != 2 * controls) {
                return std::make_pair(false, std::string("message plan size off"));
            }
            for (std::uint64_t seed = 0; seed < 25; ++seed) {
                ShotRecord shot = run_single_shot(mcu.circuit, seed, 0, mcu.readout);
                DisciplineReport discipline =
                    check_message_discipline(mcu, trace_messages(mcu, shot.bits));
                if (!discipline.clean()) {
                    return std::make_pair(false, discipline.problems.front());
                }
            }
        }
        std::ostringstream detail;
        detail << "branch error " << worst_error << ", split deviation " << worst_split;
        return std::make_pair(true, detail.str());
    });

    // 6. Clause-stage depth: flat in parallel mode, strictly growing in the
    //    sequential chain; protocol legs track the companion count.
    run_criterion(6, "depth scaling", [] {
        std::vector<int> parallel_depths, sequential_depths;
        for (int m = 2; m <= 10; ++m) {
            Formula f = qsat::test::chain_formula(m);
            ExpandedFormula e = expand(f);
            parallel_depths.push_back(
                build_oracle(e, QubitLayout::make(e, Mode::Parallel), Mode::Parallel)
                    .depth("clauses"));
            sequential_depths.push_back(
                build_oracle(e, QubitLayout::make(e, Mode::Sequential), Mode::Sequential)
                    .depth("clauses"));
        }
        for (std::size_t i = 1; i < parallel_depths.size(); ++i) {
            if (parallel_depths[i] != parallel_depths[0]) {
                return std::make_pair(false, std::string("parallel clause depth moved"));
            }
            if (sequential_depths[i] <= sequential_depths[i - 1]) {
                return std::make_pair(false, std::string("sequential clause depth is not increasing"));
            }
        }
        // Structural O(k_max): one protocol invocation per companion on each
        // side of the diffuser plus one for the phase core.
        for (int m = 2; m <= 6; ++m) {
            Formula f = qsat::test::chain_formula(m);
            ExpandedFormula e = expand(f);
            QubitLayout layout = QubitLayout::make(e, Mode::Distributed);
            DistCompiled diffuser =
                build_distributed_diffuser(e, Partition::clause_partition(e, layout));
            if (static_cast<int>(diffuser.invocations.size()) != 2 * (e.k_max() - 1) + 1) {
                return std::make_pair(false, "diffuser invocation count off at m = " +
                                                 std::to_string(m));
            }
        }
        std::ostringstream detail;
        detail << "parallel depth " << parallel_depths[0] << ", sequential "
               << sequential_depths.front() << ".." << sequential_depths.back();
        return std::make_pair(true, detail.str());
    });

    // 7. Sequential, parallel and distributed readout distributions agree.
    run_criterion(7, "mode equivalence", [] {
        double worst = 0.0;
        for (const Formula& f : full_corpus()) {
            GroverPlan plan = default_plan(f);
            CompiledGrover seq = build_grover(f, Mode::Sequential, plan);
            CompiledGrover par = build_grover(f, Mode::Parallel, plan);
            auto seq_dist = run_exact(seq.circuit, seq.layout.readout()).exact_distribution;
            auto par_dist = run_exact(par.circuit, par.layout.readout()).exact_distribution;
            double delta = qsat::test::max_distribution_delta(*seq_dist, *par_dist);
            worst = std::max(worst, delta);
            if (delta >= 1e-10) {
                return std::make_pair(false, "sequential vs parallel drift on " + to_dimacs(f));
            }
        }
        for (const Formula& f : distributed_corpus()) {
            GroverPlan plan = default_plan(f);
            CompiledGrover par = build_grover(f, Mode::Parallel, plan);
            DistCompiled dist = build_distributed_grover(f, plan);
            auto par_dist = run_exact(par.circuit, par.layout.readout()).exact_distribution;
            auto dist_dist = run_exact(dist.circuit, dist.readout).exact_distribution;
            double delta = qsat::test::max_distribution_delta(*par_dist, *dist_dist);
            worst = std::max(worst, delta);
            if (delta >= 1e-10) {
                return std::make_pair(false, "parallel vs distributed drift on " + to_dimacs(f));
            }
        }
        std::ostringstream detail;
        detail << "max pairwise delta " << worst;
        return std::make_pair(true, detail.str());
    });

    // 8. Byte-identical CLI output for a fixed seed, across repeats and
    //    worker counts.
    run_criterion(8, "determinism", [] {
        std::string path = "/tmp/qsat_acceptance.cnf";
        {
            std::ofstream out(path);
            out << qsat::test::kRunningExampleDimacs;
        }
        int code = 0;
        std::string base = run_cli_capture(
            "solve " + path + " --mode parallel --shots 2048 --seed 9 --workers 1", &code);
        if (code != 0) return std::make_pair(false, "CLI exited with " + std::to_string(code));
        for (const std::string& variant :
             {std::string("--workers 1"), std::string("--workers 2"),
              std::string("--workers 3")}) {
            std::string again = run_cli_capture(
                "solve " + path + " --mode parallel --shots 2048 --seed 9 " + variant, &code);
            if (again != base || code != 0) {
                return std::make_pair(false, "parallel output varies with " + variant);
            }
        }
        std::string dist_base = run_cli_capture(
            "solve " + path +
                " --mode distributed --iterations 1 --shots 64 --seed 9 --workers 1",
            &code);
        std::string dist_again = run_cli_capture(
            "solve " + path +
                " --mode distributed --iterations 1 --shots 64 --seed 9 --workers 2",
            &code);
        if (dist_base != dist_again) {
            return std::make_pair(false, std::string("distributed output varies with the worker count"));
        }
        return std::make_pair(true, std::string("byte-identical across runs and workers"));
    });

    if (failures == 0) {
        std::cout << "acceptance: all criteria passed" << std::endl;
    } else {
        std::cout << "acceptance: " << failures << " criteria FAILED" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
