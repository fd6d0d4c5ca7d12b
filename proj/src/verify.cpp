#include "qsat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace qsat {

std::vector<std::uint64_t> brute_force_solutions(const Formula& f) {
    const int d = f.variable_count();
    if (d > 24) {
        throw ResourceError("brute force over " + std::to_string(d) +
                            " variables exceeds the 24-variable limit");
    }
    std::vector<std::uint64_t> solutions;
    const std::uint64_t space = std::uint64_t(1) << d;
    for (std::uint64_t index = 0; index < space; ++index) {
        if (f.evaluate(assignment_from_index(index, d))) solutions.push_back(index);
    }
    return solutions;
}

StateVector random_state(int qubit_count, ShotRng& rng) {
    std::uint64_t dim = std::uint64_t(1) << qubit_count;
    std::vector<Amplitude> amps(dim);
    double norm = 0.0;
    for (Amplitude& a : amps) {
        a = Amplitude(rng.gaussian(), rng.gaussian());
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (Amplitude& a : amps) a /= norm;
    return StateVector::from_amplitudes(std::move(amps));
}

std::uint64_t expanded_basis_index(const ExpandedFormula& f, const QubitLayout& layout,
                                   std::uint64_t index) {
    std::uint64_t basis = 0;
    for (int v = 0; v < f.base().variable_count(); ++v) {
        if (!((index >> v) & 1U)) continue;
        if (f.occurrences(v).empty()) {
            basis |= std::uint64_t(1) << layout.representative[v];
            continue;
        }
        for (const Occurrence& occ : f.occurrences(v)) {
            basis |= std::uint64_t(1) << layout.slot_qubit[occ.clause][occ.literal];
        }
    }
    return basis;
}

namespace {

// Compares one final state against the ±1/√N pattern the oracle must leave.
void score_phase_state(const ExpandedFormula& f, const QubitLayout& layout,
                       const StateVector& state, const std::vector<char>& satisfies,
                       PhaseReport& report) {
    const int d = f.base().variable_count();
    const std::uint64_t space = std::uint64_t(1) << d;
    const double magnitude = 1.0 / std::sqrt(static_cast<double>(space));

    std::vector<char> is_assignment_state(state.amplitudes().size(), 0);
    for (std::uint64_t index = 0; index < space; ++index) {
        std::uint64_t basis = expanded_basis_index(f, layout, index);
        is_assignment_state[basis] = 1;
        double sign = satisfies[index] ? -1.0 : 1.0;
        Amplitude actual = state.amplitude(basis);
        double error = std::abs(actual - Amplitude(sign * magnitude, 0.0));
        report.max_amplitude_error = std::max(report.max_amplitude_error, error);
        if (error > magnitude) {
            report.mismatches.push_back({index, sign, actual});
        }
    }
    for (std::uint64_t i = 0; i < state.amplitudes().size(); ++i) {
        if (!is_assignment_state[i]) {
            report.max_leak = std::max(report.max_leak, std::abs(state.amplitude(i)));
        }
    }
}

std::vector<char> satisfaction_table(const Formula& f) {
    const std::uint64_t space = std::uint64_t(1) << f.variable_count();
    std::vector<char> table(space);
    for (std::uint64_t index = 0; index < space; ++index) {
        table[index] = f.evaluate(assignment_from_index(index, f.variable_count())) ? 1 : 0;
    }
    return table;
}

Circuit input_prep(const ExpandedFormula& f, const QubitLayout& layout) {
    if (layout.mode == Mode::Sequential) {
        Circuit prep(layout.labels);
        for (int v = 0; v < f.base().variable_count(); ++v) {
            prep.append(Gate::h(layout.representative[v]));
        }
        return prep;
    }
    return build_ghz_prep(f, layout);
}

} // namespace

PhaseReport check_oracle_phases(const ExpandedFormula& f, const QubitLayout& layout,
                                const Circuit& oracle) {
    if (!oracle.is_measurement_free()) {
        throw Error("phase check over a statevector needs a measurement-free oracle");
    }
    Circuit full(layout.labels);
    full.append_circuit(input_prep(f, layout), false);
    full.append_circuit(oracle, false);

    PhaseReport report;
    score_phase_state(f, layout, statevector_of(full), satisfaction_table(f.base()), report);
    return report;
}

PhaseReport check_oracle_phases(const ExpandedFormula& f, const DistCompiled& oracle) {
    Circuit full(oracle.circuit.labels());
    full.append_circuit(input_prep(f, oracle.layout), false);
    full.append_circuit(oracle.circuit, false);

    ExactResult result = enumerate_branches(full);
    PhaseReport report;
    report.branches = static_cast<int>(result.branches.size());
    std::vector<char> satisfies = satisfaction_table(f.base());
    for (const Branch& branch : result.branches) {
        score_phase_state(f, oracle.layout, branch.state, satisfies, report);
    }
    return report;
}

DiffuserReport check_diffuser_equivalence(const ExpandedFormula& f, const QubitLayout& layout,
                                          const Circuit& diffuser, int trials,
                                          std::uint64_t seed) {
    if (trials < 1) throw Error("at least one trial is required");
    if (!diffuser.is_measurement_free()) {
        throw Error("diffuser equivalence over a statevector needs a measurement-free circuit");
    }
    const int d = f.base().variable_count();
    const std::uint64_t space = std::uint64_t(1) << d;

    Circuit reference = build_classic_diffuser(d, [&] {
        std::vector<int> qubits(d);
        for (int v = 0; v < d; ++v) qubits[v] = v;
        return qubits;
    }());

    DiffuserReport report;
    report.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        ShotRng rng(seed, static_cast<std::uint64_t>(trial));
        StateVector plain = random_state(d, rng);

        std::vector<Amplitude> lifted(std::uint64_t(1) << layout.qubit_count, Amplitude(0, 0));
        std::vector<std::uint64_t> basis(space);
        for (std::uint64_t index = 0; index < space; ++index) {
            basis[index] = expanded_basis_index(f, layout, index);
            lifted[basis[index]] = plain.amplitude(index);
        }
        StateVector expanded = StateVector::from_amplitudes(std::move(lifted));

        expanded.apply(diffuser);
        plain.apply(reference);

        std::vector<char> on_subspace(expanded.amplitudes().size(), 0);
        for (std::uint64_t index = 0; index < space; ++index) {
            on_subspace[basis[index]] = 1;
            double error = std::abs(expanded.amplitude(basis[index]) - plain.amplitude(index));
            report.max_error = std::max(report.max_error, error);
        }
        for (std::uint64_t i = 0; i < expanded.amplitudes().size(); ++i) {
            if (!on_subspace[i]) {
                report.max_error = std::max(report.max_error, std::abs(expanded.amplitude(i)));
            }
        }
    }
    return report;
}

ProtocolReport check_protocol_equivalence(int control_count, GateKind u, int trials,
                                          std::uint64_t seed) {
    if (trials < 1) throw Error("at least one trial is required");
    DistCompiled compiled = build_distributed_mcu(control_count, u);
    const int data_qubits = control_count + 1;
    const int total_qubits = compiled.circuit.qubit_count();

    Circuit local(data_qubits);
    std::vector<int> controls(control_count);
    for (int i = 0; i < control_count; ++i) controls[i] = i;
    local.append(u == GateKind::X ? Gate::mcx(controls, control_count)
                                  : Gate::mcz(controls, control_count));

    ProtocolReport report;
    report.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        ShotRng rng(seed, static_cast<std::uint64_t>(trial));
        StateVector data = random_state(data_qubits, rng);

        std::vector<Amplitude> padded(std::uint64_t(1) << total_qubits, Amplitude(0, 0));
        for (std::uint64_t i = 0; i < data.dimension(); ++i) padded[i] = data.amplitude(i);
        StateVector initial = StateVector::from_amplitudes(std::move(padded));

        ExactOptions options;
        options.record_splits = true;
        ExactResult result = enumerate_branches(compiled.circuit, options, &initial);

        data.apply(local);
        report.max_branches = std::max(report.max_branches,
                                       static_cast<int>(result.branches.size()));
        for (const BranchSplit& split : result.splits) {
            report.max_split_deviation =
                std::max(report.max_split_deviation, std::abs(split.p_one - 0.5));
        }
        for (const Branch& branch : result.branches) {
            // Pool halves are reset between uses, so the branch state must be
            // the local gate's output with zeroed pool qubits.
            for (std::uint64_t i = 0; i < branch.state.dimension(); ++i) {
                Amplitude expected =
                    i < data.dimension() ? data.amplitude(i) : Amplitude(0.0, 0.0);
                report.max_error =
                    std::max(report.max_error, std::abs(branch.state.amplitude(i) - expected));
            }
        }
    }
    return report;
}

std::string PhaseReport::to_text() const {
    std::ostringstream out;
    out << "oracle phases: " << (clean() ? "clean" : "MISMATCH") << " (amplitude error "
        << max_amplitude_error << ", leak " << max_leak << ", branches " << branches << ")\n";
    for (const PhaseMismatch& m : mismatches) {
        out << "  assignment " << m.assignment << " expected sign " << m.expected_sign
            << " got amplitude (" << m.amplitude.real() << ", " << m.amplitude.imag() << ")\n";
    }
    return out.str();
}

std::string PhaseReport::to_json_text(int indent) const {
    nlohmann::json doc;
    doc["clean"] = clean();
    doc["max_amplitude_error"] = max_amplitude_error;
    doc["max_leak"] = max_leak;
    doc["branches"] = branches;
    doc["mismatches"] = nlohmann::json::array();
    for (const PhaseMismatch& m : mismatches) {
        doc["mismatches"].push_back({{"assignment", m.assignment},
                                     {"expected_sign", m.expected_sign},
                                     {"amplitude_re", m.amplitude.real()},
                                     {"amplitude_im", m.amplitude.imag()}});
    }
    return doc.dump(indent) + "\n";
}

std::string DiffuserReport::to_text() const {
    std::ostringstream out;
    out << "diffuser equivalence: " << (clean() ? "clean" : "MISMATCH") << " (max error "
        << max_error << " over " << trials << " trials)\n";
    return out.str();
}

std::string DiffuserReport::to_json_text(int indent) const {
    nlohmann::json doc;
    doc["clean"] = clean();
    doc["max_error"] = max_error;
    doc["trials"] = trials;
    return doc.dump(indent) + "\n";
}

std::string ProtocolReport::to_text() const {
    std::ostringstream out;
    out << "protocol equivalence: " << (clean() ? "clean" : "MISMATCH") << " (max error "
        << max_error << ", split deviation " << max_split_deviation << ", branches "
        << max_branches << ", trials " << trials << ")\n";
    return out.str();
}

std::string ProtocolReport::to_json_text(int indent) const {
    nlohmann::json doc;
    doc["clean"] = clean();
    doc["max_error"] = max_error;
    doc["max_split_deviation"] = max_split_deviation;
    doc["max_branches"] = max_branches;
    doc["trials"] = trials;
    return doc.dump(indent) + "\n";
}

} // namespace qsat
