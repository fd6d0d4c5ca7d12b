#include "qsat/grover.hpp"

#include <cmath>
#include <numbers>

namespace qsat {

std::string_view mode_name(Mode mode) {
    switch (mode) {
    case Mode::Sequential: return "sequential";
    case Mode::Parallel: return "parallel";
    case Mode::Distributed: return "distributed";
    }
    throw Error("unknown mode");
}

Mode mode_from_name(std::string_view name) {
    if (name == "sequential") return Mode::Sequential;
    if (name == "parallel") return Mode::Parallel;
    if (name == "distributed") return Mode::Distributed;
    throw Error("unknown mode '" + std::string(name) + "'");
}

std::string variable_name(int variable) {
    if (variable < 26) return std::string(1, static_cast<char>('a' + variable));
    return "v" + std::to_string(variable + 1);
}

namespace {

std::string copy_label(const ExpandedFormula& f, int variable, int occurrence) {
    if (f.occurrences(variable).size() <= 1) return variable_name(variable);
    return variable_name(variable) + "[e" + std::to_string(occurrence + 1) + "]";
}

} // namespace

Gate controlled_flip(std::vector<int> controls, int target) {
    if (controls.size() == 1) return Gate::cx(controls[0], target);
    return Gate::mcx(std::move(controls), target);
}

QubitLayout QubitLayout::make(const ExpandedFormula& f, Mode mode) {
    const Formula& base = f.base();
    const int d = base.variable_count();
    const int m = base.clause_count();

    QubitLayout layout;
    layout.mode = mode;
    layout.representative.assign(d, -1);
    layout.companions.assign(d, {});
    layout.slot_qubit.resize(m);
    layout.clause_qubit.resize(m);

    auto push = [&layout](std::string label) {
        layout.labels.push_back(std::move(label));
        return layout.qubit_count++;
    };

    if (mode == Mode::Sequential) {
        for (int v = 0; v < d; ++v) {
            layout.representative[v] = push(variable_name(v));
        }
        for (int c = 0; c < m; ++c) {
            const Clause& clause = base.clauses()[c];
            layout.slot_qubit[c].resize(clause.literals.size());
            for (std::size_t l = 0; l < clause.literals.size(); ++l) {
                layout.slot_qubit[c][l] = layout.representative[clause.literals[l].variable];
            }
        }
        for (int c = 0; c < m; ++c) {
            layout.clause_qubit[c] = push("C" + std::to_string(c + 1));
        }
        layout.formula_qubit = push("F");
        return layout;
    }

    // Parallel (and distributed) wire order groups each clause's expanded
    // literals with its clause qubit, then the formula qubit last.
    for (int c = 0; c < m; ++c) {
        const Clause& clause = base.clauses()[c];
        layout.slot_qubit[c].resize(clause.literals.size());
        for (std::size_t l = 0; l < clause.literals.size(); ++l) {
            int variable = clause.literals[l].variable;
            int occurrence = f.occurrence_index(c, static_cast<int>(l));
            int qubit = push(copy_label(f, variable, occurrence));
            layout.slot_qubit[c][l] = qubit;
            if (occurrence == 0) {
                layout.representative[variable] = qubit;
            } else {
                layout.companions[variable].push_back(qubit);
            }
        }
        layout.clause_qubit[c] = push("C" + std::to_string(c + 1));
    }
    for (int v : f.unreferenced_variables()) {
        layout.representative[v] = push(variable_name(v));
    }
    layout.formula_qubit = push("F");
    return layout;
}

GroverPlan plan_iterations(std::uint64_t search_space, std::uint64_t solution_count,
                           std::optional<int> override_iterations, Mode mode) {
    if (search_space == 0 || (search_space & (search_space - 1)) != 0) {
        throw Error("search space size must be a power of two");
    }
    if (solution_count > search_space) {
        throw Error("solution count exceeds the search space");
    }
    GroverPlan plan;
    plan.search_space = search_space;
    plan.solution_count = solution_count;
    plan.mode = mode;
    if (solution_count == 0) {
        plan.diagnostic = "formula is unsatisfiable; leaving the uniform superposition";
        return plan;
    }
    if (solution_count == search_space) {
        plan.diagnostic = "every assignment satisfies the formula; nothing to amplify";
        return plan;
    }
    if (override_iterations) {
        if (*override_iterations < 0) throw Error("iteration override must be non-negative");
        plan.iterations = *override_iterations;
        return plan;
    }
    double ratio = static_cast<double>(search_space) / static_cast<double>(solution_count);
    plan.iterations = static_cast<int>(std::floor(std::numbers::pi / 4.0 * std::sqrt(ratio)));
    if (plan.iterations < 1) plan.iterations = 1;
    return plan;
}

Circuit build_ghz_prep(const ExpandedFormula& f, const QubitLayout& layout) {
    if (layout.mode == Mode::Sequential) {
        throw Error("GHZ preparation applies to expanded layouts only");
    }
    Circuit c(layout.labels);
    for (int v = 0; v < f.base().variable_count(); ++v) {
        c.append(Gate::h(layout.representative[v]));
        if (!layout.companions[v].empty()) {
            c.append(Gate::fanout(layout.representative[v], layout.companions[v]));
        }
    }
    return c;
}

Circuit build_clause_circuit(const ExpandedFormula& f, int clause_index,
                             const QubitLayout& layout, Mode mode) {
    const Clause& clause = f.base().clauses().at(clause_index);
    Circuit c(layout.labels);
    auto flip_positive_literals = [&] {
        for (std::size_t l = 0; l < clause.literals.size(); ++l) {
            if (!clause.literals[l].negated) {
                c.append(Gate::x(layout.slot_qubit[clause_index][l]));
            }
        }
    };
    flip_positive_literals();
    c.append(Gate::x(layout.clause_qubit[clause_index]));
    c.append(controlled_flip(layout.slot_qubit[clause_index], layout.clause_qubit[clause_index]));
    if (mode == Mode::Sequential) {
        flip_positive_literals();
    }
    return c;
}

Circuit build_oracle(const ExpandedFormula& f, const QubitLayout& layout, Mode mode) {
    Circuit compute(layout.labels);
    std::size_t clauses_begin = compute.size();
    for (int i = 0; i < f.base().clause_count(); ++i) {
        std::size_t begin = compute.size();
        compute.append_circuit(build_clause_circuit(f, i, layout, mode));
        compute.add_segment("clause_" + std::to_string(i + 1), begin, compute.size());
    }
    compute.add_segment("clauses", clauses_begin, compute.size());
    std::size_t conj_begin = compute.size();
    compute.append(controlled_flip(layout.clause_qubit, layout.formula_qubit));
    compute.add_segment("conjunction", conj_begin, compute.size());

    Circuit oracle(layout.labels);
    oracle.append_circuit(compute);
    oracle.add_segment("compute", 0, oracle.size());
    std::size_t phase_begin = oracle.size();
    oracle.append(Gate::z(layout.formula_qubit));
    oracle.add_segment("phase", phase_begin, oracle.size());
    std::size_t uncompute_begin = oracle.size();
    oracle.append_circuit(compute.inverted(), /*copy_segments=*/false);
    oracle.add_segment("uncompute", uncompute_begin, oracle.size());
    return oracle;
}

Circuit build_classic_diffuser(int qubit_count, const std::vector<int>& qubits) {
    if (qubits.empty()) throw Error("diffuser needs at least one qubit");
    Circuit c(qubit_count);
    for (int q : qubits) c.append(Gate::h(q));
    for (int q : qubits) c.append(Gate::x(q));
    if (qubits.size() == 1) {
        c.append(Gate::z(qubits[0]));
    } else {
        std::vector<int> controls(qubits.begin(), qubits.end() - 1);
        c.append(Gate::mcz(std::move(controls), qubits.back()));
    }
    for (int q : qubits) c.append(Gate::x(q));
    for (int q : qubits) c.append(Gate::h(q));
    return c;
}

namespace {

Circuit fanout_layer(const ExpandedFormula& f, const QubitLayout& layout) {
    Circuit c(layout.labels);
    for (int v = 0; v < f.base().variable_count(); ++v) {
        if (!layout.companions[v].empty()) {
            c.append(Gate::fanout(layout.representative[v], layout.companions[v]));
        }
    }
    return c;
}

Circuit relabel(Circuit c, const QubitLayout& layout) {
    for (int q = 0; q < c.qubit_count(); ++q) c.set_label(q, layout.labels[q]);
    return c;
}

} // namespace

Circuit build_parallel_diffuser(const ExpandedFormula& f, const QubitLayout& layout) {
    if (layout.mode == Mode::Sequential) {
        throw Error("parallel diffuser applies to expanded layouts only");
    }
    Circuit c(layout.labels);
    Circuit fanouts = fanout_layer(f, layout);
    c.append_circuit(fanouts);
    c.add_segment("disentangle", 0, c.size());
    std::size_t core_begin = c.size();
    c.append_circuit(relabel(build_classic_diffuser(layout.qubit_count, layout.readout()), layout));
    c.add_segment("core", core_begin, c.size());
    std::size_t entangle_begin = c.size();
    c.append_circuit(fanouts);
    c.add_segment("entangle", entangle_begin, c.size());
    return c;
}

Circuit build_naive_expanded_diffuser(const ExpandedFormula& f, const QubitLayout& layout) {
    if (layout.mode == Mode::Sequential) {
        throw Error("expanded diffuser applies to expanded layouts only");
    }
    std::vector<int> all_copies;
    for (int v = 0; v < f.base().variable_count(); ++v) {
        all_copies.push_back(layout.representative[v]);
        for (int q : layout.companions[v]) all_copies.push_back(q);
    }
    std::sort(all_copies.begin(), all_copies.end());
    return relabel(build_classic_diffuser(layout.qubit_count, all_copies), layout);
}

CompiledGrover build_grover(const Formula& f, Mode mode, const GroverPlan& plan) {
    if (mode == Mode::Distributed) {
        throw Error("distributed compilation is handled by the distnet builders");
    }
    ExpandedFormula expanded = expand(f);
    QubitLayout layout = QubitLayout::make(expanded, mode);

    Circuit circuit(layout.labels);
    if (mode == Mode::Sequential) {
        for (int v = 0; v < f.variable_count(); ++v) {
            circuit.append(Gate::h(layout.representative[v]));
        }
    } else {
        circuit.append_circuit(build_ghz_prep(expanded, layout));
    }
    circuit.add_segment("prep", 0, circuit.size());

    Circuit oracle = build_oracle(expanded, layout, mode);
    Circuit diffuser = mode == Mode::Sequential
                           ? relabel(build_classic_diffuser(layout.qubit_count, layout.readout()),
                                     layout)
                           : build_parallel_diffuser(expanded, layout);
    for (int i = 0; i < plan.iterations; ++i) {
        std::size_t begin = circuit.size();
        circuit.append_circuit(oracle);
        circuit.add_segment("oracle", begin, circuit.size());
        begin = circuit.size();
        circuit.append_circuit(diffuser);
        circuit.add_segment("diffuser", begin, circuit.size());
    }

    std::size_t measure_begin = circuit.size();
    for (int v = 0; v < f.variable_count(); ++v) {
        int bit = circuit.add_classical_bit();
        circuit.append(Gate::measure_z(layout.representative[v], bit));
    }
    circuit.add_segment("measure", measure_begin, circuit.size());

    GroverPlan stamped = plan;
    stamped.mode = mode;
    return {std::move(circuit), std::move(layout), std::move(stamped)};
}

} // namespace qsat
