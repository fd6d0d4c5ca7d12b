#include "qsat/distnet.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

namespace qsat {

Partition Partition::clause_partition(const ExpandedFormula& f, const QubitLayout& layout) {
    Partition p;
    p.owner.assign(layout.qubit_count, -1);
    const int m = f.base().clause_count();
    for (int c = 0; c < m; ++c) {
        for (int q : layout.slot_qubit[c]) p.owner[q] = c;
        p.owner[layout.clause_qubit[c]] = c;
    }
    p.master = m;
    p.node_count = m + 1;
    p.owner[layout.formula_qubit] = p.master;
    for (int v : f.unreferenced_variables()) p.owner[layout.representative[v]] = p.master;
    return p;
}

void Partition::validate(const ExpandedFormula& f, const QubitLayout& layout) const {
    if (static_cast<int>(owner.size()) != layout.qubit_count) {
        throw Error("partition covers " + std::to_string(owner.size()) + " qubits, layout has " +
                    std::to_string(layout.qubit_count));
    }
    for (int q = 0; q < layout.qubit_count; ++q) {
        if (owner[q] < 0 || owner[q] >= node_count) {
            throw Error("qubit '" + layout.labels[q] + "' has no valid owner node");
        }
    }
    for (int c = 0; c < f.base().clause_count(); ++c) {
        int node = owner[layout.clause_qubit[c]];
        for (int q : layout.slot_qubit[c]) {
            if (owner[q] != node) {
                throw Error("clause " + std::to_string(c + 1) +
                            " is split across nodes; its literals must live with C" +
                            std::to_string(c + 1));
            }
        }
    }
    if (owner[layout.formula_qubit] != master) {
        throw Error("the formula qubit must live on the master node");
    }
}

Partition Partition::from_json_text(std::string_view text, const QubitLayout& layout) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("partition JSON: ") + e.what());
    }
    try {
        Partition p;
        p.owner.assign(layout.qubit_count, -1);
        p.master = doc.at("master").get<int>();
        int max_node = p.master;
        for (const auto& [key, labels] : doc.at("nodes").items()) {
            int node = std::stoi(key);
            max_node = std::max(max_node, node);
            for (const auto& jlabel : labels) {
                std::string label = jlabel.get<std::string>();
                int q = -1;
                for (int i = 0; i < layout.qubit_count; ++i) {
                    if (layout.labels[i] == label) {
                        q = i;
                        break;
                    }
                }
                if (q < 0) throw ParseError("partition names unknown qubit '" + label + "'");
                if (p.owner[q] >= 0) throw ParseError("qubit '" + label + "' assigned twice");
                p.owner[q] = node;
            }
        }
        p.node_count = max_node + 1;
        for (int q = 0; q < layout.qubit_count; ++q) {
            if (p.owner[q] < 0) {
                throw ParseError("partition leaves qubit '" + layout.labels[q] + "' unassigned");
            }
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("partition JSON: ") + e.what());
    }
}

std::string Partition::to_json_text(const QubitLayout& layout, int indent) const {
    nlohmann::json nodes = nlohmann::json::object();
    for (int q = 0; q < layout.qubit_count; ++q) {
        nodes[std::to_string(owner[q])].push_back(layout.labels[q]);
    }
    nlohmann::json doc;
    doc["master"] = master;
    doc["nodes"] = std::move(nodes);
    return doc.dump(indent) + "\n";
}

int DistCompiled::owner_at(int qubit, std::size_t gate_index) const {
    if (qubit < formula_qubit_count()) return partition.owner[qubit];
    for (const EprUse& use : epr_uses) {
        if (gate_index < use.prep_begin || gate_index >= use.released_at) continue;
        if (use.local_qubit == qubit) return use.control_node;
        if (use.remote_qubit == qubit) return use.target_node;
    }
    return -1;
}

DistEmitter::DistEmitter(const QubitLayout& layout, Partition partition, DistOptions options)
    : layout_(layout), partition_(std::move(partition)), options_(options),
      circuit_(layout.labels) {
    compiled_.layout = layout_;
    compiled_.partition = partition_;
    compiled_.reuse = options_.reuse;
}

void DistEmitter::append_local(Gate gate) { circuit_.append(std::move(gate)); }

void DistEmitter::append_block(const Circuit& block, bool copy_segments) {
    circuit_.append_circuit(block, copy_segments);
}

void DistEmitter::mark_resource_prep(std::size_t begin, std::size_t end) {
    compiled_.resource_prep_ranges.emplace_back(begin, end);
}

std::size_t DistEmitter::allocate_pair(int control_node, int target_node, int invocation) {
    int slot;
    if (options_.reuse && !free_slots_.empty()) {
        slot = free_slots_.back();
        free_slots_.pop_back();
    } else {
        slot = static_cast<int>(slot_used_before_.size());
        slot_used_before_.push_back(0);
        circuit_.add_qubit("e" + std::to_string(slot + 1));
        circuit_.add_qubit("e" + std::to_string(slot + 1) + "h");
    }
    EprUse use;
    use.slot = slot;
    use.local_qubit = layout_.qubit_count + 2 * slot;
    use.remote_qubit = use.local_qubit + 1;
    use.control_node = control_node;
    use.target_node = target_node;
    use.invocation = invocation;
    use.prep_begin = circuit_.size();
    // Released slots were reset on release, so |00⟩ holds here either way.
    circuit_.append(Gate::h(use.local_qubit));
    circuit_.append(Gate::cx(use.local_qubit, use.remote_qubit));
    use.prep_end = circuit_.size();
    use.released_at = static_cast<std::size_t>(-1);
    slot_used_before_[slot] = 1;
    compiled_.resource_prep_ranges.emplace_back(use.prep_begin, use.prep_end);
    compiled_.epr_uses.push_back(use);
    return compiled_.epr_uses.size() - 1;
}

void DistEmitter::release_pair(std::size_t use_index) {
    EprUse& use = compiled_.epr_uses[use_index];
    use.released_at = circuit_.size();
    if (options_.reuse) free_slots_.push_back(use.slot);
}

void DistEmitter::controlled_u(GateKind u, const std::vector<int>& controls, int target,
                               const std::string& role) {
    if (u != GateKind::X && u != GateKind::Z) {
        throw Error("distributed protocol supports controlled X and Z only");
    }
    if (controls.empty()) throw Error("controlled gate needs at least one control");
    const int target_node = owner(target);

    std::vector<int> direct_controls;
    std::vector<int> remote_controls;
    for (int c : controls) {
        (owner(c) == target_node ? direct_controls : remote_controls).push_back(c);
    }

    if (remote_controls.empty()) {
        circuit_.append(u == GateKind::X ? controlled_flip(controls, target)
                                         : Gate::mcz(controls, target));
        return;
    }

    ProtocolInvocation invocation;
    invocation.id = next_invocation_++;
    invocation.role = role;
    invocation.target_qubit = target;
    invocation.target_node = target_node;
    invocation.remote_controls = remote_controls;
    invocation.local_controls = direct_controls;
    invocation.begin = circuit_.size();
    const std::string segment_prefix = "protocol_" + std::to_string(invocation.id);

    // Step 1: bind each remote control to the master-side ê half.
    std::vector<PendingLeg> legs;
    std::vector<int> gate_controls = direct_controls;
    for (int cq : remote_controls) {
        std::size_t use_index = allocate_pair(owner(cq), target_node, invocation.id);
        const EprUse& use = compiled_.epr_uses[use_index];
        int bit = circuit_.add_classical_bit();
        circuit_.append(Gate::cx(cq, use.local_qubit));
        compiled_.messages.push_back(
            {bit, owner(cq), target_node, 1, circuit_.size(), invocation.id, cq});
        circuit_.append(Gate::measure_z(use.local_qubit, bit));
        circuit_.append(Gate::cond_x(use.remote_qubit, bit));
        gate_controls.push_back(use.remote_qubit);
        legs.push_back({cq, use_index, bit});
    }
    circuit_.add_segment(segment_prefix + ".step1", invocation.begin, circuit_.size());

    // Step 2: the gate itself, now fully on the target's node.
    invocation.mcu_index = circuit_.size();
    circuit_.append(u == GateKind::X ? controlled_flip(gate_controls, target)
                                     : Gate::mcz(gate_controls, target));
    circuit_.add_segment(segment_prefix + ".step2", invocation.mcu_index, circuit_.size());

    // Step 3: release each control from its ê half.
    std::vector<int> step3_bits;
    for (const PendingLeg& leg : legs) {
        const EprUse& use = compiled_.epr_uses[leg.use_index];
        int bit = circuit_.add_classical_bit();
        compiled_.messages.push_back(
            {bit, target_node, use.control_node, 3, circuit_.size(), invocation.id,
             leg.control_qubit});
        circuit_.append(Gate::measure_x(use.remote_qubit, bit));
        circuit_.append(Gate::cond_z(leg.control_qubit, bit));
        step3_bits.push_back(bit);
    }
    for (std::size_t i = 0; i < legs.size(); ++i) {
        if (options_.reuse) {
            // Both halves are in classically known states (|b1⟩ and |±⟩ per
            // b3), so resetting them for reuse is a conditioned unwind rather
            // than a fresh measurement.
            const EprUse& use = compiled_.epr_uses[legs[i].use_index];
            circuit_.append(Gate::cond_x(use.local_qubit, legs[i].step1_bit));
            circuit_.append(Gate::h(use.remote_qubit));
            circuit_.append(Gate::cond_x(use.remote_qubit, step3_bits[i]));
        }
        release_pair(legs[i].use_index);
    }

    invocation.end = circuit_.size();
    circuit_.add_segment(segment_prefix + ".step3", invocation.mcu_index + 1, invocation.end);
    compiled_.invocations.push_back(std::move(invocation));
}

DistCompiled DistEmitter::finish(std::vector<int> readout) {
    compiled_.pool_qubit_count = 2 * static_cast<int>(slot_used_before_.size());
    for (EprUse& use : compiled_.epr_uses) {
        if (use.released_at == static_cast<std::size_t>(-1)) use.released_at = circuit_.size();
    }
    compiled_.readout = std::move(readout);
    compiled_.circuit = std::move(circuit_);
    return std::move(compiled_);
}

namespace {

void emit_distributed_oracle(DistEmitter& em, const ExpandedFormula& f,
                             const QubitLayout& layout) {
    Circuit& c = em.circuit();
    std::size_t compute_begin = c.size();
    std::size_t clauses_begin = c.size();
    for (int i = 0; i < f.base().clause_count(); ++i) {
        std::size_t begin = c.size();
        em.append_block(build_clause_circuit(f, i, layout, Mode::Parallel), false);
        c.add_segment("clause_" + std::to_string(i + 1), begin, c.size());
    }
    c.add_segment("clauses", clauses_begin, c.size());
    em.controlled_u(GateKind::X, layout.clause_qubit, layout.formula_qubit, "oracle_and");
    c.add_segment("compute", compute_begin, c.size());

    std::size_t phase_begin = c.size();
    em.append_local(Gate::z(layout.formula_qubit));
    c.add_segment("phase", phase_begin, c.size());

    std::size_t uncompute_begin = c.size();
    em.controlled_u(GateKind::X, layout.clause_qubit, layout.formula_qubit, "oracle_and_inverse");
    for (int i = f.base().clause_count() - 1; i >= 0; --i) {
        em.append_block(build_clause_circuit(f, i, layout, Mode::Parallel).inverted(), false);
    }
    c.add_segment("uncompute", uncompute_begin, c.size());
}

void emit_companion_cx(DistEmitter& em, int representative, int companion,
                       const std::string& role) {
    if (em.owner(representative) == em.owner(companion)) {
        em.append_local(Gate::cx(representative, companion));
    } else {
        em.controlled_u(GateKind::X, {representative}, companion, role);
    }
}

void emit_distributed_diffuser(DistEmitter& em, const ExpandedFormula& f,
                               const QubitLayout& layout) {
    Circuit& c = em.circuit();
    const int d = f.base().variable_count();
    const DistOptions& opt = em.options();

    auto companion_pass = [&](const std::string& role, bool mirrored) {
        for (int v = 0; v < d; ++v) {
            std::vector<int> companions = layout.companions[v];
            if (opt.reverse_companion_order != mirrored) {
                std::reverse(companions.begin(), companions.end());
            }
            for (int q : companions) emit_companion_cx(em, layout.representative[v], q, role);
        }
    };

    std::size_t begin = c.size();
    companion_pass("diffuser_disentangle", false);
    c.add_segment("disentangle", begin, c.size());

    begin = c.size();
    for (int v = 0; v < d; ++v) em.append_local(Gate::h(layout.representative[v]));
    for (int v = 0; v < d; ++v) em.append_local(Gate::x(layout.representative[v]));
    if (d == 1) {
        em.append_local(Gate::z(layout.representative[0]));
    } else {
        int target_variable = opt.mcz_target_variable.value_or(d - 1);
        if (target_variable < 0 || target_variable >= d) {
            throw Error("diffuser phase-target variable out of range");
        }
        std::vector<int> controls;
        for (int v = 0; v < d; ++v) {
            if (v != target_variable) controls.push_back(layout.representative[v]);
        }
        em.controlled_u(GateKind::Z, controls, layout.representative[target_variable],
                        "diffuser_core");
    }
    for (int v = 0; v < d; ++v) em.append_local(Gate::x(layout.representative[v]));
    for (int v = 0; v < d; ++v) em.append_local(Gate::h(layout.representative[v]));
    c.add_segment("core", begin, c.size());

    begin = c.size();
    companion_pass("diffuser_entangle", true);
    c.add_segment("entangle", begin, c.size());
}

} // namespace

DistCompiled build_distributed_oracle(const ExpandedFormula& f, const Partition& partition,
                                      const DistOptions& options) {
    QubitLayout layout = QubitLayout::make(f, Mode::Distributed);
    partition.validate(f, layout);
    DistEmitter em(layout, partition, options);
    emit_distributed_oracle(em, f, layout);
    return em.finish(layout.readout());
}

DistCompiled build_distributed_diffuser(const ExpandedFormula& f, const Partition& partition,
                                        const DistOptions& options) {
    QubitLayout layout = QubitLayout::make(f, Mode::Distributed);
    partition.validate(f, layout);
    DistEmitter em(layout, partition, options);
    emit_distributed_diffuser(em, f, layout);
    return em.finish(layout.readout());
}

DistCompiled build_distributed_grover(const Formula& f, const GroverPlan& plan,
                                      const Partition* partition, const DistOptions& options) {
    ExpandedFormula expanded = expand(f);
    QubitLayout layout = QubitLayout::make(expanded, Mode::Distributed);
    Partition part = partition ? *partition : Partition::clause_partition(expanded, layout);
    part.validate(expanded, layout);

    DistEmitter em(layout, part, options);
    Circuit& c = em.circuit();

    em.append_block(build_ghz_prep(expanded, layout), false);
    em.mark_resource_prep(0, c.size());
    c.add_segment("prep", 0, c.size());

    for (int i = 0; i < plan.iterations; ++i) {
        std::size_t begin = c.size();
        emit_distributed_oracle(em, expanded, layout);
        c.add_segment("oracle", begin, c.size());
        begin = c.size();
        emit_distributed_diffuser(em, expanded, layout);
        c.add_segment("diffuser", begin, c.size());
    }

    std::size_t measure_begin = c.size();
    for (int v = 0; v < f.variable_count(); ++v) {
        int bit = c.add_classical_bit();
        c.append(Gate::measure_z(layout.representative[v], bit));
    }
    c.add_segment("measure", measure_begin, c.size());

    return em.finish(layout.readout());
}

DistCompiled build_distributed_mcu(int control_count, GateKind u, const DistOptions& options) {
    if (control_count < 1) throw Error("protocol needs at least one control");
    // A minimal layout: one control per node, the target alone on the master.
    QubitLayout layout;
    layout.mode = Mode::Distributed;
    Partition partition;
    for (int i = 0; i < control_count; ++i) {
        layout.labels.push_back("C" + std::to_string(i + 1));
        ++layout.qubit_count;
        partition.owner.push_back(i);
    }
    layout.labels.push_back("t");
    ++layout.qubit_count;
    partition.owner.push_back(control_count);
    partition.master = control_count;
    partition.node_count = control_count + 1;

    DistEmitter em(layout, partition, options);
    std::vector<int> controls(control_count);
    for (int i = 0; i < control_count; ++i) controls[i] = i;
    em.controlled_u(u, controls, control_count, "standalone");

    std::vector<int> readout(control_count + 1);
    for (int i = 0; i <= control_count; ++i) readout[i] = i;
    return em.finish(std::move(readout));
}

namespace {

bool in_ranges(std::size_t index, const std::vector<std::pair<std::size_t, std::size_t>>& ranges) {
    return std::any_of(ranges.begin(), ranges.end(), [index](const auto& r) {
        return index >= r.first && index < r.second;
    });
}

} // namespace

LocalityReport check_locality(const DistCompiled& compiled) {
    LocalityReport report;
    const auto& gates = compiled.circuit.gates();
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        std::vector<int> qubits = g.qubits();
        if (qubits.size() < 2) continue;
        if (in_ranges(i, compiled.resource_prep_ranges)) continue;
        int node = compiled.owner_at(qubits[0], i);
        bool spans = false;
        for (int q : qubits) {
            if (compiled.owner_at(q, i) != node) {
                spans = true;
                break;
            }
        }
        if (spans) {
            std::ostringstream text;
            text << "gate " << i << " (" << gate_kind_name(g.kind) << ") spans nodes:";
            for (int q : qubits) {
                text << ' ' << compiled.circuit.label(q) << "@node"
                     << compiled.owner_at(q, i);
            }
            report.violations.push_back({i, text.str()});
        }
    }
    return report;
}

LocalityReport check_locality(const Circuit& circuit, const std::vector<int>& owner) {
    if (static_cast<int>(owner.size()) != circuit.qubit_count()) {
        throw Error("ownership map does not cover the circuit");
    }
    LocalityReport report;
    const auto& gates = circuit.gates();
    for (std::size_t i = 0; i < gates.size(); ++i) {
        std::vector<int> qubits = gates[i].qubits();
        if (qubits.size() < 2) continue;
        bool spans = false;
        for (int q : qubits) {
            if (owner[q] != owner[qubits[0]]) {
                spans = true;
                break;
            }
        }
        if (spans) {
            std::ostringstream text;
            text << "gate " << i << " (" << gate_kind_name(gates[i].kind) << ") spans nodes";
            report.violations.push_back({i, text.str()});
        }
    }
    return report;
}

std::string LocalityReport::to_text() const {
    if (violations.empty()) return "locality: clean\n";
    std::ostringstream out;
    out << "locality: " << violations.size() << " violation(s)\n";
    for (const auto& v : violations) out << "  " << v.description << '\n';
    return out.str();
}

MessageTrace trace_messages(const DistCompiled& compiled, const BitValues& bits) {
    MessageTrace trace;
    for (const PlannedMessage& m : compiled.messages) {
        if (m.bit >= static_cast<int>(bits.size()) || bits[m.bit] < 0) {
            throw Error("run did not produce a value for classical bit " + std::to_string(m.bit));
        }
        trace.events.push_back({m.step, m.sender, m.receiver, m.bit, bits[m.bit]});
    }
    return trace;
}

std::string MessageTrace::to_jsonl() const {
    std::ostringstream out;
    for (const MessageEvent& e : events) {
        nlohmann::json doc;
        doc["step"] = e.step;
        doc["sender"] = e.sender;
        doc["receiver"] = e.receiver;
        doc["bit"] = e.bit;
        doc["value"] = e.value;
        out << doc.dump() << '\n';
    }
    return out.str();
}

DisciplineReport check_message_discipline(const DistCompiled& compiled,
                                          const MessageTrace& trace) {
    DisciplineReport report;
    if (trace.events.size() != compiled.messages.size()) {
        report.problems.push_back("trace length does not match the message plan");
        return report;
    }
    for (const ProtocolInvocation& invocation : compiled.invocations) {
        for (int control : invocation.remote_controls) {
            int step1 = 0, step3 = 0;
            for (std::size_t i = 0; i < compiled.messages.size(); ++i) {
                const PlannedMessage& m = compiled.messages[i];
                if (m.invocation != invocation.id || m.control_qubit != control) continue;
                int control_node = compiled.partition.owner[control];
                if (m.step == 1) {
                    ++step1;
                    if (m.gate_index > invocation.mcu_index) {
                        report.problems.push_back("step-1 message after the protocol gate");
                    }
                    if (m.sender != control_node || m.receiver != invocation.target_node) {
                        report.problems.push_back("step-1 message direction wrong");
                    }
                } else if (m.step == 3) {
                    ++step3;
                    if (m.gate_index < invocation.mcu_index) {
                        report.problems.push_back("step-3 message before the protocol gate");
                    }
                    if (m.sender != invocation.target_node || m.receiver != control_node) {
                        report.problems.push_back("step-3 message direction wrong");
                    }
                } else {
                    report.problems.push_back("unknown protocol step");
                }
            }
            if (step1 != 1 || step3 != 1) {
                report.problems.push_back(
                    "control " + compiled.circuit.label(control) + " in invocation " +
                    std::to_string(invocation.id) + " has " + std::to_string(step1 + step3) +
                    " messages, expected exactly 2");
            }
        }
    }
    return report;
}

QubitBudget qubit_budget(const ExpandedFormula& f, const Partition& partition, bool reuse) {
    partition.validate(f, QubitLayout::make(f, Mode::Distributed));
    DistOptions options;
    options.reuse = reuse;
    GroverPlan plan;
    plan.iterations = 1;
    DistCompiled compiled = build_distributed_grover(f.base(), plan, &partition, options);

    QubitBudget budget;
    budget.reuse = reuse;
    budget.formula_qubits = compiled.formula_qubit_count();
    budget.pool_qubits = compiled.pool_qubit_count;
    budget.total = budget.formula_qubits + budget.pool_qubits;
    budget.protocol_invocations = static_cast<int>(compiled.invocations.size());

    std::map<std::string, int> stage;
    for (const ProtocolInvocation& invocation : compiled.invocations) {
        budget.remote_control_legs += static_cast<int>(invocation.remote_controls.size());
        stage[invocation.role] += static_cast<int>(invocation.remote_controls.size());
    }
    budget.stage_legs.assign(stage.begin(), stage.end());

    // Peak number of simultaneously live pairs, and per-node peak halves.
    std::vector<std::pair<std::size_t, int>> events; // (gate index, +1/-1)
    for (const EprUse& use : compiled.epr_uses) {
        events.emplace_back(use.prep_begin, 1);
        events.emplace_back(use.released_at, -1);
    }
    std::sort(events.begin(), events.end());
    int live = 0;
    for (const auto& [index, delta] : events) {
        live += delta;
        budget.max_concurrent_remote = std::max(budget.max_concurrent_remote, live);
    }

    std::vector<NodeBudget> per_node(partition.node_count);
    for (int node = 0; node < partition.node_count; ++node) per_node[node].node = node;
    for (int q = 0; q < compiled.formula_qubit_count(); ++q) {
        ++per_node[partition.owner[q]].formula_qubits;
    }
    for (const EprUse& use : compiled.epr_uses) {
        ++per_node[use.control_node].epr_halves;
        ++per_node[use.target_node].epr_halves;
    }
    if (reuse) {
        // With reuse a node's halves are recycled; report its concurrent peak.
        for (NodeBudget& nb : per_node) nb.epr_halves = 0;
        std::vector<std::tuple<std::size_t, int, int>> node_events; // (index, delta, node)
        for (const EprUse& use : compiled.epr_uses) {
            node_events.emplace_back(use.prep_begin, 1, use.control_node);
            node_events.emplace_back(use.prep_begin, 1, use.target_node);
            node_events.emplace_back(use.released_at, -1, use.control_node);
            node_events.emplace_back(use.released_at, -1, use.target_node);
        }
        std::sort(node_events.begin(), node_events.end());
        std::vector<int> live_per_node(partition.node_count, 0);
        for (const auto& [index, delta, node] : node_events) {
            live_per_node[node] += delta;
            per_node[node].epr_halves = std::max(per_node[node].epr_halves, live_per_node[node]);
        }
    }
    budget.per_node = std::move(per_node);
    return budget;
}

std::string QubitBudget::to_text() const {
    std::ostringstream out;
    out << "qubit budget (" << (reuse ? "pair reuse on" : "fresh pairs") << ")\n";
    out << "  formula qubits:        " << formula_qubits << '\n';
    out << "  protocol pool qubits:  " << pool_qubits << '\n';
    out << "  total:                 " << total << '\n';
    out << "  protocol invocations:  " << protocol_invocations << '\n';
    out << "  remote control legs:   " << remote_control_legs << '\n';
    out << "  peak concurrent pairs: " << max_concurrent_remote << '\n';
    out << "  legs by stage:\n";
    for (const auto& [role, legs] : stage_legs) {
        out << "    " << role << ": " << legs << '\n';
    }
    out << "  per node (formula + pair halves):\n";
    for (const NodeBudget& nb : per_node) {
        out << "    node " << nb.node << ": " << nb.formula_qubits << " + " << nb.epr_halves
            << '\n';
    }
    return out.str();
}

std::string QubitBudget::to_json_text(int indent) const {
    nlohmann::json doc;
    doc["reuse"] = reuse;
    doc["formula_qubits"] = formula_qubits;
    doc["pool_qubits"] = pool_qubits;
    doc["total"] = total;
    doc["protocol_invocations"] = protocol_invocations;
    doc["remote_control_legs"] = remote_control_legs;
    doc["max_concurrent_pairs"] = max_concurrent_remote;
    doc["stage_legs"] = nlohmann::json::object();
    for (const auto& [role, legs] : stage_legs) doc["stage_legs"][role] = legs;
    doc["per_node"] = nlohmann::json::array();
    for (const NodeBudget& nb : per_node) {
        doc["per_node"].push_back({{"node", nb.node},
                                   {"formula_qubits", nb.formula_qubits},
                                   {"epr_halves", nb.epr_halves}});
    }
    return doc.dump(indent) + "\n";
}

} // namespace qsat
