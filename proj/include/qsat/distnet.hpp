#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsat/circuit.hpp"
#include "qsat/formula.hpp"
#include "qsat/grover.hpp"
#include "qsat/sim.hpp"

namespace qsat {

/// Node ownership of the formula-layout qubits. Clause co-location (a
/// clause's expanded literals and its clause qubit on one node) is required;
/// the master node owns the formula qubit.
struct Partition {
    std::vector<int> owner; ///< formula-layout qubit -> node id
    int master = 0;
    int node_count = 0;

    /// Clause i on node i, the master as an extra node owning the formula
    /// qubit and any unreferenced variables.
    static Partition clause_partition(const ExpandedFormula& f, const QubitLayout& layout);

    void validate(const ExpandedFormula& f, const QubitLayout& layout) const;

    /// JSON shape: {"master": id, "nodes": {"id": ["label", ...], ...}}
    static Partition from_json_text(std::string_view text, const QubitLayout& layout);
    std::string to_json_text(const QubitLayout& layout, int indent = 2) const;
};

struct DistOptions {
    /// Reset and re-prepare entangled pairs between protocol invocations so
    /// the pool stays at 2 × (max concurrent remote controls); disabling it
    /// reproduces fresh-pair accounting at the cost of circuit width.
    bool reuse = true;
    /// Variable whose representative takes the diffuser's phase target; its
    /// node acts as that step's master. Defaults to the last variable.
    std::optional<int> mcz_target_variable;
    /// Entangle/disentangle companions in reverse occurrence order (the
    /// order is provably irrelevant; exposed for the order-insensitivity test).
    bool reverse_companion_order = false;
};

/// One consumed entangled pair: which pool slot carried it, which nodes it
/// connected and the gate window it was live in.
struct EprUse {
    int slot = 0;
    int local_qubit = 0;  ///< |e⟩ half, on the control's node
    int remote_qubit = 0; ///< |ê⟩ half, on the target's node
    int control_node = 0;
    int target_node = 0;
    std::size_t prep_begin = 0; ///< first gate of the pair preparation
    std::size_t prep_end = 0;   ///< one past the preparation
    std::size_t released_at = 0;
    int invocation = 0;
};

struct PlannedMessage {
    int bit = 0;
    int sender = 0;
    int receiver = 0;
    int step = 0; ///< 1 or 3
    std::size_t gate_index = 0;
    int invocation = 0;
    int control_qubit = 0;
};

struct ProtocolInvocation {
    int id = 0;
    std::string role;
    int target_qubit = 0;
    int target_node = 0;
    std::vector<int> remote_controls;
    std::vector<int> local_controls;
    std::size_t begin = 0;
    std::size_t mcu_index = 0;
    std::size_t end = 0;
};

/// A compiled distributed circuit plus everything needed to audit it:
/// ownership, pair schedule, planned classical messages and invocations.
struct DistCompiled {
    Circuit circuit;
    QubitLayout layout;
    Partition partition;
    bool reuse = true;
    int pool_qubit_count = 0;
    std::vector<int> readout;
    std::vector<EprUse> epr_uses;
    std::vector<PlannedMessage> messages;
    std::vector<ProtocolInvocation> invocations;
    /// Gate ranges that prepare shared entanglement (EPR pairs, the input
    /// GHZ register); exempt from the locality rule.
    std::vector<std::pair<std::size_t, std::size_t>> resource_prep_ranges;

    int formula_qubit_count() const { return layout.qubit_count; }
    /// Node owning `qubit` while gate `gate_index` executes; -1 for an idle
    /// pool slot.
    int owner_at(int qubit, std::size_t gate_index) const;
};

/// Emits gates into a growing distributed circuit, turning multi-controlled
/// X/Z whose controls live off the target's node into the teleportation
/// protocol: entangled pair per remote control, a step-1 Z-measurement and
/// message with an X correction, the gate on the ê halves, and a step-3
/// X-basis measurement and message with a Z correction.
class DistEmitter {
public:
    DistEmitter(const QubitLayout& layout, Partition partition, DistOptions options);

    Circuit& circuit() { return circuit_; }
    const QubitLayout& layout() const { return layout_; }
    const DistOptions& options() const { return options_; }
    int owner(int formula_qubit) const { return partition_.owner.at(formula_qubit); }

    void append_local(Gate gate);
    void append_block(const Circuit& block, bool copy_segments = true);
    void mark_resource_prep(std::size_t begin, std::size_t end);

    /// u must be X or Z. Controls co-located with the target stay direct.
    void controlled_u(GateKind u, const std::vector<int>& controls, int target,
                      const std::string& role);

    DistCompiled finish(std::vector<int> readout);

private:
    struct PendingLeg {
        int control_qubit;
        std::size_t use_index;
        int step1_bit;
    };

    QubitLayout layout_;
    Partition partition_;
    DistOptions options_;
    Circuit circuit_;
    DistCompiled compiled_;
    std::vector<int> free_slots_;
    std::vector<char> slot_used_before_;
    int next_invocation_ = 0;

    std::size_t allocate_pair(int control_node, int target_node, int invocation);
    void release_pair(std::size_t use_index);
};

DistCompiled build_distributed_oracle(const ExpandedFormula& f, const Partition& partition,
                                      const DistOptions& options = {});
DistCompiled build_distributed_diffuser(const ExpandedFormula& f, const Partition& partition,
                                        const DistOptions& options = {});

/// Full distributed Grover circuit: GHZ prep, plan.iterations × (oracle +
/// diffuser) sharing one pair pool, measurement of the representatives.
DistCompiled build_distributed_grover(const Formula& f, const GroverPlan& plan,
                                      const Partition* partition = nullptr,
                                      const DistOptions& options = {});

/// Standalone protocol instance over `control_count` controls, each on its
/// own node, with the target on a separate master node. Readout covers
/// controls then target.
DistCompiled build_distributed_mcu(int control_count, GateKind u,
                                   const DistOptions& options = {});

struct LocalityViolation {
    std::size_t gate_index = 0;
    std::string description;
};

struct LocalityReport {
    std::vector<LocalityViolation> violations;
    bool clean() const { return violations.empty(); }
    std::string to_text() const;
};

/// Flags multi-qubit gates whose operands span nodes, excluding declared
/// entanglement-preparation ranges. Classical traffic is exempt by shape
/// (conditioned gates touch one qubit).
LocalityReport check_locality(const DistCompiled& compiled);
LocalityReport check_locality(const Circuit& circuit, const std::vector<int>& owner);

struct MessageEvent {
    int step = 0;
    int sender = 0;
    int receiver = 0;
    int bit = 0;
    int value = 0;
};

struct MessageTrace {
    std::vector<MessageEvent> events;
    std::string to_jsonl() const;
};

/// Binds the compile-time message plan to one run's classical bit values.
MessageTrace trace_messages(const DistCompiled& compiled, const BitValues& bits);

struct DisciplineReport {
    std::vector<std::string> problems;
    bool clean() const { return problems.empty(); }
};

/// Exactly two messages per remote control per invocation, step 1 before
/// the protocol gate and step 3 after, directions as drawn.
DisciplineReport check_message_discipline(const DistCompiled& compiled,
                                          const MessageTrace& trace);

struct NodeBudget {
    int node = 0;
    int formula_qubits = 0;
    int epr_halves = 0;
};

struct QubitBudget {
    bool reuse = true;
    int formula_qubits = 0;
    int pool_qubits = 0;
    int total = 0;
    int protocol_invocations = 0;
    int remote_control_legs = 0;
    int max_concurrent_remote = 0;
    std::vector<std::pair<std::string, int>> stage_legs; ///< role -> remote legs
    std::vector<NodeBudget> per_node;

    std::string to_text() const;
    std::string to_json_text(int indent = 2) const;
};

/// Itemized qubit accounting for one Grover iteration under the given
/// partition, with or without pair reuse.
QubitBudget qubit_budget(const ExpandedFormula& f, const Partition& partition, bool reuse);

} // namespace qsat
