#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsat/error.hpp"

namespace qsat {

enum class GateKind {
    X,
    H,
    Z,
    CX,       ///< one control, one target
    MCX,      ///< m controls, one target
    MCZ,      ///< m controls, one target (symmetric phase flip)
    Fanout,   ///< one control, many targets (multi-target CNOT)
    MeasureZ, ///< computational-basis measurement into a classical bit
    MeasureX, ///< |+⟩/|−⟩-basis measurement into a classical bit
    CondX,    ///< X applied when the named classical bit is 1
    CondZ,    ///< Z applied when the named classical bit is 1
    Reset,    ///< measure and force |0⟩
};

std::string_view gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(std::string_view name);

struct Gate {
    GateKind kind;
    std::vector<int> controls;
    std::vector<int> targets;
    int bit = -1; ///< measurement destination or condition source

    static Gate x(int q) { return {GateKind::X, {}, {q}}; }
    static Gate h(int q) { return {GateKind::H, {}, {q}}; }
    static Gate z(int q) { return {GateKind::Z, {}, {q}}; }
    static Gate cx(int control, int target) { return {GateKind::CX, {control}, {target}}; }
    static Gate mcx(std::vector<int> controls, int target) {
        return {GateKind::MCX, std::move(controls), {target}};
    }
    static Gate mcz(std::vector<int> controls, int target) {
        return {GateKind::MCZ, std::move(controls), {target}};
    }
    static Gate fanout(int control, std::vector<int> targets) {
        return {GateKind::Fanout, {control}, std::move(targets)};
    }
    static Gate measure_z(int q, int bit) { return {GateKind::MeasureZ, {}, {q}, bit}; }
    static Gate measure_x(int q, int bit) { return {GateKind::MeasureX, {}, {q}, bit}; }
    static Gate cond_x(int q, int bit) { return {GateKind::CondX, {}, {q}, bit}; }
    static Gate cond_z(int q, int bit) { return {GateKind::CondZ, {}, {q}, bit}; }
    static Gate reset(int q) { return {GateKind::Reset, {}, {q}}; }

    bool is_measurement() const {
        return kind == GateKind::MeasureZ || kind == GateKind::MeasureX;
    }
    bool is_conditioned() const { return kind == GateKind::CondX || kind == GateKind::CondZ; }
    /// True for gates with a plain unitary action (invertible, self-inverse).
    bool is_unitary() const {
        return !is_measurement() && !is_conditioned() && kind != GateKind::Reset;
    }
    bool writes_bit() const { return is_measurement(); }
    bool reads_bit() const { return is_conditioned(); }

    /// Controls followed by targets.
    std::vector<int> qubits() const;

    friend bool operator==(const Gate&, const Gate&) = default;
};

/// Named half-open gate range used to tag circuit structure.
struct Segment {
    std::string name;
    std::size_t begin = 0;
    std::size_t end = 0;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Gate-level IR. append() validates operand ranges, operand distinctness
/// and the write-once/read-after-write discipline for classical bits.
class Circuit {
public:
    Circuit() : Circuit(0) {}
    explicit Circuit(int qubit_count, int classical_bit_count = 0);
    Circuit(std::vector<std::string> labels, int classical_bit_count = 0);

    int qubit_count() const { return qubit_count_; }
    int classical_bit_count() const { return classical_bit_count_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int qubit) const { return labels_.at(qubit); }
    void set_label(int qubit, std::string label) { labels_.at(qubit) = std::move(label); }
    int qubit_by_label(std::string_view label) const; ///< -1 when absent

    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    Circuit& append(Gate gate);
    int add_classical_bit();
    int add_qubit(std::string label);

    /// Appends every gate of `other` (same qubit count required); returns the
    /// index offset of the first copied gate. Segments are copied shifted
    /// unless `copy_segments` is false.
    std::size_t append_circuit(const Circuit& other, bool copy_segments = true);

    void add_segment(std::string name, std::size_t begin, std::size_t end);
    const std::vector<Segment>& segments() const { return segments_; }
    std::vector<Segment> segments_named(std::string_view name) const;

    /// Gates reversed; valid only when every gate is unitary (the gate set is
    /// self-inverse, so the gates themselves are unchanged).
    Circuit inverted() const;

    bool is_measurement_free() const;

    /// Greedy ASAP layering over the whole circuit or one named segment;
    /// gates sharing no qubit and no classical bit share a layer.
    int depth() const;
    int depth(std::string_view segment_name) const;

    std::string to_json_text(int indent = 2) const;
    static Circuit from_json_text(std::string_view text);

    /// Flat per-gate listing for human diffing.
    std::string disassemble() const;

    friend bool operator==(const Circuit&, const Circuit&) = default;

private:
    int qubit_count_;
    int classical_bit_count_;
    std::vector<std::string> labels_;
    std::vector<Gate> gates_;
    std::vector<Segment> segments_;
    std::vector<char> bit_written_;

    void validate(const Gate& gate) const;
    int depth_over(const std::vector<char>& included) const;
};

} // namespace qsat
