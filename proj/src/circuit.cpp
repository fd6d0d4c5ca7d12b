#include "qsat/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace qsat {

namespace {

struct KindName {
    GateKind kind;
    std::string_view name;
};

constexpr KindName kKindNames[] = {
    {GateKind::X, "x"},
    {GateKind::H, "h"},
    {GateKind::Z, "z"},
    {GateKind::CX, "cx"},
    {GateKind::MCX, "mcx"},
    {GateKind::MCZ, "mcz"},
    {GateKind::Fanout, "fanout"},
    {GateKind::MeasureZ, "measure_z"},
    {GateKind::MeasureX, "measure_x"},
    {GateKind::CondX, "cond_x"},
    {GateKind::CondZ, "cond_z"},
    {GateKind::Reset, "reset"},
};

} // namespace

std::string_view gate_kind_name(GateKind kind) {
    for (const auto& entry : kKindNames) {
        if (entry.kind == kind) return entry.name;
    }
    throw Error("unknown gate kind");
}

GateKind gate_kind_from_name(std::string_view name) {
    for (const auto& entry : kKindNames) {
        if (entry.name == name) return entry.kind;
    }
    throw ParseError("unknown gate kind '" + std::string(name) + "'");
}

std::vector<int> Gate::qubits() const {
    std::vector<int> all = controls;
    all.insert(all.end(), targets.begin(), targets.end());
    return all;
}

Circuit::Circuit(int qubit_count, int classical_bit_count)
    : qubit_count_(qubit_count), classical_bit_count_(classical_bit_count) {
    if (qubit_count_ < 0 || classical_bit_count_ < 0) {
        throw Error("negative register size");
    }
    labels_.reserve(static_cast<std::size_t>(qubit_count_));
    for (int q = 0; q < qubit_count_; ++q) {
        labels_.push_back("q" + std::to_string(q));
    }
    bit_written_.assign(static_cast<std::size_t>(classical_bit_count_), 0);
}

Circuit::Circuit(std::vector<std::string> labels, int classical_bit_count)
    : qubit_count_(static_cast<int>(labels.size())),
      classical_bit_count_(classical_bit_count),
      labels_(std::move(labels)) {
    if (classical_bit_count_ < 0) throw Error("negative register size");
    bit_written_.assign(static_cast<std::size_t>(classical_bit_count_), 0);
}

int Circuit::qubit_by_label(std::string_view label) const {
    for (int q = 0; q < qubit_count_; ++q) {
        if (labels_[q] == label) return q;
    }
    return -1;
}

void Circuit::validate(const Gate& gate) const {
    auto expect = [&](bool ok, const char* what) {
        if (!ok) throw Error(std::string(gate_kind_name(gate.kind)) + ": " + what);
    };
    switch (gate.kind) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::Z:
    case GateKind::Reset:
        expect(gate.controls.empty() && gate.targets.size() == 1 && gate.bit == -1,
               "expects exactly one target qubit");
        break;
    case GateKind::CX:
        expect(gate.controls.size() == 1 && gate.targets.size() == 1 && gate.bit == -1,
               "expects one control and one target");
        break;
    case GateKind::MCX:
    case GateKind::MCZ:
        expect(!gate.controls.empty() && gate.targets.size() == 1 && gate.bit == -1,
               "expects at least one control and one target");
        break;
    case GateKind::Fanout:
        expect(gate.controls.size() == 1 && !gate.targets.empty() && gate.bit == -1,
               "expects one control and at least one target");
        break;
    case GateKind::MeasureZ:
    case GateKind::MeasureX:
        expect(gate.controls.empty() && gate.targets.size() == 1, "expects one measured qubit");
        expect(gate.bit >= 0, "needs a destination classical bit");
        break;
    case GateKind::CondX:
    case GateKind::CondZ:
        expect(gate.controls.empty() && gate.targets.size() == 1, "expects one target qubit");
        expect(gate.bit >= 0, "needs a condition classical bit");
        break;
    }

    std::unordered_set<int> seen;
    for (int q : gate.qubits()) {
        if (q < 0 || q >= qubit_count_) {
            throw Error(std::string(gate_kind_name(gate.kind)) + ": qubit " + std::to_string(q) +
                        " out of range 0.." + std::to_string(qubit_count_ - 1));
        }
        if (!seen.insert(q).second) {
            throw Error(std::string(gate_kind_name(gate.kind)) + ": duplicate operand qubit " +
                        std::to_string(q));
        }
    }
    if (gate.bit >= 0) {
        if (gate.bit >= classical_bit_count_) {
            throw Error(std::string(gate_kind_name(gate.kind)) + ": classical bit " +
                        std::to_string(gate.bit) + " out of range");
        }
        if (gate.writes_bit() && bit_written_[gate.bit]) {
            throw Error("classical bit " + std::to_string(gate.bit) + " written twice");
        }
        if (gate.reads_bit() && !bit_written_[gate.bit]) {
            throw Error("classical bit " + std::to_string(gate.bit) + " read before it is written");
        }
    }
}

Circuit& Circuit::append(Gate gate) {
    validate(gate);
    if (gate.writes_bit()) bit_written_[gate.bit] = 1;
    gates_.push_back(std::move(gate));
    return *this;
}

int Circuit::add_classical_bit() {
    bit_written_.push_back(0);
    return classical_bit_count_++;
}

int Circuit::add_qubit(std::string label) {
    labels_.push_back(std::move(label));
    return qubit_count_++;
}

std::size_t Circuit::append_circuit(const Circuit& other, bool copy_segments) {
    if (other.qubit_count_ > qubit_count_) {
        throw Error("appended circuit is wider than the target circuit");
    }
    std::size_t offset = gates_.size();
    int bit_offset = classical_bit_count_;
    for (int b = 0; b < other.classical_bit_count_; ++b) add_classical_bit();
    for (Gate gate : other.gates_) {
        if (gate.bit >= 0) gate.bit += bit_offset;
        append(std::move(gate));
    }
    if (copy_segments) {
        for (const Segment& s : other.segments_) {
            add_segment(s.name, s.begin + offset, s.end + offset);
        }
    }
    return offset;
}

void Circuit::add_segment(std::string name, std::size_t begin, std::size_t end) {
    if (begin > end || end > gates_.size()) {
        throw Error("segment '" + name + "' range is invalid");
    }
    segments_.push_back({std::move(name), begin, end});
}

std::vector<Segment> Circuit::segments_named(std::string_view name) const {
    std::vector<Segment> found;
    for (const Segment& s : segments_) {
        if (s.name == name) found.push_back(s);
    }
    return found;
}

Circuit Circuit::inverted() const {
    for (const Gate& g : gates_) {
        if (!g.is_unitary()) {
            throw Error("cannot invert a circuit containing " +
                        std::string(gate_kind_name(g.kind)));
        }
    }
    Circuit inv(labels_, classical_bit_count_);
    inv.gates_.assign(gates_.rbegin(), gates_.rend());
    std::size_t n = gates_.size();
    for (const Segment& s : segments_) {
        inv.segments_.push_back({s.name, n - s.end, n - s.begin});
    }
    std::reverse(inv.segments_.begin(), inv.segments_.end());
    return inv;
}

bool Circuit::is_measurement_free() const {
    return std::all_of(gates_.begin(), gates_.end(),
                       [](const Gate& g) { return g.is_unitary(); });
}

int Circuit::depth_over(const std::vector<char>& included) const {
    // Wire key: qubits first, classical bits after.
    std::vector<int> next(static_cast<std::size_t>(qubit_count_ + classical_bit_count_), 0);
    int depth = 0;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        if (!included[i]) continue;
        const Gate& g = gates_[i];
        int layer = 0;
        for (int q : g.qubits()) layer = std::max(layer, next[q]);
        if (g.bit >= 0) layer = std::max(layer, next[qubit_count_ + g.bit]);
        for (int q : g.qubits()) next[q] = layer + 1;
        if (g.bit >= 0) next[qubit_count_ + g.bit] = layer + 1;
        depth = std::max(depth, layer + 1);
    }
    return depth;
}

int Circuit::depth() const {
    std::vector<char> all(gates_.size(), 1);
    return depth_over(all);
}

int Circuit::depth(std::string_view segment_name) const {
    std::vector<Segment> ranges = segments_named(segment_name);
    if (ranges.empty()) {
        throw Error("unknown segment '" + std::string(segment_name) + "'");
    }
    std::vector<char> included(gates_.size(), 0);
    for (const Segment& s : ranges) {
        for (std::size_t i = s.begin; i < s.end; ++i) included[i] = 1;
    }
    return depth_over(included);
}

std::string Circuit::to_json_text(int indent) const {
    nlohmann::json doc;
    doc["version"] = "v1";
    doc["qubits"] = nlohmann::json::array();
    for (int q = 0; q < qubit_count_; ++q) {
        doc["qubits"].push_back({{"index", q}, {"label", labels_[q]}});
    }
    doc["classical_bits"] = classical_bit_count_;
    doc["gates"] = nlohmann::json::array();
    for (const Gate& g : gates_) {
        nlohmann::json jg;
        jg["kind"] = std::string(gate_kind_name(g.kind));
        if (!g.controls.empty()) jg["controls"] = g.controls;
        jg["targets"] = g.targets;
        if (g.bit >= 0) jg["bit"] = g.bit;
        doc["gates"].push_back(std::move(jg));
    }
    doc["segments"] = nlohmann::json::array();
    for (const Segment& s : segments_) {
        doc["segments"].push_back({{"name", s.name}, {"begin", s.begin}, {"end", s.end}});
    }
    return doc.dump(indent) + "\n";
}

Circuit Circuit::from_json_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("circuit JSON: ") + e.what());
    }
    try {
        if (doc.at("version").get<std::string>() != "v1") {
            throw ParseError("unsupported circuit JSON version");
        }
        std::vector<std::string> labels;
        for (const auto& jq : doc.at("qubits")) {
            labels.push_back(jq.at("label").get<std::string>());
        }
        Circuit c(std::move(labels), doc.at("classical_bits").get<int>());
        for (const auto& jg : doc.at("gates")) {
            Gate g;
            g.kind = gate_kind_from_name(jg.at("kind").get<std::string>());
            if (jg.contains("controls")) g.controls = jg.at("controls").get<std::vector<int>>();
            g.targets = jg.at("targets").get<std::vector<int>>();
            if (jg.contains("bit")) g.bit = jg.at("bit").get<int>();
            c.append(std::move(g));
        }
        if (doc.contains("segments")) {
            for (const auto& js : doc.at("segments")) {
                c.add_segment(js.at("name").get<std::string>(), js.at("begin").get<std::size_t>(),
                              js.at("end").get<std::size_t>());
            }
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("circuit JSON: ") + e.what());
    } catch (const Error& e) {
        throw ParseError(std::string("circuit JSON: ") + e.what());
    }
}

std::string Circuit::disassemble() const {
    std::ostringstream out;
    out << "qubits " << qubit_count_ << " bits " << classical_bit_count_ << '\n';
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        const Gate& g = gates_[i];
        out << i << ": " << gate_kind_name(g.kind);
        if (!g.controls.empty()) {
            out << ' ';
            for (std::size_t k = 0; k < g.controls.size(); ++k) {
                out << (k ? "," : "") << 'q' << g.controls[k];
            }
            out << " ->";
        }
        for (int t : g.targets) out << " q" << t;
        if (g.writes_bit()) out << " => c" << g.bit;
        if (g.reads_bit()) out << " if c" << g.bit;
        out << '\n';
    }
    for (const Segment& s : segments_) {
        out << "segment " << s.name << " [" << s.begin << ',' << s.end << ")\n";
    }
    return out.str();
}

} // namespace qsat
