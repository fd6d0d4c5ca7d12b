#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsat/circuit.hpp"
#include "qsat/formula.hpp"

namespace qsat {

enum class Mode { Sequential, Parallel, Distributed };

std::string_view mode_name(Mode mode);
Mode mode_from_name(std::string_view name);

/// Wire assignment for a compiled formula. Sequential mode gives every
/// variable one qubit; parallel mode gives every literal slot its own qubit,
/// grouped by clause, with the first occurrence acting as the variable's
/// representative.
struct QubitLayout {
    Mode mode = Mode::Parallel;
    int qubit_count = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<int>> slot_qubit; ///< [clause][literal position]
    std::vector<int> clause_qubit;
    int formula_qubit = -1;
    std::vector<int> representative;          ///< per variable
    std::vector<std::vector<int>> companions; ///< per variable, excludes the representative

    /// Representative qubits in variable order: the measurement register.
    std::vector<int> readout() const { return representative; }

    static QubitLayout make(const ExpandedFormula& f, Mode mode);
};

/// Human-readable variable name: a, b, c, ... then v27, v28, ...
std::string variable_name(int variable);

/// CX for one control, MCX otherwise.
Gate controlled_flip(std::vector<int> controls, int target);

struct GroverPlan {
    std::uint64_t search_space = 0;  ///< N = 2^d
    std::uint64_t solution_count = 0;
    int iterations = 0;
    Mode mode = Mode::Parallel;
    std::string diagnostic; ///< set when M = 0 or M = N forces zero iterations
};

/// ⌊(π/4)·√(N/M)⌋ iterations (at least one when 0 < M < N) unless
/// overridden; M = 0 and M = N plan zero iterations with a diagnostic.
GroverPlan plan_iterations(std::uint64_t search_space, std::uint64_t solution_count,
                           std::optional<int> override_iterations = {},
                           Mode mode = Mode::Parallel);

/// H on each representative, then one fanout onto the copies of every
/// shared variable, leaving (|0…0⟩+|1…1⟩)/√2 per variable.
Circuit build_ghz_prep(const ExpandedFormula& f, const QubitLayout& layout);

/// One clause block: X on positive-literal qubits, X on the clause qubit,
/// then the clause MCX. Sequential mode restores the variable flips in
/// place; parallel mode leaves them for the oracle's uncompute half.
Circuit build_clause_circuit(const ExpandedFormula& f, int clause_index,
                             const QubitLayout& layout, Mode mode);

/// Full phase oracle: clause blocks, the clause conjunction onto the formula
/// qubit, Z on it, and the inverted compute half. Segments: "clauses",
/// "conjunction", "compute", "phase", "uncompute".
Circuit build_oracle(const ExpandedFormula& f, const QubitLayout& layout, Mode mode);

/// Standard inversion-about-the-average block on the given qubits.
Circuit build_classic_diffuser(int qubit_count, const std::vector<int>& qubits);

/// Diffuser for expanded layouts: fanout-disentangle the copies, run the
/// classic diffuser on the representatives only, fanout back. Segments:
/// "disentangle", "core", "entangle".
Circuit build_parallel_diffuser(const ExpandedFormula& f, const QubitLayout& layout);

/// The broken variant that runs the classic diffuser across every expanded
/// copy as if the copies were independent variables. Kept as the negative
/// control for the diffuser equivalence check.
Circuit build_naive_expanded_diffuser(const ExpandedFormula& f, const QubitLayout& layout);

struct CompiledGrover {
    Circuit circuit;
    QubitLayout layout;
    GroverPlan plan;
};

/// State prep + plan.iterations × (oracle, diffuser) + measurement of the
/// representatives in variable order. Sequential and parallel modes only;
/// distributed compilation lives in distnet.
CompiledGrover build_grover(const Formula& f, Mode mode, const GroverPlan& plan);

} // namespace qsat
