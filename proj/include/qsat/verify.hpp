#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsat/circuit.hpp"
#include "qsat/distnet.hpp"
#include "qsat/formula.hpp"
#include "qsat/grover.hpp"
#include "qsat/sim.hpp"

namespace qsat {

/// All satisfying assignments as basis indices (bit j = variable j),
/// ascending. Exhaustive; limited to 24 variables.
std::vector<std::uint64_t> brute_force_solutions(const Formula& f);

/// Normalized state with independent complex-Gaussian amplitudes.
StateVector random_state(int qubit_count, ShotRng& rng);

/// Basis index of the expanded register encoding assignment `index`: every
/// copy of a variable carries the variable's bit, ancillas stay 0.
std::uint64_t expanded_basis_index(const ExpandedFormula& f, const QubitLayout& layout,
                                   std::uint64_t index);

struct PhaseMismatch {
    std::uint64_t assignment = 0;
    double expected_sign = 1.0;
    Amplitude amplitude;
};

struct PhaseReport {
    std::vector<PhaseMismatch> mismatches;
    double max_amplitude_error = 0.0; ///< deviation from ±1/√N on assignment states
    double max_leak = 0.0;            ///< largest amplitude outside the assignment slice
    int branches = 1;

    bool clean(double tolerance = 1e-10) const {
        return mismatches.empty() && max_amplitude_error < tolerance && max_leak < tolerance;
    }
    std::string to_text() const;
    std::string to_json_text(int indent = 2) const;
};

/// Prepares the mode's uniform input register, runs the oracle once and
/// compares each assignment's amplitude sign against the formula value,
/// with ancillas required back in |0⟩.
PhaseReport check_oracle_phases(const ExpandedFormula& f, const QubitLayout& layout,
                                const Circuit& oracle);

/// Same check across every measurement branch of a distributed oracle.
PhaseReport check_oracle_phases(const ExpandedFormula& f, const DistCompiled& oracle);

struct DiffuserReport {
    double max_error = 0.0;
    int trials = 0;

    bool clean(double tolerance = 1e-10) const { return max_error < tolerance; }
    std::string to_text() const;
    std::string to_json_text(int indent = 2) const;
};

/// Draws random amplitudes over the 2^d assignments, lifts them onto the
/// entangled expanded register, applies `diffuser` and compares against the
/// classic diffuser acting on the plain d-qubit state. The error includes
/// any amplitude leaking off the entanglement-consistent subspace.
DiffuserReport check_diffuser_equivalence(const ExpandedFormula& f, const QubitLayout& layout,
                                          const Circuit& diffuser, int trials,
                                          std::uint64_t seed);

struct ProtocolReport {
    double max_error = 0.0;          ///< per-branch distance from the local gate's output
    double max_split_deviation = 0.0; ///< measurement branch weight distance from 1/2
    int max_branches = 0;
    int trials = 0;

    bool clean(double tolerance = 1e-10) const { return max_error < tolerance; }
    std::string to_text() const;
    std::string to_json_text(int indent = 2) const;
};

/// Runs the teleported m-controlled-U channel on random input states and
/// compares every measurement branch against the plain gate.
ProtocolReport check_protocol_equivalence(int control_count, GateKind u, int trials,
                                          std::uint64_t seed);

} // namespace qsat
