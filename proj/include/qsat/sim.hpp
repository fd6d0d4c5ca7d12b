#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsat/circuit.hpp"

namespace qsat {

using Amplitude = std::complex<double>;

/// Default dense-statevector width limit (2^26 amplitudes ≈ 1 GiB);
/// override with the QSAT_MAX_QUBITS environment variable.
int qubit_cap();

/// Counter-style RNG stream keyed by (seed, shot index): shot-level
/// parallelism cannot change the numbers a shot sees.
class ShotRng {
public:
    ShotRng(std::uint64_t seed, std::uint64_t shot);

    std::uint64_t next();
    double uniform();  ///< [0, 1)
    double gaussian(); ///< standard normal

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Classical bit values during execution; -1 marks an unwritten bit.
using BitValues = std::vector<std::int8_t>;

/// Dense 2^n amplitude array, little-endian (qubit 0 is the least
/// significant bit of the basis index). X gates are folded into a lazy
/// index-flip mask, so storage may be internally permuted; every public
/// accessor works in logical basis indices.
class StateVector {
public:
    explicit StateVector(int qubit_count);
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

    int qubit_count() const { return qubit_count_; }
    std::uint64_t dimension() const { return std::uint64_t(1) << qubit_count_; }
    const std::vector<Amplitude>& amplitudes() const {
        settle_layout();
        return amps_;
    }
    Amplitude amplitude(std::uint64_t basis_index) const {
        return amps_.at(basis_index ^ flip_mask_);
    }
    void set_amplitude(std::uint64_t basis_index, Amplitude a) {
        amps_.at(basis_index ^ flip_mask_) = a;
    }

    void reset_to_zero_state();
    double norm_squared() const;
    void renormalize();

    /// Per-gate norm verification (≤ 1e-6 drift tolerated); off by default.
    void set_norm_checking(bool on) { check_norms_ = on; }

    /// Applies one gate. Measurement and reset outcomes are drawn from `rng`
    /// (required unless the outcome is deterministic) and measurements write
    /// into `bits`; conditioned gates read from `bits`.
    void apply(const Gate& gate, BitValues* bits = nullptr, ShotRng* rng = nullptr);
    void apply(const Circuit& circuit, BitValues* bits = nullptr, ShotRng* rng = nullptr);

    double probability_of_one(int qubit) const;
    /// Projects `qubit` onto `outcome`, whose probability the caller supplies,
    /// and renormalizes.
    void collapse(int qubit, int outcome, double probability);

    /// Expectation value ⟨ψ|X_q|ψ⟩, used for X-basis measurements.
    double x_expectation(int qubit) const;

    /// Probability of the |−⟩ outcome when measuring `qubit` in the X basis.
    double x_minus_probability(int qubit) const {
        return 0.5 * (1.0 - x_expectation(qubit));
    }
    /// Projects onto |+⟩ (outcome 0) or |−⟩ (outcome 1) and renormalizes;
    /// equivalent to the H · collapse · H sequence in one pass.
    void project_x(int qubit, int outcome, double probability);

private:
    int qubit_count_;
    mutable std::vector<Amplitude> amps_;
    mutable std::uint64_t flip_mask_ = 0;
    bool check_norms_ = false;

    /// Materializes pending index flips so amps_[i] is logical index i.
    void settle_layout() const;
    void apply_x(int q);
    void apply_h(int q);
    void apply_z(int q);
    void apply_controlled_flip(std::uint64_t control_mask, std::uint64_t target_mask);
    void apply_controlled_phase(std::uint64_t mask);
    int measure(int qubit, ShotRng* rng, bool x_basis);
};

/// Histogram of sampled readouts plus optional exact probabilities.
/// Bit strings render the readout list left-to-right (first qubit leftmost).
struct RunOutcome {
    std::map<std::string, std::uint64_t> histogram;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::optional<std::map<std::string, double>> exact_distribution;

    std::string to_csv() const;
    std::string to_json_text(int indent = 2) const;
};

/// Classical bits and readout of a single executed shot.
struct ShotRecord {
    BitValues bits;
    std::string readout;
};

/// Runs `shots` independent executions from |0…0⟩. Results are identical
/// for any worker count (0 = use hardware concurrency). When `first_shot`
/// is given it receives shot 0's record.
RunOutcome run_shots(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                     const std::vector<int>& readout, int workers = 0,
                     ShotRecord* first_shot = nullptr);

ShotRecord run_single_shot(const Circuit& circuit, std::uint64_t seed, std::uint64_t shot,
                           const std::vector<int>& readout);

struct BranchSplit {
    std::size_t gate_index = 0;
    double p_zero = 0.0;
    double p_one = 0.0;
};

struct Branch {
    double probability = 1.0;
    StateVector state;
    BitValues bits;
};

struct ExactOptions {
    std::uint64_t branch_cap = std::uint64_t(1) << 20;
    /// Branches whose live classical bits agree and whose states differ by
    /// less than this L2 distance are coalesced; 0 disables coalescing.
    double merge_tolerance = 1e-9;
    bool record_splits = false;
};

struct ExactResult {
    std::vector<Branch> branches;
    std::vector<BranchSplit> splits;

    std::map<std::string, double> distribution(const std::vector<int>& readout) const;
};

/// Walks every measurement outcome with its true Born probability. No
/// sampling is involved; the frontier is advanced gate by gate and branches
/// that can no longer diverge are coalesced to keep the count tractable.
/// `initial` overrides the |0…0⟩ start state.
ExactResult enumerate_branches(const Circuit& circuit, const ExactOptions& options = {},
                               const StateVector* initial = nullptr);

RunOutcome run_exact(const Circuit& circuit, const std::vector<int>& readout,
                     const ExactOptions& options = {});

/// Final amplitudes of a measurement-free circuit applied to |0…0⟩.
StateVector statevector_of(const Circuit& circuit);

/// Renders basis index `index` over the readout list, first qubit leftmost.
std::string readout_string(std::uint64_t index, const std::vector<int>& readout);

} // namespace qsat
