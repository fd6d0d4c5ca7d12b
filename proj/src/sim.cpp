#include "qsat/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace qsat {

namespace {

constexpr double kDeterministicEps = 1e-12;
constexpr double kNormDriftLimit = 1e-6;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

int qubit_cap() {
    static const int cap = [] {
        if (const char* text = std::getenv("QSAT_MAX_QUBITS")) {
            int value = std::atoi(text);
            if (value >= 1) return value;
        }
        return 26;
    }();
    return cap;
}

ShotRng::ShotRng(std::uint64_t seed, std::uint64_t shot) {
    // Decorrelate the per-shot stream from neighbouring (seed, shot) pairs.
    state_ = seed ^ (0x9E3779B97F4A7C15ULL * (shot + 1));
    next();
    next();
}

std::uint64_t ShotRng::next() { return splitmix64(state_); }

double ShotRng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double ShotRng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

StateVector::StateVector(int qubit_count) : qubit_count_(qubit_count) {
    if (qubit_count_ < 0) throw Error("negative qubit count");
    if (qubit_count_ > qubit_cap()) {
        throw ResourceError("state of " + std::to_string(qubit_count_) +
                            " qubits exceeds the cap of " + std::to_string(qubit_cap()) +
                            " (override with QSAT_MAX_QUBITS)");
    }
    amps_.assign(std::uint64_t(1) << qubit_count_, Amplitude(0.0, 0.0));
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
    std::uint64_t dim = amplitudes.size();
    if (dim == 0 || (dim & (dim - 1)) != 0) {
        throw Error("amplitude array length must be a power of two");
    }
    int n = 0;
    while ((std::uint64_t(1) << n) < dim) ++n;
    StateVector sv(n);
    sv.amps_ = std::move(amplitudes);
    double norm = sv.norm_squared();
    if (std::abs(norm - 1.0) > kNormDriftLimit) {
        throw Error("amplitudes are not normalized (|psi|^2 = " + std::to_string(norm) + ")");
    }
    return sv;
}

void StateVector::reset_to_zero_state() {
    std::fill(amps_.begin(), amps_.end(), Amplitude(0.0, 0.0));
    amps_[0] = 1.0;
    flip_mask_ = 0;
}

void StateVector::settle_layout() const {
    if (flip_mask_ == 0) return;
    const std::uint64_t mask = flip_mask_;
    const std::uint64_t dim = std::uint64_t(1) << qubit_count_;
    Amplitude* a = amps_.data();
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::uint64_t j = i ^ mask;
        if (i < j) std::swap(a[i], a[j]);
    }
    flip_mask_ = 0;
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const Amplitude& a : amps_) total += std::norm(a);
    return total;
}

void StateVector::renormalize() {
    double norm = std::sqrt(norm_squared());
    if (norm <= 0.0) throw Error("cannot renormalize a zero state");
    double scale = 1.0 / norm;
    for (Amplitude& a : amps_) a *= scale;
}

namespace {

// Spreads a compact index over the positions not listed in `pos` (ascending),
// leaving a 0 at each listed position.
inline std::uint64_t spread_index(std::uint64_t k, const int* pos, int count) {
    for (int j = 0; j < count; ++j) {
        std::uint64_t below = (std::uint64_t(1) << pos[j]) - 1;
        k = ((k & ~below) << 1) | (k & below);
    }
    return k;
}

} // namespace

void StateVector::apply_x(int q) {
    // Deferred: recorded as an index flip and resolved by later kernels.
    flip_mask_ ^= std::uint64_t(1) << q;
}

void StateVector::apply_h(int q) {
    const std::uint64_t mask = std::uint64_t(1) << q;
    const std::uint64_t lo = mask - 1, hi = ~lo;
    const std::uint64_t pairs = dimension() >> 1;
    const double r = std::numbers::sqrt2 / 2.0;
    Amplitude* a = amps_.data();
    if (flip_mask_ & mask) {
        // The logical |1> component sits on the physical 0 side.
        for (std::uint64_t k = 0; k < pairs; ++k) {
            std::uint64_t i0 = ((k & hi) << 1) | (k & lo);
            std::uint64_t i1 = i0 | mask;
            Amplitude a0 = a[i0], a1 = a[i1];
            a[i0] = (a1 - a0) * r;
            a[i1] = (a1 + a0) * r;
        }
    } else {
        for (std::uint64_t k = 0; k < pairs; ++k) {
            std::uint64_t i0 = ((k & hi) << 1) | (k & lo);
            std::uint64_t i1 = i0 | mask;
            Amplitude a0 = a[i0], a1 = a[i1];
            a[i0] = (a0 + a1) * r;
            a[i1] = (a0 - a1) * r;
        }
    }
}

void StateVector::apply_z(int q) {
    const std::uint64_t mask = std::uint64_t(1) << q;
    const std::uint64_t lo = mask - 1, hi = ~lo;
    const std::uint64_t pairs = dimension() >> 1;
    const std::uint64_t one_side = (flip_mask_ & mask) ? 0 : mask;
    Amplitude* a = amps_.data();
    for (std::uint64_t k = 0; k < pairs; ++k) {
        std::uint64_t i = (((k & hi) << 1) | (k & lo)) | one_side;
        a[i] = -a[i];
    }
}

void StateVector::apply_controlled_flip(std::uint64_t control_mask, std::uint64_t target_mask) {
    // Enumerate the subspace whose logical controls are all 1 with one
    // representative target bit fixed; each orbit {i, i^targets} is visited
    // exactly once. The flip mask translates the logical pattern.
    int pos[64];
    int count = 0;
    for (int q = 0; q < qubit_count_; ++q) {
        if ((control_mask >> q) & 1U) pos[count++] = q;
    }
    int representative = 0;
    while (!((target_mask >> representative) & 1U)) ++representative;
    pos[count++] = representative;
    std::sort(pos, pos + count);

    const std::uint64_t want = control_mask & ~flip_mask_;
    const std::uint64_t iterations = dimension() >> count;
    Amplitude* a = amps_.data();
    for (std::uint64_t k = 0; k < iterations; ++k) {
        std::uint64_t i = spread_index(k, pos, count) | want;
        std::swap(a[i], a[i ^ target_mask]);
    }
}

void StateVector::apply_controlled_phase(std::uint64_t mask) {
    int pos[64];
    int count = 0;
    for (int q = 0; q < qubit_count_; ++q) {
        if ((mask >> q) & 1U) pos[count++] = q;
    }
    const std::uint64_t want = mask & ~flip_mask_;
    const std::uint64_t iterations = dimension() >> count;
    Amplitude* a = amps_.data();
    for (std::uint64_t k = 0; k < iterations; ++k) {
        std::uint64_t i = spread_index(k, pos, count) | want;
        a[i] = -a[i];
    }
}

double StateVector::probability_of_one(int qubit) const {
    const std::uint64_t mask = std::uint64_t(1) << qubit;
    const std::uint64_t lo = mask - 1, hi = ~lo;
    const std::uint64_t pairs = dimension() >> 1;
    const std::uint64_t one_side = (flip_mask_ & mask) ? 0 : mask;
    const Amplitude* a = amps_.data();
    double p = 0.0;
    for (std::uint64_t k = 0; k < pairs; ++k) {
        std::uint64_t i = (((k & hi) << 1) | (k & lo)) | one_side;
        p += std::norm(a[i]);
    }
    return p;
}

void StateVector::collapse(int qubit, int outcome, double probability) {
    if (probability <= 0.0) throw Error("collapse onto a zero-probability outcome");
    const std::uint64_t mask = std::uint64_t(1) << qubit;
    const std::uint64_t lo = mask - 1, hi = ~lo;
    const std::uint64_t pairs = dimension() >> 1;
    const double scale = 1.0 / std::sqrt(probability);
    const bool keep_upper = ((flip_mask_ & mask) ? 0 : 1) == outcome;
    Amplitude* a = amps_.data();
    for (std::uint64_t k = 0; k < pairs; ++k) {
        std::uint64_t i0 = ((k & hi) << 1) | (k & lo);
        std::uint64_t i1 = i0 | mask;
        std::uint64_t kept = keep_upper ? i1 : i0;
        std::uint64_t dropped = keep_upper ? i0 : i1;
        a[kept] *= scale;
        a[dropped] = 0.0;
    }
}

double StateVector::x_expectation(int qubit) const {
    const std::uint64_t mask = std::uint64_t(1) << qubit;
    const std::uint64_t lo = mask - 1, hi = ~lo;
    const std::uint64_t pairs = dimension() >> 1;
    const Amplitude* a = amps_.data();
    double value = 0.0;
    for (std::uint64_t k = 0; k < pairs; ++k) {
        std::uint64_t i0 = ((k & hi) << 1) | (k & lo);
        value += 2.0 * (std::conj(a[i0]) * a[i0 | mask]).real();
    }
    return value;
}

void StateVector::project_x(int qubit, int outcome, double probability) {
    if (probability <= 0.0) throw Error("collapse onto a zero-probability outcome");
    const std::uint64_t mask = std::uint64_t(1) << qubit;
    const std::uint64_t lo = mask - 1, hi = ~lo;
    const std::uint64_t pairs = dimension() >> 1;
    const double scale = 0.5 / std::sqrt(probability);
    const double sign = outcome ? -1.0 : 1.0;
    Amplitude* a = amps_.data();
    for (std::uint64_t k = 0; k < pairs; ++k) {
        std::uint64_t i0 = ((k & hi) << 1) | (k & lo);
        std::uint64_t i1 = i0 | mask;
        Amplitude projected = (a[i0] + sign * a[i1]) * scale;
        a[i0] = projected;
        a[i1] = sign * projected;
    }
}

int StateVector::measure(int qubit, ShotRng* rng, bool x_basis) {
    double p1 = x_basis ? x_minus_probability(qubit) : probability_of_one(qubit);
    int outcome;
    if (p1 <= kDeterministicEps) {
        outcome = 0;
    } else if (p1 >= 1.0 - kDeterministicEps) {
        outcome = 1;
    } else if (rng) {
        outcome = rng->uniform() < p1 ? 1 : 0;
    } else {
        throw Error("nondeterministic measurement requires an RNG stream");
    }
    double p_keep = outcome ? p1 : 1.0 - p1;
    if (x_basis) {
        // outcome 0 leaves |+>, outcome 1 leaves |->
        project_x(qubit, outcome, p_keep);
    } else if (outcome != 0 || p1 != 0.0) {
        // A deterministic 0 with no stray weight needs no projection pass.
        if (!(outcome == 1 && p1 == 1.0)) {
            collapse(qubit, outcome, p_keep);
        }
    }
    return outcome;
}

namespace {

std::uint64_t mask_of(const std::vector<int>& qubits) {
    std::uint64_t mask = 0;
    for (int q : qubits) mask |= std::uint64_t(1) << q;
    return mask;
}

} // namespace

void StateVector::apply(const Gate& gate, BitValues* bits, ShotRng* rng) {
    auto check_range = [this](int q) {
        if (q < 0 || q >= qubit_count_) {
            throw Error("gate operand qubit " + std::to_string(q) + " out of range");
        }
    };
    for (int q : gate.controls) check_range(q);
    for (int q : gate.targets) check_range(q);
    auto bit_value = [&](int bit) -> int {
        if (!bits || bit < 0 || bit >= static_cast<int>(bits->size())) {
            throw Error("conditioned gate without a classical bit store");
        }
        int value = (*bits)[bit];
        if (value < 0) throw Error("classical bit " + std::to_string(bit) + " read before write");
        return value;
    };
    auto write_bit = [&](int bit, int value) {
        if (!bits || bit < 0 || bit >= static_cast<int>(bits->size())) {
            throw Error("measurement without a classical bit store");
        }
        (*bits)[bit] = static_cast<std::int8_t>(value);
    };

    switch (gate.kind) {
    case GateKind::X:
        apply_x(gate.targets[0]);
        break;
    case GateKind::H:
        apply_h(gate.targets[0]);
        break;
    case GateKind::Z:
        apply_z(gate.targets[0]);
        break;
    case GateKind::CX:
    case GateKind::MCX:
    case GateKind::Fanout:
        apply_controlled_flip(mask_of(gate.controls), mask_of(gate.targets));
        break;
    case GateKind::MCZ:
        apply_controlled_phase(mask_of(gate.controls) | mask_of(gate.targets));
        break;
    case GateKind::MeasureZ:
        write_bit(gate.bit, measure(gate.targets[0], rng, false));
        break;
    case GateKind::MeasureX:
        write_bit(gate.bit, measure(gate.targets[0], rng, true));
        break;
    case GateKind::CondX:
        if (bit_value(gate.bit) == 1) apply_x(gate.targets[0]);
        break;
    case GateKind::CondZ:
        if (bit_value(gate.bit) == 1) apply_z(gate.targets[0]);
        break;
    case GateKind::Reset:
        if (measure(gate.targets[0], rng, false) == 1) apply_x(gate.targets[0]);
        break;
    }

    if (check_norms_) {
        double drift = std::abs(norm_squared() - 1.0);
        if (drift > kNormDriftLimit) {
            throw Error("norm drift " + std::to_string(drift) + " after " +
                        std::string(gate_kind_name(gate.kind)));
        }
    }
}

void StateVector::apply(const Circuit& circuit, BitValues* bits, ShotRng* rng) {
    if (circuit.qubit_count() != qubit_count_) {
        throw Error("circuit width does not match the state");
    }
    for (const Gate& g : circuit.gates()) apply(g, bits, rng);
}

std::string readout_string(std::uint64_t index, const std::vector<int>& readout) {
    std::string text(readout.size(), '0');
    for (std::size_t j = 0; j < readout.size(); ++j) {
        if ((index >> readout[j]) & 1U) text[j] = '1';
    }
    return text;
}

namespace {

void validate_readout(const Circuit& circuit, const std::vector<int>& readout) {
    for (int q : readout) {
        if (q < 0 || q >= circuit.qubit_count()) {
            throw Error("readout qubit " + std::to_string(q) + " out of range");
        }
    }
}

std::string sample_readout(StateVector& state, const std::vector<int>& readout, ShotRng& rng) {
    std::string text;
    text.reserve(readout.size());
    for (int q : readout) {
        double p1 = state.probability_of_one(q);
        int outcome;
        if (p1 <= kDeterministicEps) {
            outcome = 0;
        } else if (p1 >= 1.0 - kDeterministicEps) {
            outcome = 1;
        } else {
            outcome = rng.uniform() < p1 ? 1 : 0;
        }
        if (outcome != 0 || p1 != 0.0) state.collapse(q, outcome, outcome ? p1 : 1.0 - p1);
        text.push_back(outcome ? '1' : '0');
    }
    return text;
}

} // namespace

RunOutcome run_shots(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                     const std::vector<int>& readout, int workers, ShotRecord* first_shot) {
    if (shots == 0) throw Error("at least one shot is required");
    validate_readout(circuit, readout);

    std::uint64_t worker_count = workers > 0 ? static_cast<std::uint64_t>(workers)
                                             : std::max(1u, std::thread::hardware_concurrency());
    worker_count = std::min<std::uint64_t>(worker_count, shots);

    std::vector<std::map<std::string, std::uint64_t>> local(worker_count);
    std::vector<std::exception_ptr> failures(worker_count);

    auto run_block = [&](std::uint64_t w, std::uint64_t begin, std::uint64_t end) {
        try {
            StateVector state(circuit.qubit_count());
            for (std::uint64_t shot = begin; shot < end; ++shot) {
                state.reset_to_zero_state();
                BitValues bits(circuit.classical_bit_count(), -1);
                ShotRng rng(seed, shot);
                state.apply(circuit, &bits, &rng);
                std::string key = sample_readout(state, readout, rng);
                ++local[w][key];
                if (shot == 0 && first_shot) *first_shot = ShotRecord{bits, key};
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };

    if (worker_count == 1) {
        run_block(0, 0, shots);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (std::uint64_t w = 0; w < worker_count; ++w) {
            std::uint64_t begin = shots * w / worker_count;
            std::uint64_t end = shots * (w + 1) / worker_count;
            pool.emplace_back(run_block, w, begin, end);
        }
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    RunOutcome outcome;
    outcome.shots = shots;
    outcome.seed = seed;
    for (const auto& histogram : local) {
        for (const auto& [key, count] : histogram) outcome.histogram[key] += count;
    }
    return outcome;
}

ShotRecord run_single_shot(const Circuit& circuit, std::uint64_t seed, std::uint64_t shot,
                           const std::vector<int>& readout) {
    validate_readout(circuit, readout);
    StateVector state(circuit.qubit_count());
    BitValues bits(circuit.classical_bit_count(), -1);
    ShotRng rng(seed, shot);
    state.apply(circuit, &bits, &rng);
    std::string key = sample_readout(state, readout, rng);
    return {std::move(bits), std::move(key)};
}

namespace {

double l2_distance_squared(const StateVector& a, const StateVector& b, double limit) {
    double total = 0.0;
    const auto& aa = a.amplitudes();
    const auto& bb = b.amplitudes();
    for (std::size_t i = 0; i < aa.size(); ++i) {
        total += std::norm(aa[i] - bb[i]);
        if (total > limit) return total;
    }
    return total;
}

bool live_bits_match(const Branch& a, const Branch& b, const std::vector<char>& live) {
    for (std::size_t bit = 0; bit < live.size(); ++bit) {
        if (live[bit] && a.bits[bit] != b.bits[bit]) return false;
    }
    return true;
}

// Coalesces branches that can no longer diverge: identical live classical
// bits and states within the tolerance. Probabilities add; the kept state is
// the probability-weighted mean of two states equal up to rounding noise.
void coalesce(std::vector<Branch>& frontier, const std::vector<char>& live, double tolerance) {
    if (tolerance <= 0.0 || frontier.size() < 2) return;
    const double tol_sq = tolerance * tolerance;
    std::vector<Branch> merged;
    merged.reserve(frontier.size());
    for (Branch& candidate : frontier) {
        bool folded = false;
        for (Branch& kept : merged) {
            if (!live_bits_match(candidate, kept, live)) continue;
            if (l2_distance_squared(candidate.state, kept.state, tol_sq) >= tol_sq) continue;
            double total = kept.probability + candidate.probability;
            const auto& add = candidate.state.amplitudes();
            for (std::size_t i = 0; i < add.size(); ++i) {
                Amplitude mix = kept.state.amplitude(i) * kept.probability +
                                add[i] * candidate.probability;
                kept.state.set_amplitude(i, mix / total);
            }
            kept.state.renormalize();
            kept.probability = total;
            folded = true;
            break;
        }
        if (!folded) merged.push_back(std::move(candidate));
    }
    frontier = std::move(merged);
}

} // namespace

ExactResult enumerate_branches(const Circuit& circuit, const ExactOptions& options,
                               const StateVector* initial) {
    if (initial && initial->qubit_count() != circuit.qubit_count()) {
        throw Error("initial state width does not match the circuit");
    }
    // A bit is live while a later conditioned gate still reads it.
    std::vector<std::ptrdiff_t> last_read(circuit.classical_bit_count(), -1);
    for (std::size_t i = 0; i < circuit.gates().size(); ++i) {
        const Gate& g = circuit.gates()[i];
        if (g.reads_bit()) last_read[g.bit] = static_cast<std::ptrdiff_t>(i);
    }

    ExactResult result;
    std::vector<Branch> frontier;
    frontier.push_back({1.0, initial ? *initial : StateVector(circuit.qubit_count()),
                        BitValues(circuit.classical_bit_count(), -1)});

    for (std::size_t i = 0; i < circuit.gates().size(); ++i) {
        const Gate& g = circuit.gates()[i];
        if (g.is_unitary()) {
            for (Branch& b : frontier) b.state.apply(g);
            continue;
        }
        if (g.is_conditioned()) {
            for (Branch& b : frontier) b.state.apply(g, &b.bits);
        } else {
            // MeasureZ / MeasureX / Reset: split on the outcome.
            const int qubit = g.targets[0];
            const bool x_basis = g.kind == GateKind::MeasureX;
            std::vector<Branch> next;
            next.reserve(frontier.size() * 2);
            for (Branch& b : frontier) {
                double p1 = x_basis ? b.state.x_minus_probability(qubit)
                                    : b.state.probability_of_one(qubit);
                auto emit = [&](int outcome, double weight) {
                    Branch child{b.probability * weight, b.state, b.bits};
                    double p_keep = outcome ? p1 : 1.0 - p1;
                    if (x_basis) {
                        child.state.project_x(qubit, outcome, p_keep);
                    } else if (outcome != 0 || p1 != 0.0) {
                        child.state.collapse(qubit, outcome, p_keep);
                    }
                    if (g.kind == GateKind::Reset) {
                        if (outcome == 1) child.state.apply(Gate::x(qubit));
                    } else {
                        child.bits[g.bit] = static_cast<std::int8_t>(outcome);
                    }
                    next.push_back(std::move(child));
                };
                if (p1 <= kDeterministicEps) {
                    emit(0, 1.0);
                } else if (p1 >= 1.0 - kDeterministicEps) {
                    emit(1, 1.0);
                } else {
                    if (options.record_splits) result.splits.push_back({i, 1.0 - p1, p1});
                    emit(0, 1.0 - p1);
                    emit(1, p1);
                }
            }
            frontier = std::move(next);
            if (frontier.size() > options.branch_cap) {
                throw ResourceError("branch count " + std::to_string(frontier.size()) +
                                    " exceeds the cap of " + std::to_string(options.branch_cap));
            }
        }
        std::vector<char> live(circuit.classical_bit_count(), 0);
        for (std::size_t bit = 0; bit < live.size(); ++bit) {
            live[bit] = last_read[bit] > static_cast<std::ptrdiff_t>(i) ? 1 : 0;
        }
        coalesce(frontier, live, options.merge_tolerance);
    }

    result.branches = std::move(frontier);
    return result;
}

std::map<std::string, double> ExactResult::distribution(const std::vector<int>& readout) const {
    std::map<std::string, double> dist;
    for (const Branch& b : branches) {
        const auto& amps = b.state.amplitudes();
        for (std::uint64_t i = 0; i < amps.size(); ++i) {
            double p = std::norm(amps[i]);
            if (p == 0.0) continue;
            dist[readout_string(i, readout)] += b.probability * p;
        }
    }
    return dist;
}

RunOutcome run_exact(const Circuit& circuit, const std::vector<int>& readout,
                     const ExactOptions& options) {
    validate_readout(circuit, readout);
    ExactResult result = enumerate_branches(circuit, options);
    RunOutcome outcome;
    outcome.shots = 0;
    outcome.exact_distribution = result.distribution(readout);
    return outcome;
}

StateVector statevector_of(const Circuit& circuit) {
    if (!circuit.is_measurement_free()) {
        throw Error("circuit contains measurement, reset or conditioned gates");
    }
    StateVector state(circuit.qubit_count());
    state.apply(circuit);
    return state;
}

std::string RunOutcome::to_csv() const {
    std::ostringstream out;
    if (shots == 0 && exact_distribution) {
        out << "bitstring,probability\n";
        out.precision(17);
        for (const auto& [key, p] : *exact_distribution) {
            out << key << ',' << p << '\n';
        }
        return out.str();
    }
    out << "bitstring,count\n";
    for (const auto& [key, count] : histogram) {
        out << key << ',' << count << '\n';
    }
    return out.str();
}

std::string RunOutcome::to_json_text(int indent) const {
    nlohmann::json doc;
    doc["seed"] = seed;
    doc["shots"] = shots;
    doc["histogram"] = nlohmann::json::object();
    for (const auto& [key, count] : histogram) doc["histogram"][key] = count;
    if (exact_distribution) {
        doc["exact"] = nlohmann::json::object();
        for (const auto& [key, p] : *exact_distribution) doc["exact"][key] = p;
    }
    return doc.dump(indent) + "\n";
}

} // namespace qsat
