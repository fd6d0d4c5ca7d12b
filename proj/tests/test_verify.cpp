#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qsat/verify.hpp"

using namespace qsat;
using qsat::test::running_example;

namespace {

// Independent truth-table counter used to cross-check the brute-force
// enumerator: evaluates clauses directly over expanded index arithmetic.
std::vector<std::uint64_t> reference_solutions(const Formula& f) {
    std::vector<std::uint64_t> found;
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << f.variable_count()); ++v) {
        bool all = true;
        for (const Clause& clause : f.clauses()) {
            bool any = false;
            for (const Literal& l : clause.literals) {
                bool value = (v >> l.variable) & 1;
                any |= l.negated ? !value : value;
            }
            all &= any;
        }
        if (all) found.push_back(v);
    }
    return found;
}

Circuit drop_phase_gate(const Circuit& oracle, int formula_qubit) {
    Circuit stripped(oracle.labels(), oracle.classical_bit_count());
    for (const Gate& g : oracle.gates()) {
        if (g.kind == GateKind::Z && g.targets[0] == formula_qubit) continue;
        stripped.append(g);
    }
    return stripped;
}

} // namespace

TEST_CASE("brute force finds the running example's only solution") {
    std::vector<std::uint64_t> solutions = brute_force_solutions(running_example());
    REQUIRE(solutions.size() == 1);
    CHECK(solutions[0] == 0b111);
}

TEST_CASE("brute force yields the empty set for a contradiction") {
    Formula f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
    CHECK(brute_force_solutions(f).empty());
}

TEST_CASE("brute force agrees with an independent evaluator") {
    ShotRng rng(61, 0);
    for (int trial = 0; trial < 40; ++trial) {
        Formula f = qsat::test::random_formula(rng, 4, 5, 3);
        CHECK(brute_force_solutions(f) == reference_solutions(f));
    }
}

TEST_CASE("brute force rejects oversized formulas") {
    std::vector<Clause> clauses{Clause{{{24, false}}}};
    Formula f(25, std::move(clauses));
    CHECK_THROWS_AS(brute_force_solutions(f), ResourceError);
}

TEST_CASE("phase checks pass for both centralized oracles") {
    ExpandedFormula e = expand(running_example());
    for (Mode mode : {Mode::Sequential, Mode::Parallel}) {
        QubitLayout layout = QubitLayout::make(e, mode);
        PhaseReport report = check_oracle_phases(e, layout, build_oracle(e, layout, mode));
        CHECK(report.clean(1e-10));
        CHECK(report.to_text().find("clean") != std::string::npos);
    }
}

TEST_CASE("deleting the phase gate yields one mismatch per solution") {
    ExpandedFormula e = expand(running_example());
    QubitLayout layout = QubitLayout::make(e, Mode::Parallel);
    Circuit broken = drop_phase_gate(build_oracle(e, layout, Mode::Parallel),
                                     layout.formula_qubit);
    PhaseReport report = check_oracle_phases(e, layout, broken);
    CHECK_FALSE(report.clean(1e-10));
    CHECK(report.mismatches.size() == 1); // one solution, one lost sign
    CHECK(report.mismatches[0].assignment == 0b111);
    CHECK(report.to_json_text().find("\"clean\": false") != std::string::npos);
}

TEST_CASE("diffuser equivalence holds for the entangled construction") {
    ExpandedFormula e = expand(running_example());
    QubitLayout layout = QubitLayout::make(e, Mode::Parallel);
    DiffuserReport report = check_diffuser_equivalence(
        e, layout, build_parallel_diffuser(e, layout), 100, 99);
    CHECK(report.clean(1e-10));
    CHECK(report.trials == 100);
}

TEST_CASE("the uniform state is a fixed point of both diffusers") {
    ExpandedFormula e = expand(running_example());
    QubitLayout layout = QubitLayout::make(e, Mode::Parallel);

    StateVector plain(3);
    for (int q = 0; q < 3; ++q) plain.apply(Gate::h(q));
    StateVector lifted(layout.qubit_count);
    lifted.set_amplitude(0, 0.0);
    for (std::uint64_t v = 0; v < 8; ++v) {
        lifted.set_amplitude(expanded_basis_index(e, layout, v), 1.0 / std::sqrt(8.0));
    }

    plain.apply(build_classic_diffuser(3, {0, 1, 2}));
    lifted.apply(build_parallel_diffuser(e, layout));
    // Both outputs stay uniform (up to the construction's global phase) and
    // agree with each other component for component.
    for (std::uint64_t v = 0; v < 8; ++v) {
        Amplitude p = plain.amplitude(v);
        Amplitude l = lifted.amplitude(expanded_basis_index(e, layout, v));
        CHECK(std::abs(p) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-10));
        CHECK(std::abs(p - l) < 1e-10);
    }
}

TEST_CASE("the copy-blind diffuser fails the equivalence check") {
    ExpandedFormula e = expand(running_example());
    QubitLayout layout = QubitLayout::make(e, Mode::Parallel);
    DiffuserReport report = check_diffuser_equivalence(
        e, layout, build_naive_expanded_diffuser(e, layout), 100, 99);
    CHECK(report.max_error > 1e-3);
}

TEST_CASE("protocol equivalence checker passes the teleported gates") {
    for (GateKind u : {GateKind::X, GateKind::Z}) {
        ProtocolReport report = check_protocol_equivalence(2, u, 30, 4);
        CHECK(report.clean(1e-10));
        CHECK(report.max_split_deviation < 1e-9);
        CHECK(report.to_text().find("clean") != std::string::npos);
    }
}

TEST_CASE("expanded basis indices place copies together") {
    ExpandedFormula e = expand(running_example());
    QubitLayout layout = QubitLayout::make(e, Mode::Parallel);
    std::uint64_t basis = expanded_basis_index(e, layout, 0b001); // a = 1
    for (const Occurrence& occ : e.occurrences(0)) {
        CHECK(((basis >> layout.slot_qubit[occ.clause][occ.literal]) & 1) == 1);
    }
    CHECK(((basis >> layout.representative[1]) & 1) == 0);
    CHECK(((basis >> layout.formula_qubit) & 1) == 0);
}

TEST_CASE("random states are normalized and seed-stable") {
    ShotRng a(62, 0), b(62, 0);
    StateVector s1 = random_state(4, a);
    StateVector s2 = random_state(4, b);
    CHECK(std::abs(s1.norm_squared() - 1.0) < 1e-9);
    CHECK(qsat::test::max_amplitude_delta(s1, s2) == 0.0);
}
