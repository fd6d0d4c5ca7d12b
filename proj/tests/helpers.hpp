#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qsat/formula.hpp"
#include "qsat/sim.hpp"

namespace qsat::test {

inline const char* kRunningExampleDimacs = "p cnf 3 3\n1 0\n-1 2 0\n-1 3 0\n";

/// (a) ∧ (ā ∨ b) ∧ (ā ∨ c); the only solution is a=b=c=1.
inline Formula running_example() { return parse_dimacs(kRunningExampleDimacs); }

/// Deterministic random CNF. Clause lengths are kept short so expanded
/// layouts stay simulable; `max_slots` caps the total literal count.
inline Formula random_formula(ShotRng& rng, int max_vars = 4, int max_clauses = 5,
                              int max_len = 3, int max_slots = 10) {
    while (true) {
        int d = 1 + static_cast<int>(rng.next() % max_vars);
        int m = 1 + static_cast<int>(rng.next() % max_clauses);
        std::vector<Clause> clauses;
        int slots = 0;
        bool ok = true;
        for (int c = 0; c < m && ok; ++c) {
            int len = 1 + static_cast<int>(rng.next() % std::min(max_len, d));
            std::vector<int> vars(d);
            for (int v = 0; v < d; ++v) vars[v] = v;
            for (int j = 0; j < len; ++j) {
                int pick = j + static_cast<int>(rng.next() % (d - j));
                std::swap(vars[j], vars[pick]);
            }
            Clause clause;
            for (int j = 0; j < len; ++j) {
                clause.literals.push_back({vars[j], (rng.next() & 1U) != 0});
            }
            clauses.push_back(std::move(clause));
            slots += len;
            if (slots > max_slots) ok = false;
        }
        if (!ok) continue;
        return Formula(d, std::move(clauses));
    }
}

/// Every clause over two variables (no tautologies, no duplicates).
inline std::vector<Clause> all_two_variable_clauses() {
    std::vector<Clause> clauses;
    for (int v = 0; v < 2; ++v) {
        for (int neg = 0; neg < 2; ++neg) {
            clauses.push_back({{{v, neg != 0}}});
        }
    }
    for (int n0 = 0; n0 < 2; ++n0) {
        for (int n1 = 0; n1 < 2; ++n1) {
            clauses.push_back({{{0, n0 != 0}, {1, n1 != 0}}});
        }
    }
    return clauses;
}

/// All formulas over exactly two variables with one or two clauses.
inline std::vector<Formula> all_two_variable_formulas() {
    std::vector<Clause> clauses = all_two_variable_clauses();
    std::vector<Formula> formulas;
    for (const Clause& c : clauses) {
        formulas.push_back(Formula(2, {c}));
    }
    for (const Clause& c1 : clauses) {
        for (const Clause& c2 : clauses) {
            formulas.push_back(Formula(2, {c1, c2}));
        }
    }
    return formulas;
}

/// Chain formula over m clauses all sharing variable 0: (v0 ∨ v1) ∧ … ∧
/// (v0 ∨ vm); used for the depth-growth comparison.
inline Formula chain_formula(int clause_count) {
    std::vector<Clause> clauses;
    for (int i = 0; i < clause_count; ++i) {
        clauses.push_back({{{0, false}, {i + 1, false}}});
    }
    return Formula(clause_count + 1, std::move(clauses));
}

inline double max_amplitude_delta(const StateVector& a, const StateVector& b) {
    double delta = 0.0;
    for (std::uint64_t i = 0; i < a.dimension(); ++i) {
        delta = std::max(delta, std::abs(a.amplitude(i) - b.amplitude(i)));
    }
    return delta;
}

inline double max_distribution_delta(const std::map<std::string, double>& a,
                                     const std::map<std::string, double>& b) {
    double delta = 0.0;
    for (const auto& [key, p] : a) {
        auto it = b.find(key);
        delta = std::max(delta, std::abs(p - (it == b.end() ? 0.0 : it->second)));
    }
    for (const auto& [key, p] : b) {
        if (!a.count(key)) delta = std::max(delta, p);
    }
    return delta;
}

} // namespace qsat::test
