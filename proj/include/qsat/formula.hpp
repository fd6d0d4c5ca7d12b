#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qsat/error.hpp"

namespace qsat {

/// Truth assignment; element j is the value of variable j.
using Assignment = std::vector<bool>;

/// Builds the assignment whose variable j takes bit j of `index`.
Assignment assignment_from_index(std::uint64_t index, int width);

struct Literal {
    int variable = 0; ///< 0-based variable index
    bool negated = false;

    friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
    std::vector<Literal> literals;

    bool mentions(int variable) const;
    friend bool operator==(const Clause&, const Clause&) = default;
};

/// CNF formula over variables 0..variable_count-1. Immutable after
/// construction; the constructor enforces the clause invariants (nonempty,
/// no duplicate literal, no tautology, indices in range).
class Formula {
public:
    Formula(int variable_count, std::vector<Clause> clauses);

    int variable_count() const { return variable_count_; }
    const std::vector<Clause>& clauses() const { return clauses_; }
    int clause_count() const { return static_cast<int>(clauses_.size()); }

    /// Classical CNF semantics. Throws Error on length mismatch.
    bool evaluate(const Assignment& assignment) const;

    friend bool operator==(const Formula&, const Formula&) = default;

private:
    int variable_count_;
    std::vector<Clause> clauses_;
};

/// Reads standard DIMACS CNF. Duplicate identical literals inside a clause
/// are dropped with a warning appended to `warnings` (when given); empty and
/// tautological clauses, malformed headers, out-of-range indices and clause
/// count mismatches raise ParseError with the offending line number.
Formula parse_dimacs(std::istream& in, std::vector<std::string>* warnings = nullptr);
Formula parse_dimacs(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Canonical DIMACS writer; parse(to_dimacs(f)) == f.
std::string to_dimacs(const Formula& f);

/// One literal slot: clause index plus position within the clause.
struct Occurrence {
    int clause = 0;
    int literal = 0;

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

/// A formula together with one fresh expanded variable per literal slot.
/// The occurrence list of variable v is ordered by (clause, literal) and its
/// first entry is identified with v itself.
class ExpandedFormula {
public:
    const Formula& base() const { return base_; }

    /// All slots holding copies of `variable`, in clause order.
    const std::vector<Occurrence>& occurrences(int variable) const;

    /// Which copy of its variable the slot (clause, literal) carries (0-based).
    int occurrence_index(int clause, int literal) const;

    /// Total number of expanded variables, sum of the per-variable counts.
    int expanded_variable_count() const { return expanded_variable_count_; }

    /// Largest number of clauses sharing one variable.
    int k_max() const { return k_max_; }

    /// Variables declared by the base formula but mentioned by no clause.
    const std::vector<int>& unreferenced_variables() const { return unreferenced_; }

    /// Dense id of the copy (variable, occurrence), grouped by variable.
    int expanded_id(int variable, int occurrence) const;

    /// The expanded formula as a plain CNF over the expanded variables;
    /// used as an independent evaluation route.
    Formula flatten() const;

private:
    friend ExpandedFormula expand(const Formula& f);

    Formula base_;
    std::vector<std::vector<Occurrence>> occurrences_; // per variable
    std::vector<std::vector<int>> slot_occurrence_;    // [clause][literal] -> copy index
    std::vector<int> id_offset_;                       // per variable
    std::vector<int> unreferenced_;
    int expanded_variable_count_ = 0;
    int k_max_ = 0;

    explicit ExpandedFormula(Formula base) : base_(std::move(base)) {}
};

/// Assigns each literal slot its own expanded variable, numbering
/// occurrences in clause order. Deterministic.
ExpandedFormula expand(const Formula& f);

} // namespace qsat
