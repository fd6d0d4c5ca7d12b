#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "qsat/formula.hpp"

using namespace qsat;
using qsat::test::running_example;

TEST_CASE("parse_dimacs reads the running example") {
    Formula f = running_example();
    CHECK(f.variable_count() == 3);
    CHECK(f.clause_count() == 3);
    CHECK(f.clauses()[0].literals == std::vector<Literal>{{0, false}});
    CHECK(f.clauses()[1].literals == std::vector<Literal>{{0, true}, {1, false}});
    CHECK(f.clauses()[2].literals == std::vector<Literal>{{0, true}, {2, false}});
}

TEST_CASE("parse_dimacs reads a minimal formula") {
    Formula f = parse_dimacs("p cnf 1 1\n1 0\n");
    CHECK(f.variable_count() == 1);
    CHECK(f.clause_count() == 1);
    CHECK(f.clauses()[0].literals == std::vector<Literal>{{0, false}});
}

TEST_CASE("parse_dimacs rejects tautological clauses with a line number") {
    try {
        parse_dimacs("p cnf 2 1\n1 -1 0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("tautological") != std::string::npos);
    }
}

TEST_CASE("parse_dimacs diagnostics") {
    CHECK_THROWS_AS(parse_dimacs("cnf 2 1\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf x 1\n1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), ParseError);      // count mismatch
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 0\n2 0\n"), ParseError); // too many clauses
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), ParseError);      // out of range
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n0\n"), ParseError);   // empty clause
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);      // unterminated
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 two 0\n"), ParseError);  // junk token
    CHECK_THROWS_AS(parse_dimacs(""), ParseError);
}

TEST_CASE("duplicate literals are dropped with a warning") {
    std::vector<std::string> warnings;
    Formula f = parse_dimacs("p cnf 2 1\n1 1 2 0\n", &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("duplicate") != std::string::npos);
    CHECK(f.clauses()[0].literals.size() == 2);
}

TEST_CASE("comments and layout are tolerated") {
    Formula f = parse_dimacs("c header comment\np cnf 3 2\nc interior\n1 -2 0 2\n3 0\n");
    CHECK(f.clause_count() == 2);
    CHECK(f.clauses()[1].literals == std::vector<Literal>{{1, false}, {2, false}});
}

TEST_CASE("formula constructor enforces the clause invariants") {
    CHECK_THROWS_AS(Formula(2, {}), Error);
    CHECK_THROWS_AS(Formula(2, {Clause{}}), Error);
    CHECK_THROWS_AS(Formula(2, {Clause{{{2, false}}}}), Error);
    CHECK_THROWS_AS(Formula(2, {Clause{{{0, false}, {0, false}}}}), Error);
    CHECK_THROWS_AS(Formula(2, {Clause{{{0, false}, {0, true}}}}), Error);
}

TEST_CASE("evaluate implements CNF semantics on the running example") {
    Formula f = running_example();
    CHECK(f.evaluate({true, true, true}));
    CHECK_FALSE(f.evaluate({false, false, false}));

    int satisfied = 0;
    for (std::uint64_t v = 0; v < 8; ++v) {
        if (f.evaluate(assignment_from_index(v, 3))) ++satisfied;
    }
    CHECK(satisfied == 1);
    CHECK_THROWS_AS(f.evaluate({true, true}), Error);
}

TEST_CASE("expand builds the occurrence map of the running example") {
    ExpandedFormula e = expand(running_example());
    REQUIRE(e.occurrences(0).size() == 3);
    CHECK(e.occurrences(0) ==
          std::vector<Occurrence>{{0, 0}, {1, 0}, {2, 0}});
    CHECK(e.occurrences(1) == std::vector<Occurrence>{{1, 1}});
    CHECK(e.occurrences(2) == std::vector<Occurrence>{{2, 1}});
    CHECK(e.expanded_variable_count() == 5);
    CHECK(e.k_max() == 3);
    CHECK(e.occurrence_index(2, 0) == 2); // third copy of a
}

TEST_CASE("expand without shared variables keeps one copy per variable") {
    Formula f = parse_dimacs("p cnf 3 2\n1 2 0\n3 0\n");
    ExpandedFormula e = expand(f);
    CHECK(e.expanded_variable_count() == 3);
    CHECK(e.k_max() == 1);
}

TEST_CASE("expand counts repeated clauses per occurrence") {
    Formula f = parse_dimacs("p cnf 2 2\n1 2 0\n1 2 0\n");
    ExpandedFormula e = expand(f);
    CHECK(e.occurrences(0).size() == 2);
    CHECK(e.occurrences(1).size() == 2);
    CHECK(e.expanded_variable_count() == 4);
    CHECK(e.k_max() == 2);
}

TEST_CASE("expand is deterministic") {
    ShotRng rng(11, 0);
    for (int i = 0; i < 20; ++i) {
        Formula f = qsat::test::random_formula(rng);
        ExpandedFormula a = expand(f);
        ExpandedFormula b = expand(f);
        for (int v = 0; v < f.variable_count(); ++v) {
            CHECK(a.occurrences(v) == b.occurrences(v));
        }
    }
}

// Lemma 1 restated executably: under the copy-consistent lift of an
// assignment, the expanded formula agrees with the base formula.
TEST_CASE("expanded formula evaluates like the base formula") {
    ShotRng rng(12, 0);
    std::vector<Formula> corpus{running_example()};
    for (int i = 0; i < 30; ++i) corpus.push_back(qsat::test::random_formula(rng));

    for (const Formula& f : corpus) {
        ExpandedFormula e = expand(f);
        Formula flat = e.flatten();
        for (std::uint64_t v = 0; v < (std::uint64_t(1) << f.variable_count()); ++v) {
            Assignment base = assignment_from_index(v, f.variable_count());
            Assignment lifted(flat.variable_count());
            for (int variable = 0; variable < f.variable_count(); ++variable) {
                for (std::size_t occ = 0; occ < e.occurrences(variable).size(); ++occ) {
                    lifted[e.expanded_id(variable, static_cast<int>(occ))] = base[variable];
                }
            }
            CHECK(f.evaluate(base) == flat.evaluate(lifted));
        }
    }
}

TEST_CASE("DIMACS round trip is a fixpoint") {
    ShotRng rng(13, 0);
    std::vector<Formula> corpus{running_example()};
    for (int i = 0; i < 20; ++i) corpus.push_back(qsat::test::random_formula(rng));
    for (const Formula& f : corpus) {
        std::string once = to_dimacs(f);
        Formula reparsed = parse_dimacs(once);
        CHECK(reparsed == f);
        CHECK(to_dimacs(reparsed) == once);
    }
}

TEST_CASE("unreferenced variables are tracked") {
    Formula f = parse_dimacs("p cnf 3 1\n1 0\n");
    ExpandedFormula e = expand(f);
    CHECK(e.unreferenced_variables() == std::vector<int>{1, 2});
    CHECK(e.expanded_variable_count() == 1);
}

TEST_CASE("assignment_from_index is little endian") {
    Assignment a = assignment_from_index(0b101, 3);
    CHECK(a[0] == true);
    CHECK(a[1] == false);
    CHECK(a[2] == true);
}
