#include "qsat/formula.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace qsat {

Assignment assignment_from_index(std::uint64_t index, int width) {
    Assignment a(static_cast<std::size_t>(width));
    for (int j = 0; j < width; ++j) {
        a[j] = (index >> j) & 1U;
    }
    return a;
}

bool Clause::mentions(int variable) const {
    return std::any_of(literals.begin(), literals.end(),
                       [variable](const Literal& l) { return l.variable == variable; });
}

namespace {

void validate_clause(const Clause& clause, int variable_count, int clause_index) {
    if (clause.literals.empty()) {
        throw Error("clause " + std::to_string(clause_index + 1) + " is empty");
    }
    for (std::size_t i = 0; i < clause.literals.size(); ++i) {
        const Literal& l = clause.literals[i];
        if (l.variable < 0 || l.variable >= variable_count) {
            throw Error("clause " + std::to_string(clause_index + 1) +
                        " references variable " + std::to_string(l.variable) +
                        " outside 0.." + std::to_string(variable_count - 1));
        }
        for (std::size_t j = i + 1; j < clause.literals.size(); ++j) {
            const Literal& m = clause.literals[j];
            if (l.variable != m.variable) continue;
            if (l.negated == m.negated) {
                throw Error("clause " + std::to_string(clause_index + 1) +
                            " repeats a literal");
            }
            throw Error("clause " + std::to_string(clause_index + 1) +
                        " is tautological (contains a variable and its negation)");
        }
    }
}

} // namespace

Formula::Formula(int variable_count, std::vector<Clause> clauses)
    : variable_count_(variable_count), clauses_(std::move(clauses)) {
    if (variable_count_ <= 0) {
        throw Error("formula must declare at least one variable");
    }
    if (clauses_.empty()) {
        throw Error("formula must contain at least one clause");
    }
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        validate_clause(clauses_[i], variable_count_, static_cast<int>(i));
    }
}

bool Formula::evaluate(const Assignment& assignment) const {
    if (static_cast<int>(assignment.size()) != variable_count_) {
        throw Error("assignment length " + std::to_string(assignment.size()) +
                    " does not match variable count " + std::to_string(variable_count_));
    }
    for (const Clause& clause : clauses_) {
        bool satisfied = false;
        for (const Literal& l : clause.literals) {
            if (assignment[l.variable] != l.negated) {
                satisfied = true;
                break;
            }
        }
        if (!satisfied) return false;
    }
    return true;
}

namespace {

struct Token {
    std::string text;
    int line;
};

// Tokenizes on whitespace, remembering line numbers and dropping comments.
std::vector<Token> dimacs_tokens(std::istream& in) {
    std::vector<Token> tokens;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string word;
        if (ls >> word) {
            if (word == "c") continue;
            if (word.size() > 1 && word[0] == 'c' && !std::isdigit(static_cast<unsigned char>(word[1])) &&
                word[1] != '-') {
                continue; // comment glued to the marker, e.g. "cfoo"
            }
            tokens.push_back({word, line_no});
            while (ls >> word) tokens.push_back({word, line_no});
        }
    }
    return tokens;
}

int parse_int(const Token& tok, const char* what) {
    try {
        std::size_t pos = 0;
        int value = std::stoi(tok.text, &pos);
        if (pos != tok.text.size()) throw std::invalid_argument(tok.text);
        return value;
    } catch (const std::exception&) {
        throw ParseError(tok.line, std::string("expected ") + what + ", found '" + tok.text + "'");
    }
}

} // namespace

Formula parse_dimacs(std::istream& in, std::vector<std::string>* warnings) {
    std::vector<Token> tokens = dimacs_tokens(in);
    std::size_t pos = 0;

    if (tokens.size() < 4 || tokens[0].text != "p" || tokens[1].text != "cnf") {
        int line = tokens.empty() ? 1 : tokens[0].line;
        throw ParseError(line, "expected DIMACS header 'p cnf <vars> <clauses>'");
    }
    int header_line = tokens[0].line;
    if (tokens[1].line != header_line || tokens[2].line != header_line || tokens[3].line != header_line) {
        throw ParseError(header_line, "DIMACS header must fit on one line");
    }
    int declared_vars = parse_int(tokens[2], "variable count");
    int declared_clauses = parse_int(tokens[3], "clause count");
    if (declared_vars <= 0 || declared_clauses <= 0) {
        throw ParseError(header_line, "variable and clause counts must be positive");
    }
    pos = 4;

    std::vector<Clause> clauses;
    Clause current;
    int clause_start_line = tokens.size() > pos ? tokens[pos].line : header_line;
    bool in_clause = false;
    while (pos < tokens.size()) {
        const Token& tok = tokens[pos];
        if (tok.text == "p") {
            throw ParseError(tok.line, "duplicate DIMACS header");
        }
        int lit = parse_int(tok, "literal");
        ++pos;
        if (!in_clause) {
            clause_start_line = tok.line;
            in_clause = true;
        }
        if (lit == 0) {
            int clause_no = static_cast<int>(clauses.size()) + 1;
            if (current.literals.empty()) {
                throw ParseError(tok.line, "clause " + std::to_string(clause_no) + " is empty");
            }
            clauses.push_back(std::move(current));
            current = Clause{};
            in_clause = false;
            continue;
        }
        int var = std::abs(lit) - 1;
        if (var >= declared_vars) {
            throw ParseError(tok.line, "variable " + std::to_string(std::abs(lit)) +
                                           " exceeds declared count " + std::to_string(declared_vars));
        }
        Literal literal{var, lit < 0};
        bool duplicate = false;
        for (const Literal& seen : current.literals) {
            if (seen.variable != literal.variable) continue;
            if (seen.negated == literal.negated) {
                duplicate = true;
                break;
            }
            throw ParseError(tok.line, "clause " + std::to_string(clauses.size() + 1) +
                                           " is tautological (contains " + std::to_string(std::abs(lit)) +
                                           " and its negation)");
        }
        if (duplicate) {
            if (warnings) {
                warnings->push_back("line " + std::to_string(tok.line) + ": duplicate literal " +
                                    std::to_string(lit) + " in clause " +
                                    std::to_string(clauses.size() + 1) + " dropped");
            }
            continue;
        }
        current.literals.push_back(literal);
    }
    if (in_clause) {
        throw ParseError(clause_start_line, "unterminated clause (missing trailing 0)");
    }
    if (static_cast<int>(clauses.size()) != declared_clauses) {
        throw ParseError(header_line, "header declares " + std::to_string(declared_clauses) +
                                          " clauses but " + std::to_string(clauses.size()) +
                                          " were given");
    }
    return Formula(declared_vars, std::move(clauses));
}

Formula parse_dimacs(std::string_view text, std::vector<std::string>* warnings) {
    std::istringstream in{std::string(text)};
    return parse_dimacs(in, warnings);
}

std::string to_dimacs(const Formula& f) {
    std::ostringstream out;
    out << "p cnf " << f.variable_count() << ' ' << f.clause_count() << '\n';
    for (const Clause& clause : f.clauses()) {
        for (const Literal& l : clause.literals) {
            out << (l.negated ? -(l.variable + 1) : (l.variable + 1)) << ' ';
        }
        out << "0\n";
    }
    return out.str();
}

const std::vector<Occurrence>& ExpandedFormula::occurrences(int variable) const {
    return occurrences_.at(static_cast<std::size_t>(variable));
}

int ExpandedFormula::occurrence_index(int clause, int literal) const {
    return slot_occurrence_.at(clause).at(literal);
}

int ExpandedFormula::expanded_id(int variable, int occurrence) const {
    return id_offset_.at(variable) + occurrence;
}

Formula ExpandedFormula::flatten() const {
    std::vector<Clause> clauses;
    clauses.reserve(base_.clauses().size());
    for (std::size_t c = 0; c < base_.clauses().size(); ++c) {
        Clause out;
        const Clause& in = base_.clauses()[c];
        for (std::size_t l = 0; l < in.literals.size(); ++l) {
            const Literal& lit = in.literals[l];
            int occ = slot_occurrence_[c][l];
            out.literals.push_back({expanded_id(lit.variable, occ), lit.negated});
        }
        clauses.push_back(std::move(out));
    }
    return Formula(expanded_variable_count_ == 0 ? base_.variable_count() : expanded_variable_count_,
                   std::move(clauses));
}

ExpandedFormula expand(const Formula& f) {
    ExpandedFormula e(f);
    int d = f.variable_count();
    e.occurrences_.resize(static_cast<std::size_t>(d));
    e.slot_occurrence_.resize(f.clauses().size());
    for (std::size_t c = 0; c < f.clauses().size(); ++c) {
        const Clause& clause = f.clauses()[c];
        e.slot_occurrence_[c].resize(clause.literals.size());
        for (std::size_t l = 0; l < clause.literals.size(); ++l) {
            int var = clause.literals[l].variable;
            e.slot_occurrence_[c][l] = static_cast<int>(e.occurrences_[var].size());
            e.occurrences_[var].push_back({static_cast<int>(c), static_cast<int>(l)});
        }
    }
    e.id_offset_.resize(static_cast<std::size_t>(d), 0);
    for (int v = 0; v < d; ++v) {
        int k = static_cast<int>(e.occurrences_[v].size());
        if (v + 1 < d) e.id_offset_[v + 1] = e.id_offset_[v] + k;
        e.expanded_variable_count_ += k;
        e.k_max_ = std::max(e.k_max_, k);
        if (k == 0) e.unreferenced_.push_back(v);
    }
    return e;
}

} // namespace qsat
