#pragma once

// Query language: the five path quantifiers over state formulae.
//
//   query  := "E<>" expr | "A[]" expr | "E[]" expr | "A<>" expr | expr "-->" expr
//   expr   := or ("imply" expr)?
//   or     := and ("||" and)*
//   and    := cmp ("&&" cmp)*
//   cmp    := unary (relop unary)?
//   unary  := "!" unary | "(" expr ")" | "true" | "false" | "deadlock" | operand
//   operand:= name ("." name)* ("[" int "]")* | "-"? int
//
// Parsing is model-agnostic; names are resolved by bind().

#include "srpmc/automata/network.hpp"
#include "srpmc/explorer/checker.hpp"
#include "srpmc/explorer/state_space.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srpmc::query {

using automata::SystemState;

enum class QueryKind : std::uint8_t { ExistsEventually, ForallAlways, ExistsAlways, ForallEventually, LeadsTo };
enum class CompareOp : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view to_string(QueryKind k) noexcept;  // "E<>", ..., "-->"
std::string_view to_string(CompareOp op) noexcept;

struct Operand {
    enum class Kind : std::uint8_t { Name, Integer };
    Kind kind = Kind::Name;
    std::vector<std::string> path;      // "T.LNR" → {"T", "LNR"}
    std::vector<std::int32_t> indices;  // applied to the last component
    std::int32_t value = 0;

    friend bool operator==(const Operand&, const Operand&) = default;
};

struct Expr {
    enum class Kind : std::uint8_t { Constant, Deadlock, Name, Compare, Not, And, Or, Imply };
    Kind kind = Kind::Constant;
    bool value = false;                 // Constant
    CompareOp op = CompareOp::Eq;       // Compare
    Operand lhs, rhs;                   // Name uses lhs
    std::vector<Expr> children;         // Not: 1, And/Or/Imply: 2

    friend bool operator==(const Expr&, const Expr&) = default;
};

struct Query {
    QueryKind kind = QueryKind::ExistsEventually;
    Expr phi;
    Expr psi;  // LeadsTo only
    std::string source;

    /// Structural equality; the source text is ignored.
    bool same_structure(const Query& other) const { return kind == other.kind && phi == other.phi && psi == other.psi; }
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::size_t line_, column_;
    std::vector<std::string> expected_;
    std::string found_;
};

Query parse_query(std::string_view text);
Expr parse_state_expr(std::string_view text);

std::string print(const Expr& e);
std::string print(const Query& q);

/// A name in a formula that the model does not declare.
class UnresolvedIdentifier : public std::runtime_error {
public:
    explicit UnresolvedIdentifier(std::string name);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Ill-typed formula (enum compared with int, array with scalar, ...).
class TypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Resolves a state formula against a network. Throws UnresolvedIdentifier
/// or TypeError.
explorer::StatePredicate bind(const Expr& e, const automata::Network& net);

/// Evaluates a bound formula on one state; the deadlock atom is computed
/// from the semantics.
bool eval_state_expr(const Expr& e, const SystemState& state, const automata::Network& net);

struct QueryResult {
    explorer::Verdict verdict;
    std::string source;
    QueryKind kind = QueryKind::ExistsEventually;
};

/// Binds and dispatches to the matching checker.
QueryResult run_query(const explorer::StateSpace& space, const Query& q, const explorer::CheckLimits& limits = {});
QueryResult run_query(const explorer::StateSpace& space, std::string_view text,
                      const explorer::CheckLimits& limits = {});

}  // namespace srpmc::query
