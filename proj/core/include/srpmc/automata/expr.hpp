#pragma once

// Integer expressions used for guards, updates and invariants of automaton
// templates. Expressions are built symbolically (variables are named by
// scope and declaration index, template parameters by position) and are
// compiled per process into a flat postfix Program with absolute slots.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace srpmc::automata {

enum class Scope : std::uint8_t { Global, Local };

enum class UnaryOp : std::uint8_t { Neg, Not };

enum class BinaryOp : std::uint8_t {
    Add, Sub, Mul, Div, Mod,
    Eq, Ne, Lt, Le, Gt, Ge,
    And, Or,
    Min, Max,
};

bool is_comparison(BinaryOp op) noexcept;
const char* to_string(BinaryOp op) noexcept;

/// Raised when evaluation hits an out-of-range index or a division by zero.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Expr {
public:
    enum class Kind : std::uint8_t { Const, Param, Var, Clock, Unary, Binary, Ite, Table };

    Expr() = default;  // empty expression; as a guard it means "true"

    static Expr constant(std::int32_t value);
    static Expr boolean(bool value) { return constant(value ? 1 : 0); }
    static Expr param(std::uint32_t position);
    /// Scalar variable, or element `index` of an array variable.
    static Expr var(Scope scope, std::uint32_t id);
    static Expr element(Scope scope, std::uint32_t id, Expr index);
    static Expr clock(Scope scope, std::uint32_t id);
    static Expr unary(UnaryOp op, Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
    static Expr ite(Expr cond, Expr then_expr, Expr else_expr);
    /// `values[index]`, a constant lookup table.
    static Expr table(std::vector<std::int32_t> values, Expr index);

    bool empty() const noexcept { return node_ == nullptr; }
    Kind kind() const;
    std::int32_t value() const;  // constant value, parameter position, var/clock id, or operator code
    Scope scope() const;
    const std::vector<Expr>& children() const;
    const std::vector<std::int32_t>& table_values() const;
    UnaryOp unary_op() const { return static_cast<UnaryOp>(value()); }
    BinaryOp binary_op() const { return static_cast<BinaryOp>(value()); }

    bool structurally_equal(const Expr& other) const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator&&(Expr a, Expr b);
Expr operator||(Expr a, Expr b);
Expr operator!(Expr a);
Expr eq(Expr a, Expr b);
Expr ne(Expr a, Expr b);
Expr lt(Expr a, Expr b);
Expr le(Expr a, Expr b);
Expr gt(Expr a, Expr b);
Expr ge(Expr a, Expr b);
Expr min(Expr a, Expr b);
Expr max(Expr a, Expr b);
inline Expr lit(std::int32_t v) { return Expr::constant(v); }

/// Conjunction / disjunction over a list; empty lists give true / false.
Expr all_of(const std::vector<Expr>& terms);
Expr any_of(const std::vector<Expr>& terms);

/// Read-only view of the numeric part of a state.
struct Valuation {
    std::span<const std::int32_t> vars;
    std::span<const std::int32_t> clocks;
};

/// A compiled expression: postfix code over absolute variable and clock slots.
class Program {
public:
    enum class Op : std::uint8_t {
        Push, Var, VarIdx, Clock, Neg, Not, Bool,
        Add, Sub, Mul, Div, Mod,
        Eq, Ne, Lt, Le, Gt, Ge, Min, Max,
        AndJmp, OrJmp, Jz, Jmp, Table,
    };
    struct Instr {
        Op op;
        std::int32_t a = 0;
        std::int32_t b = 0;
    };

    Program() = default;

    bool empty() const noexcept { return code_.empty(); }
    std::int32_t eval(const Valuation& v) const;
    /// Empty programs are true.
    bool holds(const Valuation& v) const { return empty() || eval(v) != 0; }
    /// Constant value if the program reads no state.
    std::optional<std::int32_t> constant_value() const;

    const std::vector<Instr>& code() const noexcept { return code_; }

private:
    friend class ProgramCompiler;
    std::vector<Instr> code_;
    std::vector<std::int32_t> pool_;
};

/// A comparison between a clock and a constant found while compiling.
struct ClockComparison {
    std::uint32_t clock;  // absolute clock slot
    BinaryOp op;
    std::int32_t constant;
};

/// Resolves symbolic references during compilation. Each callback returns
/// nullopt when the reference does not exist.
struct ResolveContext {
    struct VarSlot {
        std::uint32_t base;
        std::uint32_t length;
    };
    std::function<std::optional<VarSlot>(Scope, std::uint32_t)> var;
    std::function<std::optional<std::uint32_t>(Scope, std::uint32_t)> clock;
    std::span<const std::int32_t> params;
};

class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Compiles `expr`, appending clock/constant comparisons to `clock_uses` when
/// non-null. Throws CompileError for unresolved references.
Program compile(const Expr& expr, const ResolveContext& ctx,
                std::vector<ClockComparison>* clock_uses = nullptr);

/// Variables/clocks read by a compiled program (absolute slots).
void collect_reads(const Program& program, std::vector<std::uint32_t>& vars,
                   std::vector<std::uint32_t>& clocks);

}  // namespace srpmc::automata
