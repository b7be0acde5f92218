#include "srpmc/automata/expr.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace srpmc::automata {

struct Expr::Node {
    Kind kind;
    std::int32_t value = 0;
    Scope scope = Scope::Global;
    std::vector<Expr> kids;
    std::vector<std::int32_t> table;
};

bool is_comparison(BinaryOp op) noexcept
{
    switch (op) {
    case BinaryOp::Eq: case BinaryOp::Ne: case BinaryOp::Lt:
    case BinaryOp::Le: case BinaryOp::Gt: case BinaryOp::Ge:
        return true;
    default:
        return false;
    }
}

const char* to_string(BinaryOp op) noexcept
{
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    case BinaryOp::Min: return "min";
    case BinaryOp::Max: return "max";
    }
    return "?";
}

Expr Expr::constant(std::int32_t value)
{
    return Expr(std::make_shared<const Node>(Node{Kind::Const, value, Scope::Global, {}, {}}));
}

Expr Expr::param(std::uint32_t position)
{
    return Expr(std::make_shared<const Node>(
        Node{Kind::Param, static_cast<std::int32_t>(position), Scope::Global, {}, {}}));
}

Expr Expr::var(Scope scope, std::uint32_t id)
{
    return Expr(std::make_shared<const Node>(
        Node{Kind::Var, static_cast<std::int32_t>(id), scope, {}, {}}));
}

Expr Expr::element(Scope scope, std::uint32_t id, Expr index)
{
    return Expr(std::make_shared<const Node>(
        Node{Kind::Var, static_cast<std::int32_t>(id), scope, {std::move(index)}, {}}));
}

Expr Expr::clock(Scope scope, std::uint32_t id)
{
    return Expr(std::make_shared<const Node>(
        Node{Kind::Clock, static_cast<std::int32_t>(id), scope, {}, {}}));
}

Expr Expr::unary(UnaryOp op, Expr operand)
{
    return Expr(std::make_shared<const Node>(
        Node{Kind::Unary, static_cast<std::int32_t>(op), Scope::Global, {std::move(operand)}, {}}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs)
{
    return Expr(std::make_shared<const Node>(Node{
        Kind::Binary, static_cast<std::int32_t>(op), Scope::Global, {std::move(lhs), std::move(rhs)}, {}}));
}

Expr Expr::ite(Expr cond, Expr then_expr, Expr else_expr)
{
    return Expr(std::make_shared<const Node>(Node{
        Kind::Ite, 0, Scope::Global, {std::move(cond), std::move(then_expr), std::move(else_expr)}, {}}));
}

Expr Expr::table(std::vector<std::int32_t> values, Expr index)
{
    return Expr(std::make_shared<const Node>(
        Node{Kind::Table, 0, Scope::Global, {std::move(index)}, std::move(values)}));
}

Expr::Kind Expr::kind() const
{
    assert(node_);
    return node_->kind;
}

std::int32_t Expr::value() const
{
    assert(node_);
    return node_->value;
}

Scope Expr::scope() const
{
    assert(node_);
    return node_->scope;
}

const std::vector<Expr>& Expr::children() const
{
    assert(node_);
    return node_->kids;
}

const std::vector<std::int32_t>& Expr::table_values() const
{
    assert(node_);
    return node_->table;
}

bool Expr::structurally_equal(const Expr& other) const
{
    if (empty() || other.empty())
        return empty() == other.empty();
    if (node_ == other.node_)
        return true;
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.kind != b.kind || a.value != b.value || a.scope != b.scope || a.table != b.table ||
        a.kids.size() != b.kids.size())
        return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!a.kids[i].structurally_equal(b.kids[i]))
            return false;
    return true;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b)); }
Expr operator&&(Expr a, Expr b) { return Expr::binary(BinaryOp::And, std::move(a), std::move(b)); }
Expr operator||(Expr a, Expr b) { return Expr::binary(BinaryOp::Or, std::move(a), std::move(b)); }
Expr operator!(Expr a) { return Expr::unary(UnaryOp::Not, std::move(a)); }
Expr eq(Expr a, Expr b) { return Expr::binary(BinaryOp::Eq, std::move(a), std::move(b)); }
Expr ne(Expr a, Expr b) { return Expr::binary(BinaryOp::Ne, std::move(a), std::move(b)); }
Expr lt(Expr a, Expr b) { return Expr::binary(BinaryOp::Lt, std::move(a), std::move(b)); }
Expr le(Expr a, Expr b) { return Expr::binary(BinaryOp::Le, std::move(a), std::move(b)); }
Expr gt(Expr a, Expr b) { return Expr::binary(BinaryOp::Gt, std::move(a), std::move(b)); }
Expr ge(Expr a, Expr b) { return Expr::binary(BinaryOp::Ge, std::move(a), std::move(b)); }
Expr min(Expr a, Expr b) { return Expr::binary(BinaryOp::Min, std::move(a), std::move(b)); }
Expr max(Expr a, Expr b) { return Expr::binary(BinaryOp::Max, std::move(a), std::move(b)); }

Expr all_of(const std::vector<Expr>& terms)
{
    if (terms.empty())
        return Expr::boolean(true);
    Expr acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i)
        acc = acc && terms[i];
    return acc;
}

Expr any_of(const std::vector<Expr>& terms)
{
    if (terms.empty())
        return Expr::boolean(false);
    Expr acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i)
        acc = acc || terms[i];
    return acc;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

constexpr std::size_t kMaxStack = 64;

std::int32_t apply_binary(Program::Op op, std::int32_t a, std::int32_t b)
{
    using Op = Program::Op;
    switch (op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div:
        if (b == 0)
            throw EvalError("division by zero");
        return a / b;
    case Op::Mod:
        if (b == 0)
            throw EvalError("modulo by zero");
        return a % b;
    case Op::Eq: return a == b;
    case Op::Ne: return a != b;
    case Op::Lt: return a < b;
    case Op::Le: return a <= b;
    case Op::Gt: return a > b;
    case Op::Ge: return a >= b;
    case Op::Min: return std::min(a, b);
    case Op::Max: return std::max(a, b);
    default: break;
    }
    throw EvalError("bad binary opcode");
}

}  // namespace

std::int32_t Program::eval(const Valuation& v) const
{
    std::array<std::int32_t, kMaxStack> stack{};
    std::size_t sp = 0;
    const std::size_t n = code_.size();
    for (std::size_t pc = 0; pc < n; ++pc) {
        const Instr& in = code_[pc];
        switch (in.op) {
        case Op::Push:
            stack[sp++] = in.a;
            break;
        case Op::Var:
            stack[sp++] = v.vars[static_cast<std::size_t>(in.a)];
            break;
        case Op::VarIdx: {
            const std::int32_t idx = stack[sp - 1];
            if (idx < 0 || idx >= in.b)
                throw EvalError("array index " + std::to_string(idx) + " out of range [0," +
                                std::to_string(in.b) + ")");
            stack[sp - 1] = v.vars[static_cast<std::size_t>(in.a + idx)];
            break;
        }
        case Op::Clock:
            stack[sp++] = v.clocks[static_cast<std::size_t>(in.a)];
            break;
        case Op::Neg:
            stack[sp - 1] = -stack[sp - 1];
            break;
        case Op::Not:
            stack[sp - 1] = stack[sp - 1] == 0 ? 1 : 0;
            break;
        case Op::Bool:
            stack[sp - 1] = stack[sp - 1] != 0 ? 1 : 0;
            break;
        case Op::AndJmp:
            if (stack[sp - 1] == 0) {
                pc = static_cast<std::size_t>(in.a) - 1;
            } else {
                --sp;
            }
            break;
        case Op::OrJmp:
            if (stack[sp - 1] != 0) {
                stack[sp - 1] = 1;
                pc = static_cast<std::size_t>(in.a) - 1;
            } else {
                --sp;
            }
            break;
        case Op::Jz:
            if (stack[--sp] == 0)
                pc = static_cast<std::size_t>(in.a) - 1;
            break;
        case Op::Jmp:
            pc = static_cast<std::size_t>(in.a) - 1;
            break;
        case Op::Table: {
            const std::int32_t idx = stack[sp - 1];
            if (idx < 0 || idx >= in.b)
                throw EvalError("table index " + std::to_string(idx) + " out of range");
            stack[sp - 1] = pool_[static_cast<std::size_t>(in.a + idx)];
            break;
        }
        default: {
            const std::int32_t b = stack[--sp];
            stack[sp - 1] = apply_binary(in.op, stack[sp - 1], b);
            break;
        }
        }
    }
    return sp == 0 ? 1 : stack[0];
}

std::optional<std::int32_t> Program::constant_value() const
{
    for (const Instr& in : code_)
        if (in.op == Op::Var || in.op == Op::VarIdx || in.op == Op::Clock)
            return std::nullopt;
    const Valuation none{};
    return eval(none);
}

void collect_reads(const Program& program, std::vector<std::uint32_t>& vars,
                   std::vector<std::uint32_t>& clocks)
{
    for (const auto& in : program.code()) {
        if (in.op == Program::Op::Var) {
            vars.push_back(static_cast<std::uint32_t>(in.a));
        } else if (in.op == Program::Op::VarIdx) {
            for (std::int32_t i = 0; i < in.b; ++i)
                vars.push_back(static_cast<std::uint32_t>(in.a + i));
        } else if (in.op == Program::Op::Clock) {
            clocks.push_back(static_cast<std::uint32_t>(in.a));
        }
    }
}

// ---------------------------------------------------------------------------
// Compilation

class ProgramCompiler {
public:
    ProgramCompiler(const ResolveContext& ctx, std::vector<ClockComparison>* uses)
        : ctx_(ctx), uses_(uses)
    {
    }

    Program run(const Expr& e)
    {
        if (!e.empty())
            emit(e);
        if (max_depth_ > kMaxStack)
            throw CompileError("expression too deep");
        return std::move(out_);
    }

private:
    using Op = Program::Op;

    void push(Op op, std::int32_t a = 0, std::int32_t b = 0, int delta = 0)
    {
        out_.code_.push_back({op, a, b});
        depth_ += delta;
        max_depth_ = std::max(max_depth_, static_cast<std::size_t>(std::max(depth_, 0)));
    }

    std::size_t here() const { return out_.code_.size(); }
    void patch(std::size_t at) { out_.code_[at].a = static_cast<std::int32_t>(here()); }

    std::optional<std::int32_t> fold(const Expr& e) const
    {
        switch (e.kind()) {
        case Expr::Kind::Const:
            return e.value();
        case Expr::Kind::Param: {
            const auto pos = static_cast<std::size_t>(e.value());
            if (pos >= ctx_.params.size())
                return std::nullopt;
            return ctx_.params[pos];
        }
        case Expr::Kind::Unary: {
            auto v = fold(e.children()[0]);
            if (!v)
                return std::nullopt;
            return e.unary_op() == UnaryOp::Neg ? -*v : (*v == 0 ? 1 : 0);
        }
        case Expr::Kind::Binary: {
            auto a = fold(e.children()[0]);
            auto b = fold(e.children()[1]);
            if (!a || !b)
                return std::nullopt;
            switch (e.binary_op()) {
            case BinaryOp::Add: return *a + *b;
            case BinaryOp::Sub: return *a - *b;
            case BinaryOp::Mul: return *a * *b;
            default: return std::nullopt;
            }
        }
        default:
            return std::nullopt;
        }
    }

    void note_clock_comparison(const Expr& e)
    {
        if (!uses_)
            return;
        const Expr& l = e.children()[0];
        const Expr& r = e.children()[1];
        auto record = [&](const Expr& clk, const Expr& other, BinaryOp op) {
            auto c = fold(other);
            auto slot = ctx_.clock(clk.scope(), static_cast<std::uint32_t>(clk.value()));
            if (c && slot)
                uses_->push_back({*slot, op, *c});
        };
        if (l.kind() == Expr::Kind::Clock)
            record(l, r, e.binary_op());
        if (r.kind() == Expr::Kind::Clock)
            record(r, l, e.binary_op());
    }

    static Op binary_opcode(BinaryOp op)
    {
        switch (op) {
        case BinaryOp::Add: return Op::Add;
        case BinaryOp::Sub: return Op::Sub;
        case BinaryOp::Mul: return Op::Mul;
        case BinaryOp::Div: return Op::Div;
        case BinaryOp::Mod: return Op::Mod;
        case BinaryOp::Eq: return Op::Eq;
        case BinaryOp::Ne: return Op::Ne;
        case BinaryOp::Lt: return Op::Lt;
        case BinaryOp::Le: return Op::Le;
        case BinaryOp::Gt: return Op::Gt;
        case BinaryOp::Ge: return Op::Ge;
        case BinaryOp::Min: return Op::Min;
        case BinaryOp::Max: return Op::Max;
        default: break;
        }
        throw CompileError("logical operator has no direct opcode");
    }

    void emit(const Expr& e)
    {
        switch (e.kind()) {
        case Expr::Kind::Const:
            push(Op::Push, e.value(), 0, +1);
            return;
        case Expr::Kind::Param: {
            const auto pos = static_cast<std::size_t>(e.value());
            if (pos >= ctx_.params.size())
                throw CompileError("template parameter #" + std::to_string(pos) + " not bound");
            push(Op::Push, ctx_.params[pos], 0, +1);
            return;
        }
        case Expr::Kind::Var: {
            auto slot = ctx_.var(e.scope(), static_cast<std::uint32_t>(e.value()));
            if (!slot)
                throw CompileError(std::string("undeclared ") +
                                   (e.scope() == Scope::Local ? "local" : "global") + " variable #" +
                                   std::to_string(e.value()));
            if (e.children().empty()) {
                if (slot->length != 1)
                    throw CompileError("array variable used without index");
                push(Op::Var, static_cast<std::int32_t>(slot->base), 0, +1);
            } else {
                const Expr& idx = e.children()[0];
                if (auto c = fold(idx)) {
                    if (*c < 0 || static_cast<std::uint32_t>(*c) >= slot->length)
                        throw CompileError("constant index " + std::to_string(*c) + " out of range");
                    push(Op::Var, static_cast<std::int32_t>(slot->base + static_cast<std::uint32_t>(*c)), 0,
                         +1);
                } else {
                    emit(idx);
                    push(Op::VarIdx, static_cast<std::int32_t>(slot->base),
                         static_cast<std::int32_t>(slot->length));
                }
            }
            return;
        }
        case Expr::Kind::Clock: {
            auto slot = ctx_.clock(e.scope(), static_cast<std::uint32_t>(e.value()));
            if (!slot)
                throw CompileError("undeclared clock #" + std::to_string(e.value()));
            push(Op::Clock, static_cast<std::int32_t>(*slot), 0, +1);
            return;
        }
        case Expr::Kind::Unary:
            emit(e.children()[0]);
            push(e.unary_op() == UnaryOp::Neg ? Op::Neg : Op::Not);
            return;
        case Expr::Kind::Binary: {
            const BinaryOp op = e.binary_op();
            if (op == BinaryOp::And || op == BinaryOp::Or) {
                emit(e.children()[0]);
                const std::size_t jump = here();
                push(op == BinaryOp::And ? Op::AndJmp : Op::OrJmp, 0, 0, -1);
                emit(e.children()[1]);
                push(Op::Bool);
                patch(jump);
                return;
            }
            if (is_comparison(op))
                note_clock_comparison(e);
            emit(e.children()[0]);
            emit(e.children()[1]);
            push(binary_opcode(op), 0, 0, -1);
            return;
        }
        case Expr::Kind::Ite: {
            emit(e.children()[0]);
            const std::size_t to_else = here();
            push(Op::Jz, 0, 0, -1);
            emit(e.children()[1]);
            const std::size_t to_end = here();
            push(Op::Jmp, 0, 0, -1);
            patch(to_else);
            emit(e.children()[2]);
            patch(to_end);
            return;
        }
        case Expr::Kind::Table: {
            emit(e.children()[0]);
            const auto& vals = e.table_values();
            push(Op::Table, static_cast<std::int32_t>(out_.pool_.size()), static_cast<std::int32_t>(vals.size()));
            out_.pool_.insert(out_.pool_.end(), vals.begin(), vals.end());
            return;
        }
        }
    }

    const ResolveContext& ctx_;
    std::vector<ClockComparison>* uses_;
    Program out_;
    int depth_ = 0;
    std::size_t max_depth_ = 0;
};

Program compile(const Expr& expr, const ResolveContext& ctx, std::vector<ClockComparison>* clock_uses)
{
    return ProgramCompiler(ctx, clock_uses).run(expr);
}

}  // namespace srpmc::automata
