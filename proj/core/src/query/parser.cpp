#include "srpmc/query/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace srpmc::query {

std::string_view to_string(QueryKind k) noexcept
{
    switch (k) {
    case QueryKind::ExistsEventually: return "E<>";
    case QueryKind::ForallAlways: return "A[]";
    case QueryKind::ExistsAlways: return "E[]";
    case QueryKind::ForallEventually: return "A<>";
    case QueryKind::LeadsTo: return "-->";
    }
    return "?";
}

std::string_view to_string(CompareOp op) noexcept
{
    switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

namespace {

std::string describe_expected(const std::vector<std::string>& expected)
{
    if (expected.empty())
        return "";
    std::string out = expected.size() == 1 ? "expected " : "expected one of ";
    for (std::size_t i = 0; i < expected.size(); ++i)
        out += (i ? ", " : "") + expected[i];
    return out;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         (expected.empty() ? "unexpected " + found : describe_expected(expected) + ", found " + found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found))
{
}

namespace {

enum class Tok : std::uint8_t {
    Ident, Int, Dot, LBrack, RBrack, LParen, RParen, Not, And, Or,
    Eq, Ne, Lt, Le, Gt, Ge, Arrow, EDiamond, ABox, EBox, ADiamond,
    Imply, True, False, Deadlock, End,
};

std::string tok_name(Tok t)
{
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Dot: return "'.'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&&'";
    case Tok::Or: return "'||'";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Arrow: return "'-->'";
    case Tok::EDiamond: return "'E<>'";
    case Tok::ABox: return "'A[]'";
    case Tok::EBox: return "'E[]'";
    case Tok::ADiamond: return "'A<>'";
    case Tok::Imply: return "'imply'";
    case Tok::True: return "'true'";
    case Tok::False: return "'false'";
    case Tok::Deadlock: return "'deadlock'";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    std::int32_t value = 0;
    std::size_t line = 1, column = 1;
};

std::vector<Token> lex(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
    while (true) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            advance(1);
        Token t{Tok::End, "", 0, line, col};
        if (i >= s.size()) {
            out.push_back(t);
            return out;
        }
        const char c = s[i];
        auto simple = [&](Tok k, std::size_t n) {
            t.kind = k;
            t.text = std::string(s.substr(i, n));
            advance(n);
            out.push_back(t);
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            if ((c == 'E' || c == 'A') && i + 2 < s.size() + 1 &&
                (s.substr(i + 1, 2) == "<>" || s.substr(i + 1, 2) == "[]")) {
                const bool diamond = s.substr(i + 1, 2) == "<>";
                simple(c == 'E' ? (diamond ? Tok::EDiamond : Tok::EBox) : (diamond ? Tok::ADiamond : Tok::ABox), 3);
                continue;
            }
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            const std::string word(s.substr(i, j - i));
            Tok k = Tok::Ident;
            if (word == "imply")
                k = Tok::Imply;
            else if (word == "true")
                k = Tok::True;
            else if (word == "false")
                k = Tok::False;
            else if (word == "deadlock")
                k = Tok::Deadlock;
            simple(k, j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            std::size_t j = i + 1;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
                ++j;
            std::int32_t v = 0;
            const auto res = std::from_chars(s.data() + i, s.data() + j, v);
            if (res.ec != std::errc() || res.ptr != s.data() + j)
                throw ParseError(line, col, {}, "integer '" + std::string(s.substr(i, j - i)) + "' out of range");
            t.value = v;
            simple(Tok::Int, j - i);
            continue;
        }
        if (starts("-->")) { simple(Tok::Arrow, 3); continue; }
        if (starts("&&")) { simple(Tok::And, 2); continue; }
        if (starts("||")) { simple(Tok::Or, 2); continue; }
        if (starts("==")) { simple(Tok::Eq, 2); continue; }
        if (starts("!=")) { simple(Tok::Ne, 2); continue; }
        if (starts("<=")) { simple(Tok::Le, 2); continue; }
        if (starts(">=")) { simple(Tok::Ge, 2); continue; }
        switch (c) {
        case '.': simple(Tok::Dot, 1); continue;
        case '[': simple(Tok::LBrack, 1); continue;
        case ']': simple(Tok::RBrack, 1); continue;
        case '(': simple(Tok::LParen, 1); continue;
        case ')': simple(Tok::RParen, 1); continue;
        case '!': simple(Tok::Not, 1); continue;
        case '<': simple(Tok::Lt, 1); continue;
        case '>': simple(Tok::Gt, 1); continue;
        default: break;
        }
        std::string shown(1, c);
        if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
            shown = "byte 0x" + std::string(1, "0123456789abcdef"[(static_cast<unsigned char>(c) >> 4) & 15]) +
                    std::string(1, "0123456789abcdef"[static_cast<unsigned char>(c) & 15]);
        else
            shown = "character '" + shown + "'";
        throw ParseError(line, col, {}, shown);
    }
}

const std::vector<Tok> kRelops{Tok::Eq, Tok::Ne, Tok::Lt, Tok::Le, Tok::Gt, Tok::Ge};
const std::vector<Tok> kExprStart{Tok::Not, Tok::LParen, Tok::True, Tok::False, Tok::Deadlock, Tok::Ident, Tok::Int};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Query query()
    {
        Query q;
        const Tok k = peek().kind;
        if (k == Tok::EDiamond || k == Tok::ABox || k == Tok::EBox || k == Tok::ADiamond) {
            next();
            q.kind = k == Tok::EDiamond ? QueryKind::ExistsEventually
                     : k == Tok::ABox   ? QueryKind::ForallAlways
                     : k == Tok::EBox   ? QueryKind::ExistsAlways
                                        : QueryKind::ForallEventually;
            q.phi = expr();
            expect_end({});
            return q;
        }
        if (!starts_expr(k)) {
            std::vector<Tok> want{Tok::EDiamond, Tok::ABox, Tok::EBox, Tok::ADiamond};
            want.insert(want.end(), kExprStart.begin(), kExprStart.end());
            fail(want);
        }
        q.kind = QueryKind::LeadsTo;
        q.phi = expr();
        if (peek().kind != Tok::Arrow)
            fail(continuation({Tok::Arrow}));
        next();
        q.psi = expr();
        expect_end({});
        return q;
    }

    Expr state_expr()
    {
        Expr e = expr();
        expect_end({});
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    static bool starts_expr(Tok k) { return std::find(kExprStart.begin(), kExprStart.end(), k) != kExprStart.end(); }

    [[noreturn]] void fail(const std::vector<Tok>& expected) const
    {
        std::vector<std::string> names;
        for (Tok t : expected)
            names.push_back(tok_name(t));
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        const Token& t = peek();
        const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(t.line, t.column, std::move(names), found);
    }

    // Tokens that could follow a complete expression at this point, plus `extra`.
    std::vector<Tok> continuation(std::vector<Tok> extra) const
    {
        extra.insert(extra.end(), {Tok::And, Tok::Or, Tok::Imply});
        if (last_was_name_)
            extra.insert(extra.end(), kRelops.begin(), kRelops.end());
        if (depth_ > 0)
            extra.push_back(Tok::RParen);
        return extra;
    }

    void expect_end(std::vector<Tok> extra)
    {
        if (peek().kind != Tok::End) {
            extra.push_back(Tok::End);
            fail(continuation(std::move(extra)));
        }
    }

    Expr binary(Expr::Kind k, Expr a, Expr b)
    {
        Expr e;
        e.kind = k;
        e.children.push_back(std::move(a));
        e.children.push_back(std::move(b));
        return e;
    }

    Expr expr()
    {
        Expr lhs = disjunction();
        if (peek().kind == Tok::Imply) {
            next();
            return binary(Expr::Kind::Imply, std::move(lhs), expr());
        }
        return lhs;
    }

    Expr disjunction()
    {
        Expr e = conjunction();
        while (peek().kind == Tok::Or) {
            next();
            e = binary(Expr::Kind::Or, std::move(e), conjunction());
        }
        return e;
    }

    Expr conjunction()
    {
        Expr e = comparison();
        while (peek().kind == Tok::And) {
            next();
            e = binary(Expr::Kind::And, std::move(e), comparison());
        }
        return e;
    }

    static std::optional<CompareOp> relop(Tok t)
    {
        switch (t) {
        case Tok::Eq: return CompareOp::Eq;
        case Tok::Ne: return CompareOp::Ne;
        case Tok::Lt: return CompareOp::Lt;
        case Tok::Le: return CompareOp::Le;
        case Tok::Gt: return CompareOp::Gt;
        case Tok::Ge: return CompareOp::Ge;
        default: return std::nullopt;
        }
    }

    Expr comparison()
    {
        const Tok k = peek().kind;
        last_was_name_ = false;
        if (k == Tok::Ident || k == Tok::Int) {
            Operand lhs = operand();
            if (auto op = relop(peek().kind)) {
                next();
                if (peek().kind != Tok::Ident && peek().kind != Tok::Int)
                    fail({Tok::Ident, Tok::Int});
                Expr e;
                e.kind = Expr::Kind::Compare;
                e.op = *op;
                e.lhs = std::move(lhs);
                e.rhs = operand();
                return e;
            }
            if (lhs.kind == Operand::Kind::Integer)
                fail(kRelops);
            last_was_name_ = true;
            Expr e;
            e.kind = Expr::Kind::Name;
            e.lhs = std::move(lhs);
            return e;
        }
        return unary();
    }

    Expr unary(bool after_not = false)
    {
        const Token& t = peek();
        last_was_name_ = false;
        switch (t.kind) {
        case Tok::Not: {
            next();
            Expr e;
            e.kind = Expr::Kind::Not;
            if (peek().kind == Tok::Ident) {
                Expr inner;
                inner.kind = Expr::Kind::Name;
                inner.lhs = operand();
                if (relop(peek().kind))
                    fail({Tok::And, Tok::Or, Tok::Imply, Tok::End});
                e.children.push_back(std::move(inner));
            } else {
                e.children.push_back(unary(true));
            }
            return e;
        }
        case Tok::LParen: {
            next();
            ++depth_;
            Expr e = expr();
            if (peek().kind != Tok::RParen)
                fail(continuation({}));
            --depth_;
            next();
            return e;
        }
        case Tok::True:
        case Tok::False: {
            next();
            Expr e;
            e.kind = Expr::Kind::Constant;
            e.value = t.kind == Tok::True;
            return e;
        }
        case Tok::Deadlock: {
            next();
            Expr e;
            e.kind = Expr::Kind::Deadlock;
            return e;
        }
        default:
            if (after_not)
                fail({Tok::Not, Tok::LParen, Tok::True, Tok::False, Tok::Deadlock, Tok::Ident});
            fail(kExprStart);
        }
    }

    Operand operand()
    {
        Operand o;
        if (peek().kind == Tok::Int) {
            o.kind = Operand::Kind::Integer;
            o.value = next().value;
            return o;
        }
        o.kind = Operand::Kind::Name;
        o.path.push_back(next().text);
        while (peek().kind == Tok::Dot) {
            next();
            if (peek().kind != Tok::Ident)
                fail({Tok::Ident});
            o.path.push_back(next().text);
        }
        while (peek().kind == Tok::LBrack) {
            next();
            if (peek().kind != Tok::Int)
                fail({Tok::Int});
            o.indices.push_back(next().value);
            if (peek().kind != Tok::RBrack)
                fail({Tok::RBrack});
            next();
        }
        return o;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    bool last_was_name_ = false;
};

int precedence(Expr::Kind k)
{
    switch (k) {
    case Expr::Kind::Imply: return 1;
    case Expr::Kind::Or: return 2;
    case Expr::Kind::And: return 3;
    case Expr::Kind::Compare: return 4;
    case Expr::Kind::Not: return 5;
    default: return 6;
    }
}

std::string print_operand(const Operand& o)
{
    if (o.kind == Operand::Kind::Integer)
        return std::to_string(o.value);
    std::string out;
    for (std::size_t i = 0; i < o.path.size(); ++i)
        out += (i ? "." : "") + o.path[i];
    for (auto idx : o.indices)
        out += "[" + std::to_string(idx) + "]";
    return out;
}

}  // namespace

Query parse_query(std::string_view text)
{
    Query q = Parser(text).query();
    q.source = std::string(text);
    return q;
}

Expr parse_state_expr(std::string_view text)
{
    return Parser(text).state_expr();
}

std::string print(const Expr& e)
{
    auto wrap = [](const Expr& child, bool parens) { return parens ? "(" + print(child) + ")" : print(child); };
    switch (e.kind) {
    case Expr::Kind::Constant: return e.value ? "true" : "false";
    case Expr::Kind::Deadlock: return "deadlock";
    case Expr::Kind::Name: return print_operand(e.lhs);
    case Expr::Kind::Compare:
        return print_operand(e.lhs) + " " + std::string(to_string(e.op)) + " " + print_operand(e.rhs);
    case Expr::Kind::Not: {
        const Expr& c = e.children[0];
        return "!" + wrap(c, precedence(c.kind) < precedence(Expr::Kind::Not));
    }
    case Expr::Kind::And:
    case Expr::Kind::Or:
    case Expr::Kind::Imply: {
        const int p = precedence(e.kind);
        const Expr& l = e.children[0];
        const Expr& r = e.children[1];
        const bool right_assoc = e.kind == Expr::Kind::Imply;
        const bool lp = precedence(l.kind) < p || (precedence(l.kind) == p && right_assoc);
        const bool rp = precedence(r.kind) < p || (precedence(r.kind) == p && !right_assoc);
        const char* op = e.kind == Expr::Kind::And ? " && " : e.kind == Expr::Kind::Or ? " || " : " imply ";
        return wrap(l, lp) + op + wrap(r, rp);
    }
    }
    return "?";
}

std::string print(const Query& q)
{
    if (q.kind == QueryKind::LeadsTo)
        return print(q.phi) + " --> " + print(q.psi);
    return std::string(to_string(q.kind)) + " " + print(q.phi);
}

}  // namespace srpmc::query
