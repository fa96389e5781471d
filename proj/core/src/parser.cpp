#include "errcred/parser.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace errcred {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line), column_(column) {}

namespace {

constexpr std::array<std::string_view, 29> kKeywords = {
    "rec",  "lam",   "let",    "seq",     "if",        "pair",    "fst",   "snd",
    "inl",  "inr",   "match",  "allocN",  "alloc",     "load",    "store", "rand",
    "randlbl", "alloctape", "flip", "loc", "label", "true", "false", "!",
    "+",    "-",     "*",      "&&",      "||"};

struct SExp {
    bool list = false;
    std::string atom;
    std::vector<SExp> items;
    std::size_t line = 1;
    std::size_t col = 1;
};

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    SExp read_top() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(line_, col_, "empty input");
        SExp e = read();
        skip_space();
        if (pos_ < text_.size()) throw ParseError(line_, col_, "trailing input after expression");
        return e;
    }

private:
    SExp read() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(line_, col_, "unexpected end of input");
        SExp e;
        e.line = line_;
        e.col = col_;
        const char c = text_[pos_];
        if (c == ')') throw ParseError(line_, col_, "unexpected ')'");
        if (c == '(') {
            advance();
            e.list = true;
            for (;;) {
                skip_space();
                if (pos_ >= text_.size())
                    throw ParseError(e.line, e.col, "unclosed '(' ");
                if (text_[pos_] == ')') {
                    advance();
                    return e;
                }
                e.items.push_back(read());
            }
        }
        while (pos_ < text_.size()) {
            const char d = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
            e.atom.push_back(d);
            advance();
        }
        return e;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool is_integer_atom(std::string_view s) {
    std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    return true;
}

const std::map<std::string_view, BinOp>& binops() {
    static const std::map<std::string_view, BinOp> ops = {
        {"+", BinOp::Add}, {"-", BinOp::Sub},  {"*", BinOp::Mul}, {"=", BinOp::Eq},
        {"<", BinOp::Lt},  {"<=", BinOp::Le},  {"&&", BinOp::And}, {"||", BinOp::Or}};
    return ops;
}

class Desugarer {
public:
    ExprPtr expr(const SExp& s) {
        if (!s.list) return atom(s);
        if (s.items.empty()) return Expr::unit();
        const SExp& head = s.items.front();
        if (!head.list) {
            const std::string& h = head.atom;
            if (auto it = binops().find(h); it != binops().end()) {
                arity(s, 2);
                return Expr::binop(it->second, expr(s.items[1]), expr(s.items[2]));
            }
            if (h == "rec") {
                arity(s, 3);
                return Expr::rec(binder(s.items[1]), binder(s.items[2]), expr(s.items[3]));
            }
            if (h == "lam") {
                arity(s, 2);
                return Expr::rec(kAnonymous, binder(s.items[1]), expr(s.items[2]));
            }
            if (h == "let") {
                arity(s, 3);
                auto bound = expr(s.items[2]);
                auto body = expr(s.items[3]);
                return Expr::app(Expr::rec(kAnonymous, binder(s.items[1]), std::move(body)),
                                 std::move(bound));
            }
            if (h == "seq") {
                if (s.items.size() < 3) fail(s, "arity mismatch: 'seq' expects at least 2 arguments");
                ExprPtr acc = expr(s.items.back());
                for (std::size_t i = s.items.size() - 1; i-- > 1;)
                    acc = Expr::app(Expr::rec(kAnonymous, kAnonymous, acc), expr(s.items[i]));
                return acc;
            }
            if (h == "if") {
                arity(s, 3);
                return Expr::if_(expr(s.items[1]), expr(s.items[2]), expr(s.items[3]));
            }
            if (h == "pair") {
                arity(s, 2);
                return Expr::pair(expr(s.items[1]), expr(s.items[2]));
            }
            if (h == "fst") return Expr::fst(unary(s));
            if (h == "snd") return Expr::snd(unary(s));
            if (h == "inl") return Expr::inl(unary(s));
            if (h == "inr") return Expr::inr(unary(s));
            if (h == "load" || h == "!") return Expr::load(unary(s));
            if (h == "rand") return Expr::rand(unary(s));
            if (h == "alloctape") return Expr::alloc_tape(unary(s));
            if (h == "alloc") return Expr::alloc_n(Expr::integer(1), unary(s));
            if (h == "allocN") {
                arity(s, 2);
                return Expr::alloc_n(expr(s.items[1]), expr(s.items[2]));
            }
            if (h == "store") {
                arity(s, 2);
                return Expr::store(expr(s.items[1]), expr(s.items[2]));
            }
            if (h == "randlbl") {
                arity(s, 2);
                return Expr::rand_lbl(expr(s.items[1]), expr(s.items[2]));
            }
            if (h == "flip") {
                arity(s, 0);
                return Expr::binop(BinOp::Eq, Expr::rand(Expr::integer(1)), Expr::integer(1));
            }
            if (h == "loc" || h == "label") {
                arity(s, 1);
                const SExp& n = s.items[1];
                if (n.list || !is_integer_atom(n.atom) || n.atom[0] == '-')
                    fail(n, "'" + h + "' expects a non-negative integer literal");
                const auto v = integer(n);
                return h == "loc" ? Expr::loc(v) : Expr::label(v);
            }
            if (h == "match") return match(s);
            if (is_keyword(h) && h != "true" && h != "false") fail(head, "unknown form '" + h + "'");
        }
        if (s.items.size() < 2) fail(s, "application needs at least one argument");
        ExprPtr acc = expr(head);
        for (std::size_t i = 1; i < s.items.size(); ++i) acc = Expr::app(acc, expr(s.items[i]));
        return acc;
    }

private:
    [[noreturn]] static void fail(const SExp& s, const std::string& msg) {
        throw ParseError(s.line, s.col, msg);
    }

    static void arity(const SExp& s, std::size_t n) {
        if (s.items.size() != n + 1)
            fail(s, "arity mismatch: '" + s.items.front().atom + "' expects " + std::to_string(n) +
                        " argument" + (n == 1 ? "" : "s") + ", got " +
                        std::to_string(s.items.size() - 1));
    }

    ExprPtr unary(const SExp& s) {
        arity(s, 1);
        return expr(s.items[1]);
    }

    static std::int64_t integer(const SExp& s) {
        std::int64_t v = 0;
        const auto* first = s.atom.data();
        const auto* last = first + s.atom.size();
        auto [p, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || p != last) fail(s, "integer literal out of range: " + s.atom);
        return v;
    }

    static std::string binder(const SExp& s) {
        if (s.list || !is_identifier(s.atom) || is_keyword(s.atom))
            fail(s, "expected a binder name");
        return s.atom;
    }

    ExprPtr atom(const SExp& s) {
        if (is_integer_atom(s.atom)) return Expr::integer(integer(s));
        if (s.atom == "true") return Expr::boolean(true);
        if (s.atom == "false") return Expr::boolean(false);
        if (s.atom == kAnonymous) fail(s, "'_' cannot be used as an expression");
        if (is_keyword(s.atom) || binops().count(s.atom))
            fail(s, "unknown form: keyword '" + s.atom + "' used as an expression");
        if (!is_identifier(s.atom)) fail(s, "invalid token '" + s.atom + "'");
        return Expr::var(s.atom);
    }

    ExprPtr match(const SExp& s) {
        arity(s, 3);
        auto arm = [&](const SExp& a, const char* tag) {
            if (!a.list || a.items.size() != 3 || a.items[0].list || a.items[0].atom != tag)
                fail(a, std::string("expected (") + tag + " <name> <expr>) arm");
            return std::pair{binder(a.items[1]), expr(a.items[2])};
        };
        auto scrut = expr(s.items[1]);
        auto [x, left] = arm(s.items[2], "inl");
        auto [y, right] = arm(s.items[3], "inr");
        return Expr::match(std::move(scrut), std::move(x), std::move(left), std::move(y),
                           std::move(right));
    }
};

void print_into(const Expr& e, std::string& out) {
    auto list = [&](const char* head, std::initializer_list<const Expr*> kids) {
        out += '(';
        out += head;
        for (const Expr* k : kids) {
            out += ' ';
            print_into(*k, out);
        }
        out += ')';
    };
    switch (e.kind()) {
    case Kind::Int: out += std::to_string(e.num()); return;
    case Kind::Bool: out += e.boolean() ? "true" : "false"; return;
    case Kind::Unit: out += "()"; return;
    case Kind::Loc: out += "(loc " + std::to_string(e.num()) + ")"; return;
    case Kind::Label: out += "(label " + std::to_string(e.num()) + ")"; return;
    case Kind::Var: out += e.name(); return;
    case Kind::Rec:
        out += "(rec " + e.name() + " " + e.name2() + " ";
        print_into(*e.kid(0), out);
        out += ')';
        return;
    case Kind::App:
        out += '(';
        print_into(*e.kid(0), out);
        out += ' ';
        print_into(*e.kid(1), out);
        out += ')';
        return;
    case Kind::BinOp: list(binop_symbol(e.op()), {e.kid(0).get(), e.kid(1).get()}); return;
    case Kind::If: list("if", {e.kid(0).get(), e.kid(1).get(), e.kid(2).get()}); return;
    case Kind::Pair: list("pair", {e.kid(0).get(), e.kid(1).get()}); return;
    case Kind::Fst: list("fst", {e.kid(0).get()}); return;
    case Kind::Snd: list("snd", {e.kid(0).get()}); return;
    case Kind::InjL: list("inl", {e.kid(0).get()}); return;
    case Kind::InjR: list("inr", {e.kid(0).get()}); return;
    case Kind::Match:
        out += "(match ";
        print_into(*e.kid(0), out);
        out += " (inl " + e.name() + " ";
        print_into(*e.kid(1), out);
        out += ") (inr " + e.name2() + " ";
        print_into(*e.kid(2), out);
        out += "))";
        return;
    case Kind::AllocN: list("allocN", {e.kid(0).get(), e.kid(1).get()}); return;
    case Kind::Load: list("load", {e.kid(0).get()}); return;
    case Kind::Store: list("store", {e.kid(0).get(), e.kid(1).get()}); return;
    case Kind::Rand: list("rand", {e.kid(0).get()}); return;
    case Kind::AllocTape: list("alloctape", {e.kid(0).get()}); return;
    case Kind::RandLbl: list("randlbl", {e.kid(0).get(), e.kid(1).get()}); return;
    }
}

} // namespace

bool is_keyword(std::string_view name) {
    for (auto k : kKeywords)
        if (k == name) return true;
    return binops().count(name) > 0;
}

ExprPtr parse_expr(std::string_view text) {
    Reader reader(text);
    const SExp s = reader.read_top();
    Desugarer d;
    return number_rand_sites(d.expr(s));
}

ExprPtr parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_expr(buf.str());
}

std::string print_expr(const Expr& e) {
    std::string out;
    print_into(e, out);
    return out;
}

std::string print_expr(const ExprPtr& e) { return print_expr(*e); }

} // namespace errcred
