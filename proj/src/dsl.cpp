#include "spencer/dsl.hpp"

#include <fstream>
#include <sstream>

namespace spencer {

ParseError::ParseError(int line, int column, std::string token, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message +
                         (token.empty() ? std::string() : " (at '" + token + "')")),
      line_(line),
      column_(column),
      token_(std::move(token)),
      message_(message) {}

namespace {

enum class Tok { Name, Number, Plus, Minus, Star, Slash, Equals, Under, Comma, At, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int column = 1;
};

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::size_t utf8_length(unsigned char c) {
    if (c >= 0xF0 && c < 0xF8) return 4;
    if (c >= 0xE0) return 3;
    if (c >= 0xC0) return 2;
    return 1;
}

std::vector<Token> lex(std::string_view text, int line) {
    std::vector<Token> out;
    std::size_t p = 0;
    int col = 1;
    while (p < text.size()) {
        char c = text[p];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++p;
            ++col;
            continue;
        }
        Token t;
        t.column = col;
        if (is_alpha(c)) {
            std::size_t s = p;
            while (p < text.size() && (is_alpha(text[p]) || is_digit(text[p]))) ++p;
            t.kind = Tok::Name;
            t.text = std::string(text.substr(s, p - s));
            col += static_cast<int>(p - s);
        } else if (is_digit(c)) {
            std::size_t s = p;
            while (p < text.size() && is_digit(text[p])) ++p;
            t.kind = Tok::Number;
            t.text = std::string(text.substr(s, p - s));
            col += static_cast<int>(p - s);
        } else if (static_cast<unsigned char>(c) >= 0x80) {
            std::size_t len = std::min(utf8_length(static_cast<unsigned char>(c)), text.size() - p);
            std::string seq(text.substr(p, len));
            if (seq != "\xE2\x88\x82") throw ParseError(line, col, seq, "unexpected character");
            t.kind = Tok::At;
            t.text = seq;
            p += len;
            ++col;
        } else {
            switch (c) {
                case '+': t.kind = Tok::Plus; break;
                case '-': t.kind = Tok::Minus; break;
                case '*': t.kind = Tok::Star; break;
                case '/': t.kind = Tok::Slash; break;
                case '=': t.kind = Tok::Equals; break;
                case '_': t.kind = Tok::Under; break;
                case ',': t.kind = Tok::Comma; break;
                case '@': t.kind = Tok::At; break;
                default: {
                    std::string bad(1, c);
                    if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) bad = "\\x" + std::to_string(static_cast<int>(c));
                    throw ParseError(line, col, bad, "unexpected character");
                }
            }
            t.text = std::string(1, c);
            ++p;
            ++col;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.column = col;
    out.push_back(end);
    return out;
}

class Cursor {
public:
    Cursor(std::vector<Token> toks, int line) : toks_(std::move(toks)), line_(line) {}

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at(Tok k) const { return peek().kind == k; }
    int line() const { return line_; }

    [[noreturn]] void fail(const Token& t, const std::string& message) const {
        throw ParseError(line_, t.column, t.kind == Tok::End ? "end of line" : t.text, message);
    }
    const Token& expect(Tok k, const std::string& what) {
        if (!at(k)) fail(peek(), "expected " + what);
        return next();
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_;
};

// rational := integer ["/" positive-integer]
Rational read_rational(Cursor& c) {
    const Token& num = c.expect(Tok::Number, "number");
    mpz_class p(num.text, 10), q(1);
    if (c.at(Tok::Slash)) {
        c.next();
        const Token& den = c.expect(Tok::Number, "denominator");
        q = mpz_class(den.text, 10);
        if (q == 0) c.fail(den, "zero denominator");
    }
    Rational r(p, q);
    r.canonicalize();
    return r;
}

// Coefficient of a signed term: [rational ["*"]].
Rational read_coefficient(Cursor& c) {
    if (!c.at(Tok::Number)) return 1;
    Rational r = read_rational(c);
    if (c.at(Tok::Star)) c.next();
    return r;
}

int find_name(const std::vector<std::string>& names, std::string_view s) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == s) return static_cast<int>(i);
    return -1;
}

void check_names(const Cursor& c, const std::vector<Token>& toks, const std::vector<std::string>& taken) {
    for (std::size_t i = 0; i < toks.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (toks[i].text == toks[j].text) c.fail(toks[i], "duplicate name");
        if (find_name(taken, toks[i].text) >= 0) c.fail(toks[i], "name already declared as a variable");
    }
}

std::vector<Token> name_list(Cursor& c, const std::string& what) {
    std::vector<Token> out;
    while (c.at(Tok::Name)) out.push_back(c.next());
    if (out.empty()) c.fail(c.peek(), "expected at least one " + what);
    if (!c.at(Tok::End)) c.fail(c.peek(), "expected " + what + " name");
    return out;
}

std::vector<int> decode_subscript(const Cursor& c, const Token& tok, const std::vector<std::string>& vars) {
    std::vector<int> alpha(vars.size(), 0);
    std::string_view s = tok.text;
    std::size_t p = 0;
    while (p < s.size()) {
        int hit = -1;
        for (std::size_t v = 0; v < vars.size(); ++v)
            if (s.substr(p, vars[v].size()) == vars[v]) hit = static_cast<int>(v);
        if (hit < 0) c.fail(tok, "subscript is not a word in the declared variables");
        ++alpha[static_cast<std::size_t>(hit)];
        p += vars[static_cast<std::size_t>(hit)].size();
    }
    return alpha;
}

Equation parse_equation(Cursor& c, const EquationSet& eqs) {
    Equation e;
    e.line = c.line();
    bool first = true;
    int order = -1;
    Token first_term;
    while (true) {
        int sign = 1;
        if (c.at(Tok::Plus) || c.at(Tok::Minus)) {
            sign = c.next().kind == Tok::Minus ? -1 : 1;
        } else if (!first) {
            break;
        }
        first = false;
        Token start = c.peek();
        Rational coef = read_coefficient(c);
        const Token& name = c.expect(Tok::Name, "unknown name");
        int mu = find_name(eqs.unknowns, name.text);
        if (mu < 0) c.fail(name, find_name(eqs.vars, name.text) >= 0 ? "a variable cannot be an unknown" : "undeclared unknown");
        c.expect(Tok::Under, "'_' and a derivative subscript");
        const Token& sub = c.expect(Tok::Name, "derivative subscript");
        auto alpha = decode_subscript(c, sub, eqs.vars);
        int ord = 0;
        for (int a : alpha) ord += a;
        if (order < 0) {
            order = ord;
            first_term = start;
        } else if (ord != order) {
            c.fail(start, "mixed derivative orders " + std::to_string(order) + " and " + std::to_string(ord) +
                              " in one equation; only principal symbols are accepted, so enter the top-order "
                              "part alone (u_t - u_xx = 0 becomes u_xx = 0)");
        }
        if (sign < 0) coef = -coef;
        bool merged = false;
        for (auto& t : e.terms)
            if (t.unknown == mu && t.alpha == alpha) {
                t.coef += coef;
                merged = true;
            }
        if (!merged) e.terms.push_back(Term{coef, mu, alpha});
    }
    const Token& eq = c.expect(Tok::Equals, "'+', '-' or '='");
    const Token& zero = c.expect(Tok::Number, "0 on the right-hand side");
    if (mpz_class(zero.text, 10) != 0) c.fail(zero, "right-hand side must be 0");
    if (!c.at(Tok::End)) c.fail(c.peek(), "unexpected token after '= 0'");
    std::erase_if(e.terms, [](const Term& t) { return is_zero(t.coef); });
    if (e.terms.empty()) c.fail(eq, "equation is identically zero");
    e.order = order;
    return e;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t s = 0;
    while (true) {
        std::size_t e = text.find('\n', s);
        if (e == std::string_view::npos) {
            out.push_back(text.substr(s));
            break;
        }
        out.push_back(text.substr(s, e - s));
        s = e + 1;
    }
    return out;
}

}  // namespace

EquationSet parse(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    EquationSet eqs;
    enum { Vars, Unknowns, Body } stage = Vars;
    auto lines = split_lines(text);
    int lineno = 0;
    for (auto raw : lines) {
        ++lineno;
        Cursor c(lex(raw, lineno), lineno);
        if (c.at(Tok::End)) continue;
        const Token& kw = c.peek();
        if (stage == Vars) {
            if (kw.kind != Tok::Name || kw.text != "vars") c.fail(kw, "expected 'vars' header");
            c.next();
            auto toks = name_list(c, "variable");
            check_names(c, toks, {});
            for (std::size_t i = 0; i < toks.size(); ++i)
                for (std::size_t j = 0; j < toks.size(); ++j)
                    if (i != j && toks[j].text.starts_with(toks[i].text))
                        c.fail(toks[j], "variable names must be prefix-free ('" + toks[i].text + "' starts '" +
                                            toks[j].text + "')");
            for (auto& t : toks) eqs.vars.push_back(t.text);
            stage = Unknowns;
        } else if (stage == Unknowns) {
            if (kw.kind != Tok::Name || kw.text != "unknowns") c.fail(kw, "expected 'unknowns' header");
            c.next();
            auto toks = name_list(c, "unknown");
            check_names(c, toks, eqs.vars);
            for (auto& t : toks) eqs.unknowns.push_back(t.text);
            stage = Body;
        } else {
            if (kw.kind != Tok::Name || kw.text != "eq") c.fail(kw, "expected 'eq'");
            c.next();
            eqs.equations.push_back(parse_equation(c, eqs));
        }
    }
    if (stage != Body) {
        int col = 1;
        throw ParseError(lineno, col, "", stage == Vars ? "missing 'vars' header" : "missing 'unknowns' header");
    }
    return eqs;
}

EquationSet parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string term_string(const EquationSet& eqs, const Term& t) {
    std::string s;
    Rational a = abs(t.coef);
    if (a != 1) s += to_string(a) + " ";
    s += eqs.unknowns.at(static_cast<std::size_t>(t.unknown)) + "_";
    for (std::size_t v = 0; v < t.alpha.size(); ++v)
        for (int k = 0; k < t.alpha[v]; ++k) s += eqs.vars.at(v);
    return s;
}

std::string equation_string(const EquationSet& eqs, const Equation& e) {
    std::string s;
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        bool neg = sgn(e.terms[i].coef) < 0;
        if (i == 0)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        s += term_string(eqs, e.terms[i]);
    }
    return s + " = 0";
}

std::string pretty_print(const EquationSet& eqs) {
    std::string s = "vars";
    for (const auto& v : eqs.vars) s += " " + v;
    s += "\nunknowns";
    for (const auto& u : eqs.unknowns) s += " " + u;
    s += "\n";
    for (const auto& e : eqs.equations) s += "eq " + equation_string(eqs, e) + "\n";
    return s;
}

SubspaceSpec parse_subspace(std::string_view text, const std::vector<std::string>& vars, SubspaceMode mode) {
    SubspaceSpec spec;
    spec.mode = mode;
    if (text.find('\n') != std::string_view::npos) throw ParseError(1, 1, "", "subspace must be a single line");
    Cursor c(lex(text, 1), 1);
    if (c.at(Tok::End)) return spec;
    const bool cov = mode == SubspaceMode::Covectors;
    while (true) {
        std::vector<Rational> row(vars.size(), 0);
        bool first = true;
        while (true) {
            int sign = 1;
            if (c.at(Tok::Plus) || c.at(Tok::Minus)) {
                sign = c.next().kind == Tok::Minus ? -1 : 1;
            } else if (!first) {
                break;
            }
            first = false;
            Rational coef = read_coefficient(c);
            int v = -1;
            if (cov) {
                if (c.at(Tok::At)) c.fail(c.peek(), "expected a covector d<var>, not a vector");
                const Token& name = c.expect(Tok::Name, "covector d<var>");
                if (name.text.size() < 2 || name.text[0] != 'd') c.fail(name, "expected a covector d<var>");
                v = find_name(vars, std::string_view(name.text).substr(1));
                if (v < 0) c.fail(name, "undeclared variable");
            } else {
                c.expect(Tok::At, "a vector @<var>");
                const Token& name = c.expect(Tok::Name, "variable name");
                v = find_name(vars, name.text);
                if (v < 0) c.fail(name, "undeclared variable");
            }
            row[static_cast<std::size_t>(v)] += sign < 0 ? Rational(-coef) : coef;
        }
        spec.rows.push_back(std::move(row));
        if (c.at(Tok::End)) break;
        c.expect(Tok::Comma, "',' or '+'/'-'");
    }
    return spec;
}

RSubspace to_subspace(const SubspaceSpec& spec, int n) {
    auto s = RSubspace::span(static_cast<std::size_t>(n), spec.rows);
    if (s.dim() != spec.rows.size())
        throw std::invalid_argument(spec.mode == SubspaceMode::Covectors ? "covectors are linearly dependent"
                                                                         : "vectors are linearly dependent");
    return s;
}

RSubspace vstar_from(const SubspaceSpec& spec, int n) {
    auto s = to_subspace(spec, n);
    return spec.mode == SubspaceMode::Covectors ? s : s.annihilator();
}

namespace {

template <class F>
std::string linear_form(const std::vector<F>& v, const std::vector<std::string>& vars, const std::string& prefix) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (is_zero(v[i])) continue;
        std::string c = to_string(v[i]);
        bool compound = c.find(' ') != std::string::npos;
        bool neg = !compound && c[0] == '-';
        if (neg) c.erase(0, 1);
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        if (compound)
            s += "(" + c + ") ";
        else if (c != "1")
            s += c + " ";
        s += prefix + vars.at(i);
    }
    return s.empty() ? "0" : s;
}

}  // namespace

std::string covector_string(const std::vector<Rational>& v, const std::vector<std::string>& vars) {
    return linear_form(v, vars, "d");
}

std::string covector_string(const std::vector<Gaussian>& v, const std::vector<std::string>& vars) {
    return linear_form(v, vars, "d");
}

std::string vector_string(const std::vector<Rational>& v, const std::vector<std::string>& vars) {
    return linear_form(v, vars, "@");
}

}  // namespace spencer
