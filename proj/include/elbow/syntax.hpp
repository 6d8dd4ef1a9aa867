#pragma once

// Abstract syntax, parser and printer for EL-with-betweenness TBoxes.
//
// Concept grammar (surface syntax, ASCII):
//   concept := "top" | NAME | concept "&" concept
//            | "some" ROLE "." concept | "btw(" concept "," concept ")"
// Statements:
//   natural A, B;        declares natural concept names
//   C <= D;              concept inclusion
//   ni(A; C, D);         non-interference assertion
//
// "&" is left-associative; "some" extends maximally to the right.

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace elbow {

enum class ConceptKind { Top, BottomToken, Name, Conj, Exists, Between };

class Concept;
using ConceptPtr = std::shared_ptr<const Concept>;

// Immutable concept expression node. BottomToken never appears in parsed
// input; it exists only as the bookkeeping marker returned by subconcepts().
class Concept {
public:
    ConceptKind kind;
    std::string label;    // Name: concept name; Exists: role name
    ConceptPtr lhs, rhs;  // Conj/Between operands; Exists filler in rhs

    Concept(ConceptKind k, std::string l, ConceptPtr a, ConceptPtr b)
        : kind(k), label(std::move(l)), lhs(std::move(a)), rhs(std::move(b)) {}
};

inline ConceptPtr make_top() {
    static const ConceptPtr t = std::make_shared<Concept>(ConceptKind::Top, "", nullptr, nullptr);
    return t;
}

inline ConceptPtr make_bottom_token() {
    static const ConceptPtr b =
        std::make_shared<Concept>(ConceptKind::BottomToken, "", nullptr, nullptr);
    return b;
}

inline ConceptPtr make_name(std::string n) {
    return std::make_shared<Concept>(ConceptKind::Name, std::move(n), nullptr, nullptr);
}

inline ConceptPtr make_conj(ConceptPtr a, ConceptPtr b) {
    return std::make_shared<Concept>(ConceptKind::Conj, "", std::move(a), std::move(b));
}

inline ConceptPtr make_exists(std::string role, ConceptPtr filler) {
    return std::make_shared<Concept>(ConceptKind::Exists, std::move(role), nullptr,
                                     std::move(filler));
}

inline ConceptPtr make_between(ConceptPtr a, ConceptPtr b) {
    return std::make_shared<Concept>(ConceptKind::Between, "", std::move(a), std::move(b));
}

// Total order on concept expressions; 0 on structural equality.
inline int compare(const ConceptPtr& a, const ConceptPtr& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    if (int c = a->label.compare(b->label)) return c < 0 ? -1 : 1;
    auto cmp_child = [](const ConceptPtr& x, const ConceptPtr& y) {
        if (!x && !y) return 0;
        if (!x) return -1;
        if (!y) return 1;
        return compare(x, y);
    };
    if (int c = cmp_child(a->lhs, b->lhs)) return c;
    return cmp_child(a->rhs, b->rhs);
}

inline bool equal(const ConceptPtr& a, const ConceptPtr& b) { return compare(a, b) == 0; }

struct ConceptLess {
    bool operator()(const ConceptPtr& a, const ConceptPtr& b) const { return compare(a, b) < 0; }
};

using ConceptSet = std::set<ConceptPtr, ConceptLess>;

namespace detail {

// Parenthesization rules mirror the parser exactly so render/parse round-trips
// structurally: conj chains print left-associative, an Exists in non-tail
// position must be wrapped (it would otherwise swallow the rest of the chain).
inline void render_concept(const ConceptPtr& c, std::ostream& os, bool conj_lhs) {
    switch (c->kind) {
        case ConceptKind::Top:
            os << "top";
            break;
        case ConceptKind::BottomToken:
            os << "<bot>";
            break;
        case ConceptKind::Name:
            os << c->label;
            break;
        case ConceptKind::Conj: {
            bool wrap = conj_lhs;  // a Conj as rhs of a Conj needs parens (right nesting)
            if (wrap) {
                render_concept(c, os, false);
                return;
            }
            render_concept(c->lhs, os, c->lhs->kind == ConceptKind::Conj ? false : true);
            if (c->lhs->kind == ConceptKind::Exists) {
                // handled below via wrapping in the Exists case
            }
            os << " & ";
            if (c->rhs->kind == ConceptKind::Conj) {
                os << "(";
                render_concept(c->rhs, os, false);
                os << ")";
            } else {
                render_concept(c->rhs, os, true);
            }
            break;
        }
        case ConceptKind::Exists:
            if (conj_lhs) {
                os << "(";
                os << "some " << c->label << ".";
                render_concept(c->rhs, os, false);
                os << ")";
            } else {
                os << "some " << c->label << ".";
                render_concept(c->rhs, os, false);
            }
            break;
        case ConceptKind::Between:
            os << "btw(";
            render_concept(c->lhs, os, false);
            os << ", ";
            render_concept(c->rhs, os, false);
            os << ")";
            break;
    }
}

}  // namespace detail

inline std::string to_string(const ConceptPtr& c) {
    std::ostringstream os;
    detail::render_concept(c, os, false);
    return os.str();
}

struct ConceptInclusion {
    ConceptPtr lhs, rhs;
};

struct NonInterference {
    ConceptPtr guard;
    std::string first, second;
};

struct Statement {
    std::variant<ConceptInclusion, NonInterference> value;
    int line = 0, col = 0;

    bool is_ci() const { return std::holds_alternative<ConceptInclusion>(value); }
    const ConceptInclusion& ci() const { return std::get<ConceptInclusion>(value); }
    const NonInterference& ni() const { return std::get<NonInterference>(value); }
};

inline bool equal(const Statement& a, const Statement& b) {
    if (a.is_ci() != b.is_ci()) return false;
    if (a.is_ci())
        return equal(a.ci().lhs, b.ci().lhs) && equal(a.ci().rhs, b.ci().rhs);
    return equal(a.ni().guard, b.ni().guard) && a.ni().first == b.ni().first &&
           a.ni().second == b.ni().second;
}

class TBox {
public:
    std::vector<Statement> statements;
    std::set<std::string> natural_names;

    void add_ci(ConceptPtr lhs, ConceptPtr rhs) {
        statements.push_back(Statement{ConceptInclusion{std::move(lhs), std::move(rhs)}});
    }
    void add_ni(ConceptPtr guard, std::string first, std::string second) {
        statements.push_back(
            Statement{NonInterference{std::move(guard), std::move(first), std::move(second)}});
    }

    bool has_ni() const {
        for (const auto& s : statements)
            if (!s.is_ci()) return true;
        return false;
    }

    std::set<std::string> concept_names() const {
        std::set<std::string> out;
        for (const auto& s : statements) {
            if (s.is_ci()) {
                collect_names(s.ci().lhs, out);
                collect_names(s.ci().rhs, out);
            } else {
                collect_names(s.ni().guard, out);
                out.insert(s.ni().first);
                out.insert(s.ni().second);
            }
        }
        return out;
    }

    std::set<std::string> role_names() const {
        std::set<std::string> out;
        for (const auto& s : statements) {
            if (s.is_ci()) {
                collect_roles(s.ci().lhs, out);
                collect_roles(s.ci().rhs, out);
            }
        }
        return out;
    }

private:
    static void collect_names(const ConceptPtr& c, std::set<std::string>& out) {
        if (!c) return;
        if (c->kind == ConceptKind::Name) out.insert(c->label);
        collect_names(c->lhs, out);
        collect_names(c->rhs, out);
    }
    static void collect_roles(const ConceptPtr& c, std::set<std::string>& out) {
        if (!c) return;
        if (c->kind == ConceptKind::Exists) out.insert(c->label);
        collect_roles(c->lhs, out);
        collect_roles(c->rhs, out);
    }
};

inline bool equal(const TBox& a, const TBox& b) {
    if (a.natural_names != b.natural_names) return false;
    if (a.statements.size() != b.statements.size()) return false;
    for (size_t i = 0; i < a.statements.size(); ++i)
        if (!equal(a.statements[i], b.statements[i])) return false;
    return true;
}

// A natural concept is built only from declared natural names, conjunction
// and betweenness.
inline bool is_natural_concept(const ConceptPtr& c, const std::set<std::string>& natural) {
    switch (c->kind) {
        case ConceptKind::Name:
            return natural.count(c->label) > 0;
        case ConceptKind::Conj:
        case ConceptKind::Between:
            return is_natural_concept(c->lhs, natural) && is_natural_concept(c->rhs, natural);
        default:
            return false;
    }
}

class TBoxError : public std::runtime_error {
public:
    int line, col;
    TBoxError(const std::string& msg, int l, int c)
        : std::runtime_error(msg + " (line " + std::to_string(l) + ", col " + std::to_string(c) +
                             ")"),
          line(l),
          col(c) {}
};

class SyntaxError : public TBoxError {
public:
    using TBoxError::TBoxError;
};

// Naturalness violations (a betweenness operand or NI participant that is not
// a natural concept) are semantic, not syntactic.
class NaturalnessError : public TBoxError {
public:
    using TBoxError::TBoxError;
};

namespace detail {

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    struct Token {
        enum Kind { Ident, Symbol, End } kind;
        std::string value;
        int line, col;
    };

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Token::End;
            return t;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                    text_[pos_] == '\'')) {
                advance();
            }
            t.kind = Token::Ident;
            t.value = text_.substr(start, pos_ - start);
            return t;
        }
        if (c == '<' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
            advance();
            advance();
            t.kind = Token::Symbol;
            t.value = "<=";
            return t;
        }
        if (std::string("&.,;()").find(c) != std::string::npos) {
            advance();
            t.kind = Token::Symbol;
            t.value = std::string(1, c);
            return t;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
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

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { bump(); }

    // Standalone concept expression; naturalness is a TBox-level property and
    // is not checked here.
    ConceptPtr parse_single_concept() {
        ConceptPtr c = parse_concept();
        if (tok_.kind != Lexer::Token::End)
            throw SyntaxError("trailing input after concept", tok_.line, tok_.col);
        return c;
    }

    TBox parse_tbox() {
        TBox t;
        while (tok_.kind != Lexer::Token::End) {
            if (tok_.kind == Lexer::Token::Ident && tok_.value == "natural") {
                bump();
                for (;;) {
                    t.natural_names.insert(expect_ident("concept name"));
                    if (is_symbol(",")) {
                        bump();
                        continue;
                    }
                    break;
                }
                expect_symbol(";");
            } else if (tok_.kind == Lexer::Token::Ident && tok_.value == "ni") {
                int line = tok_.line, col = tok_.col;
                bump();
                expect_symbol("(");
                ConceptPtr guard = parse_concept();
                expect_symbol(";");
                std::string first = expect_ident("natural concept name");
                expect_symbol(",");
                std::string second = expect_ident("natural concept name");
                expect_symbol(")");
                expect_symbol(";");
                t.statements.push_back(Statement{NonInterference{guard, first, second}, line, col});
            } else {
                int line = tok_.line, col = tok_.col;
                ConceptPtr lhs = parse_concept();
                expect_symbol("<=");
                ConceptPtr rhs = parse_concept();
                expect_symbol(";");
                t.statements.push_back(Statement{ConceptInclusion{lhs, rhs}, line, col});
            }
        }
        check_naturalness(t);
        return t;
    }

private:
    ConceptPtr parse_concept() {
        ConceptPtr c = parse_term();
        while (is_symbol("&")) {
            bump();
            c = make_conj(c, parse_term());
        }
        return c;
    }

    ConceptPtr parse_term() {
        if (tok_.kind == Lexer::Token::Ident) {
            if (tok_.value == "top") {
                bump();
                return make_top();
            }
            if (tok_.value == "some") {
                bump();
                std::string role = expect_ident("role name");
                expect_symbol(".");
                return make_exists(role, parse_concept());  // maximally right
            }
            if (tok_.value == "btw") {
                bump();
                expect_symbol("(");
                ConceptPtr a = parse_concept();
                expect_symbol(",");
                ConceptPtr b = parse_concept();
                expect_symbol(")");
                return make_between(a, b);
            }
            std::string n = tok_.value;
            bump();
            return make_name(n);
        }
        if (is_symbol("(")) {
            bump();
            ConceptPtr c = parse_concept();
            expect_symbol(")");
            return c;
        }
        throw SyntaxError("expected concept", tok_.line, tok_.col);
    }

    void check_naturalness(const TBox& t) const {
        for (const auto& s : t.statements) {
            if (s.is_ci()) {
                check_between_operands(s.ci().lhs, t.natural_names, s.line, s.col);
                check_between_operands(s.ci().rhs, t.natural_names, s.line, s.col);
            } else {
                const auto& ni = s.ni();
                check_between_operands(ni.guard, t.natural_names, s.line, s.col);
                if (!is_natural_concept(ni.guard, t.natural_names))
                    throw NaturalnessError("ni guard '" + elbow::to_string(ni.guard) +
                                               "' is not a natural concept",
                                           s.line, s.col);
                for (const auto& n : {ni.first, ni.second})
                    if (!t.natural_names.count(n))
                        throw NaturalnessError("ni participant '" + n + "' is not natural", s.line,
                                               s.col);
            }
        }
    }

    static void check_between_operands(const ConceptPtr& c, const std::set<std::string>& natural,
                                       int line, int col) {
        if (!c) return;
        if (c->kind == ConceptKind::Between) {
            for (const auto& op : {c->lhs, c->rhs}) {
                if (!is_natural_concept(op, natural))
                    throw NaturalnessError(
                        "btw operand '" + elbow::to_string(op) + "' is not a natural concept",
                        line, col);
            }
        }
        check_between_operands(c->lhs, natural, line, col);
        check_between_operands(c->rhs, natural, line, col);
    }

    bool is_symbol(const std::string& s) const {
        return tok_.kind == Lexer::Token::Symbol && tok_.value == s;
    }
    void expect_symbol(const std::string& s) {
        if (!is_symbol(s)) throw SyntaxError("expected '" + s + "'", tok_.line, tok_.col);
        bump();
    }
    std::string expect_ident(const std::string& what) {
        if (tok_.kind != Lexer::Token::Ident)
            throw SyntaxError("expected " + what, tok_.line, tok_.col);
        std::string v = tok_.value;
        bump();
        return v;
    }
    void bump() { tok_ = lexer_.next(); }

    Lexer lexer_;
    Lexer::Token tok_;
};

}  // namespace detail

inline TBox parse_tbox(const std::string& text) { return detail::Parser(text).parse_tbox(); }

inline ConceptPtr parse_concept(const std::string& text) {
    return detail::Parser(text).parse_single_concept();
}

inline std::string render_tbox(const TBox& t) {
    std::ostringstream os;
    if (!t.natural_names.empty()) {
        os << "natural ";
        bool first = true;
        for (const auto& n : t.natural_names) {
            if (!first) os << ", ";
            os << n;
            first = false;
        }
        os << ";\n";
    }
    for (const auto& s : t.statements) {
        if (s.is_ci()) {
            os << to_string(s.ci().lhs) << " <= " << to_string(s.ci().rhs) << ";\n";
        } else {
            os << "ni(" << to_string(s.ni().guard) << "; " << s.ni().first << ", " << s.ni().second
               << ");\n";
        }
    }
    return os.str();
}

// The sub_T set: top and the bottom token, every concept name of the
// signature, every betweenness on a CI right-hand side and every conjunction
// on a CI left-hand side.
inline ConceptSet subconcepts(const TBox& t) {
    ConceptSet out;
    out.insert(make_top());
    out.insert(make_bottom_token());
    for (const auto& n : t.concept_names()) out.insert(make_name(n));
    for (const auto& s : t.statements) {
        if (!s.is_ci()) continue;
        if (s.ci().rhs->kind == ConceptKind::Between) out.insert(s.ci().rhs);
        if (s.ci().lhs->kind == ConceptKind::Conj) out.insert(s.ci().lhs);
    }
    return out;
}

}  // namespace elbow
