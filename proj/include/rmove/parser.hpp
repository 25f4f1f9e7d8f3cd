#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "rmove/ast.hpp"
#include "rmove/error.hpp"

// Recursive-descent parser for the Java-like subset:
//
//   file      := ('package' qname ';')? class*
//   class     := modifier* 'class' Ident '{' member* '}'
//   member    := modifier* type Ident ( ('=' expr)? ';' | '(' params ')' block )
//   stmt      := block | if | while | return | type Ident ('=' expr)? ';' | expr ';'
//   expr      := ternary ('=' expr)?
//   ternary   := binary ('?' expr ':' ternary)?
//   binary    := postfix (binop postfix)*            precedence climbing
//   postfix   := primary ('.' Ident | '(' args ')')*
//   primary   := Ident | literal | '-' number | '(' expr ')'

namespace rmove {

struct ParsedClass {
    std::string name;
    AstNode ast; // ClassDeclaration: [Identifier name, member...]
};

struct ParsedFile {
    std::string path;
    std::string package; // dotted, may be empty
    std::vector<ParsedClass> classes;
};

namespace detail {

enum class Tok { Ident, Number, String, Char, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

class Lexer {
public:
    Lexer(std::string_view path, std::string_view src) : path_(path), src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", line_, col_});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                advance();
                advance();
                while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
                if (pos_ >= src_.size()) error("'*/'");
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    [[noreturn]] void error(std::string_view expected) const {
        fail(ErrorKind::SyntaxError, std::string(path_) + ":" + std::to_string(line_) + ":" + std::to_string(col_) +
                                         ": expected " + std::string(expected));
    }

    Token next() {
        const int line = line_, col = col_;
        const std::size_t start = pos_;
        char c = peek();
        if (is_ident_start(c)) {
            while (is_ident_char(peek())) advance();
            return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), line, col};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '_') advance();
            return {Tok::Number, std::string(src_.substr(start, pos_ - start)), line, col};
        }
        if (c == '"' || c == '\'') {
            const char quote = c;
            advance();
            while (pos_ < src_.size() && peek() != quote) {
                if (peek() == '\\') advance();
                if (pos_ < src_.size()) advance();
                if (peek() == '\n') error("closing quote");
            }
            if (pos_ >= src_.size()) error("closing quote");
            advance();
            return {quote == '"' ? Tok::String : Tok::Char, std::string(src_.substr(start, pos_ - start)), line, col};
        }
        static constexpr std::string_view two[] = {"==", "!=", "<=", ">=", "&&", "||"};
        for (auto op : two) {
            if (src_.substr(pos_, 2) == op) {
                advance();
                advance();
                return {Tok::Punct, std::string(op), line, col};
            }
        }
        static constexpr std::string_view single = "+-*/%<>=!?:;,.(){}[]";
        if (single.find(c) != std::string_view::npos) {
            advance();
            return {Tok::Punct, std::string(1, c), line, col};
        }
        error("a token");
    }

    std::string_view path_;
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

inline int binary_precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return 0;
}

inline bool is_modifier(std::string_view s) {
    return s == "public" || s == "private" || s == "protected" || s == "static" || s == "final";
}

inline bool is_keyword(std::string_view s) {
    return s == "class" || s == "package" || s == "if" || s == "else" || s == "while" || s == "return" ||
           is_modifier(s);
}

class Parser {
public:
    Parser(std::string path, std::vector<Token> toks) : path_(std::move(path)), toks_(std::move(toks)) {}

    ParsedFile parse_file() {
        ParsedFile file;
        file.path = path_;
        if (at_word("package")) {
            ++pos_;
            file.package = expect_ident("package name");
            while (at(".")) {
                ++pos_;
                file.package += "." + expect_ident("package name component");
            }
            expect(";");
        }
        while (cur().kind != Tok::End) file.classes.push_back(parse_class());
        return file;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& look(std::size_t k) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(std::string_view punct) const { return cur().kind == Tok::Punct && cur().text == punct; }
    bool at_word(std::string_view w) const { return cur().kind == Tok::Ident && cur().text == w; }

    [[noreturn]] void error(std::string_view expected) const {
        fail(ErrorKind::SyntaxError, path_ + ":" + std::to_string(cur().line) + ":" + std::to_string(cur().col) +
                                         ": expected " + std::string(expected) + " but found '" + cur().text + "'");
    }

    void expect(std::string_view punct) {
        if (!at(punct)) error("'" + std::string(punct) + "'");
        ++pos_;
    }

    std::string expect_ident(std::string_view what) {
        if (cur().kind != Tok::Ident || is_keyword(cur().text)) error(what);
        return toks_[pos_++].text;
    }

    void skip_modifiers() {
        while (cur().kind == Tok::Ident && is_modifier(cur().text)) ++pos_;
    }

    // type := Ident ('.' Ident)* ('[' ']')*
    std::string parse_type() {
        std::string t = expect_ident("a type name");
        while (at(".") && look(1).kind == Tok::Ident) {
            ++pos_;
            t += "." + expect_ident("a type name");
        }
        while (at("[") && look(1).kind == Tok::Punct && look(1).text == "]") {
            pos_ += 2;
            t += "[]";
        }
        return t;
    }

    // Lookahead for `type Ident` at the current position without consuming.
    bool starts_declaration() const {
        std::size_t k = pos_;
        if (toks_[k].kind != Tok::Ident || is_keyword(toks_[k].text)) return false;
        ++k;
        while (toks_[k].kind == Tok::Punct && toks_[k].text == "." && toks_[k + 1].kind == Tok::Ident) k += 2;
        while (toks_[k].kind == Tok::Punct && toks_[k].text == "[" && toks_[k + 1].kind == Tok::Punct &&
               toks_[k + 1].text == "]")
            k += 2;
        return toks_[k].kind == Tok::Ident && !is_keyword(toks_[k].text);
    }

    ParsedClass parse_class() {
        skip_modifiers();
        if (!at_word("class")) error("'class'");
        ++pos_;
        ParsedClass cls;
        cls.name = expect_ident("a class name");
        std::vector<AstNode> members;
        members.push_back(AstNode::leaf(NodeType::Identifier, cls.name));
        expect("{");
        while (!at("}")) {
            if (cur().kind == Tok::End) error("'}'");
            members.push_back(parse_member());
        }
        expect("}");
        cls.ast = AstNode::inner(NodeType::ClassDeclaration, std::move(members));
        return cls;
    }

    AstNode parse_member() {
        skip_modifiers();
        std::string type = parse_type();
        std::string name = expect_ident("a member name");
        if (at("(")) {
            ++pos_;
            std::vector<AstNode> kids;
            kids.push_back(AstNode::leaf(NodeType::Identifier, type));
            kids.push_back(AstNode::leaf(NodeType::Identifier, name));
            if (!at(")")) {
                for (;;) {
                    skip_modifiers();
                    std::string ptype = parse_type();
                    std::string pname = expect_ident("a parameter name");
                    kids.push_back(AstNode::inner(NodeType::Parameter, {AstNode::leaf(NodeType::Identifier, ptype),
                                                                        AstNode::leaf(NodeType::Identifier, pname)}));
                    if (at(",")) {
                        ++pos_;
                        continue;
                    }
                    break;
                }
            }
            expect(")");
            kids.push_back(parse_block());
            return AstNode::inner(NodeType::MethodDeclaration, std::move(kids));
        }
        std::vector<AstNode> kids{AstNode::leaf(NodeType::Identifier, type), AstNode::leaf(NodeType::Identifier, name)};
        if (at("=")) {
            ++pos_;
            kids.push_back(parse_expr());
        }
        expect(";");
        return AstNode::inner(NodeType::LocalDeclaration, std::move(kids));
    }

    AstNode parse_block() {
        expect("{");
        std::vector<AstNode> stmts;
        while (!at("}")) {
            if (cur().kind == Tok::End) error("'}'");
            stmts.push_back(parse_stmt());
        }
        expect("}");
        if (stmts.empty()) return AstNode::leaf(NodeType::Block, "{}");
        return AstNode::inner(NodeType::Block, std::move(stmts));
    }

    AstNode parse_stmt() {
        if (at("{")) return parse_block();
        if (at_word("if")) {
            ++pos_;
            expect("(");
            std::vector<AstNode> kids{parse_expr()};
            expect(")");
            kids.push_back(parse_stmt());
            if (at_word("else")) {
                ++pos_;
                kids.push_back(parse_stmt());
            }
            return AstNode::inner(NodeType::IfStatement, std::move(kids));
        }
        if (at_word("while")) {
            ++pos_;
            expect("(");
            std::vector<AstNode> kids{parse_expr()};
            expect(")");
            kids.push_back(parse_stmt());
            return AstNode::inner(NodeType::WhileStatement, std::move(kids));
        }
        if (at_word("return")) {
            ++pos_;
            if (at(";")) {
                ++pos_;
                return AstNode::leaf(NodeType::ReturnStatement, "return");
            }
            AstNode value = parse_expr();
            expect(";");
            return AstNode::inner(NodeType::ReturnStatement, {std::move(value)});
        }
        if (starts_declaration()) {
            std::string type = parse_type();
            std::string name = expect_ident("a variable name");
            std::vector<AstNode> kids{AstNode::leaf(NodeType::Identifier, type),
                                      AstNode::leaf(NodeType::Identifier, name)};
            if (at("=")) {
                ++pos_;
                kids.push_back(parse_expr());
            }
            expect(";");
            return AstNode::inner(NodeType::LocalDeclaration, std::move(kids));
        }
        AstNode e = parse_expr();
        expect(";");
        return AstNode::inner(NodeType::ExpressionStatement, {std::move(e)});
    }

    AstNode parse_expr() {
        AstNode lhs = parse_ternary();
        if (at("=")) {
            if (lhs.type != NodeType::Identifier && lhs.type != NodeType::FieldAccess) error("an assignable target");
            ++pos_;
            AstNode rhs = parse_expr();
            return AstNode::inner(NodeType::Assignment, {std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    AstNode parse_ternary() {
        AstNode cond = parse_binary(1);
        if (!at("?")) return cond;
        ++pos_;
        AstNode then = parse_expr();
        expect(":");
        AstNode otherwise = parse_ternary();
        return AstNode::inner(NodeType::ConditionalExpression, {std::move(cond), std::move(then), std::move(otherwise)});
    }

    AstNode parse_binary(int min_prec) {
        AstNode lhs = parse_postfix();
        for (;;) {
            if (cur().kind != Tok::Punct) return lhs;
            const int prec = binary_precedence(cur().text);
            if (prec == 0 || prec < min_prec) return lhs;
            std::string op = toks_[pos_++].text;
            AstNode rhs = parse_binary(prec + 1);
            lhs = AstNode::inner(NodeType::BinaryExpression,
                                 {std::move(lhs), AstNode::leaf(NodeType::Operator, op), std::move(rhs)});
        }
    }

    AstNode parse_postfix() {
        AstNode e = parse_primary();
        for (;;) {
            if (at(".")) {
                ++pos_;
                std::string member = expect_ident("a member name");
                e = AstNode::inner(NodeType::FieldAccess, {std::move(e), AstNode::leaf(NodeType::Identifier, member)});
            } else if (at("(")) {
                if (e.type != NodeType::Identifier && e.type != NodeType::FieldAccess) error("a callable name");
                ++pos_;
                std::vector<AstNode> kids{std::move(e)};
                if (!at(")")) {
                    for (;;) {
                        kids.push_back(parse_expr());
                        if (at(",")) {
                            ++pos_;
                            continue;
                        }
                        break;
                    }
                }
                expect(")");
                e = AstNode::inner(NodeType::MethodCall, std::move(kids));
            } else {
                return e;
            }
        }
    }

    AstNode parse_primary() {
        const Token& t = cur();
        if (t.kind == Tok::Ident) {
            if (t.text == "true" || t.text == "false" || t.text == "null") {
                ++pos_;
                return AstNode::leaf(NodeType::Literal, t.text);
            }
            return AstNode::leaf(NodeType::Identifier, expect_ident("an expression"));
        }
        if (t.kind == Tok::Number || t.kind == Tok::String || t.kind == Tok::Char) {
            ++pos_;
            return AstNode::leaf(NodeType::Literal, t.text);
        }
        if (at("-") && look(1).kind == Tok::Number) {
            std::string lit = "-" + look(1).text;
            pos_ += 2;
            return AstNode::leaf(NodeType::Literal, lit);
        }
        if (at("(")) {
            ++pos_;
            AstNode inner = parse_expr();
            expect(")");
            return inner;
        }
        error("an expression");
    }

    std::string path_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses one source file of the subset grammar. Throws SyntaxError with position.
inline ParsedFile parse_file(std::string path, std::string_view text) {
    detail::Lexer lexer(path, text);
    detail::Parser parser(path, lexer.run());
    return parser.parse_file();
}

/// Parses a single method declaration (used for round-trip checks).
inline AstNode parse_method_text(std::string_view text) {
    std::string wrapped = "class Wrapper__ {\n" + std::string(text) + "\n}\n";
    auto file = parse_file("<method>", wrapped);
    for (auto& member : file.classes.at(0).ast.children)
        if (member.type == NodeType::MethodDeclaration) return member;
    fail(ErrorKind::SyntaxError, "<method>: no method declaration found");
}

} // namespace rmove
