#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rmove/error.hpp"

namespace rmove {

/// Node labels of the Java-like subset. `Operator` leaves carry binary
/// operator symbols so that printing and re-parsing is lossless.
enum class NodeType {
    ClassDeclaration,
    MethodDeclaration,
    Parameter,
    Block,
    IfStatement,
    WhileStatement,
    ReturnStatement,
    ExpressionStatement,
    LocalDeclaration,
    Assignment,
    BinaryExpression,
    ConditionalExpression,
    MethodCall,
    FieldAccess,
    Identifier,
    Literal,
    Operator,
};

inline constexpr std::array<std::string_view, 17> kNodeTypeNames = {
    "ClassDeclaration", "MethodDeclaration",   "Parameter",        "Block",         "IfStatement",
    "WhileStatement",   "ReturnStatement",     "ExpressionStatement", "LocalDeclaration", "Assignment",
    "BinaryExpression", "ConditionalExpression", "MethodCall",     "FieldAccess",   "Identifier",
    "Literal",          "Operator",
};

inline std::string_view to_string(NodeType t) { return kNodeTypeNames[static_cast<std::size_t>(t)]; }

inline std::optional<NodeType> node_type_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kNodeTypeNames.size(); ++i)
        if (kNodeTypeNames[i] == s) return static_cast<NodeType>(i);
    return std::nullopt;
}

/// AST node. Leaves carry a token; inner nodes carry none.
struct AstNode {
    NodeType type = NodeType::Identifier;
    std::vector<AstNode> children;
    std::string token;

    bool is_leaf() const noexcept { return children.empty(); }

    static AstNode leaf(NodeType t, std::string tok) { return AstNode{t, {}, std::move(tok)}; }
    static AstNode inner(NodeType t, std::vector<AstNode> kids) { return AstNode{t, std::move(kids), {}}; }

    friend bool operator==(const AstNode&, const AstNode&) = default;
};

inline std::size_t count_nodes(const AstNode& n) {
    std::size_t c = 1;
    for (const auto& ch : n.children) c += count_nodes(ch);
    return c;
}

inline void collect_leaves(const AstNode& n, std::vector<const AstNode*>& out) {
    if (n.is_leaf()) {
        out.push_back(&n);
        return;
    }
    for (const auto& ch : n.children) collect_leaves(ch, out);
}

/// Compact s-expression form, used in diagnostics.
inline std::string to_sexpr(const AstNode& n) {
    if (n.is_leaf()) return std::string(to_string(n.type)) + ":" + n.token;
    std::string out = "(" + std::string(to_string(n.type));
    for (const auto& c : n.children) out += " " + to_sexpr(c);
    return out + ")";
}

inline void PrintTo(const AstNode& n, std::ostream* os) { *os << to_sexpr(n); }

namespace detail {

inline bool is_composite_expr(const AstNode& n) {
    return n.type == NodeType::BinaryExpression || n.type == NodeType::ConditionalExpression ||
           n.type == NodeType::Assignment;
}

inline void print_expr(const AstNode& n, std::string& out);

inline void print_operand(const AstNode& n, std::string& out) {
    if (is_composite_expr(n)) {
        out += '(';
        print_expr(n, out);
        out += ')';
    } else {
        print_expr(n, out);
    }
}

inline void print_expr(const AstNode& n, std::string& out) {
    switch (n.type) {
    case NodeType::Identifier:
    case NodeType::Literal: out += n.token; break;
    case NodeType::FieldAccess:
        // numeric literals would swallow the dot
        if (n.children.at(0).type == NodeType::Literal) {
            out += '(';
            print_expr(n.children[0], out);
            out += ')';
        } else {
            print_operand(n.children.at(0), out);
        }
        out += '.';
        out += n.children.at(1).token;
        break;
    case NodeType::MethodCall:
        print_expr(n.children.at(0), out);
        out += '(';
        for (std::size_t i = 1; i < n.children.size(); ++i) {
            if (i > 1) out += ", ";
            print_expr(n.children[i], out);
        }
        out += ')';
        break;
    case NodeType::Assignment:
        print_expr(n.children.at(0), out);
        out += " = ";
        print_expr(n.children.at(1), out);
        break;
    case NodeType::BinaryExpression:
        print_operand(n.children.at(0), out);
        out += ' ';
        out += n.children.at(1).token;
        out += ' ';
        print_operand(n.children.at(2), out);
        break;
    case NodeType::ConditionalExpression:
        print_operand(n.children.at(0), out);
        out += " ? ";
        print_operand(n.children.at(1), out);
        out += " : ";
        print_operand(n.children.at(2), out);
        break;
    default: fail(ErrorKind::BadFormat, "not an expression node: " + std::string(to_string(n.type)));
    }
}

inline void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 4, ' '); }

inline void print_stmt(const AstNode& n, std::string& out, int depth);

inline void print_block(const AstNode& n, std::string& out, int depth) {
    out += "{\n";
    for (const auto& s : n.children) print_stmt(s, out, depth + 1);
    indent(out, depth);
    out += "}";
}

inline void print_stmt(const AstNode& n, std::string& out, int depth) {
    indent(out, depth);
    switch (n.type) {
    case NodeType::Block: print_block(n, out, depth); break;
    case NodeType::IfStatement:
        out += "if (";
        print_expr(n.children.at(0), out);
        out += ")\n";
        print_stmt(n.children.at(1), out, depth + 1);
        if (n.children.size() > 2) {
            indent(out, depth);
            out += "else\n";
            print_stmt(n.children[2], out, depth + 1);
        }
        return;
    case NodeType::WhileStatement:
        out += "while (";
        print_expr(n.children.at(0), out);
        out += ")\n";
        print_stmt(n.children.at(1), out, depth + 1);
        return;
    case NodeType::ReturnStatement:
        out += "return";
        if (!n.is_leaf()) {
            out += ' ';
            print_expr(n.children[0], out);
        }
        out += ';';
        break;
    case NodeType::ExpressionStatement:
        print_expr(n.children.at(0), out);
        out += ';';
        break;
    case NodeType::LocalDeclaration:
        out += n.children.at(0).token + " " + n.children.at(1).token;
        if (n.children.size() > 2) {
            out += " = ";
            print_expr(n.children[2], out);
        }
        out += ';';
        break;
    default: fail(ErrorKind::BadFormat, "not a statement node: " + std::string(to_string(n.type)));
    }
    out += '\n';
}

} // namespace detail

/// Source text for a MethodDeclaration subtree, parseable by the subset grammar.
inline std::string print_method(const AstNode& m, int depth = 1) {
    if (m.type != NodeType::MethodDeclaration) fail(ErrorKind::NotAMethodAst, "print_method expects MethodDeclaration");
    std::string out;
    detail::indent(out, depth);
    out += m.children.at(0).token + " " + m.children.at(1).token + "(";
    std::size_t i = 2;
    bool first = true;
    for (; i < m.children.size() && m.children[i].type == NodeType::Parameter; ++i) {
        if (!first) out += ", ";
        first = false;
        out += m.children[i].children.at(0).token + " " + m.children[i].children.at(1).token;
    }
    out += ") ";
    detail::print_block(m.children.at(i), out, depth);
    out += '\n';
    return out;
}

/// Source text for a ClassDeclaration subtree (children: name, fields, methods).
inline std::string print_class(const AstNode& c) {
    if (c.type != NodeType::ClassDeclaration) fail(ErrorKind::BadFormat, "print_class expects ClassDeclaration");
    std::string out = "class " + c.children.at(0).token + " {\n";
    for (std::size_t i = 1; i < c.children.size(); ++i) {
        const auto& member = c.children[i];
        if (member.type == NodeType::MethodDeclaration) out += print_method(member);
        else detail::print_stmt(member, out, 1);
    }
    out += "}\n";
    return out;
}

} // namespace rmove
