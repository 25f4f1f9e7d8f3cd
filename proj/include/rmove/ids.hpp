#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rmove/error.hpp"

namespace rmove {

inline constexpr std::string_view kIdSeparator = "::";

/// Opaque string identifier tagged by what it names.
template <class Tag>
class StrongId {
public:
    StrongId() = default;
    explicit StrongId(std::string value) : value_(std::move(value)) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend auto operator<=>(const StrongId&, const StrongId&) = default;
    friend bool operator==(const StrongId&, const StrongId&) = default;
    friend std::ostream& operator<<(std::ostream& os, const StrongId& id) { return os << id.value_; }

private:
    std::string value_;
};

struct ProjectTag {};
struct ClassTag {};
struct MethodTag {};

using ProjectId = StrongId<ProjectTag>;
using ClassId = StrongId<ClassTag>;
using MethodId = StrongId<MethodTag>;

namespace detail {

inline void check_component(std::string_view what, std::string_view component) {
    if (component.empty()) fail(ErrorKind::EmptyComponent, std::string(what) + " is empty");
    if (component.find(kIdSeparator) != std::string_view::npos)
        fail(ErrorKind::ComponentContainsSeparator,
             std::string(what) + " '" + std::string(component) + "' contains '::'");
}

} // namespace detail

inline ClassId make_class_id(std::string_view project, std::string_view class_path) {
    detail::check_component("project", project);
    detail::check_component("class path", class_path);
    std::string s;
    s.reserve(project.size() + class_path.size() + 2);
    s.append(project).append(kIdSeparator).append(class_path);
    return ClassId(std::move(s));
}

/// "project::package.Class::signature"
inline MethodId make_method_id(std::string_view project, std::string_view class_path,
                               std::string_view signature) {
    detail::check_component("signature", signature);
    auto cls = make_class_id(project, class_path);
    return MethodId(cls.str() + std::string(kIdSeparator) + std::string(signature));
}

/// Builds "name(T1,T2)" from a method name and its parameter types.
inline std::string make_signature(std::string_view name, const std::vector<std::string>& param_types) {
    std::string s(name);
    s += '(';
    for (std::size_t i = 0; i < param_types.size(); ++i) {
        if (i) s += ',';
        s += param_types[i];
    }
    s += ')';
    return s;
}

struct MethodIdParts {
    std::string project;
    std::string class_path;
    std::string signature;

    friend bool operator==(const MethodIdParts&, const MethodIdParts&) = default;
};

inline MethodIdParts parse_method_id(const MethodId& id) {
    const std::string& s = id.str();
    auto first = s.find(kIdSeparator);
    if (first == std::string::npos) fail(ErrorKind::BadFormat, "method id '" + s + "' lacks '::'");
    auto second = s.find(kIdSeparator, first + 2);
    if (second == std::string::npos) fail(ErrorKind::BadFormat, "method id '" + s + "' lacks signature");
    if (s.find(kIdSeparator, second + 2) != std::string::npos)
        fail(ErrorKind::BadFormat, "method id '" + s + "' has too many components");
    MethodIdParts parts{s.substr(0, first), s.substr(first + 2, second - first - 2), s.substr(second + 2)};
    if (parts.project.empty() || parts.class_path.empty() || parts.signature.empty())
        fail(ErrorKind::EmptyComponent, "method id '" + s + "' has an empty component");
    return parts;
}

/// "p::a.B::run(int)" -> "run".
inline std::string method_name(const MethodId& id) {
    const std::string sig = parse_method_id(id).signature;
    return sig.substr(0, sig.find('('));
}

inline ClassId owner_of(const MethodId& id) {
    auto parts = parse_method_id(id);
    return make_class_id(parts.project, parts.class_path);
}

inline ProjectId project_of(const ClassId& id) {
    auto pos = id.str().find(kIdSeparator);
    if (pos == std::string::npos) fail(ErrorKind::BadFormat, "class id '" + id.str() + "' lacks '::'");
    return ProjectId(id.str().substr(0, pos));
}

struct MethodRecord {
    MethodId id;
    ClassId owner;
    std::string name;
    std::vector<std::string> param_types;
    bool body_present = true;

    std::size_t arity() const noexcept { return param_types.size(); }
};

struct ClassRecord {
    ClassId id;
    ProjectId project;
    std::vector<MethodId> methods; // sorted, unique
};

/// One labeled Move Method instance: `method` currently lives in `source_class`
/// and belongs in `target_class`.
struct MoveMethodTriple {
    MethodId method;
    ClassId source_class;
    ClassId target_class;

    friend auto operator<=>(const MoveMethodTriple&, const MoveMethodTriple&) = default;
    friend bool operator==(const MoveMethodTriple&, const MoveMethodTriple&) = default;
};

inline MoveMethodTriple make_triple(MethodId method, ClassId source, ClassId target) {
    if (source == target)
        fail(ErrorKind::MalformedRecord, "triple for " + method.str() + " has source == target");
    if (owner_of(method) != source)
        fail(ErrorKind::MalformedRecord, "triple method " + method.str() + " is not owned by " + source.str());
    return {std::move(method), std::move(source), std::move(target)};
}

} // namespace rmove

template <class Tag>
struct std::hash<rmove::StrongId<Tag>> {
    std::size_t operator()(const rmove::StrongId<Tag>& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
