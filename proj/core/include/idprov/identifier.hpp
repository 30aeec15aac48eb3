#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace idprov {

/// Kind of a declared code identifier. Class and function names share the
/// code namespace; the kind is kept as bookkeeping only.
enum class Kind { Class, Function };

/// Identifier universe an entry belongs to. Code holds class and function
/// names merged; filenames (path-less module names) live apart.
enum class Namespace { Code, Filename };

struct ExtractedIdentifier {
    std::string name;
    Kind kind;

    auto operator<=>(const ExtractedIdentifier&) const = default;
};

std::string_view to_string(Kind k);
std::string_view to_string(Namespace ns);
std::optional<Kind> kind_from_string(std::string_view s);
std::optional<Namespace> namespace_from_string(std::string_view s);

}  // namespace idprov
