#include "idprov/identifier.hpp"

namespace idprov {

std::string_view to_string(Kind k) {
    return k == Kind::Class ? "class" : "function";
}

std::string_view to_string(Namespace ns) {
    return ns == Namespace::Code ? "code" : "filename";
}

std::optional<Kind> kind_from_string(std::string_view s) {
    if (s == "class") return Kind::Class;
    if (s == "function") return Kind::Function;
    return std::nullopt;
}

std::optional<Namespace> namespace_from_string(std::string_view s) {
    if (s == "code") return Namespace::Code;
    if (s == "filename") return Namespace::Filename;
    return std::nullopt;
}

}  // namespace idprov
