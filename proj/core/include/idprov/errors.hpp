#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace idprov {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// extract
struct NotPythonFile : Error {
    using Error::Error;
};

// corpus
struct IoError : Error {
    using Error::Error;
};
struct ParseError : Error {
    ParseError(std::size_t line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

// index
struct DuplicateProductName : Error {
    using Error::Error;
};
struct UnknownIdentifier : Error {
    using Error::Error;
};
struct FormatError : Error {
    using Error::Error;
};
struct VersionError : Error {
    using Error::Error;
};

// sample
struct InsufficientIdentifiers : Error {
    using Error::Error;
};
struct NoFileBoundaries : Error {
    using Error::Error;
};

// search
struct EmptySubject : Error {
    using Error::Error;
};
struct UndefinedForEmptyResult : Error {
    using Error::Error;
};
struct TruthMissing : Error {
    explicit TruthMissing(std::vector<std::string> products);
    std::vector<std::string> missing;
};

}  // namespace idprov
