#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "idprov/identifier.hpp"

namespace idprov {

/// One source file of a release. `path` is relative, `/`-separated;
/// `text` is UTF-8, lossy-decoded if the original bytes were invalid.
struct SourceFile {
    std::string path;
    std::string text;
};

/// Replaces ill-formed UTF-8 sequences with U+FFFD. Valid input passes
/// through unchanged.
std::string sanitize_utf8(std::string_view bytes);

/// True if the final path component ends in ".py" (case-insensitive).
bool is_python_path(std::string_view path);

/// Scans Python source text for `class NAME` and `def NAME(` declarations
/// at any nesting depth while tracking string-literal and comment context,
/// so fake declarations inside either are ignored. `async def` counts as a
/// Function. Total on arbitrary input: unparseable regions are skipped.
/// Names are returned verbatim.
std::set<ExtractedIdentifier> extract_code_identifiers(std::string_view text);

/// Final path component with the ".py" suffix (case-insensitive) removed.
/// Throws NotPythonFile if the suffix is absent.
std::string extract_filename_identifier(std::string_view path);

struct ReleaseExtraction {
    /// Per-file identifier sets, keyed by relative path. File boundaries
    /// are retained because the sampling strategies need them.
    std::map<std::string, std::set<ExtractedIdentifier>> files;
    /// Path-less module names of every .py file, declarations or not.
    std::set<std::string> filenames;
};

/// Batches extract_code_identifiers over a release. Only paths matching
/// .py (case-insensitive) contribute.
ReleaseExtraction extract_release(const std::vector<SourceFile>& files);

}  // namespace idprov
