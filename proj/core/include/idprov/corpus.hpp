#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "idprov/extract.hpp"
#include "idprov/identifier.hpp"

namespace idprov {

struct ReleaseRecord {
    std::string release_id;
    /// Relative path -> code identifiers declared in that file. Releases
    /// ingested from a manifest keep everything under the "" key and set
    /// file_boundaries = false; the sampling strategies refuse those.
    std::map<std::string, std::set<ExtractedIdentifier>> files;
    std::set<std::string> filenames;
    /// Recency: filesystem mtime seconds when directory-ingested, 0 otherwise.
    std::int64_t order_hint = 0;
    bool file_boundaries = true;
};

struct ProductRecord {
    std::uint32_t product_id = 0;
    std::string name;
    std::vector<ReleaseRecord> releases;
    std::optional<double> score;

    /// Products contributing no identifiers at all stay in the corpus (they
    /// still count toward D) but are flagged in build summaries.
    bool has_identifiers() const;
};

/// Union of the identifier names of the release's files.
std::set<std::string> defs_release(const ReleaseRecord& release);

/// Union of defs_release over the product's releases.
std::set<std::string> defs_product(const ProductRecord& product);

inline constexpr std::size_t kDefaultMaxReleases = 100;

/// Ingests `<root>/<product>/<release>/...` trees. Products are sorted by
/// name and given dense ids; releases are ordered by descending order_hint
/// (directory mtime), release-id descending as tie-break, and truncated to
/// max_releases. Per-file read errors are reported on stderr and skipped.
/// Throws IoError if root is missing or not a directory.
std::vector<ProductRecord> ingest_directory(const std::filesystem::path& root,
                                            std::size_t max_releases = kDefaultMaxReleases);

/// Ingests one directory as a single release (the subject of an
/// identification run). release_id is the directory name.
ReleaseRecord ingest_release_directory(const std::filesystem::path& dir);

/// Reads pre-extracted identifiers, one JSON object per line:
///   {"product": str, "release": str, "name": str,
///    "kind": "class"|"function"|"filename"}
/// The resulting releases carry no file boundaries. Throws ParseError with
/// the offending line number.
std::vector<ProductRecord> ingest_manifest(std::istream& in);

/// Writes the manifest schema above, sorted by (product, release, kind,
/// name). ingest_manifest of the output reproduces every Defs set.
void export_manifest(const std::vector<ProductRecord>& products, std::ostream& out);

/// Attaches externally supplied popularity scores (e.g. SourceRank) from a
/// `product_name<TAB>score` stream. Unknown product names are ignored;
/// malformed lines raise ParseError.
void apply_scores(std::vector<ProductRecord>& products, std::istream& scores);

}  // namespace idprov
