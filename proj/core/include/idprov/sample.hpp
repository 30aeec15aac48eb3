#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "idprov/corpus.hpp"
#include "idprov/index.hpp"

namespace idprov {

enum class Strategy { SingleFile, DisjointFiles };

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view s);

struct SamplerConfig {
    std::size_t n = 3;
    Blocklist blocklist;
    std::uint64_t seed = 0;
};

/// N distinct non-blocklisted identifier names drawn from a subject
/// release, with the file each name was taken from.
struct Fingerprint {
    std::set<std::string> names;
    std::vector<std::pair<std::string, std::string>> sources;  // (path, name)
    Strategy strategy = Strategy::SingleFile;
    std::size_t n = 0;
};

/// Set difference: the file's code names minus the blocklist.
std::set<std::string> eligible_names(const std::set<ExtractedIdentifier>& file_identifiers,
                                     const Blocklist& blocklist);

/// All N names from one file, chosen uniformly at random. Files with fewer
/// than N eligible names are put back and another drawn (without
/// replacement within the attempt). Throws InsufficientIdentifiers when no
/// file qualifies, NoFileBoundaries on manifest-ingested releases.
Fingerprint sample_single_file(const ReleaseRecord& release, const SamplerConfig& cfg);

/// One new name from each of N distinct files. Files are drawn uniformly
/// without replacement; a draw that cannot keep a full assignment reachable
/// is backtracked, so this fails (InsufficientIdentifiers) exactly when no
/// assignment of N distinct names to N distinct files exists.
Fingerprint sample_disjoint_files(const ReleaseRecord& release, const SamplerConfig& cfg);

Fingerprint sample(const ReleaseRecord& release, Strategy strategy, const SamplerConfig& cfg);

}  // namespace idprov
