#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "idprov/corpus.hpp"
#include "idprov/identifier.hpp"

namespace idprov {

struct Posting {
    /// Strictly ascending, duplicate-free product ids.
    std::vector<std::uint32_t> products;
    /// Code namespace: bit 0 = declared as class, bit 1 = as function.
    std::uint8_t kinds = 0;
};

inline constexpr std::uint8_t kKindClassBit = 1;
inline constexpr std::uint8_t kKindFunctionBit = 2;

/// Product-level inverted index: identifier -> products defining it.
/// Immutable once built; safe for unlimited concurrent readers.
class InvertedIndex {
  public:
    using Table = std::unordered_map<std::string, Posting>;

    /// D: every corpus product counts, identifier-free ones included.
    std::uint32_t total_products() const { return total_products_; }

    /// Document frequency: 0 when the name is absent.
    std::size_t frequency(std::string_view name, Namespace ns) const;

    /// log10(D / frequency). Throws UnknownIdentifier when frequency = 0.
    double idf(std::string_view name, Namespace ns) const;

    /// nullptr when the name is absent from the namespace.
    const Posting* find(std::string_view name, Namespace ns) const;

    const Table& table(Namespace ns) const;
    std::size_t distinct_names(Namespace ns) const { return table(ns).size(); }

    const std::string& product_name(std::uint32_t id) const { return product_names_.at(id); }
    std::optional<double> product_score(std::uint32_t id) const { return product_scores_.at(id); }

  private:
    std::uint32_t total_products_ = 0;
    Table code_;
    Table filenames_;
    std::vector<std::string> product_names_;
    std::vector<std::optional<double>> product_scores_;

    friend InvertedIndex build_index(const std::vector<ProductRecord>&);
    friend InvertedIndex load_index(const std::filesystem::path&);
};

/// Top-K most frequent names of one namespace, excluded from sampling the
/// way stop words are excluded from text search.
struct Blocklist {
    Namespace ns = Namespace::Code;
    std::unordered_set<std::string> entries;
    std::size_t k = 0;

    bool contains(std::string_view name) const {
        // unordered_set<string>::find needs a string until C++20 heterogeneous
        // lookup is enabled; entries are short so the copy is cheap.
        return entries.find(std::string(name)) != entries.end();
    }
};

/// Builds the index from a corpus; the position of a product in the vector
/// is its product id. Throws DuplicateProductName.
InvertedIndex build_index(const std::vector<ProductRecord>& products);

/// Top-K names by descending frequency; ties at the cut broken by
/// lexicographically ascending name, so two builds over the same corpus
/// always agree.
Blocklist build_blocklist(const InvertedIndex& index, Namespace ns, std::size_t k);

/// One row of the frequency/instance tables. Buckets: 1..10 individually,
/// then 11-100, 101-1000, 1001+. Rows with zero identifiers are omitted.
struct DistRow {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::string label;
    std::uint64_t identifiers = 0;
    std::uint64_t instances = 0;
    double proportion = 0.0;  // percent
    double cumulative = 0.0;  // percent, ascending in frequency
};

/// Distribution of document frequency over distinct names.
std::vector<DistRow> frequency_distribution(const InvertedIndex& index, Namespace ns);

/// Same buckets weighted by instances: each name counts frequency-many
/// times, i.e. once per product defining it.
std::vector<DistRow> instance_distribution(const InvertedIndex& index, Namespace ns);

/// How many code names are used as both a class and a function, and the
/// proportion over all distinct code names.
std::pair<std::uint64_t, double> kind_overlap(const InvertedIndex& index);

/// Persists the index as a directory of TSV files (meta.tsv, products.tsv,
/// postings.tsv and, when blocklists are given, blocklist.tsv). Outputs are
/// written to temp files and renamed into place; rebuilding from the same
/// corpus yields byte-identical files.
void save_index(const InvertedIndex& index, const std::filesystem::path& dir,
                const std::vector<Blocklist>& blocklists = {});

/// Loads a directory produced by save_index. Throws VersionError on a
/// format-version mismatch, FormatError (with the offending line) on
/// corruption, IoError on unreadable files.
InvertedIndex load_index(const std::filesystem::path& dir);

/// Reads blocklist.tsv if present; absent file yields an empty list with
/// k = 0 for the requested namespace.
Blocklist load_blocklist(const std::filesystem::path& dir, Namespace ns);

}  // namespace idprov
