#pragma once

// Shared helpers for the test suites: temp dirs, synthetic corpora and the
// brute-force oracles the implementation is checked against. Oracles stay
// independent of the index/search code paths by construction: they only
// walk ProductRecords.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "idprov/corpus.hpp"
#include "idprov/identifier.hpp"
#include "idprov/rng.hpp"

namespace testutil {

class TempDir {
  public:
    TempDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "idprov-test-XXXXXX").string();
        if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& contents) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << contents;
}

// ----------------------------------------------------------------- builders

inline idprov::ReleaseRecord make_release(
    std::string id,
    std::vector<std::pair<std::string, std::vector<std::string>>> file_names,
    std::int64_t order_hint = 0) {
    idprov::ReleaseRecord release;
    release.release_id = std::move(id);
    release.order_hint = order_hint;
    for (auto& [path, names] : file_names) {
        auto& idents = release.files[path];
        for (std::string& name : names)
            idents.insert({std::move(name), idprov::Kind::Function});
        release.filenames.insert(idprov::extract_filename_identifier(path));
    }
    return release;
}

inline idprov::ProductRecord make_product(std::uint32_t id, std::string name,
                                          std::vector<idprov::ReleaseRecord> releases) {
    idprov::ProductRecord product;
    product.product_id = id;
    product.name = std::move(name);
    product.releases = std::move(releases);
    return product;
}

/// Random corpus: up to max_products products, one or two releases each,
/// identifiers drawn from a pool sized to force cross-product sharing.
/// Every release keeps file boundaries (1-4 files).
inline std::vector<idprov::ProductRecord> random_corpus(idprov::Rng& rng,
                                                        std::size_t max_products,
                                                        std::size_t max_idents_per_product) {
    std::size_t n_products = 1 + rng.below(max_products);
    std::size_t pool = 2 + rng.below(3 * std::max<std::size_t>(n_products, 2));

    std::vector<idprov::ProductRecord> products;
    for (std::size_t p = 0; p < n_products; ++p) {
        std::size_t n_releases = 1 + rng.below(2);
        std::vector<idprov::ReleaseRecord> releases;
        for (std::size_t r = 0; r < n_releases; ++r) {
            std::size_t n_files = 1 + rng.below(4);
            std::vector<std::pair<std::string, std::vector<std::string>>> files;
            for (std::size_t f = 0; f < n_files; ++f) {
                std::size_t n_names = 1 + rng.below(std::max<std::size_t>(
                                              max_idents_per_product / n_files, 1));
                std::vector<std::string> names;
                for (std::size_t i = 0; i < n_names; ++i)
                    names.push_back("id" + std::to_string(rng.below(pool)));
                files.emplace_back("f" + std::to_string(f) + ".py", std::move(names));
            }
            releases.push_back(make_release("r" + std::to_string(r), std::move(files),
                                            static_cast<std::int64_t>(n_releases - r)));
        }
        products.push_back(make_product(static_cast<std::uint32_t>(p),
                                        "prod" + std::to_string(p), std::move(releases)));
    }
    return products;
}

// ------------------------------------------------------------------ oracles

/// Document frequency by scanning every product's Defs.
inline std::size_t oracle_frequency(const std::vector<idprov::ProductRecord>& products,
                                    const std::string& name) {
    std::size_t count = 0;
    for (const idprov::ProductRecord& p : products) count += defs_product(p).count(name);
    return count;
}

/// Candidate set by scanning every product for Defs ⊇ fingerprint.
inline std::vector<std::uint32_t> oracle_match(
    const std::vector<idprov::ProductRecord>& products,
    const std::set<std::string>& fingerprint) {
    std::vector<std::uint32_t> hits;
    for (std::size_t i = 0; i < products.size(); ++i) {
        std::set<std::string> defs = defs_product(products[i]);
        bool all = !fingerprint.empty();
        for (const std::string& name : fingerprint)
            if (!defs.count(name)) {
                all = false;
                break;
            }
        if (all) hits.push_back(static_cast<std::uint32_t>(i));
    }
    return hits;
}

/// Distinct names of one namespace across the whole corpus.
inline std::set<std::string> oracle_names(const std::vector<idprov::ProductRecord>& products,
                                          idprov::Namespace ns) {
    std::set<std::string> names;
    for (const idprov::ProductRecord& p : products) {
        if (ns == idprov::Namespace::Code) {
            std::set<std::string> defs = defs_product(p);
            names.insert(defs.begin(), defs.end());
        } else {
            for (const idprov::ReleaseRecord& r : p.releases)
                names.insert(r.filenames.begin(), r.filenames.end());
        }
    }
    return names;
}

}  // namespace testutil
