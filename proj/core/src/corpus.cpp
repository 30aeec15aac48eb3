#include "idprov/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "idprov/errors.hpp"

namespace fs = std::filesystem;

namespace idprov {

namespace {

std::int64_t mtime_seconds(const fs::path& p) {
    std::error_code ec;
    auto t = fs::last_write_time(p, ec);
    if (ec) return 0;
    using namespace std::chrono;
    return duration_cast<seconds>(t.time_since_epoch()).count();
}

std::string read_file_lossy(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return sanitize_utf8(buf.str());
}

// Relative path with '/' separators regardless of platform.
std::string relative_slash_path(const fs::path& file, const fs::path& base) {
    return fs::relative(file, base).generic_string();
}

ReleaseRecord ingest_release_dir(const fs::path& dir, const std::string& release_id) {
    std::vector<SourceFile> sources;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(dir, ec), end; it != end; it.increment(ec)) {
        if (ec) throw IoError("cannot walk " + dir.string() + ": " + ec.message());
        if (!it->is_regular_file()) continue;
        std::string rel = relative_slash_path(it->path(), dir);
        if (!is_python_path(rel)) continue;
        try {
            sources.push_back({rel, read_file_lossy(it->path())});
        } catch (const IoError& e) {
            std::cerr << "warning: skipping " << it->path().string() << ": " << e.what() << "\n";
        }
    }
    if (ec) throw IoError("cannot walk " + dir.string() + ": " + ec.message());

    ReleaseExtraction extraction = extract_release(sources);
    ReleaseRecord release;
    release.release_id = release_id;
    release.files = std::move(extraction.files);
    release.filenames = std::move(extraction.filenames);
    release.order_hint = mtime_seconds(dir);
    return release;
}

void validate_label(const std::string& label, std::size_t line_no, const char* field) {
    if (label.empty())
        throw ParseError(line_no, std::string(field) + " is empty");
    if (label.find_first_of("\t\n") != std::string::npos)
        throw ParseError(line_no, std::string(field) + " contains tab or newline");
}

}  // namespace

bool ProductRecord::has_identifiers() const {
    for (const ReleaseRecord& r : releases) {
        if (!r.filenames.empty()) return true;
        for (const auto& [path, idents] : r.files)
            if (!idents.empty()) return true;
    }
    return false;
}

std::set<std::string> defs_release(const ReleaseRecord& release) {
    std::set<std::string> out;
    for (const auto& [path, idents] : release.files)
        for (const ExtractedIdentifier& id : idents) out.insert(id.name);
    return out;
}

std::set<std::string> defs_product(const ProductRecord& product) {
    std::set<std::string> out;
    for (const ReleaseRecord& release : product.releases) {
        std::set<std::string> defs = defs_release(release);
        out.merge(defs);
    }
    return out;
}

std::vector<ProductRecord> ingest_directory(const fs::path& root, std::size_t max_releases) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw IoError("corpus root is not a readable directory: " + root.string());

    std::vector<fs::path> product_dirs;
    for (fs::directory_iterator it(root, ec), end; it != end; it.increment(ec)) {
        if (ec) throw IoError("cannot list " + root.string() + ": " + ec.message());
        if (it->is_directory()) product_dirs.push_back(it->path());
    }
    if (ec) throw IoError("cannot list " + root.string() + ": " + ec.message());
    std::sort(product_dirs.begin(), product_dirs.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    std::vector<ProductRecord> products;
    products.reserve(product_dirs.size());
    for (const fs::path& product_dir : product_dirs) {
        ProductRecord product;
        product.product_id = static_cast<std::uint32_t>(products.size());
        product.name = product_dir.filename().string();

        std::vector<fs::path> release_dirs;
        for (fs::directory_iterator it(product_dir, ec), end; it != end; it.increment(ec)) {
            if (ec) throw IoError("cannot list " + product_dir.string() + ": " + ec.message());
            if (it->is_directory()) release_dirs.push_back(it->path());
        }
        for (const fs::path& release_dir : release_dirs) {
            product.releases.push_back(
                ingest_release_dir(release_dir, release_dir.filename().string()));
        }
        // Most recent first: mtime, then version label, both descending.
        std::sort(product.releases.begin(), product.releases.end(),
                  [](const ReleaseRecord& a, const ReleaseRecord& b) {
                      return std::tie(b.order_hint, b.release_id) <
                             std::tie(a.order_hint, a.release_id);
                  });
        if (product.releases.size() > max_releases) product.releases.resize(max_releases);
        products.push_back(std::move(product));
    }
    return products;
}

ReleaseRecord ingest_release_directory(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw IoError("subject is not a readable directory: " + dir.string());
    return ingest_release_dir(dir, dir.filename().string());
}

std::vector<ProductRecord> ingest_manifest(std::istream& in) {
    // product name -> release id -> identifiers; grouped first so products
    // can be sorted and given dense ids afterwards.
    std::map<std::string, std::map<std::string, ReleaseRecord>> grouped;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (!record.is_object()) throw ParseError(line_no, "expected a JSON object");
        for (const char* field : {"product", "release", "name", "kind"}) {
            if (!record.contains(field) || !record[field].is_string())
                throw ParseError(line_no, "missing string field \"" + std::string(field) + "\"");
        }
        std::string product = record["product"].get<std::string>();
        std::string release_id = record["release"].get<std::string>();
        std::string name = record["name"].get<std::string>();
        std::string kind = record["kind"].get<std::string>();
        validate_label(product, line_no, "product");
        validate_label(release_id, line_no, "release");
        validate_label(name, line_no, "name");
        if (name.find_first_of(" \t\r\n") != std::string::npos)
            throw ParseError(line_no, "identifier name contains whitespace");

        ReleaseRecord& rel = grouped[product][release_id];
        if (rel.release_id.empty()) {
            rel.release_id = release_id;
            rel.file_boundaries = false;
        }
        if (kind == "filename") {
            rel.filenames.insert(name);
        } else if (auto parsed = kind_from_string(kind)) {
            rel.files[""].insert({std::move(name), *parsed});
        } else {
            throw ParseError(line_no, "unknown kind \"" + kind + "\"");
        }
    }

    std::vector<ProductRecord> products;
    products.reserve(grouped.size());
    for (auto& [name, releases] : grouped) {
        ProductRecord product;
        product.product_id = static_cast<std::uint32_t>(products.size());
        product.name = name;
        for (auto& [release_id, release] : releases)
            product.releases.push_back(std::move(release));
        products.push_back(std::move(product));
    }
    return products;
}

void export_manifest(const std::vector<ProductRecord>& products, std::ostream& out) {
    // (product, release, kind, name), each component ascending.
    std::vector<std::tuple<std::string_view, std::string_view, std::string_view, std::string_view>>
        rows;
    for (const ProductRecord& product : products) {
        for (const ReleaseRecord& release : product.releases) {
            for (const auto& [path, idents] : release.files)
                for (const ExtractedIdentifier& id : idents)
                    rows.emplace_back(product.name, release.release_id, to_string(id.kind),
                                      id.name);
            for (const std::string& fname : release.filenames)
                rows.emplace_back(product.name, release.release_id, "filename", fname);
        }
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

    for (const auto& [product, release, kind, name] : rows) {
        nlohmann::ordered_json record{
            {"product", product}, {"release", release}, {"name", name}, {"kind", kind}};
        out << record.dump() << '\n';
    }
}

void apply_scores(std::vector<ProductRecord>& products, std::istream& scores) {
    std::map<std::string, double, std::less<>> by_name;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(scores, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError(line_no, "expected name<TAB>score");
        std::string name = line.substr(0, tab);
        try {
            std::size_t used = 0;
            double value = std::stod(line.substr(tab + 1), &used);
            if (used != line.size() - tab - 1 || value < 0)
                throw ParseError(line_no, "score is not a non-negative number");
            by_name[name] = value;
        } catch (const std::logic_error&) {
            throw ParseError(line_no, "score is not a non-negative number");
        }
    }
    for (ProductRecord& product : products) {
        auto it = by_name.find(product.name);
        if (it != by_name.end()) product.score = it->second;
    }
}

}  // namespace idprov
