#include "idprov/index.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "idprov/errors.hpp"

namespace fs = std::filesystem;

namespace idprov {

namespace {

constexpr std::string_view kFormatHeader = "IDPROV-IDX v1";

struct Bucket {
    std::uint64_t lo, hi;
    std::string label;
};

std::vector<Bucket> make_buckets(std::uint64_t max_freq) {
    std::vector<Bucket> buckets;
    for (std::uint64_t f = 1; f <= 10; ++f) buckets.push_back({f, f, std::to_string(f)});
    buckets.push_back({11, 100, "11-100"});
    buckets.push_back({101, 1000, "101-1000"});
    buckets.push_back({1001, std::max<std::uint64_t>(max_freq, 1001), "1001-"});
    return buckets;
}

std::string format_double(double v) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void write_atomic(const fs::path& target, const std::string& contents) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << contents;
        if (!out.flush()) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::vector<std::string> split_tabs(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            return fields;
        }
        fields.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

[[noreturn]] void bad_line(const fs::path& file, std::size_t line_no, std::string_view line,
                           std::string_view why) {
    throw FormatError(file.filename().string() + ":" + std::to_string(line_no) + ": " +
                      std::string(why) + " (line: \"" + std::string(line) + "\")");
}

std::uint64_t parse_uint(const fs::path& file, std::size_t line_no, std::string_view line,
                         std::string_view field) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        bad_line(file, line_no, line, "expected an unsigned integer");
    return value;
}

std::ifstream open_or_throw(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read " + file.string());
    return in;
}

}  // namespace

std::size_t InvertedIndex::frequency(std::string_view name, Namespace ns) const {
    const Posting* p = find(name, ns);
    return p ? p->products.size() : 0;
}

double InvertedIndex::idf(std::string_view name, Namespace ns) const {
    std::size_t freq = frequency(name, ns);
    if (freq == 0) throw UnknownIdentifier("identifier not in index: " + std::string(name));
    return std::log10(static_cast<double>(total_products_) / static_cast<double>(freq));
}

const Posting* InvertedIndex::find(std::string_view name, Namespace ns) const {
    const Table& t = table(ns);
    auto it = t.find(std::string(name));
    return it == t.end() ? nullptr : &it->second;
}

const InvertedIndex::Table& InvertedIndex::table(Namespace ns) const {
    return ns == Namespace::Code ? code_ : filenames_;
}

InvertedIndex build_index(const std::vector<ProductRecord>& products) {
    InvertedIndex index;
    index.total_products_ = static_cast<std::uint32_t>(products.size());
    index.product_names_.reserve(products.size());
    index.product_scores_.reserve(products.size());

    std::unordered_set<std::string> seen_names;
    for (const ProductRecord& product : products) {
        if (!seen_names.insert(product.name).second)
            throw DuplicateProductName("duplicate product name: " + product.name);
        index.product_names_.push_back(product.name);
        index.product_scores_.push_back(product.score);
    }

    for (std::uint32_t id = 0; id < products.size(); ++id) {
        const ProductRecord& product = products[id];
        // Defs(P) with per-name kind union across all releases and files.
        std::map<std::string, std::uint8_t> code;
        std::set<std::string> filenames;
        for (const ReleaseRecord& release : product.releases) {
            for (const auto& [path, idents] : release.files)
                for (const ExtractedIdentifier& ident : idents)
                    code[ident.name] |=
                        ident.kind == Kind::Class ? kKindClassBit : kKindFunctionBit;
            filenames.insert(release.filenames.begin(), release.filenames.end());
        }
        for (const auto& [name, kinds] : code) {
            Posting& posting = index.code_[name];
            posting.products.push_back(id);  // ids ascend with the loop
            posting.kinds |= kinds;
        }
        for (const std::string& name : filenames)
            index.filenames_[name].products.push_back(id);
    }
    return index;
}

Blocklist build_blocklist(const InvertedIndex& index, Namespace ns, std::size_t k) {
    const InvertedIndex::Table& t = index.table(ns);
    std::vector<std::pair<std::size_t, std::string_view>> by_freq;
    by_freq.reserve(t.size());
    for (const auto& [name, posting] : t) by_freq.emplace_back(posting.products.size(), name);
    std::size_t take = std::min(k, by_freq.size());
    std::partial_sort(by_freq.begin(), by_freq.begin() + take, by_freq.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });

    Blocklist blocklist;
    blocklist.ns = ns;
    blocklist.k = k;
    for (std::size_t i = 0; i < take; ++i) blocklist.entries.emplace(by_freq[i].second);
    return blocklist;
}

namespace {

std::vector<DistRow> distribution(const InvertedIndex& index, Namespace ns, bool instances) {
    const InvertedIndex::Table& t = index.table(ns);
    if (t.empty()) return {};

    std::uint64_t max_freq = 0;
    for (const auto& [name, posting] : t)
        max_freq = std::max<std::uint64_t>(max_freq, posting.products.size());

    std::vector<Bucket> buckets = make_buckets(max_freq);
    std::vector<DistRow> rows;
    for (const Bucket& bucket : buckets)
        rows.push_back({bucket.lo, bucket.hi, bucket.label, 0, 0, 0.0, 0.0});

    std::uint64_t total_names = 0;
    std::uint64_t total_instances = 0;
    for (const auto& [name, posting] : t) {
        std::uint64_t freq = posting.products.size();
        for (DistRow& row : rows) {
            if (freq >= row.lo && freq <= row.hi) {
                row.identifiers += 1;
                row.instances += freq;
                break;
            }
        }
        total_names += 1;
        total_instances += freq;
    }

    std::erase_if(rows, [](const DistRow& row) { return row.identifiers == 0; });
    double cumulative = 0.0;
    for (DistRow& row : rows) {
        std::uint64_t weight = instances ? row.instances : row.identifiers;
        std::uint64_t total = instances ? total_instances : total_names;
        row.proportion = 100.0 * static_cast<double>(weight) / static_cast<double>(total);
        cumulative += row.proportion;
        row.cumulative = cumulative;
    }
    return rows;
}

}  // namespace

std::vector<DistRow> frequency_distribution(const InvertedIndex& index, Namespace ns) {
    return distribution(index, ns, /*instances=*/false);
}

std::vector<DistRow> instance_distribution(const InvertedIndex& index, Namespace ns) {
    return distribution(index, ns, /*instances=*/true);
}

std::pair<std::uint64_t, double> kind_overlap(const InvertedIndex& index) {
    const InvertedIndex::Table& code = index.table(Namespace::Code);
    std::uint64_t both = 0;
    for (const auto& [name, posting] : code)
        if (posting.kinds == (kKindClassBit | kKindFunctionBit)) ++both;
    double proportion =
        code.empty() ? 0.0 : static_cast<double>(both) / static_cast<double>(code.size());
    return {both, proportion};
}

void save_index(const InvertedIndex& index, const fs::path& dir,
                const std::vector<Blocklist>& blocklists) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    {
        std::string meta(kFormatHeader);
        meta += "\nproducts\t" + std::to_string(index.total_products()) + "\n";
        write_atomic(dir / "meta.tsv", meta);
    }
    {
        std::vector<std::string> rows;
        for (std::uint32_t id = 0; id < index.total_products(); ++id) {
            std::string row = std::to_string(id) + "\t" + index.product_name(id) + "\t";
            if (auto score = index.product_score(id)) row += format_double(*score);
            rows.push_back(std::move(row));
        }
        std::sort(rows.begin(), rows.end());
        std::string contents;
        for (const std::string& row : rows) contents += row + "\n";
        write_atomic(dir / "products.tsv", contents);
    }
    {
        std::vector<std::string> rows;
        for (Namespace ns : {Namespace::Code, Namespace::Filename}) {
            for (const auto& [name, posting] : index.table(ns)) {
                std::string kinds = "-";
                if (ns == Namespace::Code) {
                    kinds.clear();
                    if (posting.kinds & kKindClassBit) kinds += 'c';
                    if (posting.kinds & kKindFunctionBit) kinds += 'f';
                }
                std::string ids;
                for (std::uint32_t id : posting.products) {
                    if (!ids.empty()) ids += ',';
                    ids += std::to_string(id);
                }
                rows.push_back(std::string(to_string(ns)) + "\t" + name + "\t" + kinds + "\t" +
                               ids);
            }
        }
        std::sort(rows.begin(), rows.end());
        std::string contents;
        for (const std::string& row : rows) contents += row + "\n";
        write_atomic(dir / "postings.tsv", contents);
    }
    if (!blocklists.empty()) {
        std::vector<std::string> rows;
        for (const Blocklist& blocklist : blocklists)
            for (const std::string& name : blocklist.entries)
                rows.push_back(std::string(to_string(blocklist.ns)) + "\t" + name);
        std::sort(rows.begin(), rows.end());
        std::string contents;
        for (const std::string& row : rows) contents += row + "\n";
        write_atomic(dir / "blocklist.tsv", contents);
    }
}

InvertedIndex load_index(const fs::path& dir) {
    InvertedIndex index;

    {
        fs::path file = dir / "meta.tsv";
        std::ifstream in = open_or_throw(file);
        std::string line;
        if (!std::getline(in, line)) throw FormatError("meta.tsv: empty file");
        if (line != kFormatHeader) {
            if (line.starts_with("IDPROV-IDX"))
                throw VersionError("unsupported index format version: " + line);
            bad_line(file, 1, line, "missing format header");
        }
        if (!std::getline(in, line)) throw FormatError("meta.tsv: missing products line");
        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 2 || fields[0] != "products")
            bad_line(file, 2, line, "expected products<TAB>count");
        index.total_products_ =
            static_cast<std::uint32_t>(parse_uint(file, 2, line, fields[1]));
    }

    index.product_names_.assign(index.total_products_, {});
    index.product_scores_.assign(index.total_products_, std::nullopt);
    {
        fs::path file = dir / "products.tsv";
        std::ifstream in = open_or_throw(file);
        std::string line;
        std::size_t line_no = 0;
        std::vector<bool> seen(index.total_products_, false);
        while (std::getline(in, line)) {
            ++line_no;
            std::vector<std::string> fields = split_tabs(line);
            if (fields.size() != 3) bad_line(file, line_no, line, "expected 3 fields");
            std::uint64_t id = parse_uint(file, line_no, line, fields[0]);
            if (id >= index.total_products_)
                bad_line(file, line_no, line, "product id out of range");
            if (seen[id]) bad_line(file, line_no, line, "duplicate product id");
            if (fields[1].empty()) bad_line(file, line_no, line, "empty product name");
            seen[id] = true;
            index.product_names_[id] = fields[1];
            if (!fields[2].empty()) {
                double score = 0.0;
                auto [ptr, ec] = std::from_chars(fields[2].data(),
                                                 fields[2].data() + fields[2].size(), score);
                if (ec != std::errc() || ptr != fields[2].data() + fields[2].size())
                    bad_line(file, line_no, line, "bad score");
                index.product_scores_[id] = score;
            }
        }
    }

    {
        fs::path file = dir / "postings.tsv";
        std::ifstream in = open_or_throw(file);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::vector<std::string> fields = split_tabs(line);
            if (fields.size() != 4) bad_line(file, line_no, line, "expected 4 fields");
            auto ns = namespace_from_string(fields[0]);
            if (!ns) bad_line(file, line_no, line, "unknown namespace");
            if (fields[1].empty()) bad_line(file, line_no, line, "empty identifier name");

            Posting posting;
            if (*ns == Namespace::Code) {
                for (char c : fields[2]) {
                    if (c == 'c')
                        posting.kinds |= kKindClassBit;
                    else if (c == 'f')
                        posting.kinds |= kKindFunctionBit;
                    else
                        bad_line(file, line_no, line, "bad kinds field");
                }
                if (posting.kinds == 0) bad_line(file, line_no, line, "bad kinds field");
            } else if (fields[2] != "-") {
                bad_line(file, line_no, line, "filename rows must use kinds \"-\"");
            }

            if (fields[3].empty()) bad_line(file, line_no, line, "empty posting list");
            std::size_t start = 0;
            while (start <= fields[3].size()) {
                std::size_t comma = fields[3].find(',', start);
                std::string_view part =
                    comma == std::string::npos
                        ? std::string_view(fields[3]).substr(start)
                        : std::string_view(fields[3]).substr(start, comma - start);
                std::uint64_t id = parse_uint(file, line_no, line, part);
                if (id >= index.total_products_)
                    bad_line(file, line_no, line, "posting id out of range");
                if (!posting.products.empty() && posting.products.back() >= id)
                    bad_line(file, line_no, line, "posting ids not strictly ascending");
                posting.products.push_back(static_cast<std::uint32_t>(id));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }

            InvertedIndex::Table& t =
                *ns == Namespace::Code ? index.code_ : index.filenames_;
            if (!t.emplace(fields[1], std::move(posting)).second)
                bad_line(file, line_no, line, "duplicate posting for identifier");
        }
    }
    return index;
}

Blocklist load_blocklist(const fs::path& dir, Namespace ns) {
    Blocklist blocklist;
    blocklist.ns = ns;
    fs::path file = dir / "blocklist.tsv";
    if (!fs::exists(file)) return blocklist;
    std::ifstream in = open_or_throw(file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 2) bad_line(file, line_no, line, "expected 2 fields");
        auto row_ns = namespace_from_string(fields[0]);
        if (!row_ns) bad_line(file, line_no, line, "unknown namespace");
        if (fields[1].empty()) bad_line(file, line_no, line, "empty identifier name");
        if (*row_ns == ns) blocklist.entries.insert(fields[1]);
    }
    blocklist.k = blocklist.entries.size();
    return blocklist;
}

}  // namespace idprov
