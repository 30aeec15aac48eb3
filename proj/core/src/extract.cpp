#include "idprov/extract.hpp"

#include <algorithm>
#include <cctype>

#include "idprov/errors.hpp"

namespace idprov {

namespace {

bool is_ident_start(unsigned char c) {
    return c == '_' || std::isalpha(c) || c >= 0x80;
}

bool is_ident_cont(unsigned char c) {
    return c == '_' || std::isalnum(c) || c >= 0x80;
}

// r, b, u, f and the r+b / r+f pairs, any case, any order. A word that is
// a prefix immediately followed by a quote starts a string literal.
bool is_string_prefix(std::string_view word) {
    if (word.empty() || word.size() > 2) return false;
    bool r = false, b = false, u = false, f = false;
    for (char ch : word) {
        switch (std::tolower(static_cast<unsigned char>(ch))) {
            case 'r': r = true; break;
            case 'b': b = true; break;
            case 'u': u = true; break;
            case 'f': f = true; break;
            default: return false;
        }
    }
    if (word.size() == 1) return true;
    return r && (b || f);  // rb, br, rf, fr
}

class Scanner {
  public:
    explicit Scanner(std::string_view text) : text_(text) {}

    std::set<ExtractedIdentifier> run() {
        std::set<ExtractedIdentifier> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                skip_comment();
            } else if (c == '"' || c == '\'') {
                skip_string();
            } else if (is_ident_start(static_cast<unsigned char>(c))) {
                std::string_view word = read_word();
                if (is_string_prefix(word) && pos_ < text_.size() &&
                    (text_[pos_] == '"' || text_[pos_] == '\'')) {
                    skip_string();
                } else if (word == "class") {
                    std::string name = read_declared_name();
                    if (!name.empty()) out.insert({std::move(name), Kind::Class});
                } else if (word == "def") {
                    std::string name = read_declared_name();
                    // def always carries a parameter list; requiring the '('
                    // rejects stray keyword-plus-word sequences in broken
                    // regions.
                    if (!name.empty() && peek_after_gaps() == '(') {
                        out.insert({std::move(name), Kind::Function});
                    }
                }
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                skip_number();
            } else if (c == '\\') {
                skip_continuation();
            } else {
                ++pos_;
            }
        }
        return out;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_comment() {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    }

    // pos_ is on the opening quote. Handles single and triple quoting; a
    // backslash always consumes the next character, which matches how the
    // Python tokenizer decides termination even for raw strings. An
    // unterminated single-quoted string ends at the newline so the scanner
    // stays total on broken input.
    void skip_string() {
        char quote = text_[pos_];
        bool triple = text_.substr(pos_, 3) == std::string(3, quote);
        pos_ += triple ? 3 : 1;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\') {
                pos_ += 2;
                continue;
            }
            if (triple) {
                if (c == quote && text_.substr(pos_, 3) == std::string(3, quote)) {
                    pos_ += 3;
                    return;
                }
            } else {
                if (c == quote) {
                    ++pos_;
                    return;
                }
                if (c == '\n') return;  // unterminated
            }
            ++pos_;
        }
    }

    std::string_view read_word() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_cont(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    // Consumes a numeric-looking token wholesale so suffix letters (0xdef,
    // 1e9, broken literals) never leak keyword lookalikes.
    void skip_number() {
        while (pos_ < text_.size()) {
            unsigned char c = static_cast<unsigned char>(text_[pos_]);
            if (is_ident_cont(c) || c == '.') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    void skip_continuation() {
        ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '\r') ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
    }

    // Spaces, tabs, CRs and backslash-newline continuations; anything else
    // (including a comment or bare newline) terminates the gap because it
    // also terminates the declaration header.
    void skip_gaps() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == '\\') {
                std::size_t peek = pos_ + 1;
                if (peek < text_.size() && text_[peek] == '\r') ++peek;
                if (peek < text_.size() && text_[peek] == '\n') {
                    pos_ = peek + 1;
                } else {
                    return;
                }
            } else {
                return;
            }
        }
    }

    std::string read_declared_name() {
        skip_gaps();
        if (pos_ >= text_.size() || !is_ident_start(static_cast<unsigned char>(text_[pos_])))
            return {};
        return std::string(read_word());
    }

    char peek_after_gaps() {
        skip_gaps();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
};

// Bytes 0x80.. begin a multi-byte sequence; returns its expected length or
// 0 for an invalid lead.
int utf8_seq_len(unsigned char lead) {
    if ((lead & 0xE0) == 0xC0) return 2;
    if ((lead & 0xF0) == 0xE0) return 3;
    if ((lead & 0xF8) == 0xF0) return 4;
    return 0;
}

}  // namespace

std::string sanitize_utf8(std::string_view bytes) {
    static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        unsigned char lead = static_cast<unsigned char>(bytes[i]);
        if (lead < 0x80) {
            out.push_back(static_cast<char>(lead));
            ++i;
            continue;
        }
        int len = utf8_seq_len(lead);
        bool ok = len > 0 && i + static_cast<std::size_t>(len) <= bytes.size();
        if (ok) {
            for (int j = 1; j < len; ++j) {
                unsigned char cont = static_cast<unsigned char>(bytes[i + j]);
                if ((cont & 0xC0) != 0x80) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            // Reject overlong encodings and out-of-range code points.
            if (len == 2 && lead < 0xC2) ok = false;
            if (len == 3 && lead == 0xE0 &&
                static_cast<unsigned char>(bytes[i + 1]) < 0xA0)
                ok = false;
            if (len == 4 && (lead > 0xF4 ||
                             (lead == 0xF0 && static_cast<unsigned char>(bytes[i + 1]) < 0x90) ||
                             (lead == 0xF4 && static_cast<unsigned char>(bytes[i + 1]) > 0x8F)))
                ok = false;
            // Surrogates.
            if (len == 3 && lead == 0xED && static_cast<unsigned char>(bytes[i + 1]) >= 0xA0)
                ok = false;
        }
        if (ok) {
            out.append(bytes.substr(i, static_cast<std::size_t>(len)));
            i += static_cast<std::size_t>(len);
        } else {
            out.append(kReplacement);
            ++i;
        }
    }
    return out;
}

bool is_python_path(std::string_view path) {
    if (path.size() < 3) return false;
    std::string_view tail = path.substr(path.size() - 3);
    return tail[0] == '.' && std::tolower(static_cast<unsigned char>(tail[1])) == 'p' &&
           std::tolower(static_cast<unsigned char>(tail[2])) == 'y';
}

std::set<ExtractedIdentifier> extract_code_identifiers(std::string_view text) {
    return Scanner(text).run();
}

std::string extract_filename_identifier(std::string_view path) {
    if (!is_python_path(path))
        throw NotPythonFile("not a .py file: " + std::string(path));
    std::size_t slash = path.find_last_of('/');
    std::string_view base = slash == std::string_view::npos ? path : path.substr(slash + 1);
    return std::string(base.substr(0, base.size() - 3));
}

ReleaseExtraction extract_release(const std::vector<SourceFile>& files) {
    ReleaseExtraction out;
    for (const SourceFile& file : files) {
        if (!is_python_path(file.path)) continue;
        out.files[file.path] = extract_code_identifiers(file.text);
        out.filenames.insert(extract_filename_identifier(file.path));
    }
    return out;
}

}  // namespace idprov
