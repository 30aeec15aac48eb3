#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "idprov/errors.hpp"
#include "idprov/extract.hpp"
#include "idprov/rng.hpp"

using namespace idprov;
namespace fs = std::filesystem;

namespace {

std::set<ExtractedIdentifier> ids(std::initializer_list<std::pair<const char*, Kind>> list) {
    std::set<ExtractedIdentifier> out;
    for (const auto& [name, kind] : list) out.insert({name, kind});
    return out;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

using TagTable = std::map<std::string, std::set<ExtractedIdentifier>>;

TagTable load_expected(const fs::path& fixture_dir) {
    TagTable expected;
    // Every fixture participates, declarations or not.
    for (const auto& entry : fs::directory_iterator(fixture_dir))
        if (entry.path().extension() == ".py") expected[entry.path().filename().string()];
    std::ifstream in(fixture_dir / "expected.tsv");
    REQUIRE(in.good());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = line.find('\t', t1 + 1);
        REQUIRE(t2 != std::string::npos);
        std::string file = line.substr(0, t1);
        std::string kind = line.substr(t1 + 1, t2 - t1 - 1);
        std::string name = line.substr(t2 + 1);
        auto parsed = kind_from_string(kind);
        REQUIRE(parsed.has_value());
        REQUIRE(expected.count(file));  // no orphan rows
        expected[file].insert({name, *parsed});
    }
    return expected;
}

// When a Universal Ctags binary is around, re-derive the expected table
// from it and fail on any drift from the frozen one.
bool ctags_available() {
    return std::system("ctags --version > /dev/null 2>&1") == 0;
}

TagTable run_ctags(const fs::path& fixture_dir) {
    std::string cmd = "cd " + fixture_dir.string() +
                      " && ctags -o - --languages=Python "
                      "--kinds-Python=cfm --output-format=u-ctags *.py 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    TagTable table;
    char buf[4096];
    std::string output;
    while (fgets(buf, sizeof buf, pipe)) output += buf;
    pclose(pipe);

    std::istringstream lines(output);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '!') continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = line.find('\t', t1 + 1);
        if (t2 == std::string::npos) continue;
        std::string name = line.substr(0, t1);
        std::string file = line.substr(t1 + 1, t2 - t1 - 1);
        std::size_t kind_pos = line.find(";\"\t");
        if (kind_pos == std::string::npos || kind_pos + 3 >= line.size()) continue;
        char kind_char = line[kind_pos + 3];
        if (kind_char == 'c')
            table[file].insert({name, Kind::Class});
        else if (kind_char == 'f' || kind_char == 'm')
            table[file].insert({name, Kind::Function});
    }
    return table;
}

}  // namespace

TEST_CASE("single def") {
    CHECK(extract_code_identifiers("def main():\n    pass") ==
          ids({{"main", Kind::Function}}));
}

TEST_CASE("class with method") {
    CHECK(extract_code_identifiers("class Foo:\n    def bar(self):\n        pass") ==
          ids({{"Foo", Kind::Class}, {"bar", Kind::Function}}));
}

TEST_CASE("empty input") {
    CHECK(extract_code_identifiers("").empty());
}

TEST_CASE("declaration inside a string literal yields nothing") {
    CHECK(extract_code_identifiers("x = 'def fake(): pass'").empty());
}

TEST_CASE("async def counts as function") {
    CHECK(extract_code_identifiers("async def go():\n    pass") ==
          ids({{"go", Kind::Function}}));
}

TEST_CASE("def without parameter list is not a declaration") {
    CHECK(extract_code_identifiers("defer = def broken\n").empty());
}

TEST_CASE("name used as class and function yields both kinds") {
    auto result = extract_code_identifiers("class Shape:\n    pass\ndef Shape(k):\n    pass\n");
    CHECK(result == ids({{"Shape", Kind::Class}, {"Shape", Kind::Function}}));
}

TEST_CASE("unterminated string does not hide later declarations") {
    auto result = extract_code_identifiers("s = 'unterminated\ndef after():\n    pass\n");
    CHECK(result == ids({{"after", Kind::Function}}));
}

TEST_CASE("fixture corpus matches the frozen ctags-filtered table") {
    fs::path dir(IDPROV_FIXTURE_DIR "/extract");
    TagTable expected = load_expected(dir);
    REQUIRE(expected.size() >= 20);

    for (const auto& [file, tags] : expected) {
        std::string text = sanitize_utf8(read_bytes(dir / file));
        auto extracted = extract_code_identifiers(text);
        INFO("fixture: ", file);
        CHECK(extracted == tags);
    }
}

TEST_CASE("frozen table agrees with a live Universal Ctags when present") {
    if (!ctags_available()) return;  // environment has no ctags binary
    fs::path dir(IDPROV_FIXTURE_DIR "/extract");
    TagTable expected = load_expected(dir);
    TagTable live = run_ctags(dir);
    for (const auto& [file, tags] : live) {
        INFO("fixture: ", file);
        CHECK(expected[file] == tags);
    }
}

TEST_CASE("filename identifier") {
    CHECK(extract_filename_identifier("a/b/utils.py") == "utils");
    CHECK(extract_filename_identifier("setup.PY") == "setup");
    CHECK(extract_filename_identifier("__init__.py") == "__init__");
    CHECK_THROWS_AS(extract_filename_identifier("notes.txt"), NotPythonFile);
    CHECK_THROWS_AS(extract_filename_identifier("py"), NotPythonFile);
}

TEST_CASE("extract_release keeps file boundaries and drops non-.py files") {
    std::vector<SourceFile> files{{"m.py", "def a(): pass"}, {"n.txt", "def b(): pass"}};
    ReleaseExtraction out = extract_release(files);
    REQUIRE(out.files.size() == 1);
    CHECK(out.files.at("m.py") == ids({{"a", Kind::Function}}));
    CHECK(out.filenames == std::set<std::string>{"m"});

    CHECK(extract_release({}).files.empty());
    CHECK(extract_release({}).filenames.empty());

    std::vector<SourceFile> twins{{"x.py", "def run(): pass"}, {"y.py", "def run(): pass"}};
    ReleaseExtraction both = extract_release(twins);
    CHECK(both.files.at("x.py") == ids({{"run", Kind::Function}}));
    CHECK(both.files.at("y.py") == ids({{"run", Kind::Function}}));
}

TEST_CASE("zero-declaration .py file still contributes its filename") {
    ReleaseExtraction out = extract_release({{"pkg/__init__.py", ""}});
    CHECK(out.files.at("pkg/__init__.py").empty());
    CHECK(out.filenames == std::set<std::string>{"__init__"});
}

TEST_CASE("sanitize_utf8 replaces invalid bytes and keeps valid text") {
    CHECK(sanitize_utf8("plain ascii") == "plain ascii");
    CHECK(sanitize_utf8("caf\xC3\xA9") == "caf\xC3\xA9");
    CHECK(sanitize_utf8("bad \xFF byte") == "bad \xEF\xBF\xBD byte");
    CHECK(sanitize_utf8("trunc \xC3") == "trunc \xEF\xBF\xBD");
    // overlong encoding of '/'
    CHECK(sanitize_utf8("\xC0\xAF") == "\xEF\xBF\xBD\xEF\xBF\xBD");
}

TEST_CASE("property: extraction is idempotent and clean") {
    Rng rng(42);
    const char* statements[] = {
        "def f%z():\n    pass\n",
        "class C%z:\n    def m%z(self):\n        pass\n",
        "x%z = 'def s%z(): pass'\n",
        "# def c%z(): pass\n",
        "async def a%z():\n    return 0\n",
        "v%z = [1, 2, 3]\n",
    };
    for (int round = 0; round < 200; ++round) {
        std::string text;
        int pieces = 1 + static_cast<int>(rng.below(6));
        for (int i = 0; i < pieces; ++i) {
            std::string stmt = statements[rng.below(std::size(statements))];
            std::string z = std::to_string(rng.below(50));
            std::size_t pos;
            while ((pos = stmt.find("%z")) != std::string::npos) stmt.replace(pos, 2, z);
            text += stmt;
        }
        auto first = extract_code_identifiers(text);
        auto second = extract_code_identifiers(text);
        CHECK(first == second);
        for (const ExtractedIdentifier& ident : first) {
            CHECK(!ident.name.empty());
            CHECK(ident.name.find_first_of(" \t\r\n()") == std::string::npos);
        }
    }
}

TEST_CASE("property: concatenating complete statements never loses identifiers") {
    Rng rng(7);
    const char* statements[] = {
        "def g%z():\n    return 1\n",
        "class K%z:\n    pass\n",
        "y%z = \"class F%z: pass\"\n",
        "async def h%z():\n    pass\n",
    };
    auto gen = [&](int pieces) {
        std::string text;
        for (int i = 0; i < pieces; ++i) {
            std::string stmt = statements[rng.below(std::size(statements))];
            std::string z = std::to_string(rng.below(30));
            std::size_t pos;
            while ((pos = stmt.find("%z")) != std::string::npos) stmt.replace(pos, 2, z);
            text += stmt;
        }
        return text;
    };
    for (int round = 0; round < 200; ++round) {
        std::string a = gen(1 + static_cast<int>(rng.below(4)));
        std::string b = gen(1 + static_cast<int>(rng.below(4)));
        auto only_a = extract_code_identifiers(a);
        auto joined = extract_code_identifiers(a + "\n" + b);
        for (const ExtractedIdentifier& ident : only_a) CHECK(joined.count(ident) == 1);
    }
}
