// idprov — identifier-based provenance toolkit.
//
// Subcommands: build, stats, query, identify, evaluate, extract, export.
// Exit status contract: 0 success/found, 1 valid-but-negative result,
// 2 usage or environment error.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "idprov/corpus.hpp"
#include "idprov/errors.hpp"
#include "idprov/extract.hpp"
#include "idprov/index.hpp"
#include "idprov/sample.hpp"
#include "idprov/search.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitFound = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

std::string format_score(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string format_metric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string format_percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

struct SeedOption {
    std::optional<std::uint64_t> seed;
    bool strict = false;

    std::uint64_t resolve() const {
        if (seed) return *seed;
        if (strict)
            throw idprov::Error("--strict requires an explicit --seed");
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed (runs are reproducible given the seed)");
        cmd->add_flag("--strict", strict, "fail unless --seed is given explicitly");
    }
};

struct IndexOption {
    std::string dir;

    void attach(CLI::App* cmd) {
        cmd->add_option("--index", dir, "index directory")
            ->envname("IDPROV_INDEX")
            ->required();
    }
};

idprov::Strategy parse_strategy(const std::string& s) {
    auto strategy = idprov::strategy_from_string(s);
    if (!strategy) throw idprov::Error("unknown strategy: " + s);
    return *strategy;
}

// ---------------------------------------------------------------- build

struct BuildArgs {
    std::string input;
    std::string out;
    bool manifest = false;
    std::size_t max_releases = idprov::kDefaultMaxReleases;
    std::size_t blocklist_size = 300;
    std::string scores_file;
};

int cmd_build(const BuildArgs& args) {
    std::vector<idprov::ProductRecord> products;
    if (args.manifest || fs::is_regular_file(args.input)) {
        std::ifstream in(args.input);
        if (!in) throw idprov::IoError("cannot read manifest: " + args.input);
        products = idprov::ingest_manifest(in);
    } else {
        products = idprov::ingest_directory(args.input, args.max_releases);
    }
    if (!args.scores_file.empty()) {
        std::ifstream scores(args.scores_file);
        if (!scores) throw idprov::IoError("cannot read scores: " + args.scores_file);
        idprov::apply_scores(products, scores);
    }

    std::size_t without_identifiers = 0;
    for (const idprov::ProductRecord& p : products)
        if (!p.has_identifiers()) ++without_identifiers;

    idprov::InvertedIndex index = idprov::build_index(products);
    std::vector<idprov::Blocklist> blocklists{
        idprov::build_blocklist(index, idprov::Namespace::Code, args.blocklist_size),
        idprov::build_blocklist(index, idprov::Namespace::Filename, args.blocklist_size)};
    idprov::save_index(index, args.out, blocklists);

    std::cout << "products\t" << index.total_products() << "\n"
              << "code-names\t" << index.distinct_names(idprov::Namespace::Code) << "\n"
              << "filename-names\t" << index.distinct_names(idprov::Namespace::Filename) << "\n"
              << "zero-identifier-products\t" << without_identifiers << "\n";
    return kExitFound;
}

// ---------------------------------------------------------------- stats

int cmd_stats(const std::string& index_dir, const std::string& ns_name, bool instances) {
    auto ns = idprov::namespace_from_string(ns_name);
    if (!ns) throw idprov::Error("unknown namespace: " + ns_name);
    idprov::InvertedIndex index = idprov::load_index(index_dir);
    std::vector<idprov::DistRow> rows = instances
                                            ? idprov::instance_distribution(index, *ns)
                                            : idprov::frequency_distribution(index, *ns);
    if (instances)
        std::cout << "frequency\tidentifiers\tinstances\tproportion\tcumulative\n";
    else
        std::cout << "frequency\tidentifiers\tproportion\tcumulative\n";
    for (const idprov::DistRow& row : rows) {
        std::cout << row.label << '\t' << row.identifiers << '\t';
        if (instances) std::cout << row.instances << '\t';
        std::cout << format_percent(row.proportion) << '\t' << format_percent(row.cumulative)
                  << "\n";
    }
    return kExitFound;
}

// ---------------------------------------------------------------- query

int cmd_query(const std::string& index_dir, const std::vector<std::string>& names) {
    idprov::InvertedIndex index = idprov::load_index(index_dir);
    std::set<std::string> fingerprint(names.begin(), names.end());
    idprov::RankedCandidates ranked = idprov::rank(index, idprov::match(index, fingerprint));
    std::size_t position = 0;
    for (const idprov::RankedEntry& entry : ranked.entries)
        std::cout << ++position << '\t' << entry.product_name << '\t'
                  << format_score(entry.score) << "\n";
    return ranked.entries.empty() ? kExitNegative : kExitFound;
}

// ---------------------------------------------------------------- identify

ordered_json fingerprint_json(const idprov::Fingerprint& fp) {
    ordered_json sources = ordered_json::array();
    for (const auto& [path, name] : fp.sources)
        sources.push_back(ordered_json{{"path", path}, {"name", name}});
    return ordered_json{{"strategy", idprov::to_string(fp.strategy)},
                        {"names", fp.names},
                        {"sources", sources}};
}

struct IdentifyArgs {
    std::string subject;
    IndexOption index;
    SeedOption seed;
    std::size_t n = 3;
    std::size_t trials = 5;
    std::string strategy = "single-file";
    double tau = 0.5;
    bool report = false;
};

int cmd_identify(const IdentifyArgs& args) {
    idprov::InvertedIndex index = idprov::load_index(args.index.dir);
    idprov::ReleaseRecord subject = idprov::ingest_release_directory(args.subject);
    if (subject.files.empty())
        throw idprov::Error("subject contains no .py files: " + args.subject);

    idprov::IdentifyConfig cfg;
    cfg.n = args.n;
    cfg.trials = args.trials;
    cfg.strategy = parse_strategy(args.strategy);
    cfg.blocklist = idprov::load_blocklist(args.index.dir, idprov::Namespace::Code);
    cfg.seed = args.seed.resolve();

    idprov::IdentifyResult result =
        idprov::identify(subject, index, cfg, idprov::jaccard_verifier(index, args.tau));

    if (args.report) {
        ordered_json trials = ordered_json::array();
        for (const idprov::TrialRecord& trial : result.trials) {
            ordered_json entry{{"trial", trial.trial},
                               {"candidates", trial.candidates},
                               {"verified", trial.verified}};
            if (trial.fingerprint) entry["fingerprint"] = fingerprint_json(*trial.fingerprint);
            if (trial.top) entry["top"] = trial.top->product_name;
            if (!trial.note.empty()) entry["note"] = trial.note;
            trials.push_back(std::move(entry));
        }
        ordered_json out{{"trials", trials}};
        if (result.found)
            out["found"] = ordered_json{{"product", index.product_name(result.found->first)},
                                        {"trial", result.found->second}};
        else
            out["found"] = nullptr;
        std::cout << out.dump(2) << "\n";
    } else if (result.found) {
        std::cout << index.product_name(result.found->first) << '\t' << result.found->second
                  << "\n";
    }

    if (result.found) return kExitFound;
    if (result.all_trials_unsampleable())
        throw idprov::InsufficientIdentifiers(
            "no trial could sample " + std::to_string(args.n) +
            " eligible identifiers from the subject");
    std::cerr << "no verified origin after " << args.trials << " trials\n";
    return kExitNegative;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string golden;
    IndexOption index;
    SeedOption seed;
    std::size_t n = 3;
    std::size_t trials = 5;
    std::string strategy = "single-file";
    bool json = false;
};

std::vector<idprov::GoldenPair> load_golden(const fs::path& golden_file) {
    std::ifstream in(golden_file);
    if (!in) throw idprov::IoError("cannot read golden set: " + golden_file.string());
    fs::path base = golden_file.parent_path();

    std::vector<idprov::GoldenPair> golden;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json record;
        try {
            record = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw idprov::ParseError(line_no, e.what());
        }
        if (!record.contains("subject_dir") || !record["subject_dir"].is_string() ||
            !record.contains("truth") || !record["truth"].is_string())
            throw idprov::ParseError(line_no, "expected {\"subject_dir\": ..., \"truth\": ...}");
        fs::path subject_dir = record["subject_dir"].get<std::string>();
        if (subject_dir.is_relative()) subject_dir = base / subject_dir;
        golden.push_back({idprov::ingest_release_directory(subject_dir),
                          record["truth"].get<std::string>()});
    }
    return golden;
}

void print_totals(const char* prefix, const idprov::EvalTotals& t) {
    std::cout << "# " << prefix << "subjects\t" << t.subjects << "\n"
              << "# " << prefix << "outcomes\t" << t.outcomes << "\n"
              << "# " << prefix << "empty\t" << t.empty << "\n"
              << "# " << prefix << "successful\t" << t.successful << "\n"
              << "# " << prefix << "failed\t" << t.failed << "\n"
              << "# " << prefix << "sample-failures\t" << t.sample_failures << "\n"
              << "# " << prefix << "empty-test-example\t" << t.empty_test_example << "\n"
              << "# " << prefix << "failed-test-example\t" << t.failed_test_example << "\n";
}

void print_rows(const std::vector<idprov::EvalRow>& rows) {
    std::cout << "k\trelevant\trecall\tprecision\tfscore\n";
    for (const idprov::EvalRow& row : rows)
        std::cout << row.k << '\t' << row.relevant << '\t' << format_metric(row.recall) << '\t'
                  << format_metric(row.precision) << '\t' << format_metric(row.fscore) << "\n";
}

ordered_json rows_json(const std::vector<idprov::EvalRow>& rows) {
    ordered_json out = ordered_json::array();
    for (const idprov::EvalRow& row : rows)
        out.push_back(ordered_json{{"k", row.k},
                                   {"relevant", row.relevant},
                                   {"recall", row.recall},
                                   {"precision", row.precision},
                                   {"fscore", row.fscore}});
    return out;
}

ordered_json totals_json(const idprov::EvalTotals& t) {
    return ordered_json{{"subjects", t.subjects},
                        {"outcomes", t.outcomes},
                        {"empty", t.empty},
                        {"successful", t.successful},
                        {"failed", t.failed},
                        {"sample_failures", t.sample_failures},
                        {"empty_test_example", t.empty_test_example},
                        {"failed_test_example", t.failed_test_example}};
}

int cmd_evaluate(const EvaluateArgs& args) {
    idprov::InvertedIndex index = idprov::load_index(args.index.dir);
    std::vector<idprov::GoldenPair> golden = load_golden(args.golden);

    idprov::EvalConfig cfg;
    cfg.n = args.n;
    cfg.trials = args.trials;
    cfg.strategy = parse_strategy(args.strategy);
    cfg.blocklist = idprov::load_blocklist(args.index.dir, idprov::Namespace::Code);
    cfg.seed = args.seed.resolve();

    idprov::EvalReport report = idprov::evaluate(golden, index, cfg);

    if (args.json) {
        ordered_json outcomes = ordered_json::array();
        for (const idprov::OutcomeRecord& o : report.outcomes)
            outcomes.push_back(ordered_json{{"subject", o.subject},
                                            {"trial", o.trial},
                                            {"sampled", o.sampled},
                                            {"candidates", o.candidates},
                                            {"truth_rank", o.truth_rank},
                                            {"test_example", o.test_example}});
        ordered_json out{{"per_outcome", rows_json(report.per_outcome)},
                         {"best_of_trials", rows_json(report.best_of)},
                         {"totals", totals_json(report.totals)},
                         {"best_totals", totals_json(report.best_totals)},
                         {"outcomes", outcomes}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "# variant\tper-outcome\n";
        print_rows(report.per_outcome);
        print_totals("", report.totals);
        std::cout << "# variant\tbest-of-trials\n";
        print_rows(report.best_of);
        print_totals("best-", report.best_totals);
    }
    return kExitFound;
}

// ---------------------------------------------------------------- extract

int cmd_extract(const std::vector<std::string>& paths) {
    std::vector<idprov::SourceFile> sources;
    for (const std::string& arg : paths) {
        fs::path p(arg);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::recursive_directory_iterator(p)) {
                if (!entry.is_regular_file()) continue;
                std::string rel = fs::relative(entry.path(), p).generic_string();
                if (!idprov::is_python_path(rel)) continue;
                std::ifstream in(entry.path(), std::ios::binary);
                std::string bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
                sources.push_back({rel, idprov::sanitize_utf8(bytes)});
            }
        } else if (fs::is_regular_file(p)) {
            std::ifstream in(p, std::ios::binary);
            if (!in) throw idprov::IoError("cannot read " + arg);
            std::string bytes((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
            sources.push_back({p.generic_string(), idprov::sanitize_utf8(bytes)});
        } else {
            throw idprov::IoError("no such file or directory: " + arg);
        }
    }

    std::vector<std::tuple<std::string, std::string, std::string>> rows;  // path, kind, name
    for (const idprov::SourceFile& file : sources) {
        if (!idprov::is_python_path(file.path))
            throw idprov::NotPythonFile("not a .py file: " + file.path);
        for (const idprov::ExtractedIdentifier& ident :
             idprov::extract_code_identifiers(file.text))
            rows.emplace_back(file.path, std::string(idprov::to_string(ident.kind)), ident.name);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [path, kind, name] : rows)
        std::cout << ordered_json{{"path", path}, {"name", name}, {"kind", kind}}.dump() << "\n";
    return kExitFound;
}

// ---------------------------------------------------------------- export

int cmd_export(const std::string& root, std::size_t max_releases, const std::string& out_file) {
    std::vector<idprov::ProductRecord> products = idprov::ingest_directory(root, max_releases);
    if (out_file.empty()) {
        idprov::export_manifest(products, std::cout);
    } else {
        std::ofstream out(out_file, std::ios::binary | std::ios::trunc);
        if (!out) throw idprov::IoError("cannot write " + out_file);
        idprov::export_manifest(products, out);
    }
    return kExitFound;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"identifier-based software provenance toolkit"};
    app.require_subcommand(1);

    BuildArgs build_args;
    CLI::App* build = app.add_subcommand("build", "build an index from a corpus tree or manifest");
    build->add_option("input", build_args.input, "corpus root directory or manifest JSONL file")
        ->required();
    build->add_option("-o,--out", build_args.out, "output index directory")->required();
    build->add_flag("--manifest", build_args.manifest, "treat input as a manifest JSONL file");
    build->add_option("--max-releases", build_args.max_releases,
                      "most recent releases kept per product");
    build->add_option("-K,--blocklist-size", build_args.blocklist_size,
                      "blocklist entries per namespace");
    build->add_option("--scores", build_args.scores_file,
                      "product_name<TAB>score file with popularity scores");

    IndexOption stats_index;
    std::string stats_ns = "code";
    bool stats_instances = false;
    CLI::App* stats = app.add_subcommand("stats", "frequency distribution tables");
    stats_index.attach(stats);
    stats->add_option("--namespace", stats_ns, "code or filename");
    stats->add_flag("--instances", stats_instances, "weight rows by instances");

    IndexOption query_index;
    std::vector<std::string> query_names;
    CLI::App* query = app.add_subcommand("query", "products containing all given identifiers");
    query_index.attach(query);
    query->add_option("names", query_names, "identifier names")->required();

    IdentifyArgs identify_args;
    CLI::App* identify = app.add_subcommand("identify", "find the origin of a subject directory");
    identify->add_option("subject", identify_args.subject, "subject source directory")
        ->required();
    identify_args.index.attach(identify);
    identify_args.seed.attach(identify);
    identify->add_option("-N,--fingerprint-size", identify_args.n, "identifiers per fingerprint");
    identify->add_option("--trials", identify_args.trials, "sampling attempts");
    identify->add_option("--strategy", identify_args.strategy, "single-file or disjoint-files");
    identify->add_option("--tau", identify_args.tau, "verification containment threshold")
        ->check(CLI::Range(0.0, 1.0));
    identify->add_flag("--report", identify_args.report, "print the per-trial JSON report");

    EvaluateArgs eval_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "score golden (subject, truth) pairs");
    evaluate->add_option("golden", eval_args.golden, "golden set JSONL file")->required();
    eval_args.index.attach(evaluate);
    eval_args.seed.attach(evaluate);
    evaluate->add_option("-N,--fingerprint-size", eval_args.n, "identifiers per fingerprint");
    evaluate->add_option("--trials", eval_args.trials, "outcomes per subject");
    evaluate->add_option("--strategy", eval_args.strategy, "single-file or disjoint-files");
    evaluate->add_flag("--json", eval_args.json, "emit the full JSON report");

    std::vector<std::string> extract_paths;
    CLI::App* extract = app.add_subcommand("extract", "extract identifiers as JSON lines");
    extract->add_option("paths", extract_paths, ".py files or directories")->required();

    std::string export_root, export_out;
    std::size_t export_max_releases = idprov::kDefaultMaxReleases;
    CLI::App* exporter = app.add_subcommand("export", "dump a corpus tree as a manifest");
    exporter->add_option("root", export_root, "corpus root directory")->required();
    exporter->add_option("-o,--out", export_out, "output file (default stdout)");
    exporter->add_option("--max-releases", export_max_releases,
                         "most recent releases kept per product");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*build) return cmd_build(build_args);
        if (*stats) return cmd_stats(stats_index.dir, stats_ns, stats_instances);
        if (*query) return cmd_query(query_index.dir, query_names);
        if (*identify) return cmd_identify(identify_args);
        if (*evaluate) return cmd_evaluate(eval_args);
        if (*extract) return cmd_extract(extract_paths);
        if (*exporter) return cmd_export(export_root, export_max_releases, export_out);
    } catch (const idprov::TruthMissing& e) {
        for (const std::string& name : e.missing)
            std::cerr << "idprov: truth missing from index: " << name << "\n";
        return kExitNegative;
    } catch (const idprov::ParseError& e) {
        std::cerr << "idprov: " << e.what() << "\n";
        // Golden-set parse problems are a negative result, not a usage error.
        return *evaluate ? kExitNegative : kExitError;
    } catch (const idprov::Error& e) {
        std::cerr << "idprov: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "idprov: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
