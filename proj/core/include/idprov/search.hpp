#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "idprov/index.hpp"
#include "idprov/sample.hpp"

namespace idprov {

struct RankedEntry {
    std::uint32_t product_id = 0;
    std::string product_name;
    double score = 0.0;
};

/// Candidates ordered by descending score, name ascending on ties.
struct RankedCandidates {
    std::vector<RankedEntry> entries;
    std::optional<Fingerprint> fingerprint;

    std::size_t size() const { return entries.size(); }
    /// 1-based rank of the product named `truth`, 0 if absent.
    std::size_t rank_of(std::string_view truth) const;
};

/// Products whose Defs contain every fingerprint name: the intersection of
/// the posting lists, evaluated rarest-first. A name absent from the index
/// empties the result. Returned ids are ascending.
std::vector<std::uint32_t> match(const InvertedIndex& index,
                                 const std::set<std::string>& fingerprint_names);

/// Orders a candidate set by (score descending, product name ascending).
/// Products without a score rank as score 0.
RankedCandidates rank(const InvertedIndex& index, const std::vector<std::uint32_t>& candidates);

/// Subject-side containment check: |subject ∩ candidate| / |subject| >= tau.
/// Throws EmptySubject.
bool verify_jaccard(const std::set<std::string>& subject_defs,
                    const std::set<std::string>& candidate_defs, double tau);

/// Reconstructs Defs(product) from the postings (the index does not store
/// per-product sets). Linear in the index; meant for verifying a handful of
/// top candidates, not for bulk scans.
std::set<std::string> product_defs(const InvertedIndex& index, std::uint32_t product_id,
                                   Namespace ns = Namespace::Code);

/// Decides whether a top-ranked candidate is the subject's origin.
using Verifier =
    std::function<bool(const RankedEntry& top, const std::set<std::string>& subject_defs)>;

/// Default verifier: containment of the subject's Defs in the candidate's
/// reconstructed Defs at threshold tau.
Verifier jaccard_verifier(const InvertedIndex& index, double tau);

struct IdentifyConfig {
    std::size_t n = 3;
    std::size_t trials = 5;
    Strategy strategy = Strategy::SingleFile;
    Blocklist blocklist;
    std::uint64_t seed = 0;
};

struct TrialRecord {
    std::size_t trial = 0;  // 1-based
    std::optional<Fingerprint> fingerprint;
    std::size_t candidates = 0;
    std::optional<RankedEntry> top;
    bool verified = false;
    std::string note;  // "insufficient-identifiers" when sampling failed
};

struct IdentifyResult {
    /// (product id, trial index) of the first verified top candidate.
    std::optional<std::pair<std::uint32_t, std::size_t>> found;
    std::vector<TrialRecord> trials;

    bool all_trials_unsampleable() const;
};

/// Repeats up to cfg.trials times: derive the trial sub-seed, sample a
/// fingerprint, match, rank, verify the top candidate only; stops at the
/// first verified hit. Empty matches and unsampleable trials are recorded
/// and skipped. Throws NoFileBoundaries.
IdentifyResult identify(const ReleaseRecord& release, const InvertedIndex& index,
                        const IdentifyConfig& cfg, const Verifier& verifier);

/// 1 if the truth is in the first k entries, else 0.
int recall_at_k(const RankedCandidates& outcome, std::string_view truth, std::size_t k);

/// 1/min(k, n) if the truth is in the first k entries, else 0. Throws
/// UndefinedForEmptyResult when the outcome is empty (averages skip these).
double precision_at_k(const RankedCandidates& outcome, std::string_view truth, std::size_t k);

/// True when any directory component of the path (the filename itself does
/// not count) contains "test" or "example".
bool test_example_path(std::string_view path);

struct GoldenPair {
    ReleaseRecord subject;
    std::string truth;
};

struct EvalConfig {
    std::size_t n = 3;
    std::size_t trials = 5;
    Strategy strategy = Strategy::SingleFile;
    Blocklist blocklist;
    std::uint64_t seed = 0;
};

struct EvalRow {
    std::size_t k = 0;
    std::size_t relevant = 0;  // outcomes with at least k candidates
    double recall = 0.0;
    double precision = 0.0;
    double fscore = 0.0;
};

struct EvalTotals {
    std::size_t subjects = 0;
    std::size_t outcomes = 0;
    std::size_t empty = 0;       // no candidates (sampling failures included)
    std::size_t successful = 0;  // truth among the candidates
    std::size_t failed = 0;      // candidates returned, none the truth
    std::size_t sample_failures = 0;
    std::size_t empty_test_example = 0;   // empty outcomes that drew from test/example dirs
    std::size_t failed_test_example = 0;  // failed outcomes that did
};

struct OutcomeRecord {
    std::size_t subject = 0;
    std::size_t trial = 0;  // 1-based
    bool sampled = false;
    std::size_t candidates = 0;
    std::size_t truth_rank = 0;  // 1-based, 0 when absent
    bool test_example = false;   // any sampled source under a test/example dir
};

struct EvalReport {
    std::vector<EvalRow> per_outcome;
    std::vector<EvalRow> best_of;
    EvalTotals totals;
    EvalTotals best_totals;
    std::vector<OutcomeRecord> outcomes;
};

/// Runs cfg.trials fingerprint+match+rank outcomes per golden subject and
/// reports recall/precision/F-score at k over all outcomes and over the
/// best outcome per subject. k ranges over 1..10, 100 and the largest
/// result size. Recall averages over every outcome; precision skips empty
/// ones. Throws TruthMissing listing golden products absent from the index.
EvalReport evaluate(const std::vector<GoldenPair>& golden, const InvertedIndex& index,
                    const EvalConfig& cfg);

}  // namespace idprov
