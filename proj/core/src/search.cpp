#include "idprov/search.hpp"

#include <algorithm>
#include <cmath>

#include "idprov/errors.hpp"
#include "idprov/rng.hpp"

namespace idprov {

TruthMissing::TruthMissing(std::vector<std::string> products)
    : Error("golden truth product(s) missing from index: " + [&] {
          std::string joined;
          for (const std::string& p : products) {
              if (!joined.empty()) joined += ", ";
              joined += p;
          }
          return joined;
      }()),
      missing(std::move(products)) {}

std::size_t RankedCandidates::rank_of(std::string_view truth) const {
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].product_name == truth) return i + 1;
    return 0;
}

std::vector<std::uint32_t> match(const InvertedIndex& index,
                                 const std::set<std::string>& fingerprint_names) {
    std::vector<const Posting*> postings;
    postings.reserve(fingerprint_names.size());
    for (const std::string& name : fingerprint_names) {
        const Posting* p = index.find(name, Namespace::Code);
        if (!p) return {};  // unindexed name: empty intersection
        postings.push_back(p);
    }
    if (postings.empty()) return {};
    // Rarest first keeps the running intersection small.
    std::sort(postings.begin(), postings.end(),
              [](const Posting* a, const Posting* b) {
                  return a->products.size() < b->products.size();
              });

    std::vector<std::uint32_t> result = postings.front()->products;
    for (std::size_t i = 1; i < postings.size() && !result.empty(); ++i) {
        std::vector<std::uint32_t> next;
        next.reserve(result.size());
        std::set_intersection(result.begin(), result.end(), postings[i]->products.begin(),
                              postings[i]->products.end(), std::back_inserter(next));
        result = std::move(next);
    }
    return result;
}

RankedCandidates rank(const InvertedIndex& index, const std::vector<std::uint32_t>& candidates) {
    RankedCandidates ranked;
    ranked.entries.reserve(candidates.size());
    for (std::uint32_t id : candidates) {
        double score = index.product_score(id).value_or(0.0);
        ranked.entries.push_back({id, index.product_name(id), score});
    }
    std::sort(ranked.entries.begin(), ranked.entries.end(),
              [](const RankedEntry& a, const RankedEntry& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.product_name < b.product_name;
              });
    return ranked;
}

bool verify_jaccard(const std::set<std::string>& subject_defs,
                    const std::set<std::string>& candidate_defs, double tau) {
    if (subject_defs.empty()) throw EmptySubject("subject has no identifiers to verify");
    std::size_t common = 0;
    for (const std::string& name : subject_defs) common += candidate_defs.count(name);
    double containment =
        static_cast<double>(common) / static_cast<double>(subject_defs.size());
    return containment >= tau;
}

std::set<std::string> product_defs(const InvertedIndex& index, std::uint32_t product_id,
                                   Namespace ns) {
    std::set<std::string> defs;
    for (const auto& [name, posting] : index.table(ns))
        if (std::binary_search(posting.products.begin(), posting.products.end(), product_id))
            defs.insert(name);
    return defs;
}

Verifier jaccard_verifier(const InvertedIndex& index, double tau) {
    return [&index, tau](const RankedEntry& top, const std::set<std::string>& subject_defs) {
        return verify_jaccard(subject_defs, product_defs(index, top.product_id), tau);
    };
}

bool IdentifyResult::all_trials_unsampleable() const {
    if (trials.empty()) return false;
    return std::all_of(trials.begin(), trials.end(),
                       [](const TrialRecord& t) { return !t.fingerprint.has_value(); });
}

IdentifyResult identify(const ReleaseRecord& release, const InvertedIndex& index,
                        const IdentifyConfig& cfg, const Verifier& verifier) {
    if (!release.file_boundaries)
        throw NoFileBoundaries("identify needs a release with file boundaries");

    std::set<std::string> subject_defs = defs_release(release);
    IdentifyResult result;
    for (std::size_t trial = 1; trial <= cfg.trials; ++trial) {
        TrialRecord record;
        record.trial = trial;

        SamplerConfig sampler{cfg.n, cfg.blocklist, derive_seed(cfg.seed, trial)};
        Fingerprint fp;
        try {
            fp = sample(release, cfg.strategy, sampler);
        } catch (const InsufficientIdentifiers&) {
            record.note = "insufficient-identifiers";
            result.trials.push_back(std::move(record));
            continue;
        }
        record.fingerprint = fp;

        RankedCandidates ranked = rank(index, match(index, fp.names));
        ranked.fingerprint = std::move(fp);
        record.candidates = ranked.size();
        if (!ranked.entries.empty()) {
            record.top = ranked.entries.front();
            record.verified = verifier(ranked.entries.front(), subject_defs);
        }
        bool verified = record.verified;
        std::uint32_t top_id = record.top ? record.top->product_id : 0;
        result.trials.push_back(std::move(record));
        if (verified) {
            result.found = {top_id, trial};
            break;
        }
    }
    return result;
}

int recall_at_k(const RankedCandidates& outcome, std::string_view truth, std::size_t k) {
    std::size_t rank = outcome.rank_of(truth);
    return rank >= 1 && rank <= k ? 1 : 0;
}

double precision_at_k(const RankedCandidates& outcome, std::string_view truth, std::size_t k) {
    std::size_t n = outcome.size();
    if (n == 0)
        throw UndefinedForEmptyResult("precision at k is undefined for an empty result");
    std::size_t rank = outcome.rank_of(truth);
    if (rank >= 1 && rank <= k) return 1.0 / static_cast<double>(std::min(k, n));
    return 0.0;
}

bool test_example_path(std::string_view path) {
    // Directory components only; the filename itself does not count.
    std::size_t last_slash = path.find_last_of('/');
    if (last_slash == std::string_view::npos) return false;
    std::string_view dirs = path.substr(0, last_slash);
    std::size_t start = 0;
    while (start <= dirs.size()) {
        std::size_t slash = dirs.find('/', start);
        std::string_view component = slash == std::string_view::npos
                                         ? dirs.substr(start)
                                         : dirs.substr(start, slash - start);
        if (component.find("test") != std::string_view::npos ||
            component.find("example") != std::string_view::npos)
            return true;
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    return false;
}

namespace {

struct Outcome {
    OutcomeRecord record;
    RankedCandidates ranked;
};

// Best outcome per subject: truth found at the best rank wins; smaller
// result breaks ties; then the earlier trial. With no truth anywhere, any
// non-empty outcome beats an empty one.
bool better_outcome(const Outcome& a, const Outcome& b) {
    bool a_hit = a.record.truth_rank > 0, b_hit = b.record.truth_rank > 0;
    if (a_hit != b_hit) return a_hit;
    if (a_hit && a.record.truth_rank != b.record.truth_rank)
        return a.record.truth_rank < b.record.truth_rank;
    bool a_nonempty = a.record.candidates > 0, b_nonempty = b.record.candidates > 0;
    if (a_nonempty != b_nonempty) return a_nonempty;
    if (a_hit && a.record.candidates != b.record.candidates)
        return a.record.candidates < b.record.candidates;
    return a.record.trial < b.record.trial;
}

std::vector<std::size_t> report_ks(const std::vector<const Outcome*>& outcomes) {
    std::size_t max_n = 0;
    for (const Outcome* o : outcomes) max_n = std::max(max_n, o->record.candidates);
    std::set<std::size_t> ks;
    for (std::size_t k = 1; k <= 10; ++k) ks.insert(k);
    ks.insert(100);
    if (max_n > 0) ks.insert(max_n);
    return {ks.begin(), ks.end()};
}

std::vector<EvalRow> score_rows(const std::vector<const Outcome*>& outcomes,
                                const std::vector<std::string>& truths) {
    std::vector<EvalRow> rows;
    for (std::size_t k : report_ks(outcomes)) {
        EvalRow row;
        row.k = k;
        double recall_sum = 0.0, precision_sum = 0.0;
        std::size_t nonempty = 0;
        for (const Outcome* o : outcomes) {
            const std::string& truth = truths[o->record.subject];
            if (o->record.candidates >= k) ++row.relevant;
            recall_sum += recall_at_k(o->ranked, truth, k);
            if (o->record.candidates > 0) {
                precision_sum += precision_at_k(o->ranked, truth, k);
                ++nonempty;
            }
        }
        row.recall = outcomes.empty() ? 0.0 : recall_sum / outcomes.size();
        row.precision = nonempty == 0 ? 0.0 : precision_sum / nonempty;
        double pr = row.precision + row.recall;
        row.fscore = pr == 0.0 ? 0.0 : 2.0 * row.precision * row.recall / pr;
        rows.push_back(row);
    }
    return rows;
}

EvalTotals tally(const std::vector<const Outcome*>& outcomes, std::size_t subjects) {
    EvalTotals totals;
    totals.subjects = subjects;
    totals.outcomes = outcomes.size();
    for (const Outcome* o : outcomes) {
        if (!o->record.sampled) ++totals.sample_failures;
        if (o->record.candidates == 0) {
            ++totals.empty;
            if (o->record.test_example) ++totals.empty_test_example;
        } else if (o->record.truth_rank > 0) {
            ++totals.successful;
        } else {
            ++totals.failed;
            if (o->record.test_example) ++totals.failed_test_example;
        }
    }
    return totals;
}

}  // namespace

EvalReport evaluate(const std::vector<GoldenPair>& golden, const InvertedIndex& index,
                    const EvalConfig& cfg) {
    {
        std::vector<std::string> missing;
        std::set<std::string_view> known;
        for (std::uint32_t id = 0; id < index.total_products(); ++id)
            known.insert(index.product_name(id));
        for (const GoldenPair& pair : golden)
            if (!known.count(pair.truth)) missing.push_back(pair.truth);
        if (!missing.empty()) throw TruthMissing(std::move(missing));
    }

    std::vector<std::string> truths;
    truths.reserve(golden.size());
    for (const GoldenPair& pair : golden) truths.push_back(pair.truth);

    std::vector<Outcome> outcomes;
    std::vector<std::size_t> best_index(golden.size());
    for (std::size_t subject = 0; subject < golden.size(); ++subject) {
        std::uint64_t subject_seed = derive_seed(cfg.seed, subject);
        std::size_t first = outcomes.size();
        for (std::size_t trial = 1; trial <= cfg.trials; ++trial) {
            Outcome outcome;
            outcome.record.subject = subject;
            outcome.record.trial = trial;
            SamplerConfig sampler{cfg.n, cfg.blocklist, derive_seed(subject_seed, trial)};
            try {
                Fingerprint fp = sample(golden[subject].subject, cfg.strategy, sampler);
                outcome.record.sampled = true;
                for (const auto& [path, name] : fp.sources)
                    outcome.record.test_example |= test_example_path(path);
                outcome.ranked = rank(index, match(index, fp.names));
                outcome.ranked.fingerprint = std::move(fp);
                outcome.record.candidates = outcome.ranked.size();
                outcome.record.truth_rank = outcome.ranked.rank_of(truths[subject]);
            } catch (const InsufficientIdentifiers&) {
                // recorded as an empty outcome
            }
            outcomes.push_back(std::move(outcome));
        }
        std::size_t best = first;
        for (std::size_t i = first + 1; i < outcomes.size(); ++i)
            if (better_outcome(outcomes[i], outcomes[best])) best = i;
        best_index[subject] = best;
    }

    std::vector<const Outcome*> all;
    all.reserve(outcomes.size());
    for (const Outcome& o : outcomes) all.push_back(&o);
    std::vector<const Outcome*> best;
    best.reserve(golden.size());
    for (std::size_t i : best_index) best.push_back(&outcomes[i]);

    EvalReport report;
    report.per_outcome = score_rows(all, truths);
    report.best_of = score_rows(best, truths);
    report.totals = tally(all, golden.size());
    report.best_totals = tally(best, golden.size());
    report.outcomes.reserve(outcomes.size());
    for (const Outcome& o : outcomes) report.outcomes.push_back(o.record);
    return report;
}

}  // namespace idprov
