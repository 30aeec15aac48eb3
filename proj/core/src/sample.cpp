#include "idprov/sample.hpp"

#include <algorithm>
#include <map>

#include "idprov/errors.hpp"
#include "idprov/rng.hpp"

namespace idprov {

namespace {

struct FileNames {
    const std::string* path;
    std::vector<const std::string*> names;  // eligible, sorted for determinism
};

std::vector<FileNames> eligible_by_file(const ReleaseRecord& release,
                                        const Blocklist& blocklist) {
    std::vector<FileNames> files;
    for (const auto& [path, idents] : release.files) {  // std::map: path order
        FileNames entry{&path, {}};
        const std::string* last = nullptr;
        for (const ExtractedIdentifier& ident : idents) {
            if (last && *last == ident.name) continue;  // class+function twin
            if (blocklist.contains(ident.name)) continue;
            entry.names.push_back(&ident.name);
            last = &ident.name;
        }
        files.push_back(std::move(entry));
    }
    return files;
}

void require_boundaries(const ReleaseRecord& release) {
    if (!release.file_boundaries)
        throw NoFileBoundaries(
            "release was ingested without file boundaries; sampling needs per-file sets");
}

// Kuhn's augmenting-path matching: can `need` files from `files` (indices in
// `pool`) be matched to pairwise-distinct names outside `taken`? Inputs are
// tiny (a release's files), so the O(V*E) bound is irrelevant.
class MatchOracle {
  public:
    MatchOracle(const std::vector<FileNames>& files, const std::set<std::string>& taken) {
        for (std::size_t i = 0; i < files.size(); ++i)
            for (const std::string* name : files[i].names)
                if (!taken.count(*name)) edges_[*name];  // collect distinct free names
        std::size_t id = 0;
        for (auto& [name, slot] : edges_) slot = id++;
        adjacency_.resize(files.size());
        for (std::size_t i = 0; i < files.size(); ++i)
            for (const std::string* name : files[i].names) {
                auto it = edges_.find(*name);
                if (it != edges_.end()) adjacency_[i].push_back(it->second);
            }
    }

    /// Max matching size over the given file indices, stopping once `need`
    /// is reached.
    std::size_t max_matching(const std::vector<std::size_t>& pool, std::size_t need) const {
        std::vector<std::ptrdiff_t> owner(edges_.size(), -1);
        std::size_t matched = 0;
        for (std::size_t file : pool) {
            std::vector<bool> visited(edges_.size(), false);
            if (augment(file, pool, owner, visited)) {
                ++matched;
                if (matched >= need) return matched;
            }
        }
        return matched;
    }

  private:
    bool augment(std::size_t file, const std::vector<std::size_t>& pool,
                 std::vector<std::ptrdiff_t>& owner, std::vector<bool>& visited) const {
        for (std::size_t name : adjacency_[file]) {
            if (visited[name]) continue;
            visited[name] = true;
            if (owner[name] < 0 ||
                (std::find(pool.begin(), pool.end(), static_cast<std::size_t>(owner[name])) !=
                     pool.end() &&
                 augment(static_cast<std::size_t>(owner[name]), pool, owner, visited))) {
                owner[name] = static_cast<std::ptrdiff_t>(file);
                return true;
            }
        }
        return false;
    }

    std::map<std::string, std::size_t> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

}  // namespace

std::string_view to_string(Strategy s) {
    return s == Strategy::SingleFile ? "single-file" : "disjoint-files";
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
    if (s == "single-file") return Strategy::SingleFile;
    if (s == "disjoint-files") return Strategy::DisjointFiles;
    return std::nullopt;
}

std::set<std::string> eligible_names(const std::set<ExtractedIdentifier>& file_identifiers,
                                     const Blocklist& blocklist) {
    std::set<std::string> out;
    for (const ExtractedIdentifier& ident : file_identifiers)
        if (!blocklist.contains(ident.name)) out.insert(ident.name);
    return out;
}

Fingerprint sample_single_file(const ReleaseRecord& release, const SamplerConfig& cfg) {
    require_boundaries(release);
    std::vector<FileNames> files = eligible_by_file(release, cfg.blocklist);
    Rng rng(cfg.seed);

    std::vector<std::size_t> remaining(files.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

    // Draw files without replacement until one holds N eligible names.
    while (!remaining.empty()) {
        std::size_t pick = static_cast<std::size_t>(rng.below(remaining.size()));
        std::size_t file = remaining[pick];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        if (files[file].names.size() < cfg.n) continue;

        std::vector<const std::string*> pool = files[file].names;
        rng.shuffle(pool);
        Fingerprint fp;
        fp.strategy = Strategy::SingleFile;
        fp.n = cfg.n;
        for (std::size_t i = 0; i < cfg.n; ++i) {
            fp.names.insert(*pool[i]);
            fp.sources.emplace_back(*files[file].path, *pool[i]);
        }
        return fp;
    }
    throw InsufficientIdentifiers("no file holds " + std::to_string(cfg.n) +
                                  " eligible identifiers");
}

Fingerprint sample_disjoint_files(const ReleaseRecord& release, const SamplerConfig& cfg) {
    require_boundaries(release);
    std::vector<FileNames> files = eligible_by_file(release, cfg.blocklist);
    Rng rng(cfg.seed);

    std::set<std::string> taken;
    MatchOracle oracle(files, taken);
    std::vector<std::size_t> remaining(files.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
    if (oracle.max_matching(remaining, cfg.n) < cfg.n)
        throw InsufficientIdentifiers("no assignment of " + std::to_string(cfg.n) +
                                      " distinct identifiers to distinct files exists");

    Fingerprint fp;
    fp.strategy = Strategy::DisjointFiles;
    fp.n = cfg.n;
    while (fp.names.size() < cfg.n) {
        std::size_t need = cfg.n - fp.names.size();
        // Draw a file uniformly; a file that cannot contribute any more is
        // dropped for good (its eligible set only shrinks from here on).
        bool committed = false;
        while (!committed) {
            std::size_t pick = static_cast<std::size_t>(rng.below(remaining.size()));
            std::size_t file = remaining[pick];

            std::vector<const std::string*> fresh;
            for (const std::string* name : files[file].names)
                if (!fp.names.count(*name)) fresh.push_back(name);
            if (fresh.empty()) {
                remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
                continue;
            }

            // Try the file's names in random order; commit the first choice
            // that keeps a full assignment reachable for the other files.
            // The up-front matching check guarantees some (file, name) pair
            // at this level commits, so the loop terminates.
            rng.shuffle(fresh);
            std::vector<std::size_t> rest = remaining;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
            for (const std::string* name : fresh) {
                std::set<std::string> taken_next(fp.names);
                taken_next.insert(*name);
                MatchOracle residual(files, taken_next);
                if (residual.max_matching(rest, need - 1) >= need - 1) {
                    fp.names.insert(*name);
                    fp.sources.emplace_back(*files[file].path, *name);
                    remaining = std::move(rest);
                    committed = true;
                    break;
                }
            }
            if (!committed)
                remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        }
    }
    return fp;
}

Fingerprint sample(const ReleaseRecord& release, Strategy strategy, const SamplerConfig& cfg) {
    return strategy == Strategy::SingleFile ? sample_single_file(release, cfg)
                                            : sample_disjoint_files(release, cfg);
}

}  // namespace idprov
