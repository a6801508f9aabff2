#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tracekit/types.hpp"

namespace tracekit {

struct Blacklist {
    std::set<std::string> phrases;  // space-joined noun phrases
    std::size_t source_size = 0;    // background corpus document count

    bool contains(const std::string& phrase) const {
        return phrases.count(phrase) > 0;
    }
};

struct ConceptList {
    std::vector<std::pair<std::string, double>> concepts;  // (phrase, idf), idf desc
    std::string project_id;
};

// Noun phrases of the background corpus ranked by raw frequency (ties by
// phrase order); the top ceil(top_fraction * distinct) become the blacklist.
// An empty corpus yields an empty blacklist with a warning on stderr.
Blacklist build_blacklist(const Corpus& background, double top_fraction = 0.01);

// Noun phrases from all project artifacts minus the blacklist, scored
// idf(p) = ln(N / df(p)) over the project's N artifacts; phrases scoring
// below `idf_threshold` are removed. Sorted by descending idf, then phrase.
ConceptList select_concepts(const TraceDataset& project, const Blacklist& blacklist,
                            double idf_threshold);

// The `manually defined threshold` default: phrase absent from >= 75% of
// artifacts.
double default_idf_threshold();

// Top `max_queries` concepts by idf as space-joined query strings.
std::vector<std::string> build_queries(const ConceptList& concepts,
                                       std::size_t max_queries);

// Pluggable document source. Local and fixture providers are deterministic;
// a live search provider is intentionally not bundled.
class DocumentFetcher {
public:
    virtual ~DocumentFetcher() = default;
    virtual std::vector<std::string> fetch(const std::string& query) = 0;
    virtual std::string kind() const = 0;
};

// Serves every *.txt / *.html / *.md file under `dir` that shares at least
// one token with the query.
class LocalDirectoryFetcher final : public DocumentFetcher {
public:
    explicit LocalDirectoryFetcher(std::string dir);
    std::vector<std::string> fetch(const std::string& query) override;
    std::string kind() const override { return "local_directory"; }

private:
    std::string dir_;
};

// Recorded fixtures: files named <query-hash>*.{txt,html} hold the raw
// documents previously retrieved for that query.
class FixtureFetcher final : public DocumentFetcher {
public:
    explicit FixtureFetcher(std::string dir);
    std::vector<std::string> fetch(const std::string& query) override;
    std::string kind() const override { return "recorded_fixture"; }

private:
    std::string dir_;
};

// FNV-1a 64 of the query string, rendered as 16 hex digits (fixture names).
std::string query_hash(const std::string& query);

// Parses "local:DIR" / "fixture:DIR" specs.
std::unique_ptr<DocumentFetcher> make_fetcher(const std::string& spec);

// Minimal HTML-to-text: scripts/styles dropped, block tags and <li> become
// line breaks (list items as bullet lines), remaining tags stripped and the
// common entities decoded. Plain text passes through unchanged.
std::string html_to_text(const std::string& raw);

// Sentence segmentation: period/question/exclamation boundaries plus
// bullet-line boundaries.
std::vector<std::string> split_sentences(const std::string& text);

// Fetches every query, converts documents to text, splits sentences,
// preprocesses them and keeps only sentences sharing >= 1 token with their
// seeding query. Fetcher errors skip the query with a warning.
Corpus harvest_sentences(const std::vector<std::string>& queries,
                         DocumentFetcher& fetcher);

}  // namespace tracekit
