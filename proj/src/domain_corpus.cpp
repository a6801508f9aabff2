#include "tracekit/domain_corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "tracekit/pos_tagger.hpp"
#include "tracekit/preprocess.hpp"

namespace tracekit {

namespace fs = std::filesystem;

Blacklist build_blacklist(const Corpus& background, double top_fraction) {
    if (top_fraction <= 0.0 || top_fraction > 1.0) {
        throw std::runtime_error("build_blacklist: top_fraction must be in (0, 1]");
    }
    Blacklist blacklist;
    blacklist.source_size = background.documents.size();
    if (background.documents.empty()) {
        std::cerr << "build_blacklist: empty background corpus, blacklist empty\n";
        return blacklist;
    }

    std::map<std::string, std::size_t> frequency;
    for (const auto& doc : background.documents) {
        for (const auto& phrase : chunk_noun_phrases(doc)) ++frequency[phrase];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(frequency.begin(),
                                                            frequency.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    const auto keep = static_cast<std::size_t>(
        std::ceil(top_fraction * static_cast<double>(ranked.size())));
    for (std::size_t i = 0; i < keep && i < ranked.size(); ++i) {
        blacklist.phrases.insert(ranked[i].first);
    }
    return blacklist;
}

ConceptList select_concepts(const TraceDataset& project, const Blacklist& blacklist,
                            double idf_threshold) {
    std::map<std::string, std::size_t> df;
    std::size_t n_artifacts = 0;
    const auto visit = [&](const std::vector<Artifact>& artifacts) {
        for (const auto& a : artifacts) {
            ++n_artifacts;
            std::set<std::string> seen;
            for (const auto& phrase : chunk_noun_phrases(a.tokens)) {
                seen.insert(phrase);
            }
            for (const auto& phrase : seen) ++df[phrase];
        }
    };
    visit(project.sources);
    visit(project.targets);

    ConceptList out;
    out.project_id = project.name;
    if (n_artifacts == 0) return out;
    const double n = static_cast<double>(n_artifacts);
    for (const auto& [phrase, count] : df) {
        if (blacklist.contains(phrase)) continue;
        const double idf = std::log(n / static_cast<double>(count));
        if (idf < idf_threshold) continue;
        out.concepts.emplace_back(phrase, idf);
    }
    std::sort(out.concepts.begin(), out.concepts.end(),
              [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
              });
    return out;
}

double default_idf_threshold() { return std::log(4.0); }

std::vector<std::string> build_queries(const ConceptList& concepts,
                                       std::size_t max_queries) {
    std::vector<std::string> queries;
    for (const auto& [phrase, idf] : concepts.concepts) {
        if (queries.size() >= max_queries) break;
        queries.push_back(phrase);
    }
    return queries;
}

LocalDirectoryFetcher::LocalDirectoryFetcher(std::string dir) : dir_(std::move(dir)) {}

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_document_file(const fs::path& path) {
    const std::string ext = path.extension().string();
    return ext == ".txt" || ext == ".html" || ext == ".htm" || ext == ".md";
}

std::vector<fs::path> sorted_documents(const std::string& dir) {
    std::vector<fs::path> files;
    if (!fs::exists(dir)) {
        throw std::runtime_error("fetcher directory does not exist: " + dir);
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_document_file(entry.path())) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

std::vector<std::string> LocalDirectoryFetcher::fetch(const std::string& query) {
    const TokenList query_tokens = preprocess(query);
    std::vector<std::string> docs;
    for (const auto& path : sorted_documents(dir_)) {
        const std::string raw = read_file(path);
        const TokenList tokens = preprocess(html_to_text(raw));
        const std::set<std::string> doc_tokens(tokens.begin(), tokens.end());
        for (const auto& q : query_tokens) {
            if (doc_tokens.count(q)) {
                docs.push_back(raw);
                break;
            }
        }
    }
    return docs;
}

FixtureFetcher::FixtureFetcher(std::string dir) : dir_(std::move(dir)) {}

std::vector<std::string> FixtureFetcher::fetch(const std::string& query) {
    const std::string hash = query_hash(query);
    std::vector<std::string> docs;
    for (const auto& path : sorted_documents(dir_)) {
        if (path.filename().string().rfind(hash, 0) == 0) {
            docs.push_back(read_file(path));
        }
    }
    return docs;
}

std::string query_hash(const std::string& query) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : query) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::unique_ptr<DocumentFetcher> make_fetcher(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos) {
        throw std::runtime_error("fetcher spec must be local:DIR or fixture:DIR");
    }
    const std::string kind = spec.substr(0, colon);
    const std::string dir = spec.substr(colon + 1);
    if (kind == "local") return std::make_unique<LocalDirectoryFetcher>(dir);
    if (kind == "fixture") return std::make_unique<FixtureFetcher>(dir);
    throw std::runtime_error("unknown fetcher kind: " + kind +
                             " (external search is not bundled)");
}

namespace {

bool starts_with_ci(const std::string& s, std::size_t pos, const char* prefix) {
    for (std::size_t i = 0; prefix[i] != '\0'; ++i) {
        if (pos + i >= s.size()) return false;
        if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::string html_to_text(const std::string& raw) {
    if (raw.find('<') == std::string::npos) return raw;

    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    const std::size_t n = raw.size();
    while (i < n) {
        const char c = raw[i];
        if (c == '<') {
            if (starts_with_ci(raw, i, "<script")) {
                const std::size_t end = raw.find("</script", i);
                i = end == std::string::npos ? n : raw.find('>', end) + 1;
                continue;
            }
            if (starts_with_ci(raw, i, "<style")) {
                const std::size_t end = raw.find("</style", i);
                i = end == std::string::npos ? n : raw.find('>', end) + 1;
                continue;
            }
            if (starts_with_ci(raw, i, "<li")) {
                out += "\n- ";
            } else if (starts_with_ci(raw, i, "<p") || starts_with_ci(raw, i, "<br") ||
                       starts_with_ci(raw, i, "<div") || starts_with_ci(raw, i, "<tr") ||
                       starts_with_ci(raw, i, "<h")) {
                out += '\n';
            }
            const std::size_t close = raw.find('>', i);
            if (close == std::string::npos) break;
            i = close + 1;
            continue;
        }
        if (c == '&') {
            static const std::pair<const char*, char> entities[] = {
                {"&amp;", '&'}, {"&lt;", '<'},   {"&gt;", '>'},
                {"&quot;", '"'}, {"&#39;", '\''}, {"&nbsp;", ' '},
            };
            bool matched = false;
            for (const auto& [entity, repl] : entities) {
                const std::size_t len = std::char_traits<char>::length(entity);
                if (raw.compare(i, len, entity) == 0) {
                    out += repl;
                    i += len;
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
        }
        out += c;
        ++i;
    }
    return out;
}

namespace {

bool is_bullet_line(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) return false;
    const char c = line[i];
    if (c == '-' || c == '*' || c == '+') return true;
    // "1." / "2)" enumerations
    std::size_t j = i;
    while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
    return j > i && j < line.size() && (line[j] == '.' || line[j] == ')');
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& text) {
    // Bullet lines form their own segments; other newlines are whitespace.
    std::vector<std::string> segments;
    std::string current;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (is_bullet_line(line)) {
            if (!current.empty()) segments.push_back(std::move(current));
            current.clear();
            segments.push_back(line);
        } else {
            if (!current.empty()) current += ' ';
            current += line;
        }
    }
    if (!current.empty()) segments.push_back(std::move(current));

    std::vector<std::string> sentences;
    for (const auto& segment : segments) {
        std::string sentence;
        for (const char c : segment) {
            if (c == '.' || c == '?' || c == '!') {
                if (!sentence.empty()) sentences.push_back(sentence);
                sentence.clear();
            } else {
                sentence += c;
            }
        }
        if (!sentence.empty()) sentences.push_back(sentence);
    }
    return sentences;
}

Corpus harvest_sentences(const std::vector<std::string>& queries,
                         DocumentFetcher& fetcher) {
    Corpus corpus;
    corpus.source_tag = CorpusTag::harvested_domain;
    for (const auto& query : queries) {
        std::vector<std::string> docs;
        try {
            docs = fetcher.fetch(query);
        } catch (const std::exception& e) {
            std::cerr << "harvest: query \"" << query << "\" failed: " << e.what()
                      << "; skipping\n";
            continue;
        }
        const TokenList query_tokens = preprocess(query);
        const std::set<std::string> query_set(query_tokens.begin(),
                                              query_tokens.end());
        for (const auto& raw : docs) {
            for (const auto& sentence : split_sentences(html_to_text(raw))) {
                TokenList tokens = preprocess(sentence);
                if (tokens.empty()) continue;
                bool overlaps = false;
                for (const auto& tok : tokens) {
                    if (query_set.count(tok)) {
                        overlaps = true;
                        break;
                    }
                }
                if (overlaps) corpus.documents.push_back(std::move(tokens));
            }
        }
    }
    return corpus;
}

}  // namespace tracekit
