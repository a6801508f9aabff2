#include "tracekit/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tracekit/preprocess.hpp"

namespace tracekit {

using ordered_json = nlohmann::ordered_json;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

[[noreturn]] void line_error(const std::string& path, std::size_t line,
                             const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::string require_string(const ordered_json& obj, const char* key,
                           const std::string& path, std::size_t line) {
    if (!obj.contains(key)) line_error(path, line, std::string("missing key \"") + key + "\"");
    if (!obj.at(key).is_string()) line_error(path, line, std::string("key \"") + key + "\" is not a string");
    return obj.at(key).get<std::string>();
}

LinkLabel label_from_int(int v, const std::string& path, std::size_t line) {
    switch (v) {
        case 1: return LinkLabel::positive;
        case 0: return LinkLabel::negative;
        case -1: return LinkLabel::unknown;
        default: line_error(path, line, "label must be 1, 0 or -1");
    }
}

int label_to_int(LinkLabel label) {
    switch (label) {
        case LinkLabel::positive: return 1;
        case LinkLabel::negative: return 0;
        case LinkLabel::unknown: return -1;
    }
    return -1;
}

}  // namespace

std::vector<Artifact> load_artifacts(const std::string& path) {
    auto in = open_input(path);
    std::vector<Artifact> out;
    std::unordered_map<std::string, std::size_t> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ordered_json obj;
        try {
            obj = ordered_json::parse(line);
        } catch (const std::exception& e) {
            line_error(path, lineno, std::string("invalid JSON: ") + e.what());
        }
        Artifact a;
        a.id = require_string(obj, "id", path, lineno);
        a.kind = artifact_kind_from_string(require_string(obj, "kind", path, lineno));
        a.title = require_string(obj, "title", path, lineno);
        a.body = require_string(obj, "body", path, lineno);
        a.project_id = require_string(obj, "project_id", path, lineno);
        auto [it, inserted] = seen.emplace(a.id, lineno);
        if (!inserted) {
            line_error(path, lineno,
                       "duplicate id \"" + a.id + "\" (first seen at line " +
                           std::to_string(it->second) + ")");
        }
        out.push_back(std::move(a));
    }
    return out;
}

void save_artifacts(const std::vector<Artifact>& artifacts, const std::string& path) {
    auto out = open_output(path);
    for (const auto& a : artifacts) {
        ordered_json obj;
        obj["id"] = a.id;
        obj["kind"] = to_string(a.kind);
        obj["title"] = a.title;
        obj["body"] = a.body;
        obj["project_id"] = a.project_id;
        out << obj.dump() << '\n';
    }
}

std::vector<TraceLink> load_links(const std::string& path) {
    auto in = open_input(path);
    std::vector<TraceLink> out;
    std::string line;
    std::size_t lineno = 0;
    const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
    if (csv) {
        if (!std::getline(in, line)) return out;
        ++lineno;
        if (line.rfind("source_id,target_id,label", 0) != 0) {
            line_error(path, lineno, "expected header \"source_id,target_id,label\"");
        }
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string src, tgt, lab;
            if (!std::getline(ss, src, ',') || !std::getline(ss, tgt, ',') ||
                !std::getline(ss, lab, ',')) {
                line_error(path, lineno, "expected 3 comma-separated fields");
            }
            TraceLink l;
            l.source_id = src;
            l.target_id = tgt;
            try {
                l.label = label_from_int(std::stoi(lab), path, lineno);
            } catch (const std::invalid_argument&) {
                line_error(path, lineno, "label is not an integer");
            }
            out.push_back(std::move(l));
        }
        return out;
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ordered_json obj;
        try {
            obj = ordered_json::parse(line);
        } catch (const std::exception& e) {
            line_error(path, lineno, std::string("invalid JSON: ") + e.what());
        }
        TraceLink l;
        l.source_id = require_string(obj, "source_id", path, lineno);
        l.target_id = require_string(obj, "target_id", path, lineno);
        if (!obj.contains("label")) line_error(path, lineno, "missing key \"label\"");
        if (!obj.at("label").is_number_integer()) {
            line_error(path, lineno, "label is not an integer");
        }
        l.label = label_from_int(obj.at("label").get<int>(), path, lineno);
        out.push_back(std::move(l));
    }
    return out;
}

void save_links(const std::vector<TraceLink>& links, const std::string& path) {
    auto out = open_output(path);
    const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
    if (csv) {
        out << "source_id,target_id,label\n";
        for (const auto& l : links) {
            out << l.source_id << ',' << l.target_id << ',' << label_to_int(l.label)
                << '\n';
        }
        return;
    }
    for (const auto& l : links) {
        ordered_json obj;
        obj["source_id"] = l.source_id;
        obj["target_id"] = l.target_id;
        obj["label"] = label_to_int(l.label);
        out << obj.dump() << '\n';
    }
}

TraceDataset load_dataset(const std::string& sources_path,
                          const std::string& targets_path,
                          const std::string& links_path, const std::string& name) {
    TraceDataset d;
    d.name = name;
    d.sources = load_artifacts(sources_path);
    d.targets = load_artifacts(targets_path);
    d.links = load_links(links_path);
    d.validate();
    return d;
}

void save_dataset(const TraceDataset& dataset, const std::string& sources_path,
                  const std::string& targets_path, const std::string& links_path) {
    save_artifacts(dataset.sources, sources_path);
    save_artifacts(dataset.targets, targets_path);
    save_links(dataset.links, links_path);
}

Corpus load_corpus(const std::string& path, CorpusTag tag) {
    auto in = open_input(path);
    Corpus corpus;
    corpus.source_tag = tag;
    std::string line;
    while (std::getline(in, line)) {
        TokenList tokens = preprocess(line);
        if (!tokens.empty()) corpus.documents.push_back(std::move(tokens));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    auto out = open_output(path);
    for (const auto& doc : corpus.documents) {
        out << join_tokens(doc) << '\n';
    }
}

std::vector<Prediction> load_predictions(const std::string& path) {
    auto in = open_input(path);
    std::vector<Prediction> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        ordered_json obj;
        try {
            obj = ordered_json::parse(line);
        } catch (const std::exception& e) {
            line_error(path, lineno, std::string("invalid JSON: ") + e.what());
        }
        Prediction p;
        p.source_id = require_string(obj, "source_id", path, lineno);
        p.target_id = require_string(obj, "target_id", path, lineno);
        if (!obj.contains("score") || !obj.at("score").is_number()) {
            line_error(path, lineno, "missing numeric \"score\"");
        }
        p.score = obj.at("score").get<double>();
        out.push_back(std::move(p));
    }
    return out;
}

void save_predictions(const std::vector<Prediction>& preds, const std::string& path) {
    auto out = open_output(path);
    for (const auto& p : preds) {
        ordered_json obj;
        obj["source_id"] = p.source_id;
        obj["target_id"] = p.target_id;
        obj["score"] = p.score;
        out << obj.dump() << '\n';
    }
}

}  // namespace tracekit
