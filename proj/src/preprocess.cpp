#include "tracekit/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace tracekit {

namespace {

std::string strip_fenced_code(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t open = text.find("```", pos);
        if (open == std::string::npos) {
            out.append(text, pos, std::string::npos);
            break;
        }
        out.append(text, pos, open - pos);
        const std::size_t close = text.find("```", open + 3);
        if (close == std::string::npos) {
            // Unterminated fence: everything after it is code.
            break;
        }
        pos = close + 3;
    }
    return out;
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
           c == '<' || c == '>';
}

// "  at com.example.Thing.method(File.java:42)" and similar.
bool is_stack_frame_line(const std::string& line) {
    std::size_t i = 0;
    bool indented = false;
    while (i < line.size() &&
           std::isspace(static_cast<unsigned char>(line[i]))) {
        indented = true;
        ++i;
    }
    if (!indented) return false;
    if (line.compare(i, 3, "at ") != 0) return false;
    i += 3;
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t dots = 0;
    bool any_ident = false;
    while (i < line.size() && (is_ident_char(line[i]) || line[i] == '.')) {
        if (line[i] == '.') {
            ++dots;
        } else {
            any_ident = true;
        }
        ++i;
    }
    if (!any_ident || dots == 0) return false;
    while (i < line.size() && line[i] == ' ') ++i;
    if (i >= line.size() || line[i] != '(') return false;
    return line.find(')', i) != std::string::npos;
}

bool is_traceback_header(const std::string& line) {
    std::size_t i = 0;
    while (i < line.size() &&
           std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
    }
    return line.compare(i, 9, "Traceback") == 0;
}

std::string strip_stack_trace_lines(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        const bool last = end == std::string::npos;
        const std::string line =
            text.substr(start, last ? std::string::npos : end - start);
        if (!is_stack_frame_line(line) && !is_traceback_header(line)) {
            out += line;
            if (!last) out += '\n';
        }
        if (last) break;
        start = end + 1;
    }
    return out;
}

}  // namespace

TokenList preprocess(const std::string& text, const PreprocessConfig& config) {
    std::string cleaned = text;
    if (config.strip_code_blocks) cleaned = strip_fenced_code(cleaned);
    if (config.strip_stack_traces) cleaned = strip_stack_trace_lines(cleaned);

    TokenList tokens;
    std::string current;
    for (const char c : cleaned) {
        const auto uc = static_cast<unsigned char>(c);
        if (uc >= 0x80) continue;  // drop non-ASCII codepoints
        if (std::isalnum(uc)) {
            current += static_cast<char>(std::tolower(uc));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string artifact_text(const Artifact& artifact) {
    if (artifact.title.empty()) return artifact.body;
    return artifact.title + "\n.\n" + artifact.body;
}

void preprocess_dataset(TraceDataset& dataset, const PreprocessConfig& config) {
    for (auto& a : dataset.sources) a.tokens = preprocess(artifact_text(a), config);
    for (auto& a : dataset.targets) a.tokens = preprocess(artifact_text(a), config);
}

TraceDataset filter_short_artifacts(const TraceDataset& dataset,
                                    std::size_t min_tokens) {
    TraceDataset out;
    out.name = dataset.name;
    std::unordered_set<std::string> kept;
    for (const auto& a : dataset.sources) {
        if (a.tokens.size() >= min_tokens) {
            out.sources.push_back(a);
            kept.insert(a.id);
        }
    }
    for (const auto& a : dataset.targets) {
        if (a.tokens.size() >= min_tokens) {
            out.targets.push_back(a);
            kept.insert(a.id);
        }
    }
    for (const auto& l : dataset.links) {
        if (kept.count(l.source_id) && kept.count(l.target_id)) {
            out.links.push_back(l);
        }
    }
    return out;
}

std::string join_tokens(const TokenList& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out += ' ';
        out += tokens[i];
    }
    return out;
}

}  // namespace tracekit
