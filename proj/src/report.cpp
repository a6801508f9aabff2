#include "tracekit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tracekit {

namespace fs = std::filesystem;

std::vector<std::pair<std::string, MetricsReport>> collect_reports(
    const std::string& dir) {
    if (!fs::exists(dir)) {
        throw std::runtime_error("report directory does not exist: " + dir);
    }
    std::vector<std::pair<std::string, MetricsReport>> rows;
    const auto try_add = [&rows](const fs::path& path, const std::string& name) {
        std::ifstream in(path);
        if (!in) return;
        std::ostringstream ss;
        ss << in.rdbuf();
        rows.emplace_back(name, report_from_json(ss.str()));
    };
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            try_add(entry.path(), entry.path().stem().string());
        } else if (entry.is_directory()) {
            const fs::path nested = entry.path() / "report.json";
            if (fs::exists(nested)) try_add(nested, entry.path().filename().string());
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return rows;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

std::string make_report_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows) {
    std::string out;
    out += "| Experiment | F2 | MAP | Precision | Recall | Threshold | Runs |\n";
    out += "|---|---|---|---|---|---|---|\n";
    for (const auto& [name, report] : rows) {
        const std::size_t runs =
            report.per_seed.empty() ? 1 : report.per_seed.size();
        out += "| " + name + " | " + fmt(report.f2) + " | " + fmt(report.map) +
               " | " + fmt(report.precision) + " | " + fmt(report.recall) + " | " +
               fmt(report.threshold) + " | " + std::to_string(runs) + " |\n";
    }
    return out;
}

}  // namespace tracekit
