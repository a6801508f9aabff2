#include "tracekit/metrics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tracekit {

using ordered_json = nlohmann::ordered_json;

double f2_score(double precision, double recall) {
    const double denom = 4.0 * precision + recall;
    if (denom == 0.0) return 0.0;
    return 5.0 * precision * recall / denom;
}

double average_precision(const std::vector<Prediction>& ranked,
                         const std::set<std::string>& truth) {
    if (truth.empty()) {
        throw std::runtime_error("average_precision: source has no true links");
    }
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
        if (truth.count(ranked[rank].target_id)) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
        }
    }
    return sum / static_cast<double>(truth.size());
}

double mean_average_precision(const std::vector<double>& aps) {
    if (aps.empty()) {
        throw std::runtime_error("mean_average_precision: no evaluable sources");
    }
    double sum = 0.0;
    for (const double ap : aps) sum += ap;
    return sum / static_cast<double>(aps.size());
}

double select_threshold(const std::vector<Prediction>& valid_predictions,
                        const PairSet& valid_truth) {
    if (valid_predictions.empty()) return 0.0;
    std::vector<double> candidates;
    candidates.reserve(valid_predictions.size());
    for (const auto& p : valid_predictions) candidates.push_back(p.score);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());

    double best_f2 = -1.0;
    double best_threshold = candidates.front();
    for (const double t : candidates) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (const auto& p : valid_predictions) {
            const bool predicted = p.score >= t;
            const bool truth = valid_truth.count({p.source_id, p.target_id}) > 0;
            if (predicted && truth) ++tp;
            else if (predicted && !truth) ++fp;
            else if (!predicted && truth) ++fn;
        }
        const double precision = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
        const double recall = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
        const double f2 = f2_score(precision, recall);
        if (f2 > best_f2 || (f2 == best_f2 && t < best_threshold)) {
            best_f2 = f2;
            best_threshold = t;
        }
    }
    return best_threshold;
}

MetricsReport evaluate(const std::vector<Prediction>& predictions,
                       const PairSet& truth, const PairSet& candidates,
                       double threshold) {
    PairSet covered;
    for (const auto& p : predictions) covered.insert({p.source_id, p.target_id});
    std::vector<PairKey> missing;
    for (const auto& c : candidates) {
        if (!covered.count(c)) missing.push_back(c);
    }
    if (!missing.empty()) {
        std::ostringstream oss;
        oss << "evaluate: prediction set incomplete; missing";
        std::size_t shown = 0;
        for (const auto& [s, t] : missing) {
            oss << ' ' << s << "->" << t;
            if (++shown == 10 && missing.size() > 10) {
                oss << " (+" << missing.size() - 10 << " more)";
                break;
            }
        }
        throw std::runtime_error(oss.str());
    }

    MetricsReport report;
    report.threshold = threshold;

    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& p : predictions) {
        const bool predicted = p.score >= threshold;
        const bool is_true = truth.count({p.source_id, p.target_id}) > 0;
        if (predicted && is_true) ++tp;
        else if (predicted && !is_true) ++fp;
        else if (!predicted && is_true) ++fn;
    }
    report.precision = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
    report.recall = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
    report.f2 = f2_score(report.precision, report.recall);

    // MAP over the full ranking; sources with zero true links are excluded.
    std::map<std::string, std::vector<Prediction>> per_source;
    for (const auto& p : predictions) per_source[p.source_id].push_back(p);
    std::vector<double> aps;
    for (auto& [source_id, ranked] : per_source) {
        sort_predictions(ranked);
        std::set<std::string> source_truth;
        for (const auto& [s, t] : truth) {
            if (s == source_id) source_truth.insert(t);
        }
        if (source_truth.empty()) {
            ++report.zero_truth_sources;
            continue;
        }
        const double ap = average_precision(ranked, source_truth);
        report.per_query_ap[source_id] = ap;
        aps.push_back(ap);
    }
    report.map = aps.empty() ? 0.0 : mean_average_precision(aps);
    return report;
}

MetricsReport aggregate_runs(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) {
        throw std::runtime_error("aggregate_runs: no reports");
    }
    MetricsReport agg;
    for (const auto& r : reports) {
        agg.precision += r.precision;
        agg.recall += r.recall;
        agg.f2 += r.f2;
        agg.map += r.map;
        agg.threshold += r.threshold;
        agg.zero_truth_sources += r.zero_truth_sources;
    }
    const double n = static_cast<double>(reports.size());
    agg.precision /= n;
    agg.recall /= n;
    agg.f2 /= n;
    agg.map /= n;
    agg.threshold /= n;
    agg.per_seed = reports;
    return agg;
}

namespace {

ordered_json run_to_json(const MetricsReport& r) {
    ordered_json obj;
    obj["precision"] = r.precision;
    obj["recall"] = r.recall;
    obj["f2"] = r.f2;
    obj["map"] = r.map;
    obj["threshold"] = r.threshold;
    obj["zero_truth_sources"] = r.zero_truth_sources;
    ordered_json aps = ordered_json::object();
    for (const auto& [k, v] : r.per_query_ap) aps[k] = v;
    obj["per_query_ap"] = aps;
    return obj;
}

MetricsReport run_from_json(const ordered_json& obj) {
    MetricsReport r;
    r.precision = obj.at("precision").get<double>();
    r.recall = obj.at("recall").get<double>();
    r.f2 = obj.at("f2").get<double>();
    r.map = obj.at("map").get<double>();
    r.threshold = obj.at("threshold").get<double>();
    r.zero_truth_sources = obj.at("zero_truth_sources").get<std::size_t>();
    for (const auto& [k, v] : obj.at("per_query_ap").items()) {
        r.per_query_ap[k] = v.get<double>();
    }
    return r;
}

}  // namespace

std::string report_to_json(const MetricsReport& report) {
    ordered_json obj = run_to_json(report);
    if (!report.per_seed.empty()) {
        ordered_json seeds = ordered_json::array();
        for (const auto& r : report.per_seed) seeds.push_back(run_to_json(r));
        obj["per_seed"] = seeds;
    }
    return obj.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& json_text) {
    const ordered_json obj = ordered_json::parse(json_text);
    MetricsReport r = run_from_json(obj);
    if (obj.contains("per_seed")) {
        for (const auto& item : obj.at("per_seed")) {
            r.per_seed.push_back(run_from_json(item));
        }
    }
    return r;
}

}  // namespace tracekit
