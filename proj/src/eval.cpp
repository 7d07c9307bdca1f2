#include "irdm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "irdm/csv.hpp"
#include "irdm/rng.hpp"

namespace irdm {

ModelKind parse_model(const std::string& name) {
    if (name == "c45") return ModelKind::c45;
    if (name == "sysfor") return ModelKind::sysfor;
    if (name == "etc") return ModelKind::etc;
    throw ConfigError("unknown model '" + name + "' (expected c45, sysfor or etc)");
}

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::c45: return "c45";
        case ModelKind::sysfor: return "sysfor";
        case ModelKind::etc: return "etc";
    }
    return "?";
}

TrainedModel train_model(const ModelConfig& config, const Dataset& dataset,
                         std::span<const std::size_t> train_records) {
    TrainedModel m;
    m.kind = config.kind;
    m.schema = dataset.schema;
    m.categories = dataset.categories;
    switch (config.kind) {
        case ModelKind::c45:
            m.tree = build_tree(dataset, train_records, config.c45);
            break;
        case ModelKind::sysfor: {
            // The forest trains on a view: materialize the subset.
            Dataset subset;
            subset.schema = dataset.schema;
            subset.categories = dataset.categories;
            subset.records.reserve(train_records.size());
            for (std::size_t idx : train_records) subset.records.push_back(dataset.records[idx]);
            m.forest = build_forest(subset, config.sysfor);
            break;
        }
        case ModelKind::etc:
            if (!config.kc) throw ConfigError("the etc model needs a crop coefficient table");
            m.kc = config.kc;
            break;
    }
    return m;
}

TrainedModel train_model(const ModelConfig& config, const Dataset& dataset) {
    std::vector<std::size_t> all(dataset.records.size());
    std::iota(all.begin(), all.end(), 0);
    return train_model(config, dataset, all);
}

int TrainedModel::predict_record(const TrainingRecord& record) const {
    switch (kind) {
        case ModelKind::c45: return predict(*tree, record.values).class_label;
        case ModelKind::sysfor: return voting2_predict(*forest, record.values);
        case ModelKind::etc: {
            const int i_crop = schema.attribute_index("crop_type");
            if (i_crop < 0) throw ConfigError("schema has no crop_type attribute");
            const std::string& crop =
                categories.at(i_crop).at(static_cast<int>(record.values[i_crop]));
            return etc_predict(kc->kc_for(crop), record.eto, schema);
        }
    }
    throw ConfigError("unreachable model kind");
}

double TrainedModel::lookup_category(std::size_t attribute, const std::string& value) const {
    const auto& dict = categories.at(attribute);
    for (std::size_t i = 0; i < dict.size(); ++i)
        if (dict[i] == value) return static_cast<double>(i);
    return -1.0;
}

int TrainedModel::predict_day(const WeatherDay& weather, const FarmProfile& farm) const {
    if (kind == ModelKind::etc) return etc_predict(kc->kc_for(farm.crop_type), weather.eto, schema);

    std::vector<double> values(schema.attributes.size(), 0.0);
    for (std::size_t a = 0; a < schema.attributes.size(); ++a) {
        const auto& name = schema.attributes[a].name;
        if (name == "tmax_c") values[a] = weather.tmax;
        else if (name == "tmin_c") values[a] = weather.tmin;
        else if (name == "humidity_pct") values[a] = weather.humidity;
        else if (name == "wind_km_day") values[a] = weather.wind;
        else if (name == "rainfall_mm") values[a] = weather.rainfall;
        else if (name == "solar_mj_m2") values[a] = weather.solar;
        else if (name == "soil_type") values[a] = lookup_category(a, farm.soil_type);
        else if (name == "crop_type") values[a] = lookup_category(a, farm.crop_type);
        else throw ConfigError("cannot derive attribute '" + name + "' from weather and farm data");
    }
    return kind == ModelKind::c45 ? predict(*tree, values).class_label
                                  : voting2_predict(*forest, values);
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n_records, int k,
                                                  std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    if (static_cast<std::size_t>(k) > n_records)
        throw std::invalid_argument("k exceeds the record count");

    std::vector<std::size_t> order(n_records);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    shuffle(order, rng);

    const std::size_t base = n_records / k;
    const std::size_t extra = n_records % k;
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t at = 0;
    for (int f = 0; f < k; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        folds[f].assign(order.begin() + at, order.begin() + at + size);
        at += size;
    }
    return folds;
}

std::vector<std::vector<std::size_t>> kfold_split(const Dataset& dataset, int k,
                                                  std::uint64_t seed) {
    return kfold_split(dataset.records.size(), k, seed);
}

namespace {

double percent(std::size_t correct, std::size_t total) {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

FoldReport finish_report(std::string model, std::vector<double> fold_acc) {
    FoldReport report;
    report.model = std::move(model);
    report.k = static_cast<int>(fold_acc.size());
    report.average_pct =
        std::accumulate(fold_acc.begin(), fold_acc.end(), 0.0) / fold_acc.size();
    report.fold_accuracy_pct = std::move(fold_acc);
    return report;
}

}  // namespace

FoldReport cross_validate(const ModelConfig& config, const Dataset& dataset, int k,
                          std::uint64_t seed) {
    const auto folds = kfold_split(dataset, k, seed);
    std::vector<double> fold_acc;
    fold_acc.reserve(k);
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train;
        train.reserve(dataset.records.size() - folds[f].size());
        for (int g = 0; g < k; ++g)
            if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
        const TrainedModel model = train_model(config, dataset, train);
        std::size_t correct = 0;
        for (std::size_t idx : folds[f])
            if (model.predict_record(dataset.records[idx]) == dataset.records[idx].class_label)
                ++correct;
        fold_acc.push_back(percent(correct, folds[f].size()));
    }
    return finish_report(model_name(config.kind), std::move(fold_acc));
}

std::vector<ExternalPredictions> load_external_predictions(const std::string& path,
                                                           const Dataset& dataset) {
    CsvReader csv(path, {"record_index", "model", "predicted_bin"});
    std::map<std::string, std::vector<int>> by_model;
    std::map<std::string, std::size_t> seen;
    std::vector<std::string> cells;
    const std::size_t n = dataset.records.size();
    while (csv.next_row(cells)) {
        const double raw = parse_double_cell(cells[0], path, csv.line(), "record_index");
        const auto idx = static_cast<std::size_t>(raw);
        if (raw != static_cast<double>(idx) || idx >= n)
            throw RowError(path, csv.line(), "record_index out of range");
        int label = -1;
        for (std::size_t b = 0; b < dataset.schema.class_bins.size(); ++b)
            if (dataset.schema.class_bins[b].label == cells[2]) label = static_cast<int>(b);
        if (label < 0)
            throw RowError(path, csv.line(), "unknown predicted_bin '" + cells[2] + "'");
        auto& labels = by_model[cells[1]];
        if (labels.empty()) labels.assign(n, -1);
        if (labels[idx] != -1)
            throw RowError(path, csv.line(), "duplicate prediction for record " + cells[0]);
        labels[idx] = label;
        ++seen[cells[1]];
    }
    std::vector<ExternalPredictions> out;
    for (auto& [model, labels] : by_model) {
        if (seen[model] != n)
            throw DataError(path + ": model '" + model + "' predicts " +
                            std::to_string(seen[model]) + " of " + std::to_string(n) +
                            " records");
        out.push_back({model, std::move(labels)});
    }
    return out;
}

FoldReport score_external(const ExternalPredictions& external, const Dataset& dataset, int k,
                          std::uint64_t seed) {
    if (external.labels.size() != dataset.records.size())
        throw DataError("external predictions do not cover the dataset");
    const auto folds = kfold_split(dataset, k, seed);
    std::vector<double> fold_acc;
    for (const auto& fold : folds) {
        std::size_t correct = 0;
        for (std::size_t idx : fold)
            if (external.labels[idx] == dataset.records[idx].class_label) ++correct;
        fold_acc.push_back(percent(correct, fold.size()));
    }
    return finish_report(external.model, std::move(fold_acc));
}

double seasonal_demand(const TrainedModel& model, const FarmProfile& farm,
                       const WeatherTable& weather, Date start, Date end) {
    const std::string station = weather.station_for(farm);
    double total = 0.0;
    for (Date d = start; d <= end; d = d.plus_days(1)) {
        const WeatherDay& day = weather.at(station, d);
        const int bin = model.predict_day(day, farm);
        total += bin_midpoint(model.schema.class_bins.at(bin)) * farm.area;
    }
    return total;
}

std::map<std::string, double> node_aggregate(
    const std::vector<std::pair<std::string, double>>& farm_demands,
    const std::map<std::string, std::string>& farm_to_node,
    const std::vector<std::string>& all_nodes) {
    std::map<std::string, double> totals;
    for (const auto& node : all_nodes) totals[node];  // zero-demand nodes stay visible
    for (const auto& [farm, demand] : farm_demands) {
        auto it = farm_to_node.find(farm);
        if (it == farm_to_node.end())
            throw ConfigError("farm " + farm + " is not mapped to a node");
        totals[it->second] += demand;
    }
    return totals;
}

double closeness_accuracy(double actual_ml, double predicted_ml) {
    if (!(actual_ml > 0))
        throw std::invalid_argument("closeness is undefined for actual <= 0; exclude the node");
    return (1.0 - std::abs(actual_ml - predicted_ml) / actual_ml) * 100.0;
}

std::vector<NodeReport> build_node_reports(
    const std::map<std::string, std::map<std::string, double>>& predicted_by_model,
    const std::map<std::string, double>& actuals, const std::set<std::string>& excluded_nodes) {
    std::set<std::string> node_ids;
    for (const auto& [model, per_node] : predicted_by_model)
        for (const auto& [node, value] : per_node) node_ids.insert(node);
    for (const auto& [node, value] : actuals) node_ids.insert(node);

    std::vector<NodeReport> out;
    for (const auto& node : node_ids) {
        NodeReport r;
        r.node_id = node;
        auto it = actuals.find(node);
        r.has_actual = it != actuals.end();
        r.actual_ml = r.has_actual ? it->second : 0.0;
        for (const auto& [model, per_node] : predicted_by_model) {
            auto p = per_node.find(node);
            if (p != per_node.end()) r.predicted_ml[model] = p->second;
        }
        r.excluded = excluded_nodes.count(node) > 0 || (r.has_actual && !(r.actual_ml > 0));
        if (!r.excluded && r.has_actual)
            for (const auto& [model, value] : r.predicted_ml)
                r.closeness_pct[model] = closeness_accuracy(r.actual_ml, value);
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

std::set<std::string> models_of(const std::vector<NodeReport>& node_reports) {
    std::set<std::string> models;
    for (const auto& node : node_reports)
        for (const auto& [model, value] : node.predicted_ml) models.insert(model);
    return models;
}

}  // namespace

void write_folds_csv(const std::vector<FoldReport>& fold_reports, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << "model,fold,accuracy_pct\n";
    for (const auto& report : fold_reports) {
        for (std::size_t f = 0; f < report.fold_accuracy_pct.size(); ++f)
            out << report.model << ',' << f + 1 << ','
                << format_double(report.fold_accuracy_pct[f]) << '\n';
        out << report.model << ",avg," << format_double(report.average_pct) << '\n';
    }
}

void write_nodes_csv(const std::vector<NodeReport>& node_reports, const std::string& path) {
    const auto models = models_of(node_reports);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << "node_id,actual_ml,model,predicted_ml,difference_ml,closeness_pct,excluded\n";
    for (const auto& node : node_reports) {
        for (const auto& model : models) {
            auto p = node.predicted_ml.find(model);
            if (p == node.predicted_ml.end()) continue;
            out << node.node_id << ',';
            if (node.has_actual) out << format_double(node.actual_ml);
            out << ',' << model << ',' << format_double(p->second) << ',';
            if (node.has_actual) out << format_double(p->second - node.actual_ml);
            out << ',';
            auto c = node.closeness_pct.find(model);
            if (c != node.closeness_pct.end()) out << format_double(c->second);
            out << ',' << (node.excluded ? "true" : "false") << '\n';
        }
    }
}

void write_summary_json(const std::vector<NodeReport>& node_reports, const std::string& path) {
    const auto models = models_of(node_reports);
    nlohmann::ordered_json summary;
    summary["models"] = std::vector<std::string>(models.begin(), models.end());

    double total_actual = 0.0;
    bool any_actual = false;
    std::map<std::string, double> total_predicted;
    for (const auto& node : node_reports) {
        if (node.excluded) continue;
        if (node.has_actual) {
            total_actual += node.actual_ml;
            any_actual = true;
        }
        for (const auto& [model, value] : node.predicted_ml) total_predicted[model] += value;
    }

    nlohmann::ordered_json closeness = nlohmann::ordered_json::object();
    nlohmann::ordered_json totals = nlohmann::ordered_json::object();
    for (const auto& model : models) {
        totals[model] = total_predicted[model];
        if (any_actual && total_actual > 0)
            closeness[model] = closeness_accuracy(total_actual, total_predicted[model]);
        else
            closeness[model] = nullptr;
    }
    summary["overall_closeness_pct"] = closeness;
    summary["total_actual_ml"] =
        any_actual ? nlohmann::ordered_json(total_actual) : nlohmann::ordered_json(nullptr);
    summary["total_predicted_ml"] = totals;
    std::vector<std::string> excluded;
    for (const auto& node : node_reports)
        if (node.excluded) excluded.push_back(node.node_id);
    summary["excluded_nodes"] = excluded;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << summary.dump(2) << '\n';
}

std::vector<std::string> emit_reports(const std::vector<FoldReport>& fold_reports,
                                      const std::vector<NodeReport>& node_reports,
                                      const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::string folds = (fs::path(out_dir) / "folds.csv").string();
    const std::string nodes = (fs::path(out_dir) / "nodes.csv").string();
    const std::string summary = (fs::path(out_dir) / "summary.json").string();
    write_folds_csv(fold_reports, folds);
    write_nodes_csv(node_reports, nodes);
    write_summary_json(node_reports, summary);
    return {folds, nodes, summary};
}

}  // namespace irdm
