#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "irdm/c45.hpp"
#include "irdm/etc_baseline.hpp"
#include "irdm/ingest.hpp"
#include "irdm/sysfor.hpp"

namespace irdm {

enum class ModelKind { c45, sysfor, etc };

ModelKind parse_model(const std::string& name);  // "c45" | "sysfor" | "etc"
std::string model_name(ModelKind kind);

struct ModelConfig {
    ModelKind kind = ModelKind::c45;
    C45Params c45;
    SysForParams sysfor;
    const CropCoefficientTable* kc = nullptr;  // required for ModelKind::etc
};

// A trained classifier plus everything needed to apply it to dataset
// records or to raw (weather, farm) days.
struct TrainedModel {
    ModelKind kind = ModelKind::c45;
    std::optional<DecisionTree> tree;
    std::optional<Forest> forest;
    const CropCoefficientTable* kc = nullptr;
    AttributeSchema schema;
    std::vector<std::vector<std::string>> categories;

    int predict_record(const TrainingRecord& record) const;
    int predict_day(const WeatherDay& weather, const FarmProfile& farm) const;
    // Category id under the training dictionary; -1 for unseen values.
    double lookup_category(std::size_t attribute, const std::string& value) const;
};

TrainedModel train_model(const ModelConfig& config, const Dataset& dataset,
                         std::span<const std::size_t> train_records);
TrainedModel train_model(const ModelConfig& config, const Dataset& dataset);

// Seeded shuffle followed by a contiguous partition into k folds whose
// sizes differ by at most one (the first size%k folds take the extra
// record). Every record lands in exactly one fold.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n_records, int k,
                                                  std::uint64_t seed);
std::vector<std::vector<std::size_t>> kfold_split(const Dataset& dataset, int k,
                                                  std::uint64_t seed);

struct FoldReport {
    std::string model;
    int k = 0;
    std::vector<double> fold_accuracy_pct;
    double average_pct = 0.0;
};

// Trains on k-1 folds and tests on the held-out one, once per fold.
FoldReport cross_validate(const ModelConfig& config, const Dataset& dataset, int k,
                          std::uint64_t seed);

// Per-record class predictions produced outside this toolkit
// (external_predictions.csv: record_index,model,predicted_bin), one
// prediction per dataset record.
struct ExternalPredictions {
    std::string model;
    std::vector<int> labels;
};

std::vector<ExternalPredictions> load_external_predictions(const std::string& path,
                                                           const Dataset& dataset);

// Scores an external model on the same folds cross_validate would use.
FoldReport score_external(const ExternalPredictions& external, const Dataset& dataset, int k,
                          std::uint64_t seed);

// Seasonal water demand of one farm in ML: per day, the predicted class
// bin's midpoint (ML/ha/day) times the farm area, summed over
// [start, end] inclusive. A day without weather raises GapError.
double seasonal_demand(const TrainedModel& model, const FarmProfile& farm,
                       const WeatherTable& weather, Date start, Date end);

// Group-by-node sums of per-farm demands. Farms missing from the map raise
// ConfigError; nodes listed in `all_nodes` but receiving no farms appear
// with a zero total.
std::map<std::string, double> node_aggregate(
    const std::vector<std::pair<std::string, double>>& farm_demands,
    const std::map<std::string, std::string>& farm_to_node,
    const std::vector<std::string>& all_nodes = {});

// (1 - |actual - predicted| / actual) * 100. Negative when the error
// exceeds the actual; undefined (std::invalid_argument) when actual <= 0 --
// exclude such nodes instead.
double closeness_accuracy(double actual_ml, double predicted_ml);

struct NodeReport {
    std::string node_id;
    bool has_actual = false;
    double actual_ml = 0.0;
    std::map<std::string, double> predicted_ml;   // per model
    bool excluded = false;
    std::map<std::string, double> closeness_pct;  // per model; only when not excluded
};

// Assembles per-node rows: nodes with zero/absent actual usage or on the
// exclusion list are flagged and carry no closeness.
std::vector<NodeReport> build_node_reports(
    const std::map<std::string, std::map<std::string, double>>& predicted_by_model,
    const std::map<std::string, double>& actuals, const std::set<std::string>& excluded_nodes);

void write_folds_csv(const std::vector<FoldReport>& fold_reports, const std::string& path);
void write_nodes_csv(const std::vector<NodeReport>& node_reports, const std::string& path);
void write_summary_json(const std::vector<NodeReport>& node_reports, const std::string& path);

// Writes folds.csv, nodes.csv and summary.json into out_dir (created if
// missing). Returns the paths written.
std::vector<std::string> emit_reports(const std::vector<FoldReport>& fold_reports,
                                      const std::vector<NodeReport>& node_reports,
                                      const std::string& out_dir);

}  // namespace irdm
