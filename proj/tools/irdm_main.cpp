// irdm: reconstruct daily crop water usage from delivery statements, train
// demand classifiers, and evaluate them against metered usage.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include "irdm/csv.hpp"
#include "irdm/eval.hpp"
#include "irdm/ingest.hpp"
#include "irdm/model_io.hpp"
#include "irdm/preprocess.hpp"
#include "irdm/synth.hpp"

namespace {

using namespace irdm;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct ModelOptions {
    std::string model = "c45";
    C45Params c45;
    SysForParams sysfor;
    std::string kc_path;
    int bins = 4;
};

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
    cmd->add_option("--model", opts.model, "Classifier: c45, sysfor or etc")
        ->check(CLI::IsMember({"c45", "sysfor", "etc"}));
    cmd->add_option("--min-leaf", opts.c45.min_leaf, "Minimum records per leaf");
    cmd->add_option("--min-gain-ratio", opts.c45.min_gain_ratio,
                    "Stop splitting below this gain ratio");
    cmd->add_option("--max-depth", opts.c45.max_depth, "Maximum tree depth");
    cmd->add_option("--trees", opts.sysfor.num_trees, "Forest size");
    cmd->add_option("--goodness", opts.sysfor.goodness,
                    "Keep splits with gain ratio >= goodness * best");
    cmd->add_option("--separation", opts.sysfor.separation,
                    "Minimum threshold distance as a fraction of the attribute range");
    cmd->add_option("--kc", opts.kc_path, "Crop coefficient table (crop_type,kc)");
    cmd->add_option("--bins", opts.bins, "Number of 0.05 ML/ha/day usage bins")
        ->check(CLI::PositiveNumber);
}

ModelConfig to_config(const ModelOptions& opts, const CropCoefficientTable* kc) {
    ModelConfig config;
    config.kind = parse_model(opts.model);
    config.c45 = opts.c45;
    config.sysfor = opts.sysfor;
    config.sysfor.c45 = opts.c45;
    config.kc = kc;
    return config;
}

std::map<std::string, const FarmProfile*> farms_by_id(const std::vector<FarmProfile>& farms) {
    std::map<std::string, const FarmProfile*> out;
    for (const auto& f : farms) out[f.farm_id] = &f;
    return out;
}

// Fills record.eto back in from a weather table (the dataset dump does not
// carry it). Stations are resolved through the farm table when present.
void rejoin_eto(Dataset& dataset, const WeatherTable& weather,
                const std::vector<FarmProfile>& farms) {
    auto by_id = farms_by_id(farms);
    for (auto& r : dataset.records) {
        std::string station;
        if (weather.has_stations()) {
            auto it = by_id.find(r.farm_id);
            if (it == by_id.end())
                throw ConfigError("farm " + r.farm_id +
                                  " is missing from the farm table (needed for its station)");
            station = weather.station_for(*it->second);
        }
        r.eto = weather.at(station, r.date).eto;
    }
}

std::map<std::string, double> load_actuals(const std::string& path) {
    CsvReader csv(path, {"node_id", "actual_ml"});
    std::map<std::string, double> out;
    std::vector<std::string> cells;
    while (csv.next_row(cells)) {
        const double v = parse_double_cell(cells[1], path, csv.line(), "actual_ml");
        if (v < 0) throw RowError(path, csv.line(), "negative actual_ml");
        if (!out.emplace(cells[0], v).second)
            throw RowError(path, csv.line(), "duplicate node '" + cells[0] + "'");
    }
    return out;
}

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        const std::string item =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// ---- preprocess ----

struct PreprocessArgs {
    std::string method = "rep";
    std::string weather_path, deliveries_path, farms_path, season_end, output = "dataset.csv";
    int bins = 4;
};

int run_preprocess(const PreprocessArgs& args) {
    const auto weather_days = parse_weather_csv(args.weather_path);
    const auto farms = parse_farm_csv(args.farms_path);
    const auto deliveries = parse_delivery_csv(args.deliveries_path);
    const auto weather = WeatherTable::from_days(weather_days);
    const Date season_end = Date::parse(args.season_end);

    const auto intervals = build_all_intervals(deliveries, weather, farms, season_end);
    const auto joined = build_joined_days(intervals, weather, farms);
    const Dataset dataset =
        build_dataset(joined, intervals, parse_method(args.method), standard_schema(args.bins));

    const auto violations = validate_dataset(dataset);
    if (!violations.empty())
        throw DataError("dataset failed validation: " + violations.front().message + " (farm " +
                        violations.front().farm_id + ", " + violations.front().date + ")");

    write_dataset_csv(dataset, args.output);
    std::cout << "wrote " << dataset.records.size() << " records from " << intervals.size()
              << " delivery intervals to " << args.output << "\n";
    return kExitOk;
}

// ---- crossval ----

struct CrossvalArgs {
    ModelOptions model;
    std::string dataset_path;
    int folds = 3;
    std::uint64_t seed = 1;
    std::string output = "folds.csv";
    std::string weather_path, farms_path, external_path;
};

int run_crossval(const CrossvalArgs& args) {
    Dataset dataset = read_dataset_csv(args.dataset_path, args.model.bins);
    if (dataset.records.empty()) throw DataError(args.dataset_path + " holds no records");

    CropCoefficientTable kc;
    const ModelKind kind = parse_model(args.model.model);
    if (kind == ModelKind::etc) {
        if (args.model.kc_path.empty())
            throw ConfigError("--model etc needs --kc with crop coefficients");
        if (args.weather_path.empty())
            throw ConfigError("--model etc needs --weather to recover daily reference ET");
        kc = CropCoefficientTable::load_csv(args.model.kc_path);
        std::vector<FarmProfile> farms;
        if (!args.farms_path.empty()) farms = parse_farm_csv(args.farms_path);
        rejoin_eto(dataset, WeatherTable::from_days(parse_weather_csv(args.weather_path)), farms);
    }

    std::vector<FoldReport> reports;
    reports.push_back(
        cross_validate(to_config(args.model, &kc), dataset, args.folds, args.seed));
    if (!args.external_path.empty())
        for (const auto& ext : load_external_predictions(args.external_path, dataset))
            reports.push_back(score_external(ext, dataset, args.folds, args.seed));

    write_folds_csv(reports, args.output);
    for (const auto& report : reports) {
        std::cout << report.model << ":";
        for (double acc : report.fold_accuracy_pct) std::cout << ' ' << format_double(acc);
        std::cout << " | avg " << format_double(report.average_pct) << "\n";
    }
    return kExitOk;
}

// ---- forecast ----

struct ForecastArgs {
    ModelOptions model;
    std::string train_path, weather_path, farms_path;
    std::string start_date, end_date;
    int days = 0;
    std::string actuals_path, exclude_nodes, save_model_path;
    std::string output = "forecast";
};

int run_forecast(const ForecastArgs& args) {
    const Dataset dataset = read_dataset_csv(args.train_path, args.model.bins);
    if (dataset.records.empty()) throw DataError(args.train_path + " holds no records");
    const auto weather_days = parse_weather_csv(args.weather_path);
    if (weather_days.empty()) throw DataError(args.weather_path + " holds no rows");
    const auto farms = parse_farm_csv(args.farms_path);
    if (farms.empty()) throw DataError(args.farms_path + " holds no rows");
    const auto weather = WeatherTable::from_days(weather_days);

    CropCoefficientTable kc;
    const ModelKind kind = parse_model(args.model.model);
    if (kind == ModelKind::etc) {
        if (args.model.kc_path.empty())
            throw ConfigError("--model etc needs --kc with crop coefficients");
        kc = CropCoefficientTable::load_csv(args.model.kc_path);
        kc.require_all(farms);
    }

    Date start = weather_days.front().date;
    Date end = weather_days.front().date;
    for (const auto& w : weather_days) {
        start = std::min(start, w.date);
        end = std::max(end, w.date);
    }
    if (!args.start_date.empty()) start = Date::parse(args.start_date);
    if (!args.end_date.empty()) end = Date::parse(args.end_date);
    if (args.days > 0) end = start.plus_days(args.days - 1);
    if (end < start) throw ConfigError("forecast window is empty");

    const TrainedModel model = train_model(to_config(args.model, &kc), dataset);
    if (model.forest && static_cast<int>(model.forest->size()) < args.model.sysfor.num_trees)
        std::cout << "note: alternatives ran out at " << model.forest->size() << " of "
                  << args.model.sysfor.num_trees << " requested trees\n";
    if (!args.save_model_path.empty()) {
        if (model.tree) save_tree(*model.tree, args.save_model_path);
        if (model.forest) save_forest(*model.forest, args.save_model_path);
    }

    std::vector<std::pair<std::string, double>> demands;
    std::map<std::string, std::string> farm_to_node;
    for (const auto& farm : farms) {
        demands.push_back({farm.farm_id, seasonal_demand(model, farm, weather, start, end)});
        farm_to_node[farm.farm_id] = farm.node_id;
    }

    std::map<std::string, double> actuals;
    if (!args.actuals_path.empty()) actuals = load_actuals(args.actuals_path);
    std::vector<std::string> actual_nodes;
    for (const auto& [node, value] : actuals) actual_nodes.push_back(node);
    const auto node_totals = node_aggregate(demands, farm_to_node, actual_nodes);

    const std::string name = model_name(kind);
    std::map<std::string, std::map<std::string, double>> predicted{{name, node_totals}};
    const auto reports =
        build_node_reports(predicted, actuals, [&] {
            const auto items = split_csv_list(args.exclude_nodes);
            return std::set<std::string>(items.begin(), items.end());
        }());

    namespace fs = std::filesystem;
    fs::create_directories(args.output);
    write_nodes_csv(reports, (fs::path(args.output) / "nodes.csv").string());
    write_summary_json(reports, (fs::path(args.output) / "summary.json").string());
    {
        const std::string path = (fs::path(args.output) / "farm_demand.csv").string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + path);
        out << "farm_id,node_id,model,demand_ml\n";
        for (const auto& [farm, demand] : demands)
            out << farm << ',' << farm_to_node[farm] << ',' << name << ','
                << format_double(demand) << '\n';
    }

    double total = 0;
    for (const auto& [node, value] : node_totals) total += value;
    std::cout << name << " demand " << start.to_string() << ".." << end.to_string() << ": "
              << format_double(total) << " ML over " << farms.size() << " farms, "
              << node_totals.size() << " nodes -> " << args.output << "\n";
    return kExitOk;
}

// ---- synth ----

struct SynthArgs {
    ScenarioConfig config;
    std::string start_date = "2008-10-01";
    std::string crops, soils;
    std::string output = "scenario";
};

int run_synth(const SynthArgs& args) {
    ScenarioConfig config = args.config;
    config.start_date = Date::parse(args.start_date);
    if (!args.crops.empty()) {
        config.crops.clear();
        for (const auto& item : split_csv_list(args.crops)) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError("bad crop spec '" + item + "' (expected name:kc)");
            config.crops.emplace_back(item.substr(0, colon),
                                      std::stod(item.substr(colon + 1)));
        }
    }
    if (!args.soils.empty()) {
        config.soils = split_csv_list(args.soils);
    }
    const Scenario scenario = generate(config);
    const auto written = write_scenario(scenario, args.output);
    std::cout << "wrote " << scenario.farms.size() << " farms x " << scenario.weather.size()
              << " days (" << scenario.deliveries.size() << " deliveries) to " << args.output
              << "\n";
    for (const auto& path : written) std::cout << "  " << path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crop water usage reconstruction, demand classifiers and evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file whose keys match the flag names");

    PreprocessArgs pre;
    auto* cmd_pre = app.add_subcommand(
        "preprocess", "Disaggregate delivery statements into a daily training dataset");
    cmd_pre->add_option("--method", pre.method, "Disaggregation: ewd (even) or rep (ET-weighted)")
        ->check(CLI::IsMember({"ewd", "rep"}));
    cmd_pre->add_option("--weather", pre.weather_path, "weather.csv")->required();
    cmd_pre->add_option("--deliveries", pre.deliveries_path, "deliveries.csv")->required();
    cmd_pre->add_option("--farms", pre.farms_path, "farms.csv")->required();
    cmd_pre->add_option("--season-end", pre.season_end,
                        "Last day (YYYY-MM-DD) served by the final delivery")
        ->required();
    cmd_pre->add_option("-o,--output", pre.output, "Output dataset path");
    cmd_pre->add_option("--bins", pre.bins, "Number of 0.05 ML/ha/day usage bins")
        ->check(CLI::PositiveNumber);

    CrossvalArgs cv;
    auto* cmd_cv =
        app.add_subcommand("crossval", "k-fold cross-validation of a classifier on a dataset");
    add_model_options(cmd_cv, cv.model);
    cmd_cv->add_option("dataset", cv.dataset_path, "dataset.csv from preprocess")->required();
    cmd_cv->add_option("--folds", cv.folds, "Fold count")->check(CLI::Range(2, 1000));
    cmd_cv->add_option("--seed", cv.seed, "Shuffle seed");
    cmd_cv->add_option("-o,--output", cv.output, "Output folds.csv path");
    cmd_cv->add_option("--weather", cv.weather_path, "weather.csv (required for --model etc)");
    cmd_cv->add_option("--farms", cv.farms_path,
                       "farms.csv (only needed when weather carries station ids)");
    cmd_cv->add_option("--external", cv.external_path,
                       "external_predictions.csv scored on the same folds");

    ForecastArgs fc;
    auto* cmd_fc = app.add_subcommand(
        "forecast", "Train on a dataset and predict per-farm and per-node demand");
    add_model_options(cmd_fc, fc.model);
    cmd_fc->add_option("--train", fc.train_path, "Training dataset.csv")->required();
    cmd_fc->add_option("--weather", fc.weather_path, "Weather window to forecast over")
        ->required();
    cmd_fc->add_option("--farms", fc.farms_path, "farms.csv")->required();
    cmd_fc->add_option("--start", fc.start_date, "Window start (default: first weather day)");
    cmd_fc->add_option("--end", fc.end_date, "Window end (default: last weather day)");
    cmd_fc->add_option("--days", fc.days, "Horizon in days from the window start");
    cmd_fc->add_option("--actuals", fc.actuals_path, "node_id,actual_ml for closeness checks");
    cmd_fc->add_option("--exclude-nodes", fc.exclude_nodes,
                       "Comma-separated node ids to flag and drop from overall closeness");
    cmd_fc->add_option("--save-model", fc.save_model_path, "Write the trained model here");
    cmd_fc->add_option("-o,--output", fc.output, "Output directory");

    SynthArgs sy;
    auto* cmd_sy =
        app.add_subcommand("synth", "Generate a seeded synthetic scenario with known truth");
    cmd_sy->add_option("--seed", sy.config.seed, "RNG seed");
    cmd_sy->add_option("--farms", sy.config.n_farms, "Farm count")->check(CLI::PositiveNumber);
    cmd_sy->add_option("--days", sy.config.n_days, "Season length in days")
        ->check(CLI::PositiveNumber);
    cmd_sy->add_option("--period", sy.config.delivery_period, "Days between deliveries")
        ->check(CLI::PositiveNumber);
    cmd_sy->add_option("--start-date", sy.start_date, "Season start (YYYY-MM-DD)");
    cmd_sy->add_option("--eto-base", sy.config.eto_base, "Reference ET baseline, mm/day");
    cmd_sy->add_option("--eto-amplitude", sy.config.eto_amplitude,
                       "Seasonal ET sinusoid amplitude, mm/day");
    cmd_sy->add_option("--rain-prob", sy.config.rain_prob, "Daily rainfall probability");
    cmd_sy->add_option("--noise", sy.config.noise, "Multiplicative usage noise in [0,1]");
    cmd_sy->add_option("--farms-per-node", sy.config.farms_per_node, "Node size");
    cmd_sy->add_option("--area-min", sy.config.area_min, "Smallest farm, ha");
    cmd_sy->add_option("--area-max", sy.config.area_max, "Largest farm, ha");
    cmd_sy->add_option("--crops", sy.crops, "Crop mix as name:kc,name:kc,...");
    cmd_sy->add_option("--soils", sy.soils, "Soil codes, comma separated");
    cmd_sy->add_option("-o,--output", sy.output, "Output directory");

    try {
        app.parse(argc, argv);
        if (cmd_pre->parsed()) return run_preprocess(pre);
        if (cmd_cv->parsed()) return run_crossval(cv);
        if (cmd_fc->parsed()) return run_forecast(fc);
        if (cmd_sy->parsed()) return run_synth(sy);
        return kExitConfig;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
