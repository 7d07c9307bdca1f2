#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "irdm/core.hpp"

namespace irdm {

// Seeded synthetic season: weather, farms and delivery statements with a
// known per-day ground truth, for end-to-end validation without real data.
struct ScenarioConfig {
    std::uint64_t seed = 1;
    int n_farms = 20;
    int n_days = 120;
    int delivery_period = 7;  // days between deliveries
    Date start_date = Date(2008, 10, 1);

    // Seasonal reference-ET sinusoid (mm/day) over the run of the season.
    double eto_base = 6.0;
    double eto_amplitude = 4.0;
    double rain_prob = 0.15;

    // Multiplicative deviation of daily usage from the ET-proportional
    // ideal, in [0,1]. 0 keeps truth exactly proportional to daily ET.
    double noise = 0.0;

    int farms_per_node = 5;
    double area_min = 20.0;
    double area_max = 120.0;
    std::vector<std::pair<std::string, double>> crops = {
        {"Rice", 1.25}, {"Wheat", 1.0}, {"Corn", 1.15}, {"Barley", 0.9}};
    std::vector<std::string> soils = {"SMC", "RBE", "BGE"};
};

struct TruthRow {
    std::string farm_id;
    Date date;
    double usage_ml = 0.0;
};

struct Scenario {
    std::vector<WeatherDay> weather;
    std::vector<FarmProfile> farms;
    std::vector<DeliveryEvent> deliveries;  // sums of truth over each delivery period
    std::vector<TruthRow> truth;

    Date season_end() const;
};

// Fully deterministic given the config.
Scenario generate(const ScenarioConfig& config);

// Writes weather.csv, farms.csv, deliveries.csv and truth.csv
// (farm_id,date,usage_ml) into dir, creating it if needed.
std::vector<std::string> write_scenario(const Scenario& scenario, const std::string& dir);

}  // namespace irdm
