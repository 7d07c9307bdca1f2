#include "irdm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "irdm/csv.hpp"
#include "irdm/rng.hpp"

namespace irdm {

namespace {

void check_config(const ScenarioConfig& c) {
    if (c.n_farms < 1) throw ConfigError("n_farms must be >= 1");
    if (c.n_days < 1) throw ConfigError("n_days must be >= 1");
    if (c.delivery_period < 1) throw ConfigError("delivery_period must be >= 1");
    if (c.noise < 0 || c.noise > 1) throw ConfigError("noise must lie in [0,1]");
    if (c.crops.empty()) throw ConfigError("crop mix is empty");
    for (const auto& [crop, kc] : c.crops)
        if (!(kc > 0)) throw ConfigError("kc for crop '" + crop + "' must be > 0");
    if (c.soils.empty()) throw ConfigError("soil list is empty");
    if (!(c.area_min > 0) || c.area_max < c.area_min) throw ConfigError("bad area range");
    if (c.farms_per_node < 1) throw ConfigError("farms_per_node must be >= 1");
    if (c.rain_prob < 0 || c.rain_prob > 1) throw ConfigError("rain_prob must lie in [0,1]");
}

std::string padded_id(const char* prefix, int i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, i);
    return buf;
}

}  // namespace

Date Scenario::season_end() const {
    return weather.empty() ? Date() : weather.back().date;
}

Scenario generate(const ScenarioConfig& config) {
    check_config(config);
    Rng rng(config.seed);
    Scenario s;

    // Weather: a slow seasonal ET sinusoid; temperature, humidity and solar
    // track it, wind and rainfall do not.
    s.weather.reserve(config.n_days);
    for (int d = 0; d < config.n_days; ++d) {
        WeatherDay w;
        w.date = config.start_date.plus_days(d);
        const double phase = 2.0 * std::numbers::pi * d / config.n_days;
        w.eto = std::max(0.1, config.eto_base + config.eto_amplitude * std::sin(phase));
        w.solar = 2.6 * w.eto + 3.0;
        w.tmax = 12.0 + 2.0 * w.eto + rng.uniform(-1.5, 1.5);
        w.tmin = w.tmax - (5.0 + rng.uniform(0.0, 7.0));
        w.humidity = std::clamp(88.0 - 5.5 * w.eto + rng.uniform(-6.0, 6.0), 5.0, 100.0);
        w.wind = rng.uniform(40.0, 420.0);
        w.rainfall = rng.chance(config.rain_prob) ? rng.uniform(0.2, 18.0) : 0.0;
        s.weather.push_back(std::move(w));
    }

    const int id_width = config.n_farms >= 1000 ? 4 : 3;
    s.farms.reserve(config.n_farms);
    for (int i = 0; i < config.n_farms; ++i) {
        FarmProfile f;
        f.farm_id = padded_id("F", i + 1, id_width);
        f.node_id = padded_id("N", i / config.farms_per_node + 1, 2);
        f.area = rng.uniform(config.area_min, config.area_max);
        f.soil_type = config.soils[i % config.soils.size()];
        f.crop_type = config.crops[i % config.crops.size()].first;
        s.farms.push_back(std::move(f));
    }

    for (int i = 0; i < config.n_farms; ++i) {
        const FarmProfile& farm = s.farms[i];
        const double kc = config.crops[i % config.crops.size()].second;
        std::vector<double> usage(config.n_days);
        for (int d = 0; d < config.n_days; ++d) {
            const double eps = rng.uniform(-1.0, 1.0);
            usage[d] = kc * s.weather[d].eto * 0.01 * farm.area * (1.0 + config.noise * eps);
            s.truth.push_back({farm.farm_id, config.start_date.plus_days(d), usage[d]});
        }
        for (int t = 0; t < config.n_days; t += config.delivery_period) {
            const int stop = std::min(t + config.delivery_period, config.n_days);
            double volume = 0.0;
            for (int d = t; d < stop; ++d) volume += usage[d];
            s.deliveries.push_back({farm.farm_id, config.start_date.plus_days(t), volume});
        }
    }
    return s;
}

std::vector<std::string> write_scenario(const Scenario& scenario, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> written;

    {
        const std::string path = (fs::path(dir) / "weather.csv").string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + path);
        out << "date,tmax_c,tmin_c,humidity_pct,wind_km_day,rainfall_mm,solar_mj_m2,eto_mm\n";
        for (const auto& w : scenario.weather)
            out << w.date.to_string() << ',' << format_double(w.tmax) << ','
                << format_double(w.tmin) << ',' << format_double(w.humidity) << ','
                << format_double(w.wind) << ',' << format_double(w.rainfall) << ','
                << format_double(w.solar) << ',' << format_double(w.eto) << '\n';
        written.push_back(path);
    }
    {
        const std::string path = (fs::path(dir) / "farms.csv").string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + path);
        out << "farm_id,node_id,area_ha,soil_type,crop_type\n";
        for (const auto& f : scenario.farms)
            out << f.farm_id << ',' << f.node_id << ',' << format_double(f.area) << ','
                << f.soil_type << ',' << f.crop_type << '\n';
        written.push_back(path);
    }
    {
        const std::string path = (fs::path(dir) / "deliveries.csv").string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + path);
        out << "farm_id,date,volume_ml\n";
        for (const auto& d : scenario.deliveries)
            out << d.farm_id << ',' << d.date.to_string() << ',' << format_double(d.volume)
                << '\n';
        written.push_back(path);
    }
    {
        const std::string path = (fs::path(dir) / "truth.csv").string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + path);
        out << "farm_id,date,usage_ml\n";
        for (const auto& t : scenario.truth)
            out << t.farm_id << ',' << t.date.to_string() << ',' << format_double(t.usage_ml)
                << '\n';
        written.push_back(path);
    }
    return written;
}

}  // namespace irdm
