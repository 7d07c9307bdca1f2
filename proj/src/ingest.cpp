#include "irdm/ingest.hpp"

#include <algorithm>
#include <set>

#include "irdm/csv.hpp"

namespace irdm {

namespace {

Date parse_date_cell(const std::string& cell, const std::string& file, std::size_t line) {
    try {
        return Date::parse(cell);
    } catch (const std::invalid_argument& e) {
        throw RowError(file, line, e.what());
    }
}

}  // namespace

std::vector<WeatherDay> parse_weather_csv(const std::string& path) {
    CsvReader csv(path,
                  {"date", "tmax_c", "tmin_c", "humidity_pct", "wind_km_day", "rainfall_mm",
                   "solar_mj_m2", "eto_mm"},
                  {"station_id"});
    const bool has_station = csv.has_column("station_id");
    std::vector<WeatherDay> out;
    std::vector<std::string> cells;
    while (csv.next_row(cells)) {
        WeatherDay d;
        d.date = parse_date_cell(cells[0], path, csv.line());
        d.tmax = parse_double_cell(cells[1], path, csv.line(), "tmax_c");
        d.tmin = parse_double_cell(cells[2], path, csv.line(), "tmin_c");
        d.humidity = parse_double_cell(cells[3], path, csv.line(), "humidity_pct");
        d.wind = parse_double_cell(cells[4], path, csv.line(), "wind_km_day");
        d.rainfall = parse_double_cell(cells[5], path, csv.line(), "rainfall_mm");
        d.solar = parse_double_cell(cells[6], path, csv.line(), "solar_mj_m2");
        d.eto = parse_double_cell(cells[7], path, csv.line(), "eto_mm");
        if (has_station) d.station = cells[8];

        if (d.tmax < d.tmin) throw RowError(path, csv.line(), "tmax_c below tmin_c");
        if (d.humidity < 0 || d.humidity > 100)
            throw RowError(path, csv.line(), "humidity_pct outside [0,100]");
        if (d.wind < 0) throw RowError(path, csv.line(), "negative wind_km_day");
        if (d.rainfall < 0) throw RowError(path, csv.line(), "negative rainfall_mm");
        if (d.solar < 0) throw RowError(path, csv.line(), "negative solar_mj_m2");
        if (d.eto < 0) throw RowError(path, csv.line(), "negative eto_mm");
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<DeliveryEvent> parse_delivery_csv(const std::string& path) {
    CsvReader csv(path, {"farm_id", "date", "volume_ml"});
    std::map<std::pair<std::string, std::int64_t>, double> summed;
    std::vector<std::string> cells;
    while (csv.next_row(cells)) {
        if (cells[0].empty()) throw RowError(path, csv.line(), "empty farm_id");
        Date date = parse_date_cell(cells[1], path, csv.line());
        double volume = parse_double_cell(cells[2], path, csv.line(), "volume_ml");
        if (volume < 0) throw RowError(path, csv.line(), "negative volume_ml");
        summed[{cells[0], date.serial()}] += volume;  // a farm may take two deliveries a day
    }
    std::vector<DeliveryEvent> out;
    out.reserve(summed.size());
    for (const auto& [key, volume] : summed)
        out.push_back({key.first, Date::from_serial(key.second), volume});
    return out;
}

std::vector<FarmProfile> parse_farm_csv(const std::string& path) {
    CsvReader csv(path, {"farm_id", "node_id", "area_ha", "soil_type", "crop_type"},
                  {"station_id"});
    const bool has_station = csv.has_column("station_id");
    std::vector<FarmProfile> out;
    std::set<std::string> seen;
    std::vector<std::string> cells;
    while (csv.next_row(cells)) {
        FarmProfile f;
        f.farm_id = cells[0];
        f.node_id = cells[1];
        f.area = parse_double_cell(cells[2], path, csv.line(), "area_ha");
        f.soil_type = cells[3];
        f.crop_type = cells[4];
        if (has_station) f.station = cells[5];
        if (f.farm_id.empty()) throw RowError(path, csv.line(), "empty farm_id");
        if (f.node_id.empty()) throw RowError(path, csv.line(), "empty node_id");
        if (!(f.area > 0)) throw RowError(path, csv.line(), "area_ha must be > 0");
        if (!seen.insert(f.farm_id).second)
            throw SchemaError(path + ": duplicate farm_id '" + f.farm_id + "'");
        out.push_back(std::move(f));
    }
    return out;
}

WeatherTable WeatherTable::from_days(const std::vector<WeatherDay>& days) {
    WeatherTable t;
    for (const auto& d : days) {
        if (!d.station.empty()) t.has_stations_ = true;
        auto [it, fresh] = t.by_key_.insert({{d.station, d.date.serial()}, d});
        if (!fresh)
            throw DataError("duplicate weather row for " + d.date.to_string() +
                            (d.station.empty() ? "" : " station " + d.station));
    }
    return t;
}

const WeatherDay* WeatherTable::find(const std::string& station, Date date) const {
    auto it = by_key_.find({station, date.serial()});
    return it == by_key_.end() ? nullptr : &it->second;
}

const WeatherDay& WeatherTable::at(const std::string& station, Date date) const {
    const WeatherDay* d = find(station, date);
    if (!d)
        throw GapError("no weather for " + date.to_string() +
                       (station.empty() ? "" : " at station " + station));
    return *d;
}

std::string WeatherTable::station_for(const FarmProfile& farm) const {
    if (!has_stations_) return "";
    if (farm.station.empty())
        throw ConfigError("weather data is per-station but farm " + farm.farm_id +
                          " has no station_id");
    return farm.station;
}

std::vector<DeliveryInterval> build_delivery_intervals(std::span<const DeliveryEvent> events,
                                                       const WeatherTable& weather,
                                                       const std::string& station,
                                                       Date season_end) {
    std::vector<DeliveryInterval> out;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const auto& e = events[k];
        DeliveryInterval iv;
        iv.farm_id = e.farm_id;
        iv.start_date = e.date;
        iv.wt = e.volume;
        std::int64_t n;
        if (k + 1 < events.size()) {
            n = events[k + 1].date - e.date;
            if (n < 1)
                throw DataError("deliveries for farm " + e.farm_id + " are not sorted by date");
        } else {
            n = season_end - e.date + 1;
            if (n < 1)
                throw DataError("delivery for farm " + e.farm_id + " on " + e.date.to_string() +
                                " falls after season end " + season_end.to_string());
        }
        iv.n = static_cast<int>(n);
        iv.eto_by_day.reserve(iv.n);
        for (int i = 0; i < iv.n; ++i)
            iv.eto_by_day.push_back(weather.at(station, e.date.plus_days(i)).eto);
        out.push_back(std::move(iv));
    }
    return out;
}

std::vector<DeliveryInterval> build_all_intervals(const std::vector<DeliveryEvent>& events,
                                                  const WeatherTable& weather,
                                                  const std::vector<FarmProfile>& farms,
                                                  Date season_end) {
    std::map<std::string, const FarmProfile*> by_id;
    for (const auto& f : farms) by_id[f.farm_id] = &f;

    std::vector<DeliveryInterval> out;
    std::size_t i = 0;
    while (i < events.size()) {  // events arrive sorted by (farm_id, date)
        std::size_t j = i;
        while (j < events.size() && events[j].farm_id == events[i].farm_id) ++j;
        auto farm_it = by_id.find(events[i].farm_id);
        if (farm_it == by_id.end())
            throw DataError("delivery for unknown farm " + events[i].farm_id);
        const std::string station = weather.station_for(*farm_it->second);
        auto ivs = build_delivery_intervals({events.data() + i, j - i}, weather, station,
                                            season_end);
        out.insert(out.end(), std::make_move_iterator(ivs.begin()),
                   std::make_move_iterator(ivs.end()));
        i = j;
    }
    return out;
}

void JoinedTable::add(RawJoinedDay row) {
    auto key = std::make_pair(row.farm_id, row.weather.date.serial());
    rows_[key] = std::move(row);
}

const RawJoinedDay* JoinedTable::find(const std::string& farm_id, Date date) const {
    auto it = rows_.find({farm_id, date.serial()});
    return it == rows_.end() ? nullptr : &it->second;
}

const RawJoinedDay& JoinedTable::at(const std::string& farm_id, Date date) const {
    const RawJoinedDay* r = find(farm_id, date);
    if (!r) throw GapError("no joined row for farm " + farm_id + " on " + date.to_string());
    return *r;
}

JoinedTable build_joined_days(const std::vector<DeliveryInterval>& intervals,
                              const WeatherTable& weather,
                              const std::vector<FarmProfile>& farms) {
    std::map<std::string, const FarmProfile*> by_id;
    for (const auto& f : farms) by_id[f.farm_id] = &f;

    JoinedTable joined;
    for (const auto& iv : intervals) {
        auto it = by_id.find(iv.farm_id);
        if (it == by_id.end()) throw DataError("interval for unknown farm " + iv.farm_id);
        const FarmProfile& farm = *it->second;
        const std::string station = weather.station_for(farm);
        for (int i = 0; i < iv.n; ++i) {
            RawJoinedDay row;
            row.farm_id = iv.farm_id;
            row.weather = weather.at(station, iv.start_date.plus_days(i));
            row.farm = farm;
            joined.add(std::move(row));
        }
    }
    return joined;
}

}  // namespace irdm
