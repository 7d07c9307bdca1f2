#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "irdm/core.hpp"

namespace irdm {

// weather.csv: date,tmax_c,tmin_c,humidity_pct,wind_km_day,rainfall_mm,solar_mj_m2,eto_mm
// An optional trailing station_id column keys rows by weather station;
// without it all rows form one default series.
std::vector<WeatherDay> parse_weather_csv(const std::string& path);

// deliveries.csv: farm_id,date,volume_ml
// Duplicate (farm, date) rows are summed into one event; the result is
// sorted by (farm_id, date).
std::vector<DeliveryEvent> parse_delivery_csv(const std::string& path);

// farms.csv: farm_id,node_id,area_ha,soil_type,crop_type[,station_id]
std::vector<FarmProfile> parse_farm_csv(const std::string& path);

// Per-day weather lookup keyed by (station, date).
class WeatherTable {
public:
    static WeatherTable from_days(const std::vector<WeatherDay>& days);

    const WeatherDay* find(const std::string& station, Date date) const;
    // Throws GapError naming the missing date.
    const WeatherDay& at(const std::string& station, Date date) const;
    bool has_stations() const { return has_stations_; }
    // The station whose series applies to this farm ("" for the single
    // default series). ConfigError if the mapping is ambiguous.
    std::string station_for(const FarmProfile& farm) const;

private:
    std::map<std::pair<std::string, std::int64_t>, WeatherDay> by_key_;
    bool has_stations_ = false;
};

// Spans between consecutive deliveries of a single farm; `events` must be
// sorted by date and belong to one farm. The final delivery's span runs
// through season_end inclusive.
std::vector<DeliveryInterval> build_delivery_intervals(std::span<const DeliveryEvent> events,
                                                       const WeatherTable& weather,
                                                       const std::string& station,
                                                       Date season_end);

// Driver over all farms; output ordered by (farm_id, start_date).
std::vector<DeliveryInterval> build_all_intervals(const std::vector<DeliveryEvent>& events,
                                                  const WeatherTable& weather,
                                                  const std::vector<FarmProfile>& farms,
                                                  Date season_end);

// One joined per-farm per-day row: everything needed to form a training
// record except the disaggregated usage.
struct RawJoinedDay {
    std::string farm_id;
    WeatherDay weather;
    FarmProfile farm;
};

class JoinedTable {
public:
    void add(RawJoinedDay row);
    const RawJoinedDay* find(const std::string& farm_id, Date date) const;
    const RawJoinedDay& at(const std::string& farm_id, Date date) const;  // GapError
    std::size_t size() const { return rows_.size(); }

private:
    std::map<std::pair<std::string, std::int64_t>, RawJoinedDay> rows_;
};

// Joins weather and farm data for every day of every interval.
JoinedTable build_joined_days(const std::vector<DeliveryInterval>& intervals,
                              const WeatherTable& weather,
                              const std::vector<FarmProfile>& farms);

}  // namespace irdm
