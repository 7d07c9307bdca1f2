#include "irdm/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "irdm/csv.hpp"

namespace irdm {

DisaggregationMethod parse_method(const std::string& name) {
    if (name == "ewd") return DisaggregationMethod::EWD;
    if (name == "rep") return DisaggregationMethod::REP;
    throw ConfigError("unknown method '" + name + "' (expected ewd or rep)");
}

std::string method_name(DisaggregationMethod m) {
    return m == DisaggregationMethod::EWD ? "ewd" : "rep";
}

std::vector<double> ewd_distribute(const DeliveryInterval& interval) {
    if (interval.n < 1) throw std::invalid_argument("interval has no days");
    return std::vector<double>(interval.n, interval.wt / interval.n);
}

std::vector<double> rep_distribute(const DeliveryInterval& interval) {
    if (interval.n < 1) throw std::invalid_argument("interval has no days");
    if (static_cast<int>(interval.eto_by_day.size()) != interval.n)
        throw std::invalid_argument("interval eto series length != n");
    double total = 0.0;
    bool uniform = true;
    for (double e : interval.eto_by_day) {
        if (e < 0) throw std::invalid_argument("negative eto");
        total += e;
        uniform = uniform && e == interval.eto_by_day.front();
    }
    // All-equal days (including an all-zero outage) reduce to the even split.
    if (total == 0.0 || uniform) return ewd_distribute(interval);
    std::vector<double> out(interval.n);
    for (int i = 0; i < interval.n; ++i)
        out[i] = interval.wt * (interval.eto_by_day[i] / total);
    return out;
}

std::vector<double> distribute(const DeliveryInterval& interval, DisaggregationMethod method) {
    return method == DisaggregationMethod::EWD ? ewd_distribute(interval)
                                               : rep_distribute(interval);
}

Dataset build_dataset(const JoinedTable& joined, const std::vector<DeliveryInterval>& intervals,
                      DisaggregationMethod method, const AttributeSchema& schema) {
    schema.validate();
    Dataset ds;
    ds.schema = schema;
    ds.categories.resize(schema.attributes.size());

    std::vector<const DeliveryInterval*> ordered;
    ordered.reserve(intervals.size());
    for (const auto& iv : intervals) ordered.push_back(&iv);
    std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
        return std::tie(a->farm_id, a->start_date) < std::tie(b->farm_id, b->start_date);
    });

    const int i_tmax = schema.attribute_index("tmax_c");
    const int i_tmin = schema.attribute_index("tmin_c");
    const int i_hum = schema.attribute_index("humidity_pct");
    const int i_wind = schema.attribute_index("wind_km_day");
    const int i_rain = schema.attribute_index("rainfall_mm");
    const int i_solar = schema.attribute_index("solar_mj_m2");
    const int i_soil = schema.attribute_index("soil_type");
    const int i_crop = schema.attribute_index("crop_type");

    for (const auto* iv : ordered) {
        const std::vector<double> daily = distribute(*iv, method);
        for (int i = 0; i < iv->n; ++i) {
            const Date day = iv->start_date.plus_days(i);
            const RawJoinedDay& row = joined.at(iv->farm_id, day);
            TrainingRecord r;
            r.values.assign(schema.attributes.size(), 0.0);
            if (i_tmax >= 0) r.values[i_tmax] = row.weather.tmax;
            if (i_tmin >= 0) r.values[i_tmin] = row.weather.tmin;
            if (i_hum >= 0) r.values[i_hum] = row.weather.humidity;
            if (i_wind >= 0) r.values[i_wind] = row.weather.wind;
            if (i_rain >= 0) r.values[i_rain] = row.weather.rainfall;
            if (i_solar >= 0) r.values[i_solar] = row.weather.solar;
            if (i_soil >= 0) r.values[i_soil] = ds.intern_category(i_soil, row.farm.soil_type);
            if (i_crop >= 0) r.values[i_crop] = ds.intern_category(i_crop, row.farm.crop_type);
            r.farm_id = iv->farm_id;
            r.date = day;
            r.usage = daily[i] / row.farm.area;  // ML/ha/day
            r.eto = row.weather.eto;
            r.class_label = discretize_usage(r.usage, schema);
            ds.records.push_back(std::move(r));
        }
    }
    return ds;
}

void write_dataset_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << "farm_id,date,tmax_c,tmin_c,humidity_pct,wind_km_day,rainfall_mm,solar_mj_m2,"
           "soil_type,crop_type,usage_ml_ha_day,class_bin\n";
    const auto& schema = dataset.schema;
    const int i_soil = schema.attribute_index("soil_type");
    const int i_crop = schema.attribute_index("crop_type");
    for (const auto& r : dataset.records) {
        out << r.farm_id << ',' << r.date.to_string();
        for (int a = 0; a < static_cast<int>(schema.attributes.size()); ++a) {
            out << ',';
            if (a == i_soil || a == i_crop)
                out << dataset.category_name(a, static_cast<int>(r.values[a]));
            else
                out << format_double(r.values[a]);
        }
        out << ',' << format_double(r.usage) << ','
            << schema.class_bins.at(r.class_label).label << '\n';
    }
    if (!out) throw ConfigError("failed writing " + path);
}

Dataset read_dataset_csv(const std::string& path, int bin_count) {
    CsvReader csv(path, {"farm_id", "date", "tmax_c", "tmin_c", "humidity_pct", "wind_km_day",
                         "rainfall_mm", "solar_mj_m2", "soil_type", "crop_type",
                         "usage_ml_ha_day", "class_bin"});
    Dataset ds;
    ds.schema = standard_schema(std::max(bin_count, 1));
    ds.categories.resize(ds.schema.attributes.size());

    const int i_soil = ds.schema.attribute_index("soil_type");
    const int i_crop = ds.schema.attribute_index("crop_type");
    int max_label = bin_count > 0 ? bin_count - 1 : 0;

    std::vector<std::string> cells;
    std::vector<std::pair<int, std::size_t>> labels;  // (bin index, source line)
    while (csv.next_row(cells)) {
        TrainingRecord r;
        r.farm_id = cells[0];
        r.date = Date::parse(cells[1]);
        r.values.assign(ds.schema.attributes.size(), 0.0);
        for (int a = 0; a < 6; ++a)
            r.values[a] = parse_double_cell(cells[2 + a], path, csv.line(),
                                            ds.schema.attributes[a].name);
        r.values[i_soil] = ds.intern_category(i_soil, cells[8]);
        r.values[i_crop] = ds.intern_category(i_crop, cells[9]);
        r.usage = parse_double_cell(cells[10], path, csv.line(), "usage_ml_ha_day");

        // The label "0.01-0.05", "0.06-0.10", ... encodes the bin index.
        double printed_lo = 0.0;
        auto dash = cells[11].find('-', 1);
        if (dash == std::string::npos)
            throw RowError(path, csv.line(), "bad class_bin '" + cells[11] + "'");
        try {
            printed_lo = std::stod(cells[11].substr(0, dash));
        } catch (const std::exception&) {
            throw RowError(path, csv.line(), "bad class_bin '" + cells[11] + "'");
        }
        int idx = static_cast<int>(std::lround((printed_lo - 0.01) / 0.05));
        if (idx < 0) throw RowError(path, csv.line(), "bad class_bin '" + cells[11] + "'");
        r.class_label = idx;
        max_label = std::max(max_label, idx);
        labels.emplace_back(idx, csv.line());
        ds.records.push_back(std::move(r));
    }

    ds.schema.class_bins = make_usage_bins(max_label + 1);
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        // Consistency: the stored usage must land in the stored bin.
        if (discretize_usage(ds.records[i].usage, ds.schema) != ds.records[i].class_label)
            throw RowError(path, labels[i].second, "usage_ml_ha_day disagrees with class_bin");
    }
    return ds;
}

}  // namespace irdm
