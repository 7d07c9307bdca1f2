#include "irdm/core.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace irdm {

int AttributeSchema::attribute_index(const std::string& name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i)
        if (attributes[i].name == name) return static_cast<int>(i);
    return -1;
}

void AttributeSchema::validate() const {
    std::set<std::string> names;
    for (const auto& a : attributes)
        if (!names.insert(a.name).second)
            throw ConfigError("duplicate attribute name '" + a.name + "'");
    if (class_bins.empty()) throw ConfigError("schema needs at least one class bin");
    for (std::size_t i = 0; i < class_bins.size(); ++i) {
        const auto& b = class_bins[i];
        if (!(b.lo < b.hi))
            throw ConfigError("class bin '" + b.label + "' is empty or inverted");
        if (i > 0 && class_bins[i].lo != class_bins[i - 1].hi)
            throw ConfigError("class bins must be contiguous; gap before '" + b.label + "'");
    }
}

std::vector<UsageBin> make_usage_bins(int count) {
    if (count < 1) throw ConfigError("bin count must be >= 1");
    std::vector<UsageBin> bins;
    bins.reserve(count);
    for (int i = 0; i < count; ++i) {
        UsageBin b;
        b.lo = 0.005 + 0.05 * i;
        b.hi = b.lo + 0.05;
        char label[32];
        std::snprintf(label, sizeof label, "%.2f-%.2f", 0.01 + 0.05 * i, 0.05 + 0.05 * i);
        b.label = label;
        bins.push_back(b);
    }
    return bins;
}

AttributeSchema standard_schema(int bin_count) {
    AttributeSchema s;
    s.attributes = {
        {"tmax_c", AttributeKind::numeric},      {"tmin_c", AttributeKind::numeric},
        {"humidity_pct", AttributeKind::numeric}, {"wind_km_day", AttributeKind::numeric},
        {"rainfall_mm", AttributeKind::numeric},  {"solar_mj_m2", AttributeKind::numeric},
        {"soil_type", AttributeKind::categorical}, {"crop_type", AttributeKind::categorical},
    };
    s.class_bins = make_usage_bins(bin_count);
    return s;
}

int Dataset::intern_category(int attribute, const std::string& value) {
    if (categories.size() < schema.attributes.size()) categories.resize(schema.attributes.size());
    auto& dict = categories[attribute];
    for (std::size_t i = 0; i < dict.size(); ++i)
        if (dict[i] == value) return static_cast<int>(i);
    dict.push_back(value);
    return static_cast<int>(dict.size()) - 1;
}

int Dataset::category_id(int attribute, const std::string& value) const {
    if (attribute < 0 || static_cast<std::size_t>(attribute) >= categories.size()) return -1;
    const auto& dict = categories[attribute];
    for (std::size_t i = 0; i < dict.size(); ++i)
        if (dict[i] == value) return static_cast<int>(i);
    return -1;
}

const std::string& Dataset::category_name(int attribute, int id) const {
    return categories.at(attribute).at(id);
}

int discretize_usage(double usage, const AttributeSchema& schema) {
    if (std::isnan(usage)) throw std::invalid_argument("usage is NaN");
    if (schema.class_bins.empty()) throw std::invalid_argument("schema has no class bins");
    const auto& bins = schema.class_bins;
    if (usage < bins.front().lo) return 0;
    for (std::size_t i = 0; i < bins.size(); ++i)
        if (usage < bins[i].hi) return static_cast<int>(i);
    return static_cast<int>(bins.size()) - 1;
}

double bin_midpoint(const UsageBin& bin) { return 0.5 * (bin.lo + bin.hi); }

namespace {

void check_range(std::vector<Violation>& out, const TrainingRecord& r, double v, double lo,
                 double hi, const char* what) {
    if (std::isnan(v) || v < lo || v > hi) {
        out.push_back({r.farm_id, r.date.to_string(),
                       std::string(what) + " out of range: " + std::to_string(v)});
    }
}

}  // namespace

std::vector<Violation> validate_dataset(const Dataset& dataset) {
    std::vector<Violation> out;
    const auto& schema = dataset.schema;
    const int n_attr = static_cast<int>(schema.attributes.size());
    const int n_bins = static_cast<int>(schema.class_bins.size());
    const int i_tmax = schema.attribute_index("tmax_c");
    const int i_tmin = schema.attribute_index("tmin_c");
    const int i_hum = schema.attribute_index("humidity_pct");
    const int i_wind = schema.attribute_index("wind_km_day");
    const int i_rain = schema.attribute_index("rainfall_mm");
    const int i_solar = schema.attribute_index("solar_mj_m2");

    for (const auto& r : dataset.records) {
        if (static_cast<int>(r.values.size()) != n_attr) {
            out.push_back({r.farm_id, r.date.to_string(),
                           "record has " + std::to_string(r.values.size()) + " values, schema has " +
                               std::to_string(n_attr)});
            continue;
        }
        if (r.class_label < 0 || r.class_label >= n_bins)
            out.push_back({r.farm_id, r.date.to_string(),
                           "class label " + std::to_string(r.class_label) + " out of range"});
        for (int a = 0; a < n_attr; ++a) {
            if (schema.attributes[a].kind == AttributeKind::categorical) {
                const double v = r.values[a];
                const int id = static_cast<int>(v);
                const std::size_t dict =
                    a < static_cast<int>(dataset.categories.size()) ? dataset.categories[a].size() : 0;
                if (v != id || id < 0 || static_cast<std::size_t>(id) >= dict)
                    out.push_back({r.farm_id, r.date.to_string(),
                                   "bad category id for " + schema.attributes[a].name});
            } else if (std::isnan(r.values[a])) {
                out.push_back({r.farm_id, r.date.to_string(),
                               "NaN value for " + schema.attributes[a].name});
            }
        }
        if (i_tmax >= 0 && i_tmin >= 0 && r.values[i_tmax] < r.values[i_tmin])
            out.push_back({r.farm_id, r.date.to_string(), "tmax_c below tmin_c"});
        if (i_hum >= 0) check_range(out, r, r.values[i_hum], 0.0, 100.0, "humidity_pct");
        if (i_wind >= 0) check_range(out, r, r.values[i_wind], 0.0, 1e9, "wind_km_day");
        if (i_rain >= 0) check_range(out, r, r.values[i_rain], 0.0, 1e9, "rainfall_mm");
        if (i_solar >= 0) check_range(out, r, r.values[i_solar], 0.0, 1e9, "solar_mj_m2");
        if (r.usage < 0 || std::isnan(r.usage))
            out.push_back({r.farm_id, r.date.to_string(), "negative usage"});
    }
    return out;
}

}  // namespace irdm
