#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irdm/date.hpp"
#include "irdm/errors.hpp"

namespace irdm {

enum class AttributeKind { numeric, categorical };

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
};

// One discretization interval of the class attribute (daily usage in
// ML/ha/day). Bins are half-open [lo, hi); the final bin also absorbs
// anything above it, the first anything below (clamping).
struct UsageBin {
    double lo = 0.0;
    double hi = 0.0;
    std::string label;
};

struct AttributeSchema {
    std::vector<Attribute> attributes;
    std::vector<UsageBin> class_bins;

    int attribute_index(const std::string& name) const;  // -1 if absent
    void validate() const;                                // throws ConfigError
};

// Equal-width usage bins of 0.05 ML/ha/day starting at 0.005, labelled at
// the conventional printed resolution: "0.01-0.05", "0.06-0.10", ...
std::vector<UsageBin> make_usage_bins(int count);

// The eight non-class attributes every dataset in this toolkit carries:
// six daily weather numerics plus soil and crop type.
AttributeSchema standard_schema(int bin_count = 4);

struct WeatherDay {
    Date date;
    double tmax = 0.0;      // degC
    double tmin = 0.0;      // degC
    double humidity = 0.0;  // percent, [0, 100]
    double wind = 0.0;      // km/day
    double rainfall = 0.0;  // mm
    double solar = 0.0;     // MJ/m2
    double eto = 0.0;       // reference evapotranspiration, mm/day
    std::string station;    // optional station id; empty = the single default series
};

struct FarmProfile {
    std::string farm_id;
    std::string node_id;  // channel outlet grouping several farms
    double area = 0.0;    // hectares
    std::string soil_type;
    std::string crop_type;
    std::string station;  // optional weather-station assignment
};

struct DeliveryEvent {
    std::string farm_id;
    Date date;
    double volume = 0.0;  // megalitres
};

// The span served by one delivery: n days starting at start_date, with the
// delivered volume wt and one reference-ET value per day.
struct DeliveryInterval {
    std::string farm_id;
    Date start_date;
    int n = 0;
    double wt = 0.0;
    std::vector<double> eto_by_day;
};

struct TrainingRecord {
    // One value per schema attribute: the numeric value, or the category id
    // assigned by the owning Dataset for categorical attributes.
    std::vector<double> values;
    int class_label = 0;
    // Provenance plus the two per-day quantities that do not act as
    // attributes: actual usage (the undiscretized class) and reference ET
    // (consumed by the evapotranspiration baseline).
    std::string farm_id;
    Date date;
    double usage = 0.0;  // ML/ha/day
    double eto = 0.0;    // mm/day
};

struct Dataset {
    AttributeSchema schema;
    // categories[a] lists the observed values of categorical attribute a in
    // order of first appearance; record values index into it. Empty for
    // numeric attributes.
    std::vector<std::vector<std::string>> categories;
    std::vector<TrainingRecord> records;

    int intern_category(int attribute, const std::string& value);        // id, appending if new
    int category_id(int attribute, const std::string& value) const;      // -1 if unseen
    const std::string& category_name(int attribute, int id) const;
    std::size_t size() const { return records.size(); }
};

// Bin index for a usage value. Values below the first bin clamp to 0,
// values at or above the last bin's top clamp to the last bin. NaN is
// rejected with std::invalid_argument.
int discretize_usage(double usage, const AttributeSchema& schema);

double bin_midpoint(const UsageBin& bin);

struct Violation {
    std::string farm_id;
    std::string date;
    std::string message;
};

// Checks every record against the schema (value kinds, label range) and,
// for the standard weather columns when present by name, the physical
// ranges (tmax >= tmin, humidity in [0,100], non-negative wind/rain/solar).
// Violations are returned as data, never thrown.
std::vector<Violation> validate_dataset(const Dataset& dataset);

}  // namespace irdm
