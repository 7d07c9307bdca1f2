#pragma once

#include <string>
#include <vector>

#include "irdm/core.hpp"
#include "irdm/ingest.hpp"

namespace irdm {

enum class DisaggregationMethod { EWD, REP };

DisaggregationMethod parse_method(const std::string& name);  // "ewd" | "rep"
std::string method_name(DisaggregationMethod m);

// Splits the delivered volume evenly over the interval's days:
// each day gets wt / n.
std::vector<double> ewd_distribute(const DeliveryInterval& interval);

// Splits the delivered volume in proportion to each day's reference
// evapotranspiration: day i gets wt * eto_i / sum(eto). When every eto is
// zero the split falls back to the even one so volume is still conserved.
std::vector<double> rep_distribute(const DeliveryInterval& interval);

std::vector<double> distribute(const DeliveryInterval& interval, DisaggregationMethod method);

// One training record per (farm, day) inside an interval. The class label
// is the discretized per-hectare daily usage. Records are ordered by
// (farm_id, date).
Dataset build_dataset(const JoinedTable& joined, const std::vector<DeliveryInterval>& intervals,
                      DisaggregationMethod method, const AttributeSchema& schema);

// dataset.csv dump:
// farm_id,date,tmax_c,tmin_c,humidity_pct,wind_km_day,rainfall_mm,solar_mj_m2,soil_type,crop_type,usage_ml_ha_day,class_bin
void write_dataset_csv(const Dataset& dataset, const std::string& path);

// Loads a dump written by write_dataset_csv. Bins are reconstructed from
// the class_bin labels (standard 0.05-wide bins); pass bin_count to force
// more bins than the labels show. eto is not part of the dump and is left
// zero; rejoin it from a weather file when a consumer needs it.
Dataset read_dataset_csv(const std::string& path, int bin_count = 0);

}  // namespace irdm
