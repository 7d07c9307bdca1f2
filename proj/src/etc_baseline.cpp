#include "irdm/etc_baseline.hpp"

#include <stdexcept>

#include "irdm/csv.hpp"

namespace irdm {

void CropCoefficientTable::set(const std::string& crop_type, double kc) {
    if (!(kc > 0)) throw ConfigError("kc for crop '" + crop_type + "' must be > 0");
    table_[crop_type] = kc;
}

double CropCoefficientTable::kc_for(const std::string& crop_type) const {
    auto it = table_.find(crop_type);
    if (it == table_.end())
        throw ConfigError("no crop coefficient for crop type '" + crop_type + "'");
    return it->second;
}

bool CropCoefficientTable::has(const std::string& crop_type) const {
    return table_.count(crop_type) > 0;
}

void CropCoefficientTable::require_all(const std::vector<FarmProfile>& farms) const {
    for (const auto& f : farms)
        if (!has(f.crop_type))
            throw ConfigError("no crop coefficient for crop type '" + f.crop_type +
                              "' (farm " + f.farm_id + ")");
}

CropCoefficientTable CropCoefficientTable::load_csv(const std::string& path) {
    CsvReader csv(path, {"crop_type", "kc"});
    CropCoefficientTable out;
    std::vector<std::string> cells;
    while (csv.next_row(cells)) {
        const double kc = parse_double_cell(cells[1], path, csv.line(), "kc");
        if (!(kc > 0)) throw RowError(path, csv.line(), "kc must be > 0");
        if (out.has(cells[0]))
            throw SchemaError(path + ": duplicate crop_type '" + cells[0] + "'");
        out.set(cells[0], kc);
    }
    return out;
}

double etc_mm(double kc, double eto) {
    if (!(kc > 0)) throw std::invalid_argument("kc must be > 0");
    if (eto < 0) throw std::invalid_argument("eto must be >= 0");
    return kc * eto;
}

double etc_usage(double kc, double eto) { return etc_mm(kc, eto) * 0.01; }

int etc_predict(double kc, double eto, const AttributeSchema& schema) {
    return discretize_usage(etc_usage(kc, eto), schema);
}

}  // namespace irdm
