#pragma once

#include <map>
#include <string>
#include <vector>

#include "irdm/core.hpp"

namespace irdm {

// Season-constant crop coefficients, one per crop type.
class CropCoefficientTable {
public:
    void set(const std::string& crop_type, double kc);
    // ConfigError when the crop has no entry.
    double kc_for(const std::string& crop_type) const;
    bool has(const std::string& crop_type) const;
    // ConfigError naming the first crop without a coefficient.
    void require_all(const std::vector<FarmProfile>& farms) const;
    std::size_t size() const { return table_.size(); }

    // kc.csv: crop_type,kc
    static CropCoefficientTable load_csv(const std::string& path);

private:
    std::map<std::string, double> table_;
};

// Crop evapotranspiration in mm/day: the crop coefficient scaled reference
// evapotranspiration.
double etc_mm(double kc, double eto);

// The same quantity as per-hectare daily usage; 1 mm of depth over one
// hectare is 0.01 ML.
double etc_usage(double kc, double eto);

// Class prediction of the baseline, head-to-head comparable with the tree
// and forest models.
int etc_predict(double kc, double eto, const AttributeSchema& schema);

}  // namespace irdm
