#pragma once

#include <optional>
#include <span>
#include <vector>

#include "irdm/c45.hpp"

namespace irdm {

// A split whose gain ratio clears the goodness threshold. Numeric
// attributes may contribute several entries with well-separated thresholds;
// categorical attributes at most one.
struct GoodAttribute {
    int attribute = -1;
    std::optional<double> threshold;
    std::vector<int> branch_categories;
    double gain_ratio = 0.0;

    SplitTest to_test() const;
};

struct SysForParams {
    int num_trees = 5;
    double goodness = 0.3;    // keep splits with gain ratio >= goodness * best
    double separation = 0.3;  // min threshold distance as a fraction of the attribute range
    C45Params c45;
};

struct Forest {
    std::vector<DecisionTree> trees;
    SysForParams params;

    bool empty() const { return trees.empty(); }
    std::size_t size() const { return trees.size(); }
};

// Step 1: every (attribute, split point) whose gain ratio is at least
// goodness times the best one, sorted by gain ratio descending (ties by
// attribute index, then threshold). Thresholds of the same numeric
// attribute must differ by at least separation * (observed range), enforced
// greedily from the best entry down. Empty when no split has positive gain.
std::vector<GoodAttribute> select_good_attributes(const Dataset& dataset,
                                                  std::span<const std::size_t> node_records,
                                                  const SysForParams& params);
std::vector<GoodAttribute> select_good_attributes(const Dataset& dataset,
                                                  const SysForParams& params);

// Steps 2-3: one tree per good attribute used as a forced root (best
// first); if fewer than num_trees result, extra trees reuse the first
// tree's root partition and substitute the next unused alternative good
// attribute at level 1 of one partition per extra tree, best alternatives
// first. Stops when num_trees are built or alternatives run out.
Forest build_forest(const Dataset& dataset, const SysForParams& params);

// Voting-2: of the leaves the record reaches across all trees, pick the one
// with the highest leaf accuracy (ties: larger support, then earlier tree)
// and return its majority class.
int voting2_predict(const Forest& forest, std::span<const double> values);
int voting2_predict(const Forest& forest, const TrainingRecord& record);

}  // namespace irdm
