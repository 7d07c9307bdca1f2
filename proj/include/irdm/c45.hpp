#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irdm/core.hpp"

namespace irdm {

// A node's test. Numeric: records with value <= threshold go to child 0,
// the rest to child 1. Categorical: child i takes records whose category id
// equals branch_categories[i].
struct SplitTest {
    int attribute = -1;
    std::optional<double> threshold;
    std::vector<int> branch_categories;

    bool is_numeric() const { return threshold.has_value(); }
};

struct TreeNode {
    SplitTest test;  // meaningful iff internal
    std::vector<std::unique_ptr<TreeNode>> children;

    std::vector<int> class_counts;  // per class bin, at every node
    int majority_class = 0;
    int support = 0;
    // majority / support; the quantity Voting-2 maximizes. 0 for the empty
    // leaves a forced root can produce.
    double leaf_accuracy = 0.0;

    bool is_leaf() const { return children.empty(); }
    std::unique_ptr<TreeNode> clone() const;
};

struct C45Params {
    int min_leaf = 10;
    double min_gain_ratio = 0.01;
    int max_depth = 15;
};

struct DecisionTree {
    std::unique_ptr<TreeNode> root;
    C45Params params;
    AttributeSchema schema;
    std::vector<std::vector<std::string>> categories;  // copied from the training dataset

    DecisionTree clone() const;
    int leaf_count() const;
    int node_count() const;
};

// Shannon entropy in bits of a class-count vector. Throws
// std::invalid_argument when the counts are empty or sum to zero.
double entropy(std::span<const int> counts);

// Gain ratio of an explicit test over the records at a node (indices into
// dataset.records). Degenerate partitions and zero-gain tests yield 0.
double gain_ratio(const Dataset& dataset, std::span<const std::size_t> node_records,
                  const SplitTest& test);

struct NumericSplit {
    double threshold = 0.0;
    double gain_ratio = 0.0;
};

// Every admissible candidate threshold for a numeric attribute over the
// node's records: the midpoints between consecutive distinct sorted values,
// keeping only those that leave at least min_leaf records on each side.
// Ascending threshold order.
std::vector<NumericSplit> numeric_split_candidates(const Dataset& dataset,
                                                   std::span<const std::size_t> node_records,
                                                   int attribute, int min_leaf = 1);

// The candidate maximizing gain ratio (ties to the lowest threshold);
// nullopt when no candidate is admissible.
std::optional<NumericSplit> best_numeric_split(const Dataset& dataset,
                                               std::span<const std::size_t> node_records,
                                               int attribute, int min_leaf = 1);

// Gain ratio of the multi-way split over a categorical attribute's observed
// categories; nullopt when inadmissible (fewer than two observed categories
// or some branch below min_leaf).
std::optional<double> categorical_split_gain(const Dataset& dataset,
                                             std::span<const std::size_t> node_records,
                                             int attribute, int min_leaf = 1);

// Recursive gain-ratio induction. A node becomes a leaf when it is pure,
// holds fewer than 2*min_leaf records, no admissible split reaches
// min_gain_ratio, or max_depth is hit. Ties between splits break toward the
// lower attribute index, then the lower threshold. forced_root, when given,
// is installed verbatim as the root test; a forced branch that receives no
// records becomes a leaf carrying the parent's majority class.
DecisionTree build_tree(const Dataset& dataset, const C45Params& params,
                        const SplitTest* forced_root = nullptr);
DecisionTree build_tree(const Dataset& dataset, std::span<const std::size_t> node_records,
                        const C45Params& params, const SplitTest* forced_root = nullptr);

struct Prediction {
    int class_label = 0;
    const TreeNode* leaf = nullptr;
};

// Routes encoded attribute values (numeric value or category id; -1 marks
// an unseen category) to a leaf. An unseen or unmatched category at an
// internal node falls through to the child with the largest support.
Prediction predict(const DecisionTree& tree, std::span<const double> values);
Prediction predict(const DecisionTree& tree, const TrainingRecord& record);

struct RuleCondition {
    int attribute = -1;
    enum class Op { le, gt, eq } op = Op::le;
    double threshold = 0.0;  // le / gt
    int category = -1;       // eq
};

// One rule per leaf: the conjunction of tests on the root-to-leaf path.
struct Rule {
    std::vector<RuleCondition> conditions;
    int majority_class = 0;
    int support = 0;
    double leaf_accuracy = 0.0;
};

std::vector<Rule> extract_rules(const DecisionTree& tree);
std::string rule_to_string(const Rule& rule, const DecisionTree& tree);
bool rule_matches(const Rule& rule, std::span<const double> values);

}  // namespace irdm
