#include "irdm/c45.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace irdm {

namespace {

std::vector<int> count_classes(const Dataset& dataset, std::span<const std::size_t> records) {
    std::vector<int> counts(dataset.schema.class_bins.size(), 0);
    for (std::size_t idx : records) ++counts[dataset.records[idx].class_label];
    return counts;
}

int majority_of(const std::vector<int>& counts) {
    int best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[best]) best = static_cast<int>(c);
    return best;
}

// Gain ratio from a parent count vector and per-child count vectors.
// Children with zero records contribute nothing to either term.
double gain_ratio_from_counts(const std::vector<int>& parent,
                              const std::vector<std::vector<int>>& children) {
    const double n = std::accumulate(parent.begin(), parent.end(), 0);
    int non_empty = 0;
    double weighted = 0.0;
    double split_info = 0.0;
    for (const auto& child : children) {
        const int size = std::accumulate(child.begin(), child.end(), 0);
        if (size == 0) continue;
        ++non_empty;
        const double frac = size / n;
        weighted += frac * entropy(child);
        split_info -= frac * std::log2(frac);
    }
    if (non_empty < 2) return 0.0;
    const double gain = entropy(parent) - weighted;
    if (gain <= 0.0 || split_info <= 0.0) return 0.0;
    return gain / split_info;
}

struct CandidateSplit {
    SplitTest test;
    double gain_ratio = 0.0;
};

// Observed category ids at the node, ascending.
std::vector<int> observed_categories(const Dataset& dataset,
                                     std::span<const std::size_t> records, int attribute) {
    std::vector<int> cats;
    for (std::size_t idx : records) {
        const int id = static_cast<int>(dataset.records[idx].values[attribute]);
        if (std::find(cats.begin(), cats.end(), id) == cats.end()) cats.push_back(id);
    }
    std::sort(cats.begin(), cats.end());
    return cats;
}

}  // namespace

double entropy(std::span<const int> counts) {
    if (counts.empty()) throw std::invalid_argument("entropy of empty counts");
    long total = 0;
    for (int c : counts) {
        if (c < 0) throw std::invalid_argument("negative class count");
        total += c;
    }
    if (total == 0) throw std::invalid_argument("entropy of zero total");
    double h = 0.0;
    for (int c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

double gain_ratio(const Dataset& dataset, std::span<const std::size_t> node_records,
                  const SplitTest& test) {
    if (node_records.empty()) throw std::invalid_argument("gain_ratio over no records");
    const std::size_t n_classes = dataset.schema.class_bins.size();
    std::vector<int> parent(n_classes, 0);
    std::vector<std::vector<int>> children;

    if (test.is_numeric()) {
        children.assign(2, std::vector<int>(n_classes, 0));
        for (std::size_t idx : node_records) {
            const auto& r = dataset.records[idx];
            ++parent[r.class_label];
            ++children[r.values[test.attribute] <= *test.threshold ? 0 : 1][r.class_label];
        }
    } else {
        children.assign(test.branch_categories.size(), std::vector<int>(n_classes, 0));
        for (std::size_t idx : node_records) {
            const auto& r = dataset.records[idx];
            ++parent[r.class_label];
            const int id = static_cast<int>(r.values[test.attribute]);
            auto it = std::find(test.branch_categories.begin(), test.branch_categories.end(), id);
            if (it == test.branch_categories.end())
                throw std::invalid_argument("record category not covered by test branches");
            ++children[it - test.branch_categories.begin()][r.class_label];
        }
    }
    return gain_ratio_from_counts(parent, children);
}

std::vector<NumericSplit> numeric_split_candidates(const Dataset& dataset,
                                                   std::span<const std::size_t> node_records,
                                                   int attribute, int min_leaf) {
    std::vector<NumericSplit> out;
    const std::size_t n = node_records.size();
    if (n < 2) return out;
    const std::size_t n_classes = dataset.schema.class_bins.size();

    std::vector<std::pair<double, int>> ordered;  // (value, class)
    ordered.reserve(n);
    std::vector<int> parent(n_classes, 0);
    for (std::size_t idx : node_records) {
        const auto& r = dataset.records[idx];
        ordered.emplace_back(r.values[attribute], r.class_label);
        ++parent[r.class_label];
    }
    std::sort(ordered.begin(), ordered.end());

    std::vector<std::vector<int>> sides(2, std::vector<int>(n_classes, 0));
    auto& left = sides[0];
    auto& right = sides[1];
    right = parent;

    for (std::size_t i = 1; i < n; ++i) {
        ++left[ordered[i - 1].second];
        --right[ordered[i - 1].second];
        const double lo = ordered[i - 1].first;
        const double hi = ordered[i].first;
        if (lo == hi) continue;
        const double t = lo + (hi - lo) / 2;
        if (!(t > lo) || !(t < hi)) continue;  // threshold must lie strictly between values
        if (static_cast<int>(i) < min_leaf || static_cast<int>(n - i) < min_leaf) continue;
        out.push_back({t, gain_ratio_from_counts(parent, sides)});
    }
    return out;
}

std::optional<NumericSplit> best_numeric_split(const Dataset& dataset,
                                               std::span<const std::size_t> node_records,
                                               int attribute, int min_leaf) {
    std::optional<NumericSplit> best;
    for (const auto& cand : numeric_split_candidates(dataset, node_records, attribute, min_leaf))
        if (!best || cand.gain_ratio > best->gain_ratio) best = cand;
    return best;
}

std::optional<double> categorical_split_gain(const Dataset& dataset,
                                             std::span<const std::size_t> node_records,
                                             int attribute, int min_leaf) {
    const std::size_t n_classes = dataset.schema.class_bins.size();
    std::vector<int> parent(n_classes, 0);
    std::vector<int> cats;
    std::vector<std::vector<int>> children;
    for (std::size_t idx : node_records) {
        const auto& r = dataset.records[idx];
        ++parent[r.class_label];
        const int id = static_cast<int>(r.values[attribute]);
        auto it = std::find(cats.begin(), cats.end(), id);
        if (it == cats.end()) {
            cats.push_back(id);
            children.emplace_back(n_classes, 0);
            ++children.back()[r.class_label];
        } else {
            ++children[it - cats.begin()][r.class_label];
        }
    }
    if (cats.size() < 2) return std::nullopt;
    for (const auto& child : children)
        if (std::accumulate(child.begin(), child.end(), 0) < min_leaf) return std::nullopt;
    return gain_ratio_from_counts(parent, children);
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(const Dataset& dataset, const C45Params& params)
        : data_(dataset), params_(params), used_categorical_(dataset.schema.attributes.size(), false) {}

    std::unique_ptr<TreeNode> build(std::vector<std::size_t> records, int depth,
                                    const SplitTest* forced) {
        auto node = std::make_unique<TreeNode>();
        node->class_counts = count_classes(data_, records);
        node->support = static_cast<int>(records.size());
        node->majority_class = majority_of(node->class_counts);
        node->leaf_accuracy =
            node->support > 0
                ? static_cast<double>(node->class_counts[node->majority_class]) / node->support
                : 0.0;

        if (forced) {
            split_node(*node, *forced, std::move(records), depth);
            return node;
        }
        if (is_pure(*node) || node->support < 2 * params_.min_leaf || depth >= params_.max_depth)
            return node;
        auto best = find_best_split(records);
        if (!best || best->gain_ratio < params_.min_gain_ratio) return node;
        split_node(*node, best->test, std::move(records), depth);
        return node;
    }

private:
    bool is_pure(const TreeNode& node) const {
        return node.support == 0 || node.class_counts[node.majority_class] == node.support;
    }

    std::optional<CandidateSplit> find_best_split(std::span<const std::size_t> records) {
        std::optional<CandidateSplit> best;
        for (int a = 0; a < static_cast<int>(data_.schema.attributes.size()); ++a) {
            if (data_.schema.attributes[a].kind == AttributeKind::numeric) {
                auto split = best_numeric_split(data_, records, a, params_.min_leaf);
                if (split && (!best || split->gain_ratio > best->gain_ratio)) {
                    SplitTest test;
                    test.attribute = a;
                    test.threshold = split->threshold;
                    best = CandidateSplit{std::move(test), split->gain_ratio};
                }
            } else {
                if (used_categorical_[a]) continue;  // at most once per path
                auto gr = categorical_split_gain(data_, records, a, params_.min_leaf);
                if (gr && (!best || *gr > best->gain_ratio)) {
                    SplitTest test;
                    test.attribute = a;
                    test.branch_categories = observed_categories(data_, records, a);
                    best = CandidateSplit{std::move(test), *gr};
                }
            }
        }
        return best;
    }

    void split_node(TreeNode& node, const SplitTest& test, std::vector<std::size_t> records,
                    int depth) {
        node.test = test;
        std::vector<std::vector<std::size_t>> parts;
        if (test.is_numeric()) {
            parts.resize(2);
            for (std::size_t idx : records)
                parts[data_.records[idx].values[test.attribute] <= *test.threshold ? 0 : 1]
                    .push_back(idx);
        } else {
            parts.resize(test.branch_categories.size());
            for (std::size_t idx : records) {
                const int id = static_cast<int>(data_.records[idx].values[test.attribute]);
                auto it = std::find(test.branch_categories.begin(), test.branch_categories.end(),
                                    id);
                if (it == test.branch_categories.end())
                    throw std::invalid_argument("forced test does not cover category id " +
                                                std::to_string(id));
                parts[it - test.branch_categories.begin()].push_back(idx);
            }
        }
        records.clear();

        const bool categorical = !test.is_numeric();
        if (categorical) used_categorical_[test.attribute] = true;
        for (auto& part : parts) {
            if (part.empty()) {
                // A forced branch with no records: leaf with the parent's majority.
                auto leaf = std::make_unique<TreeNode>();
                leaf->class_counts.assign(data_.schema.class_bins.size(), 0);
                leaf->majority_class = node.majority_class;
                leaf->support = 0;
                leaf->leaf_accuracy = 0.0;
                node.children.push_back(std::move(leaf));
            } else {
                node.children.push_back(build(std::move(part), depth + 1, nullptr));
            }
        }
        if (categorical) used_categorical_[test.attribute] = false;
    }

    const Dataset& data_;
    const C45Params& params_;
    std::vector<char> used_categorical_;
};

}  // namespace

DecisionTree build_tree(const Dataset& dataset, std::span<const std::size_t> node_records,
                        const C45Params& params, const SplitTest* forced_root) {
    if (node_records.empty()) throw std::invalid_argument("cannot build a tree from no records");
    DecisionTree tree;
    tree.params = params;
    tree.schema = dataset.schema;
    tree.categories = dataset.categories;
    TreeBuilder builder(dataset, params);
    tree.root = builder.build(std::vector<std::size_t>(node_records.begin(), node_records.end()),
                              0, forced_root);
    return tree;
}

DecisionTree build_tree(const Dataset& dataset, const C45Params& params,
                        const SplitTest* forced_root) {
    std::vector<std::size_t> all(dataset.records.size());
    std::iota(all.begin(), all.end(), 0);
    return build_tree(dataset, all, params, forced_root);
}

Prediction predict(const DecisionTree& tree, std::span<const double> values) {
    const TreeNode* node = tree.root.get();
    while (!node->is_leaf()) {
        const SplitTest& test = node->test;
        const TreeNode* next = nullptr;
        if (test.is_numeric()) {
            next = node->children[values[test.attribute] <= *test.threshold ? 0 : 1].get();
        } else {
            const int id = static_cast<int>(values[test.attribute]);
            for (std::size_t b = 0; b < test.branch_categories.size(); ++b) {
                if (test.branch_categories[b] == id) {
                    next = node->children[b].get();
                    break;
                }
            }
            if (!next) {
                // Unseen category: follow the most-populated child.
                next = node->children[0].get();
                for (const auto& child : node->children)
                    if (child->support > next->support) next = child.get();
            }
        }
        node = next;
    }
    return {node->majority_class, node};
}

Prediction predict(const DecisionTree& tree, const TrainingRecord& record) {
    return predict(tree, record.values);
}

std::unique_ptr<TreeNode> TreeNode::clone() const {
    auto copy = std::make_unique<TreeNode>();
    copy->test = test;
    copy->class_counts = class_counts;
    copy->majority_class = majority_class;
    copy->support = support;
    copy->leaf_accuracy = leaf_accuracy;
    copy->children.reserve(children.size());
    for (const auto& child : children) copy->children.push_back(child->clone());
    return copy;
}

DecisionTree DecisionTree::clone() const {
    DecisionTree copy;
    copy.root = root ? root->clone() : nullptr;
    copy.params = params;
    copy.schema = schema;
    copy.categories = categories;
    return copy;
}

namespace {

int count_nodes(const TreeNode& node, bool leaves_only) {
    if (node.is_leaf()) return 1;
    int total = leaves_only ? 0 : 1;
    for (const auto& child : node.children) total += count_nodes(*child, leaves_only);
    return total;
}

void collect_rules(const TreeNode& node, std::vector<RuleCondition>& path,
                   std::vector<Rule>& out) {
    if (node.is_leaf()) {
        out.push_back({path, node.majority_class, node.support, node.leaf_accuracy});
        return;
    }
    for (std::size_t b = 0; b < node.children.size(); ++b) {
        RuleCondition cond;
        cond.attribute = node.test.attribute;
        if (node.test.is_numeric()) {
            cond.op = b == 0 ? RuleCondition::Op::le : RuleCondition::Op::gt;
            cond.threshold = *node.test.threshold;
        } else {
            cond.op = RuleCondition::Op::eq;
            cond.category = node.test.branch_categories[b];
        }
        path.push_back(cond);
        collect_rules(*node.children[b], path, out);
        path.pop_back();
    }
}

}  // namespace

int DecisionTree::leaf_count() const { return root ? count_nodes(*root, true) : 0; }
int DecisionTree::node_count() const { return root ? count_nodes(*root, false) : 0; }

std::vector<Rule> extract_rules(const DecisionTree& tree) {
    std::vector<Rule> out;
    if (!tree.root) return out;
    std::vector<RuleCondition> path;
    collect_rules(*tree.root, path, out);
    return out;
}

bool rule_matches(const Rule& rule, std::span<const double> values) {
    for (const auto& cond : rule.conditions) {
        const double v = values[cond.attribute];
        switch (cond.op) {
            case RuleCondition::Op::le:
                if (!(v <= cond.threshold)) return false;
                break;
            case RuleCondition::Op::gt:
                if (!(v > cond.threshold)) return false;
                break;
            case RuleCondition::Op::eq:
                if (static_cast<int>(v) != cond.category) return false;
                break;
        }
    }
    return true;
}

std::string rule_to_string(const Rule& rule, const DecisionTree& tree) {
    std::string out;
    if (rule.conditions.empty()) out = "true";
    for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
        const auto& cond = rule.conditions[i];
        if (i > 0) out += " and ";
        const auto& name = tree.schema.attributes[cond.attribute].name;
        switch (cond.op) {
            case RuleCondition::Op::le:
                out += name + " <= " + std::to_string(cond.threshold);
                break;
            case RuleCondition::Op::gt:
                out += name + " > " + std::to_string(cond.threshold);
                break;
            case RuleCondition::Op::eq:
                out += name + " = " + tree.categories[cond.attribute][cond.category];
                break;
        }
    }
    out += " => " + tree.schema.class_bins[rule.majority_class].label;
    return out;
}

}  // namespace irdm
