#include "irdm/sysfor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace irdm {

SplitTest GoodAttribute::to_test() const {
    SplitTest t;
    t.attribute = attribute;
    t.threshold = threshold;
    t.branch_categories = branch_categories;
    return t;
}

namespace {

void check_params(const SysForParams& p) {
    if (p.num_trees < 1) throw std::invalid_argument("num_trees must be >= 1");
    if (!(p.goodness > 0.0 && p.goodness <= 1.0))
        throw std::invalid_argument("goodness must lie in (0,1]");
    if (!(p.separation > 0.0 && p.separation <= 1.0))
        throw std::invalid_argument("separation must lie in (0,1]");
}

bool candidate_order(const GoodAttribute& a, const GoodAttribute& b) {
    if (a.gain_ratio != b.gain_ratio) return a.gain_ratio > b.gain_ratio;
    if (a.attribute != b.attribute) return a.attribute < b.attribute;
    const double ta = a.threshold.value_or(0.0);
    const double tb = b.threshold.value_or(0.0);
    return ta < tb;
}

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

double attribute_range(const Dataset& dataset, std::span<const std::size_t> records,
                       int attribute) {
    double lo = dataset.records[records.front()].values[attribute];
    double hi = lo;
    for (std::size_t idx : records) {
        const double v = dataset.records[idx].values[attribute];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

bool same_test(const SplitTest& a, const SplitTest& b) {
    if (a.attribute != b.attribute) return false;
    if (a.is_numeric() != b.is_numeric()) return false;
    return !a.is_numeric() || *a.threshold == *b.threshold;
}

}  // namespace

std::vector<GoodAttribute> select_good_attributes(const Dataset& dataset,
                                                  std::span<const std::size_t> node_records,
                                                  const SysForParams& params) {
    check_params(params);
    if (node_records.empty()) throw std::invalid_argument("no records");

    std::vector<GoodAttribute> candidates;
    for (int a = 0; a < static_cast<int>(dataset.schema.attributes.size()); ++a) {
        if (dataset.schema.attributes[a].kind == AttributeKind::numeric) {
            for (const auto& cand :
                 numeric_split_candidates(dataset, node_records, a, params.c45.min_leaf)) {
                if (cand.gain_ratio <= 0.0) continue;
                GoodAttribute g;
                g.attribute = a;
                g.threshold = cand.threshold;
                g.gain_ratio = cand.gain_ratio;
                candidates.push_back(std::move(g));
            }
        } else {
            auto gr = categorical_split_gain(dataset, node_records, a, params.c45.min_leaf);
            if (gr && *gr > 0.0) {
                GoodAttribute g;
                g.attribute = a;
                g.branch_categories = observed_categories(dataset, node_records, a);
                g.gain_ratio = *gr;
                candidates.push_back(std::move(g));
            }
        }
    }
    if (candidates.empty()) return {};

    std::sort(candidates.begin(), candidates.end(), candidate_order);
    const double best = candidates.front().gain_ratio;
    const double floor = params.goodness * best;

    std::vector<GoodAttribute> accepted;
    std::vector<double> ranges(dataset.schema.attributes.size(), -1.0);
    for (auto& cand : candidates) {
        if (cand.gain_ratio < floor) break;  // sorted descending
        if (cand.threshold) {
            if (ranges[cand.attribute] < 0.0)
                ranges[cand.attribute] = attribute_range(dataset, node_records, cand.attribute);
            const double min_dist = params.separation * ranges[cand.attribute];
            bool crowded = false;
            for (const auto& a : accepted) {
                if (a.attribute == cand.attribute &&
                    std::abs(*a.threshold - *cand.threshold) < min_dist) {
                    crowded = true;
                    break;
                }
            }
            if (crowded) continue;
        }
        accepted.push_back(std::move(cand));
    }
    return accepted;
}

std::vector<GoodAttribute> select_good_attributes(const Dataset& dataset,
                                                  const SysForParams& params) {
    std::vector<std::size_t> all(dataset.records.size());
    std::iota(all.begin(), all.end(), 0);
    return select_good_attributes(dataset, all, params);
}

Forest build_forest(const Dataset& dataset, const SysForParams& params) {
    check_params(params);
    if (dataset.records.empty()) throw std::invalid_argument("cannot build a forest from no records");

    Forest forest;
    forest.params = params;

    std::vector<std::size_t> all(dataset.records.size());
    std::iota(all.begin(), all.end(), 0);

    const auto good = select_good_attributes(dataset, all, params);
    if (good.empty()) {
        // No split has positive gain: a single majority leaf.
        C45Params leaf_only = params.c45;
        leaf_only.max_depth = 0;
        forest.trees.push_back(build_tree(dataset, all, leaf_only));
        return forest;
    }

    // Step 2: one tree per good attribute, best first.
    const int step2 = std::min<int>(params.num_trees, static_cast<int>(good.size()));
    for (int i = 0; i < step2; ++i) {
        const SplitTest test = good[i].to_test();
        forest.trees.push_back(build_tree(dataset, all, params.c45, &test));
    }
    if (static_cast<int>(forest.trees.size()) >= params.num_trees) return forest;

    // Step 3: partition by the first tree's root and substitute alternative
    // good attributes at level 1, one partition substitution per extra tree.
    // Work from a stable copy: growing forest.trees moves its elements.
    const DecisionTree first = forest.trees.front().clone();
    const TreeNode& root = *first.root;
    if (root.is_leaf()) return forest;

    const SplitTest& root_test = root.test;
    std::vector<std::vector<std::size_t>> parts(root.children.size());
    for (std::size_t idx : all) {
        const double v = dataset.records[idx].values[root_test.attribute];
        if (root_test.is_numeric()) {
            parts[v <= *root_test.threshold ? 0 : 1].push_back(idx);
        } else {
            const int id = static_cast<int>(v);
            auto it = std::find(root_test.branch_categories.begin(),
                                root_test.branch_categories.end(), id);
            parts[it - root_test.branch_categories.begin()].push_back(idx);
        }
    }

    struct Alternative {
        std::size_t part;
        GoodAttribute good;
    };
    std::vector<Alternative> pool;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        if (parts[p].empty()) continue;
        const TreeNode& level1 = *root.children[p];
        for (auto& g : select_good_attributes(dataset, parts[p], params)) {
            if (!level1.is_leaf() && same_test(level1.test, g.to_test()))
                continue;  // already used by the first tree
            pool.push_back({p, std::move(g)});
        }
    }
    std::stable_sort(pool.begin(), pool.end(), [](const Alternative& a, const Alternative& b) {
        return candidate_order(a.good, b.good);
    });

    C45Params subtree_params = params.c45;
    subtree_params.max_depth = std::max(0, params.c45.max_depth - 1);
    for (const auto& alt : pool) {
        if (static_cast<int>(forest.trees.size()) >= params.num_trees) break;
        DecisionTree variant = first.clone();
        const SplitTest test = alt.good.to_test();
        DecisionTree subtree = build_tree(dataset, parts[alt.part], subtree_params, &test);
        variant.root->children[alt.part] = std::move(subtree.root);
        forest.trees.push_back(std::move(variant));
    }
    return forest;
}

int voting2_predict(const Forest& forest, std::span<const double> values) {
    if (forest.empty()) throw std::invalid_argument("empty forest");
    const TreeNode* best = nullptr;
    for (const auto& tree : forest.trees) {
        const TreeNode* leaf = predict(tree, values).leaf;
        if (!best || leaf->leaf_accuracy > best->leaf_accuracy ||
            (leaf->leaf_accuracy == best->leaf_accuracy && leaf->support > best->support))
            best = leaf;
    }
    return best->majority_class;
}

int voting2_predict(const Forest& forest, const TrainingRecord& record) {
    return voting2_predict(forest, record.values);
}

}  // namespace irdm
