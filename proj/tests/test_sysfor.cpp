#include <doctest.h>

#include <numeric>
#include <sstream>

#include "irdm/model_io.hpp"
#include "irdm/rng.hpp"
#include "irdm/sysfor.hpp"
#include "test_helpers.hpp"

using namespace irdm;
using irdm::testing::make_dataset;

namespace {

SysForParams loose_params(int num_trees) {
    SysForParams p;
    p.num_trees = num_trees;
    p.goodness = 0.3;
    p.separation = 0.3;
    p.c45 = {1, 0.0, 16};
    return p;
}

// Single-leaf tree with prescribed class counts, for voting fixtures.
DecisionTree leaf_tree(const std::vector<int>& counts) {
    DecisionTree t;
    t.schema.class_bins = make_usage_bins(static_cast<int>(counts.size()));
    t.schema.attributes = {{"a0", AttributeKind::numeric}};
    t.categories.resize(1);
    t.root = std::make_unique<TreeNode>();
    t.root->class_counts = counts;
    t.root->support = std::accumulate(counts.begin(), counts.end(), 0);
    t.root->majority_class = static_cast<int>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    t.root->leaf_accuracy =
        static_cast<double>(counts[t.root->majority_class]) / t.root->support;
    return t;
}

}  // namespace

TEST_CASE("good attribute selection") {
    SUBCASE("one informative attribute, one constant") {
        const Dataset ds = make_dataset({AttributeKind::numeric, AttributeKind::numeric},
                                        {{0, 5}, {0, 5}, {1, 5}, {1, 5}}, {0, 0, 1, 1});
        const auto good = select_good_attributes(ds, loose_params(5));
        REQUIRE(good.size() == 1);
        CHECK(good[0].attribute == 0);
        CHECK(good[0].threshold == 0.5);
        CHECK(good[0].gain_ratio == doctest::Approx(1.0));
    }
    SUBCASE("two attributes tied at the top keep attribute order") {
        const Dataset ds = make_dataset({AttributeKind::numeric, AttributeKind::numeric},
                                        {{0, 10}, {0, 10}, {1, 20}, {1, 20}}, {0, 0, 1, 1});
        const auto good = select_good_attributes(ds, loose_params(5));
        REQUIRE(good.size() == 2);
        CHECK(good[0].attribute == 0);
        CHECK(good[1].attribute == 1);
        CHECK(good[0].gain_ratio == good[1].gain_ratio);
    }
    SUBCASE("no positive gain yields an empty list") {
        const Dataset ds = make_dataset({AttributeKind::numeric}, {{0}, {1}, {0}, {1}},
                                        {0, 0, 1, 1});
        // attribute is independent of the class
        CHECK(select_good_attributes(ds, loose_params(5)).empty());
    }
    SUBCASE("separation suppresses crowded thresholds of one attribute") {
        // class flips along a staircase; many candidate thresholds
        const Dataset ds = make_dataset({AttributeKind::numeric},
                                        {{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}},
                                        {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
        SysForParams wide = loose_params(9);
        wide.goodness = 0.05;
        wide.separation = 0.5;  // at most ~2 thresholds can coexist over range 9
        const auto good = select_good_attributes(ds, wide);
        for (std::size_t i = 0; i < good.size(); ++i)
            for (std::size_t j = i + 1; j < good.size(); ++j)
                CHECK(std::abs(*good[i].threshold - *good[j].threshold) >= 0.5 * 9.0);
    }
    SUBCASE("matches a brute-force oracle on random fixtures") {
        Rng rng(86);
        for (int trial = 0; trial < 60; ++trial) {
            const int n = 4 + static_cast<int>(rng.below(7));
            std::vector<std::vector<double>> rows;
            std::vector<int> labels;
            for (int i = 0; i < n; ++i) {
                rows.push_back({static_cast<double>(rng.below(5)), rng.uniform(0, 3)});
                labels.push_back(static_cast<int>(rng.below(2)));
            }
            const Dataset ds =
                make_dataset({AttributeKind::numeric, AttributeKind::numeric}, rows, labels, 2);
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            SysForParams p = loose_params(5);
            const auto got = select_good_attributes(ds, idx, p);

            // oracle: filter + greedy separation over the full candidate list
            auto cands = testing::oracle_all_candidates(ds, idx, 1);
            std::erase_if(cands, [](const auto& c) { return c.gain_ratio <= 0.0; });
            std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
                if (a.gain_ratio != b.gain_ratio) return a.gain_ratio > b.gain_ratio;
                if (a.attribute != b.attribute) return a.attribute < b.attribute;
                return a.threshold < b.threshold;
            });
            std::vector<testing::OracleCandidate> want;
            if (!cands.empty()) {
                const double floor = p.goodness * cands.front().gain_ratio;
                std::vector<double> lo(2, 1e300), hi(2, -1e300);
                for (std::size_t idx2 = 0; idx2 < idx.size(); ++idx2)
                    for (int a = 0; a < 2; ++a) {
                        lo[a] = std::min(lo[a], ds.records[idx2].values[a]);
                        hi[a] = std::max(hi[a], ds.records[idx2].values[a]);
                    }
                for (const auto& c : cands) {
                    if (c.gain_ratio < floor) continue;
                    bool crowded = false;
                    for (const auto& w : want)
                        if (w.attribute == c.attribute &&
                            std::abs(w.threshold - c.threshold) <
                                p.separation * (hi[c.attribute] - lo[c.attribute]))
                            crowded = true;
                    if (!crowded) want.push_back(c);
                }
            }
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].attribute == want[i].attribute);
                CHECK(*got[i].threshold == want[i].threshold);
                CHECK(got[i].gain_ratio == want[i].gain_ratio);
            }
        }
    }
}

TEST_CASE("forest construction") {
    SUBCASE("one tree reduces to forced-root induction") {
        const Dataset ds = make_dataset({AttributeKind::numeric, AttributeKind::numeric},
                                        {{0, 3}, {0, 4}, {1, 5}, {1, 6}}, {0, 0, 1, 1});
        const Forest forest = build_forest(ds, loose_params(1));
        REQUIRE(forest.size() == 1);

        const auto good = select_good_attributes(ds, loose_params(1));
        const SplitTest test = good.front().to_test();
        const DecisionTree direct = build_tree(ds, loose_params(1).c45, &test);
        std::ostringstream a, b;
        write_tree(a, forest.trees[0]);
        write_tree(b, direct);
        CHECK(a.str() == b.str());
    }
    SUBCASE("three good attributes give three distinct roots") {
        const Dataset ds = make_dataset(
            {AttributeKind::numeric, AttributeKind::numeric, AttributeKind::numeric},
            {{1, 2, 3}, {1, 2, 3}, {5, 8, 9}, {5, 8, 9}}, {0, 0, 1, 1});
        const Forest forest = build_forest(ds, loose_params(3));
        REQUIRE(forest.size() == 3);
        std::set<int> roots;
        for (const auto& tree : forest.trees) {
            REQUIRE(!tree.root->is_leaf());
            roots.insert(tree.root->test.attribute);
        }
        CHECK(roots == std::set<int>{0, 1, 2});
    }
    SUBCASE("one good attribute spawns level-1 variants under the same root") {
        // attr0 splits well but imperfectly; attr1/attr2 carry no global
        // signal yet resolve each half perfectly
        const Dataset ds = make_dataset(
            {AttributeKind::numeric, AttributeKind::numeric, AttributeKind::numeric},
            {
                {0, 1, 10},   // A
                {0, 2, 20},   // A
                {0, 3, 30},   // A
                {0, 9, 90},   // B
                {1, 1, 10},   // B
                {1, 2, 20},   // B
                {1, 3, 30},   // B
                {1, 9, 90},   // A
            },
            {0, 0, 0, 1, 1, 1, 1, 0});
        const auto good = select_good_attributes(ds, loose_params(5));
        REQUIRE(good.size() == 1);
        CHECK(good[0].attribute == 0);

        const Forest forest = build_forest(ds, loose_params(5));
        CHECK(forest.size() == 5);  // enough level-1 alternatives to fill the request
        const auto& first = *forest.trees[0].root;
        for (std::size_t t = 1; t < forest.size(); ++t) {
            const auto& variant = *forest.trees[t].root;
            REQUIRE(!variant.is_leaf());
            CHECK(variant.test.attribute == first.test.attribute);
            CHECK(*variant.test.threshold == *first.test.threshold);
            // exactly one level-1 subtree was substituted with a different test
            int changed = 0;
            for (std::size_t b = 0; b < variant.children.size(); ++b) {
                const auto& vc = *variant.children[b];
                const auto& fc = *first.children[b];
                const bool same = vc.is_leaf() == fc.is_leaf() &&
                                  (vc.is_leaf() ||
                                   (vc.test.attribute == fc.test.attribute &&
                                    vc.test.threshold == fc.test.threshold));
                if (!same) ++changed;
            }
            CHECK(changed == 1);
        }
        // resubstitution stays perfect for every member
        for (const auto& tree : forest.trees)
            for (const auto& r : ds.records)
                CHECK(predict(tree, r).class_label == r.class_label);
    }
    SUBCASE("no positive gain leaves a single majority leaf") {
        const Dataset ds = make_dataset({AttributeKind::numeric}, {{0}, {1}, {0}, {1}},
                                        {0, 0, 1, 1});
        const Forest forest = build_forest(ds, loose_params(4));
        REQUIRE(forest.size() == 1);
        CHECK(forest.trees[0].root->is_leaf());
    }
    SUBCASE("tree count never exceeds the request") {
        Rng rng(64);
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < 60; ++i) {
            rows.push_back({rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0, 4)});
            labels.push_back(rows.back()[0] + rows.back()[1] > 4 ? 1 : 0);
        }
        const Dataset ds = make_dataset(
            {AttributeKind::numeric, AttributeKind::numeric, AttributeKind::numeric}, rows,
            labels);
        for (int want : {1, 2, 5, 9}) {
            SysForParams p = loose_params(want);
            p.c45.min_leaf = 4;
            const Forest forest = build_forest(ds, p);
            CHECK(forest.size() >= 1);
            CHECK(forest.size() <= static_cast<std::size_t>(want));
        }
    }
    SUBCASE("identical inputs build identical forests") {
        Rng rng(12);
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < 50; ++i) {
            rows.push_back({rng.uniform(0, 4), rng.uniform(0, 4)});
            labels.push_back(static_cast<int>(rng.below(2)));
        }
        const Dataset ds =
            make_dataset({AttributeKind::numeric, AttributeKind::numeric}, rows, labels);
        SysForParams p = loose_params(4);
        p.c45.min_leaf = 3;
        std::ostringstream a, b;
        write_forest(a, build_forest(ds, p));
        write_forest(b, build_forest(ds, p));
        CHECK(a.str() == b.str());
    }
}

TEST_CASE("voting picks the most accurate leaf") {
    SUBCASE("a singleton forest behaves like its tree") {
        Rng rng(55);
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < 40; ++i) {
            rows.push_back({rng.uniform(0, 4), rng.uniform(0, 4)});
            labels.push_back(static_cast<int>(rng.below(2)));
        }
        const Dataset ds =
            make_dataset({AttributeKind::numeric, AttributeKind::numeric}, rows, labels);
        Forest forest = build_forest(ds, loose_params(1));
        REQUIRE(forest.size() == 1);
        for (const auto& r : ds.records)
            CHECK(voting2_predict(forest, r) == predict(forest.trees[0], r).class_label);
    }
    SUBCASE("higher leaf accuracy wins") {
        Forest forest;
        forest.trees.push_back(leaf_tree({1, 9}));  // class 1, accuracy 0.9
        forest.trees.push_back(leaf_tree({7, 3}));  // class 0, accuracy 0.7
        CHECK(voting2_predict(forest, std::vector<double>{0.0}) == 1);
    }
    SUBCASE("unanimous leaves win regardless of accuracy") {
        Forest forest;
        forest.trees.push_back(leaf_tree({2, 5}));
        forest.trees.push_back(leaf_tree({1, 2}));
        CHECK(voting2_predict(forest, std::vector<double>{0.0}) == 1);
    }
    SUBCASE("accuracy ties fall to support, then tree order") {
        Forest forest;
        forest.trees.push_back(leaf_tree({1, 4}));   // 0.8, support 5, class 1
        forest.trees.push_back(leaf_tree({2, 8}));   // 0.8, support 10, class 1
        forest.trees.push_back(leaf_tree({8, 2}));   // 0.8, support 10, class 0 -- loses by order
        CHECK(voting2_predict(forest, std::vector<double>{0.0}) == 1);
    }
    SUBCASE("matches a brute-force scan over all leaves") {
        Rng rng(808);
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < 120; ++i) {
            rows.push_back({rng.uniform(0, 6), rng.uniform(0, 6), rng.uniform(0, 6)});
            labels.push_back(static_cast<int>(rng.below(3)));
        }
        const Dataset ds = make_dataset(
            {AttributeKind::numeric, AttributeKind::numeric, AttributeKind::numeric}, rows,
            labels);
        SysForParams p = loose_params(4);
        p.c45.min_leaf = 5;
        const Forest forest = build_forest(ds, p);
        REQUIRE(forest.size() >= 3);

        for (int probe = 0; probe < 200; ++probe) {
            std::vector<double> values{rng.uniform(0, 6), rng.uniform(0, 6), rng.uniform(0, 6)};
            const TreeNode* best = nullptr;
            int best_tree = -1;
            for (std::size_t t = 0; t < forest.size(); ++t) {
                const TreeNode* leaf = predict(forest.trees[t], values).leaf;
                const bool better =
                    !best || leaf->leaf_accuracy > best->leaf_accuracy ||
                    (leaf->leaf_accuracy == best->leaf_accuracy &&
                     (leaf->support > best->support ||
                      (leaf->support == best->support &&
                       static_cast<int>(t) < best_tree)));
                if (better) {
                    best = leaf;
                    best_tree = static_cast<int>(t);
                }
            }
            CHECK(voting2_predict(forest, values) == best->majority_class);
        }
    }
}

TEST_CASE("parameter validation") {
    const Dataset ds = make_dataset({AttributeKind::numeric}, {{0}, {1}}, {0, 1});
    SysForParams p = loose_params(0);
    CHECK_THROWS_AS(build_forest(ds, p), std::invalid_argument);
    p = loose_params(1);
    p.goodness = 0.0;
    CHECK_THROWS_AS(build_forest(ds, p), std::invalid_argument);
    p = loose_params(1);
    p.separation = 1.5;
    CHECK_THROWS_AS(build_forest(ds, p), std::invalid_argument);
}
