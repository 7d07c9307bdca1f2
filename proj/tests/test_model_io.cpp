#include <doctest.h>

#include <sstream>

#include "irdm/model_io.hpp"
#include "irdm/rng.hpp"
#include "irdm/sysfor.hpp"
#include "test_helpers.hpp"

using namespace irdm;
using irdm::testing::make_dataset;

namespace {

Dataset mixed_dataset(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) {
        rows.push_back({rng.uniform(0, 9), static_cast<double>(rng.below(3)),
                        rng.uniform(-4, 4)});
        labels.push_back(static_cast<int>(rng.below(3)));
    }
    return make_dataset(
        {AttributeKind::numeric, AttributeKind::categorical, AttributeKind::numeric}, rows,
        labels);
}

}  // namespace

TEST_CASE("trees round-trip through the text format") {
    const Dataset ds = mixed_dataset(150, 6061);
    const DecisionTree tree = build_tree(ds, {5, 0.0, 10});

    std::ostringstream first;
    write_tree(first, tree);
    std::istringstream in(first.str());
    const DecisionTree back = read_tree(in);

    std::ostringstream second;
    write_tree(second, back);
    CHECK(first.str() == second.str());

    CHECK(back.params.min_leaf == tree.params.min_leaf);
    CHECK(back.schema.attributes.size() == tree.schema.attributes.size());
    CHECK(back.categories == tree.categories);
    for (const auto& r : ds.records) {
        const Prediction a = predict(tree, r);
        const Prediction b = predict(back, r);
        CHECK(a.class_label == b.class_label);
        CHECK(a.leaf->support == b.leaf->support);
        CHECK(a.leaf->leaf_accuracy == b.leaf->leaf_accuracy);
    }
}

TEST_CASE("forests round-trip through the text format") {
    const Dataset ds = mixed_dataset(120, 903);
    SysForParams params;
    params.num_trees = 4;
    params.c45 = {5, 0.0, 8};
    const Forest forest = build_forest(ds, params);

    testing::TempDir dir("forest_io");
    save_forest(forest, dir.file("model.txt"));
    const Forest back = load_forest(dir.file("model.txt"));

    REQUIRE(back.size() == forest.size());
    CHECK(back.params.num_trees == forest.params.num_trees);
    for (const auto& r : ds.records)
        CHECK(voting2_predict(back, r) == voting2_predict(forest, r));

    std::ostringstream a, b;
    write_forest(a, forest);
    write_forest(b, back);
    CHECK(a.str() == b.str());
}

TEST_CASE("corrupt model files are rejected") {
    const Dataset ds = mixed_dataset(30, 5);
    const DecisionTree tree = build_tree(ds, {2, 0.0, 6});
    std::ostringstream out;
    write_tree(out, tree);
    const std::string text = out.str();

    std::istringstream truncated(text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(read_tree(truncated), DataError);

    std::istringstream wrong("not a model\n");
    CHECK_THROWS_AS(read_tree(wrong), DataError);
}
