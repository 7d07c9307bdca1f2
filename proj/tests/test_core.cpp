#include <doctest.h>

#include "irdm/core.hpp"
#include "irdm/rng.hpp"
#include "test_helpers.hpp"

using namespace irdm;

TEST_CASE("usage bins carry the printed labels and stay contiguous") {
    const auto bins = make_usage_bins(3);
    REQUIRE(bins.size() == 3);
    CHECK(bins[0].label == "0.01-0.05");
    CHECK(bins[1].label == "0.06-0.10");
    CHECK(bins[2].label == "0.11-0.15");
    CHECK(bins[0].lo == doctest::Approx(0.005));
    for (std::size_t i = 1; i < bins.size(); ++i) CHECK(bins[i].lo == bins[i - 1].hi);

    AttributeSchema s = standard_schema(4);
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("discretize_usage places, clamps and rejects NaN") {
    AttributeSchema s;
    s.class_bins = make_usage_bins(3);

    CHECK(discretize_usage(0.03, s) == 0);   // inside the first bin
    CHECK(discretize_usage(0.0, s) == 0);    // clamped low
    CHECK(discretize_usage(0.125, s) == 2);  // inside the third bin
    CHECK(discretize_usage(0.05, s) == 0);   // half-open: below 0.055
    CHECK(discretize_usage(0.055, s) == 1);  // boundary belongs to the upper bin
    CHECK(discretize_usage(9.0, s) == 2);    // clamped high
    CHECK_THROWS_AS(discretize_usage(std::nan(""), s), std::invalid_argument);
}

TEST_CASE("discretize_usage is monotone and bins round-trip their midpoints") {
    AttributeSchema s;
    s.class_bins = make_usage_bins(5);
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const double u1 = rng.uniform(0.0, 0.4);
        const double u2 = rng.uniform(0.0, 0.4);
        const int b1 = discretize_usage(std::min(u1, u2), s);
        const int b2 = discretize_usage(std::max(u1, u2), s);
        CHECK(b1 <= b2);
    }
    for (std::size_t b = 0; b < s.class_bins.size(); ++b)
        CHECK(discretize_usage(bin_midpoint(s.class_bins[b]), s) == static_cast<int>(b));
}

TEST_CASE("schema validation catches duplicates and gapped bins") {
    AttributeSchema s = standard_schema(3);
    s.attributes.push_back({"tmax_c", AttributeKind::numeric});
    CHECK_THROWS_AS(s.validate(), ConfigError);

    AttributeSchema gapped = standard_schema(3);
    gapped.class_bins[1].lo += 0.001;
    CHECK_THROWS_AS(gapped.validate(), ConfigError);
}

TEST_CASE("validate_dataset reports range violations with provenance") {
    Dataset empty;
    empty.schema = standard_schema(3);
    CHECK(validate_dataset(empty).empty());

    // tmax,tmin,humidity,wind,rain,solar,soil,crop
    Dataset ds = testing::make_dataset(
        {AttributeKind::numeric, AttributeKind::numeric, AttributeKind::numeric,
         AttributeKind::numeric, AttributeKind::numeric, AttributeKind::numeric,
         AttributeKind::categorical, AttributeKind::categorical},
        {{30.0, 14.0, 65, 275, 0.0, 24.7, 0, 0}}, {0});
    ds.schema = standard_schema(1);
    CHECK(validate_dataset(ds).empty());

    Dataset bad = ds;
    bad.records[0].values[0] = 10.0;  // tmax below tmin
    auto violations = validate_dataset(bad);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].farm_id == "F0");
    CHECK(violations[0].date == "2008-10-01");
    CHECK(violations[0].message.find("tmax") != std::string::npos);

    Dataset humid = ds;
    humid.records[0].values[2] = 180.0;
    violations = validate_dataset(humid);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].message.find("humidity") != std::string::npos);

    Dataset badcat = ds;
    badcat.records[0].values[7] = 5.0;  // no such category id
    CHECK(validate_dataset(badcat).size() == 1);

    Dataset badlabel = ds;
    badlabel.records[0].class_label = 9;
    CHECK(validate_dataset(badlabel).size() == 1);
}

TEST_CASE("dates parse, format and step") {
    const Date d = Date::parse("2008-11-02");
    CHECK(d.to_string() == "2008-11-02");
    CHECK(d.plus_days(1).to_string() == "2008-11-03");
    CHECK(Date::parse("2008-12-31").plus_days(1).to_string() == "2009-01-01");
    CHECK(Date::parse("2008-02-29").to_string() == "2008-02-29");  // leap year
    CHECK_THROWS_AS(Date::parse("2009-02-29"), std::invalid_argument);
    CHECK_THROWS_AS(Date::parse("2008-13-01"), std::invalid_argument);
    CHECK_THROWS_AS(Date::parse("02/11/2008"), std::invalid_argument);
    CHECK(Date::parse("2009-03-31") - Date::parse("2008-10-01") == 181);
    CHECK(Date(2008, 10, 5) > Date(2008, 10, 1));
}
