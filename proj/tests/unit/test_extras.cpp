#include "doctest.h"

#include "fixtures.hpp"

#include "mstlens/extras.hpp"

using namespace mstlens;

TEST_CASE("five-number summary by medians of halves") {
    auto f = five_number({9, 1, 5, 3, 7, 2, 8, 4, 6});
    CHECK(f.min == 1);
    CHECK(f.q1 == 3);
    CHECK(f.median == 5);
    CHECK(f.q3 == 7);
    CHECK(f.max == 9);
    f = five_number({1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(f.q1 == 2.5);
    CHECK(f.median == 4.5);
    CHECK(f.q3 == 6.5);
    f = five_number({4});
    CHECK(f.q1 == 4);
    CHECK(f.q3 == 4);
    CHECK_THROWS_AS(five_number({}), InputError);
}

TEST_CASE("heatmap orders features by absolute mean difference") {
    Matrix x(4, 3);
    x << 0, 0, 1,   //
        0, 2, 1,    //
        5, 1, 1,    //
        5, 1, 4;
    const Dataset d({"a", "b", "c", "d"}, {"f1", "f2", "f3"}, x);
    const GroupSelection sel{{0, 1}, {2, 3}, {}};
    const HeatmapSpec h = heatmap_spec(d, sel);
    // |diff|: f1 = 5, f2 = 0, f3 = 1.5
    CHECK(h.features == std::vector<std::string>{"f1", "f3", "f2"});
    CHECK(h.feature_order == std::vector<std::size_t>{0, 2, 1});
    CHECK(h.rows == std::vector<VertexId>{0, 1, 2, 3});
    CHECK(h.row_group == std::vector<int>{1, 1, 2, 2});
    CHECK(h.matrix(3, 1) == 4);
    CHECK(h.mean1[0] == 0);
    CHECK(h.mean2[0] == 5);

    // Brute-force: ordering is non-increasing and ties keep index order.
    Matrix tied(4, 3);
    tied << 0, 0, 0, 0, 0, 0, 1, 1, 3, 1, 1, 3;
    const HeatmapSpec t = heatmap_spec(Dataset({"a", "b", "c", "d"}, {"f1", "f2", "f3"}, tied), sel);
    CHECK(t.feature_order == std::vector<std::size_t>{2, 0, 1});
}

TEST_CASE("sub-heatmap recomputes ordering on the subset") {
    Matrix x(4, 2);
    x << 0, 0,   //
        0, 10,   //
        1, 0,    //
        1, 0;
    const Dataset d({"a", "b", "c", "d"}, {"f1", "f2"}, x);
    const GroupSelection sel{{0, 1}, {2, 3}, {}};
    CHECK(heatmap_spec(d, sel).features.front() == "f2");
    const HeatmapSpec sub = heatmap_spec(d, sel, std::vector<VertexId>{0, 2, 3});
    CHECK(sub.rows == std::vector<VertexId>{0, 2, 3});
    CHECK(sub.features.front() == "f1");
    const HeatmapSpec cols = heatmap_spec(d, sel, std::nullopt, std::vector<std::size_t>{1});
    CHECK(cols.features == std::vector<std::string>{"f2"});
    CHECK(cols.matrix.cols() == 1);

    CHECK_THROWS_AS(heatmap_spec(d, sel, std::vector<VertexId>{0, 1}), InputError);
    CHECK_THROWS_AS(heatmap_spec(d, GroupSelection{{0}, {1, 5}, {}}), InputError);
    CHECK_THROWS_AS(heatmap_spec(d, sel, std::nullopt, std::vector<std::size_t>{}), InputError);
    CHECK_THROWS_AS(heatmap_spec(d, sel, std::nullopt, std::vector<std::size_t>{7}), InputError);
}

TEST_CASE("meta summary by column type") {
    const auto s = fixture::three_blobs(6);
    const auto loaded = assemble_session(s.data, s.embedding, s.labels, s.meta);
    const GroupSelection sel{loaded.clustering.members(0), loaded.clustering.members(1), {}};
    const MetaSummary m = meta_summary(*loaded.meta, sel);
    REQUIRE(m.categorical.size() == 1);
    REQUIRE(m.numeric.size() == 1);
    CHECK(m.categorical[0].column == "batch");
    double total = 0;
    for (const auto& [level, share] : m.categorical[0].group1) total += share;
    CHECK(total == doctest::Approx(1.0));
    CHECK(m.categorical[0].group1.at("b1") == doctest::Approx(0.5));

    std::vector<double> ages;
    for (auto r : sel.group2) ages.push_back(loaded.meta->columns()[1].values[r]);
    const FiveNumber expected = five_number(ages);
    CHECK(m.numeric[0].group2.median == expected.median);
    CHECK(m.numeric[0].group2.q1 == expected.q1);
}
