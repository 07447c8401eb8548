#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "passgauge/error.hpp"
#include "passgauge/tree.hpp"

using namespace passgauge;
using namespace passgauge::models;

TEST_CASE("gini_impurity") {
    CHECK(gini_impurity(std::array<std::uint32_t, 3>{10, 0, 0}) == 0.0);
    CHECK(gini_impurity(std::array<std::uint32_t, 3>{5, 5, 0}) == doctest::Approx(0.5));
    CHECK(gini_impurity(std::array<std::uint32_t, 3>{4, 4, 4}) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(gini_impurity(std::array<std::uint32_t, 3>{0, 0, 0}), Error);

    std::mt19937 rng(1);
    for (int i = 0; i < 500; ++i) {
        std::array<std::uint32_t, 3> h{std::uint32_t(rng() % 20), std::uint32_t(rng() % 20), std::uint32_t(rng() % 20 + 1)};
        const double g = gini_impurity(h);
        CHECK(g >= 0.0);
        CHECK(g <= 1.0 - 1.0 / 3.0 + 1e-12);
    }
}

TEST_CASE("argmax_low prefers the weaker class on ties") {
    const std::array<double, 3> tie = {0.4, 0.4, 0.2};
    CHECK(argmax_low(tie) == 0);
    const std::array<double, 3> strong = {0.2, 0.3, 0.5};
    CHECK(argmax_low(strong) == 2);
}

TEST_CASE("a single split separates two clean groups") {
    Matrix x(4, 1);
    const double v[4] = {1, 2, 10, 11};
    for (std::size_t r = 0; r < 4; ++r) x(r, 0) = v[r];
    const std::vector<int> y = {0, 0, 2, 2};
    const std::vector<std::size_t> samples = {0, 1, 2, 3};
    Rng rng(1);
    const auto tree = train_tree(x, y, samples, {}, rng);
    REQUIRE(tree.nodes().size() == 3);
    CHECK(tree.nodes()[0].feature == 0);
    CHECK(tree.nodes()[0].threshold == 6.0);
    CHECK(tree.depth() == 1);
    const double probe[1] = {3.0};
    CHECK(tree.leaf_for(probe).histogram == std::array<std::uint32_t, 3>{2, 0, 0});
}

TEST_CASE("every split matches an exhaustive search") {
    std::mt19937_64 gen(77);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t n = 2 + gen() % 49;
        const std::size_t d = 1 + gen() % 3;
        Matrix x(n, d);
        std::vector<int> y(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < d; ++c) x(r, c) = static_cast<double>(gen() % 6);
            y[r] = static_cast<int>(gen() % 3);
        }
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        Rng rng(iter);
        const auto tree = train_tree(x, y, all, {}, rng);

        // Route the training rows and compare each node with the oracle.
        std::vector<std::vector<std::size_t>> at(tree.nodes().size());
        at[0] = all;
        for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
            const auto& node = tree.nodes()[id];
            std::vector<std::vector<double>> rows;
            std::vector<int> labels;
            std::array<std::uint32_t, 3> hist{};
            for (std::size_t s : at[id]) {
                rows.emplace_back(x.row(s).begin(), x.row(s).end());
                labels.push_back(y[s]);
                ++hist[y[s]];
            }
            CHECK(hist == node.histogram);
            const int present = (hist[0] > 0) + (hist[1] > 0) + (hist[2] > 0);
            if (present <= 1) {
                CHECK(node.is_leaf());
                continue;
            }
            const auto want = oracle::brute_force_best_split(rows, labels);
            CHECK(node.feature == want.feature);
            if (node.is_leaf()) continue;
            CHECK(node.threshold == want.threshold);
            for (std::size_t s : at[id])
                at[x(s, node.feature) <= node.threshold ? node.left : node.right].push_back(s);
        }
    }
}

TEST_CASE("max_depth and min_samples_split stop growth") {
    std::mt19937_64 gen(5);
    Matrix x(200, 3);
    std::vector<int> y(200);
    for (std::size_t r = 0; r < 200; ++r) {
        for (std::size_t c = 0; c < 3; ++c) x(r, c) = std::uniform_real_distribution<double>(0, 1)(gen);
        y[r] = static_cast<int>(gen() % 3);
    }
    std::vector<std::size_t> all(200);
    std::iota(all.begin(), all.end(), 0);
    for (int depth : {1, 2, 5}) {
        Rng rng(1);
        CHECK(train_tree(x, y, all, {0, depth, 2}, rng).depth() <= static_cast<std::size_t>(depth));
    }
    Rng rng(1);
    for (const auto& node : train_tree(x, y, all, {0, 0, 50}, rng).nodes()) {
        const auto n = node.histogram[0] + node.histogram[1] + node.histogram[2];
        if (!node.is_leaf()) CHECK(n >= 50);
    }
}

TEST_CASE("train_tree validates its input") {
    Matrix x(2, 1);
    const std::vector<int> y = {0, 1};
    Rng rng(1);
    CHECK_THROWS_AS(train_tree(x, y, std::vector<std::size_t>{}, {}, rng), Error);
    const std::vector<int> bad = {0, 5};
    CHECK_THROWS_AS(train_tree(x, bad, std::vector<std::size_t>{0, 1}, {}, rng), Error);
}

TEST_CASE("tree hand examples") {
    CHECK(gini_impurity(std::array<std::uint32_t, 3>{2, 1, 1}) == doctest::Approx(0.625));
    CHECK(gini_impurity(std::array<std::uint32_t, 3>{5, 5, 5}) == doctest::Approx(2.0 / 3.0));

    Matrix x(3, 1);
    x(0, 0) = 0;
    x(1, 0) = 1;
    x(2, 0) = 10;
    const std::vector<int> y = {0, 0, 1};
    const std::vector<std::size_t> all = {0, 1, 2};
    Rng rng(1);
    const auto tree = train_tree(x, y, all, {}, rng);
    CHECK(tree.nodes().size() == 3);
    for (std::size_t r = 0; r < 3; ++r)
        CHECK(argmax_low(std::array<double, 3>{double(tree.leaf_for(x.row(r)).histogram[0]),
                                                double(tree.leaf_for(x.row(r)).histogram[1]),
                                                double(tree.leaf_for(x.row(r)).histogram[2])}) == y[r]);

    const std::vector<int> same = {1, 1, 1};
    CHECK(train_tree(x, same, all, {}, rng).nodes().size() == 1);

    Matrix dup(3, 1);
    const std::vector<int> mixed = {0, 1, 1};
    const auto leaf = train_tree(dup, mixed, all, {}, rng);
    REQUIRE(leaf.nodes().size() == 1);
    CHECK(leaf.nodes()[0].histogram == std::array<std::uint32_t, 3>{1, 2, 0});
}
