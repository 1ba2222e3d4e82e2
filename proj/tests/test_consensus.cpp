#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "doctest.h"
#include "dfix/consensus.hpp"
#include "dfix/errors.hpp"
#include "dfix/graph.hpp"
#include "test_support.hpp"

using dfix::Graph;
using dfix::metropolis_weights;
using dfix::validate_weights;
using dfix::WeightMatrix;

TEST_CASE("consensus: metropolis weights on a 3-vertex path") {
    const Graph path(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
    const WeightMatrix w = metropolis_weights(path);

    CHECK(w.entries(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(w.entries(1, 0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(w.entries(1, 2) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(w.entries(2, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(w.entries(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(w.entries(1, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(w.entries(2, 2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(w.entries(0, 2) == 0.0);
    CHECK(w.entries(2, 0) == 0.0);
    CHECK(w.w_min == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("consensus: regular graphs give uniform weights 1/(m+1)") {
    for (const int m : {2, 4, 6}) {
        const Graph g = dfix::make_regular_graph(9, m);
        const WeightMatrix w = metropolis_weights(g);
        for (int i = 0; i < 9; ++i) {
            for (int j = 0; j < 9; ++j) {
                const double expected = g.has_edge(j, i) ? 1.0 / (m + 1) : 0.0;
                CHECK(w.entries(i, j) == doctest::Approx(expected).epsilon(1e-14));
            }
        }
        CHECK(w.w_min == doctest::Approx(1.0 / (m + 1)).epsilon(1e-14));
    }
}

TEST_CASE("consensus: single vertex and asymmetric input") {
    const WeightMatrix w = metropolis_weights(Graph(1));
    CHECK(w.entries(0, 0) == 1.0);
    CHECK(w.w_min == 1.0);

    CHECK_THROWS_AS((void)metropolis_weights(Graph(3, {{0, 1}})), std::invalid_argument);
}

TEST_CASE("consensus: metropolis output is symmetric and doubly stochastic") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 12);
        const Graph g = dfix::test::random_symmetric_connected(n, 0.3, rng);
        const WeightMatrix w = metropolis_weights(g);

        CHECK((w.entries - w.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
        for (int i = 0; i < n; ++i) {
            CHECK(w.entries.row(i).sum() == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(w.entries.col(i).sum() == doctest::Approx(1.0).epsilon(1e-14));
        }
        CHECK(validate_weights(w.entries, g) == w.w_min);
    }
}

TEST_CASE("consensus: validation rejects broken matrices and names the spot") {
    const Graph ring = dfix::make_regular_graph(6, 2);
    const WeightMatrix good = metropolis_weights(ring);
    CHECK(validate_weights(good.entries, ring) == doctest::Approx(1.0 / 3).epsilon(1e-14));

    Eigen::MatrixXd short_row = good.entries;
    short_row(2, 3) -= 0.1;  // row 2 now sums to 0.9
    try {
        (void)validate_weights(short_row, ring);
        FAIL("expected a validation error for the broken row sum");
    } catch (const dfix::ValidationError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }

    Eigen::MatrixXd off_pattern = good.entries;
    off_pattern(0, 3) = 0.25;  // no edge (3,0) in the ring
    CHECK_THROWS_AS((void)validate_weights(off_pattern, ring), dfix::ValidationError);

    Eigen::MatrixXd zero_on_edge = good.entries;
    zero_on_edge(0, 0) += zero_on_edge(0, 1);
    zero_on_edge(0, 1) = 0.0;  // edge (1,0) exists but carries weight 0
    CHECK_THROWS_AS((void)validate_weights(zero_on_edge, ring), dfix::ValidationError);

    Eigen::MatrixXd negative = good.entries;
    negative(1, 1) += 2.0 * negative(1, 2);
    negative(1, 2) = -negative(1, 2);
    CHECK_THROWS_AS((void)validate_weights(negative, ring), dfix::ValidationError);

    CHECK_THROWS_AS((void)validate_weights(Eigen::MatrixXd::Identity(4, 4), ring),
                    dfix::ValidationError);
}
