#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "tenrank/criteria.hpp"

using namespace tenrank;

TEST_CASE("IC penalty formulas") {
    SUBCASE("variant 1 at d=400, T=100") {
        const double got = penalty_ic(1, {20, 20}, 100, 1, 0.0, 0, 1.0);
        const double want = 400.0 * 400.0 / 100.0 * std::log(400.0 * 100.0 / 500.0);
        CHECK(got == doctest::Approx(want).epsilon(1e-14));
        CHECK(want == doctest::Approx(1600.0 * std::log(80.0)).epsilon(1e-14));
    }
    SUBCASE("nu = 1 - eps collapses the dimension factor") {
        // At nu -> 1 the d^{2-2nu} factor tends to 1; check the exact collapse
        // algebraically at nu = 0.5 where d^{2-2nu} = d.
        const double got = penalty_ic(3, {4, 5}, 20, 2, 0.5, 0, 1.0);
        const double want = 2.0 * 20.0 / 20.0 * std::log(20.0);
        CHECK(got == doctest::Approx(want).epsilon(1e-14));
    }
    SUBCASE("doubling c doubles the penalty exactly") {
        for (int variant = 1; variant <= 5; ++variant) {
            const double one = penalty_ic(variant, {6, 7}, 50, 2, 0.1, 1, 1.0);
            const double two = penalty_ic(variant, {6, 7}, 50, 2, 0.1, 1, 2.0);
            CHECK(two == 2.0 * one);
        }
    }
    SUBCASE("degenerate sizes are rejected") {
        CHECK_THROWS_AS(penalty_ic(1, {1, 1}, 10, 1, 0.0, 0, 1.0), input_error);  // d < 2
        CHECK_THROWS_AS(penalty_ic(1, {2, 1}, 1, 1, 0.0, 0, 1.0), input_error);   // T < 2
        CHECK_THROWS_AS(penalty_ic(1, {2, 1}, 2, 1, 0.0, 0, 1.0), input_error);   // dT/(d+T) = 1
        CHECK_THROWS_AS(penalty_ic(5, {2, 1}, 9, 1, 0.0, 1, 1.0), input_error);   // min(d_k,T) = 1
        CHECK_THROWS_AS(penalty_ic(6, {4, 4}, 10, 1, 0.0, 0, 1.0), input_error);  // bad variant
    }
}

TEST_CASE("ER penalty formulas") {
    CHECK(penalty_er(1, {4, 5}, 10, 2, 0, 0.1) == doctest::Approx(0.2));
    CHECK(penalty_er(2, {4, 5}, 20, 1, 0) == doctest::Approx(1.0));
    CHECK(penalty_er(4, {4, 5}, 10, 1, 0) == doctest::Approx(400.0 / 1600.0 + 16.0 / 100.0));
    CHECK(penalty_er(3, {4, 5}, 10, 1, 1) == doctest::Approx(400.0 / (100.0 * 25.0)));
    CHECK(penalty_er(5, {4, 5}, 10, 1, 0) ==
          doctest::Approx(400.0 / (100.0 * 4.0) + 20.0 * 4.0 / 100.0));
    CHECK_THROWS_AS(penalty_er(1, {4, 5}, 10, 1, 0, -0.5), input_error);
}

TEST_CASE("ic_select") {
    SUBCASE("worked example") {
        SelectionResult r = ic_select({10, 5, 0.1, 0.05}, 1.0, 3);
        CHECK(r.rank == 2);
        REQUIRE(r.objective.size() == 4);
        CHECK(r.objective[0] == doctest::Approx(15.15));
        CHECK(r.objective[1] == doctest::Approx(6.15));
        CHECK(r.objective[2] == doctest::Approx(2.15));
        CHECK(r.objective[3] == doctest::Approx(3.05));
    }
    SUBCASE("all-zero spectrum selects rank 0") {
        CHECK(ic_select({0, 0, 0, 0}, 0.5, 3).rank == 0);
    }
    SUBCASE("single spike selects rank 1") {
        CHECK(ic_select({100, 0, 0, 0}, 1.0, 3).rank == 1);
    }
    SUBCASE("exact ties break to the smallest m") {
        // costs: m=0 -> 4, m=1 -> 2, m=2 -> 2.
        CHECK(ic_select({3, 1, 0}, 1.0, 2).rank == 1);
        // costs: m=0 -> 2g, m=1 -> 2g, m=2 -> 2g.
        CHECK(ic_select({1, 1, 0, 0}, 1.0, 3).rank == 0);
    }
    SUBCASE("contract violations") {
        CHECK_THROWS_AS(ic_select({}, 1.0, 1), input_error);
        CHECK_THROWS_AS(ic_select({1, 2}, 0.0, 1), input_error);
        CHECK_THROWS_AS(ic_select({1, 2}, 1.0, 2), input_error);
    }
}

TEST_CASE("er_select") {
    SUBCASE("worked example") {
        SelectionResult r = er_select({10, 5, 0.1, 0.05}, 0.1, 3);
        CHECK(r.rank == 2);
        REQUIRE(r.objective.size() == 3);
        CHECK(r.objective[0] == doctest::Approx(5.1 / 10.1));
        CHECK(r.objective[1] == doctest::Approx(0.2 / 5.1));
        CHECK(r.objective[2] == doctest::Approx(0.15 / 0.2));
    }
    SUBCASE("all-zero spectrum gives unit ratios and rank 1 by tie-break") {
        SelectionResult r = er_select({0, 0, 0, 0}, 0.2, 3);
        CHECK(r.rank == 1);
        for (double v : r.objective) CHECK(v == 1.0);
    }
    SUBCASE("single spike selects rank 1") {
        CHECK(er_select({50, 0, 0, 0}, 0.1, 3).rank == 1);
    }
}

TEST_CASE("selection properties on random spectra") {
    std::mt19937 gen(71);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> values(8);
        for (double& v : values) v = 10.0 * unif(gen);
        std::sort(values.begin(), values.end(), std::greater<>());
        const int m_star = 6;

        // IC rank is non-increasing in g.
        int prev_rank = 7;
        for (double g : {0.01, 0.1, 0.5, 1.0, 5.0, 25.0}) {
            const int r = ic_select(values, g, m_star).rank;
            CHECK(r <= prev_rank);
            prev_rank = r;
        }
        // ER ratios live in (0, 1] and the argmin matches brute enumeration.
        const double h = 0.3;
        SelectionResult er = er_select(values, h, m_star);
        int best = 1;
        for (int m = 1; m <= m_star; ++m) {
            const double ratio = (values[static_cast<std::size_t>(m)] + h) /
                                 (values[static_cast<std::size_t>(m - 1)] + h);
            CHECK(ratio > 0.0);
            CHECK(ratio <= 1.0);
            if (ratio < (values[static_cast<std::size_t>(best)] + h) /
                            (values[static_cast<std::size_t>(best - 1)] + h))
                best = m;
        }
        CHECK(er.rank == best);
        // Joint (lambda, h) scaling by c^4 leaves the ER rank unchanged.
        for (double c : {0.5, 2.0, 10.0}) {
            const double c4 = c * c * c * c;
            std::vector<double> scaled = values;
            for (double& v : scaled) v *= c4;
            CHECK(er_select(scaled, c4 * h, m_star).rank == er.rank);
        }
        // IC brute-force enumeration agreement.
        const double g = 2.0;
        SelectionResult ic = ic_select(values, g, m_star);
        int best_ic = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int m = 0; m <= m_star; ++m) {
            double cost = static_cast<double>(m) * g;
            for (std::size_t j = static_cast<std::size_t>(m); j < values.size(); ++j) cost += values[j];
            if (cost < best_cost) {
                best_cost = cost;
                best_ic = m;
            }
        }
        CHECK(ic.rank == best_ic);
    }
}

TEST_CASE("default m_star") {
    CHECK(default_m_star(20) == 10);
    CHECK(default_m_star(40) == 20);
    CHECK(default_m_star(80) == 20);
    CHECK(default_m_star(3) == 1);
    CHECK(default_m_star(80, 10) == 10);
}

TEST_CASE("tune schedule construction") {
    TuneSchedule s = TuneSchedule::nested({20, 10}, 50, 10);
    REQUIRE(s.dims_j.size() == 10);
    CHECK(s.dims_j.front() == std::vector<std::int64_t>{2, 2});
    CHECK(s.dims_j.back() == std::vector<std::int64_t>{20, 10});
    for (std::int64_t t : s.T_j) CHECK(t == 50);
    s.validate({20, 10}, 50);

    TuneSchedule bad = s;
    bad.dims_j.back() = {19, 10};
    CHECK_THROWS_AS(bad.validate({20, 10}, 50), input_error);
}
