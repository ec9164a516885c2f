// Copyright 2026 The PSFM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "psfm/diagnostics.hpp"
#include "psfm/models.hpp"
#include "test_util.hpp"

using namespace psfm;

namespace {

std::vector<DistanceSample> diagonal_samples(std::size_t count) {
    std::vector<DistanceSample> s(count);
    for (std::size_t i = 0; i < count; ++i) s[i] = {static_cast<double>(i), static_cast<double>(i)};
    return s;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("distance_samples covers every unordered pair") {
    std::mt19937_64 rng(51);
    for (std::size_t n : {2u, 3u, 10u, 37u}) {
        const auto ds = testing::random_dataset(rng, n, 4, 3);
        const auto s = distance_samples(ds);
        CHECK(s.size() == n * (n - 1) / 2);
        CHECK(s[0].dx == doctest::Approx(euclidean_distance(ds.pairs[0].x, ds.pairs[1].x)));
        CHECK(s[0].dy == doctest::Approx(euclidean_distance(ds.pairs[0].y, ds.pairs[1].y)));
    }
}

TEST_CASE("quintile_bins") {
    SUBCASE("ten distinct values, two per bin") {
        std::vector<double> v(10);
        std::iota(v.begin(), v.end(), 1.0);
        const auto b = quintile_bins(v);
        CHECK(b.bins == std::vector<std::size_t>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4});
        CHECK(b.edges == std::array<double, 4>{2, 4, 6, 8});
    }
    SUBCASE("eleven values put the extra one in the first bin") {
        std::vector<double> v(11);
        std::iota(v.begin(), v.end(), 1.0);
        const auto b = quintile_bins(v);
        std::array<int, 5> counts{};
        for (auto k : b.bins) ++counts[k];
        CHECK(counts == std::array<int, 5>{3, 2, 2, 2, 2});
    }
    SUBCASE("value equal to an edge goes to the lower bin") {
        const auto b = quintile_bins(std::vector<double>{1, 2, 2, 2, 3, 4, 5, 6, 7, 8});
        CHECK(b.bins[3] == 0);
    }
    SUBCASE("degenerate input") {
        CHECK_THROWS_AS(quintile_bins(std::vector<double>(10, 3.0)), std::invalid_argument);
        CHECK_THROWS_AS(quintile_bins(std::vector<double>{1, 2, 3, 4}), std::invalid_argument);
    }
}

TEST_CASE("chi-squared critical value for 16 degrees of freedom") {
    CHECK(chi_squared_critical_value(16, 0.05) == doctest::Approx(26.29622760486423).epsilon(1e-12));
    CHECK(std::abs(chi_squared_critical_value(16) - 26.30) <= 0.01);
    CHECK(chi_squared_critical_value(1, 0.05) == doctest::Approx(3.841458820694124).epsilon(1e-12));
    CHECK_THROWS_AS(chi_squared_critical_value(0), std::invalid_argument);
    CHECK_THROWS_AS(chi_squared_critical_value(16, 1.5), std::invalid_argument);
}

TEST_CASE("chi_squared_independence") {
    SUBCASE("perfect dependence on 100 samples") {
        const auto r = chi_squared_independence(diagonal_samples(100));
        CHECK(r.statistic == doctest::Approx(400.0).epsilon(1e-12));
        CHECK(r.dof == 16);
        CHECK(r.reject_null);
        CHECK(r.table.total() == 100);
        for (std::size_t i = 0; i < kCategories; ++i) CHECK(r.table.counts[i][i] == 20);
    }
    SUBCASE("balanced table has statistic zero") {
        // dx cycles through quintiles in blocks of 5, dy cycles within each block
        std::vector<DistanceSample> s;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                for (int rep = 0; rep < 2; ++rep)
                    s.push_back({i * 10.0 + j * 2.0 + rep, j * 10.0 + i * 2.0 + rep});
        const auto r = chi_squared_independence(s);
        CHECK(r.statistic == doctest::Approx(0.0));
        CHECK_FALSE(r.reject_null);
    }
    SUBCASE("too few samples") {
        CHECK_THROWS_AS(chi_squared_independence(diagonal_samples(24)), std::invalid_argument);
    }
}

TEST_CASE("property: statistic is invariant to strictly increasing maps") {
    std::mt19937_64 rng(52);
    std::normal_distribution<double> z(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<DistanceSample> s(200);
        for (auto& p : s) {
            p.dx = std::abs(z(rng)) + 0.01;
            p.dy = 0.5 * p.dx + std::abs(z(rng));
        }
        auto mapped = s;
        for (auto& p : mapped) {
            p.dx = std::log(p.dx) * 3.0 + 7.0;
            p.dy = std::exp(p.dy);
        }
        CHECK(chi_squared_independence(s).statistic == doctest::Approx(chi_squared_independence(mapped).statistic));
    }
}

TEST_CASE("chi_squared_statistic rejects empty margins") {
    ContingencyTable t;
    t.counts[0][0] = 10;
    CHECK_THROWS_AS(chi_squared_statistic(t), std::invalid_argument);
}

TEST_CASE("error_metrics") {
    SUBCASE("perfect forecast") {
        const std::vector<double> a{100, 200, 300};
        const auto m = error_metrics(a, a);
        CHECK(m.mape == 0.0);
        CHECK(m.median_ape == 0.0);
        CHECK(m.iqr_ape == 0.0);
        CHECK(m.rmse == 0.0);
    }
    SUBCASE("two symmetric misses") {
        const auto m = error_metrics(std::vector<double>{100, 100}, std::vector<double>{110, 90});
        CHECK(m.mape == doctest::Approx(10.0));
        CHECK(m.median_ape == doctest::Approx(10.0));
        CHECK(m.iqr_ape == doctest::Approx(0.0));
        CHECK(m.rmse == doctest::Approx(10.0));
    }
    SUBCASE("single point") {
        const auto m = error_metrics(std::vector<double>{100}, std::vector<double>{95});
        CHECK(m.mape == doctest::Approx(5.0));
        CHECK(m.median_ape == doctest::Approx(5.0));
        CHECK(m.rmse == doctest::Approx(5.0));
    }
    SUBCASE("linear interpolation of quartiles") {
        // APEs 1, 2, 3, 4 -> Q1 = 1.75, Q3 = 3.25
        const auto m = error_metrics(std::vector<double>{100, 100, 100, 100}, std::vector<double>{101, 98, 103, 96});
        CHECK(m.median_ape == doctest::Approx(2.5));
        CHECK(m.iqr_ape == doctest::Approx(1.5));
    }
    SUBCASE("invalid input") {
        CHECK_THROWS_AS(error_metrics(std::vector<double>{1, 2}, std::vector<double>{1}), std::invalid_argument);
        CHECK_THROWS_AS(error_metrics(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
        CHECK_THROWS_AS(error_metrics(std::vector<double>{0}, std::vector<double>{1}), std::invalid_argument);
    }
}

TEST_CASE("property: metric bounds") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        const auto a = testing::random_vector(rng, 12, 100.0, 1000.0);
        const auto f = testing::random_vector(rng, 12, 50.0, 1200.0);
        const auto m = error_metrics(a, f);
        auto ape = absolute_percentage_errors(a, f);
        std::sort(ape.begin(), ape.end());
        CHECK(m.mape >= 0.0);
        CHECK(m.median_ape >= ape.front());
        CHECK(m.median_ape <= ape.back());
        CHECK(m.iqr_ape >= 0.0);
        CHECK(m.iqr_ape <= ape.back() - ape.front());
        double max_abs = 0.0;
        for (std::size_t t = 0; t < a.size(); ++t) max_abs = std::max(max_abs, std::abs(a[t] - f[t]));
        CHECK(m.rmse <= max_abs + 1e-9);
    }
}

TEST_CASE("seasonal_naive") {
    SUBCASE("repeats the last year") {
        std::vector<double> v(36);
        std::iota(v.begin(), v.end(), 1.0);
        const auto f = seasonal_naive(v, 12);
        CHECK(f == std::vector<double>(v.end() - 12, v.end()));
    }
    SUBCASE("longer horizons reuse the same year") {
        std::vector<double> v(24);
        std::iota(v.begin(), v.end(), 1.0);
        const auto f = seasonal_naive(v, 13);
        REQUIRE(f.size() == 13);
        CHECK(f[0] == 13.0);
        CHECK(f[11] == 24.0);
        CHECK(f[12] == 13.0);  // 24 months before the 13th step
    }
    SUBCASE("tiled series is forecast exactly") {
        const auto s = testing::series_from("XX", 2000, [] {
            std::vector<double> v;
            for (int y = 0; y < 4; ++y)
                for (int mth = 1; mth <= 12; ++mth) v.push_back(100.0 + mth);
            return v;
        }());
        const auto f = seasonal_naive(s, 12);
        for (int mth = 1; mth <= 12; ++mth) CHECK(f[static_cast<std::size_t>(mth - 1)] == 100.0 + mth);
    }
    SUBCASE("needs enough history") {
        CHECK_THROWS_AS(seasonal_naive(std::vector<double>(11, 1.0), 12), std::invalid_argument);
        CHECK_THROWS_AS(seasonal_naive(std::vector<double>(12, 1.0), 13), std::invalid_argument);
    }
}

}  // TEST_SUITE
