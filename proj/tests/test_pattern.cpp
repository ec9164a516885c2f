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

#include <cmath>
#include <numeric>
#include <random>

#include "psfm/pattern.hpp"
#include "test_util.hpp"

using namespace psfm;

namespace {

EncodingSpec spec_with(std::size_t n, std::size_t m, PatternDefinition x = PatternDefinition::standardized,
                       PatternDefinition y = PatternDefinition::standardized) {
    EncodingSpec s;
    s.n = n;
    s.m = m;
    s.x_definition = x;
    s.y_definition = y;
    return s;
}

constexpr PatternDefinition kAll[] = {PatternDefinition::raw, PatternDefinition::centered, PatternDefinition::ratio,
                                      PatternDefinition::standardized};

}  // namespace

TEST_SUITE("pattern_codec") {

TEST_CASE("encode_x with the standardized definition") {
    const std::vector<double> w{1, 2, 3};
    const auto enc = encode_x(w, spec_with(3, 1));
    CHECK(enc.coding.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(enc.coding.dispersion == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(enc.pattern[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(enc.pattern[1] == doctest::Approx(0.0));
    CHECK(enc.pattern[2] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_FALSE(enc.degenerate);
}

TEST_CASE("constant windows") {
    const std::vector<double> w{5, 5, 5};
    const auto centered = encode_x(w, spec_with(3, 1, PatternDefinition::centered));
    CHECK(centered.pattern == std::vector<double>{0, 0, 0});
    const auto standardized = encode_x(w, spec_with(3, 1));
    CHECK(standardized.pattern == std::vector<double>{0, 0, 0});
    CHECK(standardized.degenerate);
    // large constant level where the mean may be off by an ulp
    const auto big = encode_x(std::vector<double>(12, 40000.1), spec_with(12, 1));
    CHECK(big.degenerate);
    CHECK(big.pattern == std::vector<double>(12, 0.0));
}

TEST_CASE("ratio definition with zero mean falls back to ones") {
    bool flat = false;
    const auto p = encode_with(std::vector<double>{-1, 1}, {0.0, std::sqrt(2.0)}, PatternDefinition::ratio, &flat);
    CHECK(flat);
    CHECK(p == std::vector<double>{1, 1});
    CHECK(decode_with(p, {0.0, 1.0}, PatternDefinition::ratio) == std::vector<double>{0, 0});
}

TEST_CASE("encode_y uses the supplied coding variables") {
    CHECK(encode_y(std::vector<double>{4, 6}, {5, 1}, spec_with(1, 2)) == std::vector<double>{-1, 1});
    CHECK(encode_y(std::vector<double>{5, 5}, {5, 2}, spec_with(1, 2, PatternDefinition::raw,
                                                                PatternDefinition::centered)) ==
          std::vector<double>{0, 0});
    CHECK(encode_y(std::vector<double>{10}, {5, 0}, spec_with(1, 1, PatternDefinition::raw,
                                                              PatternDefinition::ratio)) == std::vector<double>{2});
    CHECK_THROWS_AS(encode_y(std::vector<double>{1, 2, 3}, {5, 1}, spec_with(1, 2)), std::invalid_argument);
}

TEST_CASE("decode_y inverts encode_y") {
    CHECK(decode_y(std::vector<double>{-1, 1}, {5, 1}, spec_with(1, 2)) == std::vector<double>{4, 6});
    CHECK(decode_y(std::vector<double>{0, 0}, {7, 3}, spec_with(1, 2)) == std::vector<double>{7, 7});
    CHECK(decode_y(std::vector<double>{2}, {5, 0}, spec_with(1, 1, PatternDefinition::raw, PatternDefinition::ratio)) ==
          std::vector<double>{10});
    CHECK_THROWS_AS(decode_y(std::vector<double>{std::nan(""), 0}, {5, 1}, spec_with(1, 2)), std::invalid_argument);
}

TEST_CASE("non-finite input is rejected") {
    CHECK_THROWS_AS(encode_x(std::vector<double>{1, INFINITY, 3}, spec_with(3, 1)), std::invalid_argument);
    CHECK_THROWS_AS(encode_x(std::vector<double>{1, 2}, spec_with(3, 1)), std::invalid_argument);
}

TEST_CASE("property: standardized x-patterns have zero mean and unit norm") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 23);
        const auto w = testing::random_vector(rng, n, 100.0, 60000.0);
        const auto enc = encode_x(w, spec_with(n, 1));
        const double mean = std::accumulate(enc.pattern.begin(), enc.pattern.end(), 0.0) / static_cast<double>(n);
        double norm2 = 0.0;
        for (double v : enc.pattern) norm2 += v * v;
        CHECK(std::abs(mean) < 1e-12);
        CHECK(std::abs(std::sqrt(norm2) - 1.0) < 1e-12);
    }
}

TEST_CASE("property: standardized x-patterns are invariant to affine maps of the series") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    std::uniform_real_distribution<double> shift(-1e4, 1e4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto values = testing::random_series_values(rng, 40);
        const double a = scale(rng);
        const double c = shift(rng);
        std::vector<double> moved(values);
        for (auto& v : moved) v = a * v + c;
        const auto spec = spec_with(12, 12);
        const auto ds1 = build_pairs(values, spec);
        const auto ds2 = build_pairs(moved, spec);
        REQUIRE(ds1.size() == ds2.size());
        for (std::size_t i = 0; i < ds1.size(); ++i)
            for (std::size_t t = 0; t < spec.n; ++t) CHECK(std::abs(ds1.pairs[i].x[t] - ds2.pairs[i].x[t]) < 1e-10);
    }
}

TEST_CASE("property: decode(encode(w, c), c) == w for every y definition") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> mean(500.0, 5e4);
    std::uniform_real_distribution<double> disp(10.0, 5e3);
    for (auto def : kAll) {
        for (int trial = 0; trial < 250; ++trial) {
            const auto w = testing::random_vector(rng, 12, 100.0, 60000.0);
            const CodingVariables c{mean(rng), disp(rng)};
            const auto spec = spec_with(12, 12, PatternDefinition::raw, def);
            const auto back = decode_y(encode_y(w, c, spec), c, spec);
            for (std::size_t t = 0; t < w.size(); ++t) CHECK(std::abs(back[t] - w[t]) <= 1e-10 * std::abs(w[t]));
        }
    }
}

TEST_CASE("build_pairs counts and geometry") {
    std::vector<double> v(26);
    std::iota(v.begin(), v.end(), 1.0);
    const auto spec = spec_with(12, 12);
    CHECK(build_pairs(v, spec).size() == 3);
    CHECK(build_pairs(std::span<const double>(v).first(25), spec).size() == 2);
    CHECK(build_pairs(std::span<const double>(v).first(24), spec).size() == 1);
    CHECK_THROWS_WITH_AS(build_pairs(std::span<const double>(v).first(23), spec),
                         doctest::Contains("need at least 24 months"), std::invalid_argument);

    SUBCASE("anchor, windows and history coding") {
        EncodingSpec s = spec_with(3, 2, PatternDefinition::raw, PatternDefinition::raw);
        s.tau = 2;
        const auto ds = build_pairs(v, s);
        REQUIRE(ds.size() == 26 - 3 - 2 - 2 + 2);
        const auto& first = ds.pairs.front();
        CHECK(first.anchor_index == 2);
        CHECK(first.x == std::vector<double>{1, 2, 3});
        CHECK(first.y == std::vector<double>{5, 6});  // starts at anchor + tau
        CHECK(first.y_coding == first.x_coding);
    }
    SUBCASE("external coding codes y with its own window") {
        EncodingSpec s = spec_with(3, 2);
        s.coding_mode = CodingMode::external;
        const auto ds = build_pairs(v, s);
        const auto& first = ds.pairs.front();
        CHECK(first.y_coding.mean == doctest::Approx(4.5));
        CHECK(first.y_coding.dispersion == doctest::Approx(std::sqrt(0.5)));
        CHECK(first.y[0] == doctest::Approx(-1.0 / std::sqrt(2.0)));
    }
}

TEST_CASE("property: pair count closed form") {
    for (std::size_t n : {1u, 3u, 12u})
        for (std::size_t m : {1u, 12u})
            for (std::size_t tau : {1u, 2u, 5u}) {
                EncodingSpec s = spec_with(n, m);
                s.tau = tau;
                for (std::size_t len = n + m + tau - 1; len < n + m + tau + 30; ++len) {
                    const std::vector<double> v(len, 1.0);
                    CHECK(build_pairs(v, s).size() == len - n - m - tau + 2);
                }
            }
}

TEST_CASE("EncodingSpec validation") {
    EncodingSpec s;
    s.n = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.tau = 0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK(parse_pattern_definition("ratio") == PatternDefinition::ratio);
    CHECK_THROWS_AS(parse_pattern_definition("zscore"), std::invalid_argument);
}

}  // TEST_SUITE
