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

#include <random>
#include <sstream>

#include "psfm/series.hpp"
#include "test_util.hpp"

using namespace psfm;

namespace {

SeriesCollection parse(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in, "test.csv");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const DataError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("series_store") {

TEST_CASE("minimal well-formed file") {
    const auto c = parse("country,year,month,demand_mwh\nDE,2010,1,40000\nDE,2010,2,38000\n");
    REQUIRE(c.size() == 1);
    const auto& de = c.at("DE");
    CHECK(de.size() == 2);
    CHECK(de.first_month() == YearMonth{2010, 1});
    CHECK(de.values() == std::vector<double>{40000, 38000});
}

TEST_CASE("rows are sorted per country and the header is optional") {
    const auto c = parse("PL,2011,2,5\nDE,2010,2,2\nDE,2010,1,1\nPL,2011,1,4\n");
    CHECK(c.country_codes() == std::vector<std::string>{"DE", "PL"});
    CHECK(c.at("DE").values() == std::vector<double>{1, 2});
    CHECK(c.at("PL").values() == std::vector<double>{4, 5});
}

TEST_CASE("gap is an error naming the missing month") {
    const auto msg = error_of("country,year,month,demand_mwh\nDE,2010,1,40000\nDE,2010,3,39000\n");
    CHECK(msg.find("DE missing 2010-02") != std::string::npos);
    const auto range = error_of("DE,2010,11,1\nDE,2011,3,1\n");
    CHECK(range.find("DE missing 2010-12..2011-02") != std::string::npos);
}

TEST_CASE("non-positive demand is rejected") {
    CHECK(error_of("DE,2010,1,-5\n").find("non-positive") != std::string::npos);
    CHECK(error_of("DE,2010,1,0\n").find("non-positive") != std::string::npos);
}

TEST_CASE("duplicates, parse failures and empty files") {
    CHECK(error_of("DE,2010,1,1\nDE,2010,1,2\n").find("duplicate") != std::string::npos);
    const auto bad = error_of("country,year,month,demand_mwh\nDE,2010,1,40000\nDE,2010,x,1\n");
    CHECK(bad.find("test.csv:3") != std::string::npos);
    CHECK(error_of("DE,2010,13,1\n").find("test.csv:1") != std::string::npos);
    CHECK(error_of("DE,2010,1\n").find("expected 4 fields") != std::string::npos);
    CHECK(error_of("DE,2010,1,1,9\n").find("expected 4 fields") != std::string::npos);
    CHECK(error_of("").find("no observations") != std::string::npos);
    CHECK(error_of("country,year,month,demand_mwh\n").find("no observations") != std::string::npos);
}

TEST_CASE("decimal comma is not accepted") {
    CHECK_FALSE(error_of("DE,2010,1,\"4,5\"\n").empty());
    CHECK_THROWS_AS(parse_double("4,5"), std::invalid_argument);
    CHECK(parse_double("4.5") == 4.5);
    CHECK(parse_double(" 1e3 ") == 1000.0);
}

TEST_CASE("validate_rows reports every problem of every country") {
    std::istringstream in("DE,2010,1,1\nDE,2010,3,1\nFR,2010,1,-1\nPL,2010,1,2\n");
    const auto checks = validate_rows(parse_csv_rows(in));
    REQUIRE(checks.size() == 3);
    CHECK(checks[0].problems.size() == 1);
    CHECK(checks[1].problems.size() == 1);
    CHECK(checks[2].problems.empty());
}

TEST_CASE("csv round trip is bit-exact for random collections") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1e-3, 1e7);
    for (int trial = 0; trial < 20; ++trial) {
        SeriesCollection c;
        for (const char* code : {"AT", "BE", "CH"}) {
            std::vector<double> v(30);
            for (auto& x : v) x = u(rng);
            c.add(testing::series_from(code, 1990 + trial, v));
        }
        std::ostringstream out;
        write_csv(out, c);
        CHECK(parse(out.str()) == c);
    }
}

TEST_CASE("MonthlyLoadSeries enforces its invariants") {
    CHECK_THROWS_AS(MonthlyLoadSeries("DE", {{{2010, 1}, 1.0}, {{2010, 3}, 1.0}}), DataError);
    CHECK_THROWS_AS(MonthlyLoadSeries("DE", {{{2010, 2}, 1.0}, {{2010, 1}, 1.0}}), DataError);
    CHECK_THROWS_AS(MonthlyLoadSeries("DE", {{{2010, 1}, std::nan("")}}), DataError);
    CHECK_THROWS_AS(MonthlyLoadSeries("", {}), DataError);
    SeriesCollection c;
    c.add(testing::series_from("DE", 2010, {1.0}));
    CHECK_THROWS_AS(c.add(testing::series_from("DE", 2011, {1.0})), DataError);
}

TEST_CASE("split_train_test") {
    std::vector<double> v(24);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 100.0 + static_cast<double>(i);
    const auto s = testing::series_from("DE", 2012, v);

    SUBCASE("two years split into one of each") {
        auto [train, test] = split_train_test(s, 2013);
        CHECK(train.size() == 12);
        CHECK(test.size() == 12);
        CHECK(train.last_month() == YearMonth{2012, 12});
        CHECK(test.first_month() == YearMonth{2013, 1});
    }
    SUBCASE("incomplete test year") {
        const auto short_series = s.slice(0, 18);  // ends 2013-06
        CHECK_THROWS_WITH_AS(split_train_test(short_series, 2013), doctest::Contains("incomplete"), DataError);
    }
    SUBCASE("insufficient history states the minimum") {
        CHECK_THROWS_WITH_AS(split_train_test(s, 2013, 24), doctest::Contains("need at least 24 months"), DataError);
    }
    SUBCASE("1991-2014 gives 276 training months") {
        const auto long_series = testing::series_from("DE", 1991, std::vector<double>(288, 5.0));
        auto [train, test] = split_train_test(long_series, 2014, 12 + 12 + 1 - 1);
        CHECK(train.size() == 276);
        CHECK(test.size() == 12);
    }
    SUBCASE("concatenation reproduces the window up to the end of the test year") {
        const auto longer = testing::series_from("DE", 2010, std::vector<double>(60, 3.0));
        auto [train, test] = split_train_test(longer, 2012);
        std::vector<Observation> joined = train.observations();
        joined.insert(joined.end(), test.observations().begin(), test.observations().end());
        const auto expected = longer.slice(0, longer.index_of({2012, 12}) + 1);
        CHECK(joined == expected.observations());
    }
}

}  // TEST_SUITE
