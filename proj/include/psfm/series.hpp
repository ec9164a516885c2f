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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace psfm {

/// Raised for malformed or invalid input data (bad CSV rows, gaps, non-positive demand).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    /// Months since year 0, January; consecutive months differ by one.
    [[nodiscard]] long ordinal() const noexcept { return static_cast<long>(year) * 12 + (month - 1); }
    [[nodiscard]] YearMonth next() const noexcept {
        return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
    }
    [[nodiscard]] std::string str() const;

    friend bool operator==(const YearMonth&, const YearMonth&) = default;
    friend auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

struct Observation {
    YearMonth when;
    double demand = 0.0;  // MWh

    friend bool operator==(const Observation&, const Observation&) = default;
};

/**
 * One country's monthly demand history.
 *
 * Observations are contiguous calendar months in increasing order and every
 * demand is finite and strictly positive. The constructor enforces both, so a
 * MonthlyLoadSeries that exists is always valid.
 */
class MonthlyLoadSeries {
public:
    MonthlyLoadSeries(std::string country_code, std::vector<Observation> observations);

    [[nodiscard]] const std::string& country_code() const noexcept { return country_code_; }
    [[nodiscard]] const std::vector<Observation>& observations() const noexcept { return observations_; }
    [[nodiscard]] std::size_t size() const noexcept { return observations_.size(); }
    [[nodiscard]] bool empty() const noexcept { return observations_.empty(); }
    [[nodiscard]] YearMonth first_month() const;
    [[nodiscard]] YearMonth last_month() const;

    /// Demand values in time order.
    [[nodiscard]] std::vector<double> values() const;

    /// Contiguous sub-series [begin, begin + count).
    [[nodiscard]] MonthlyLoadSeries slice(std::size_t begin, std::size_t count) const;

    /// Index of the given month, or size() when it is outside the series.
    [[nodiscard]] std::size_t index_of(YearMonth when) const noexcept;

    friend bool operator==(const MonthlyLoadSeries&, const MonthlyLoadSeries&) = default;

private:
    std::string country_code_;
    std::vector<Observation> observations_;
};

/// Series keyed by country code; iteration order is sorted by code.
class SeriesCollection {
public:
    void add(MonthlyLoadSeries series);

    [[nodiscard]] const MonthlyLoadSeries& at(const std::string& country_code) const;
    [[nodiscard]] bool contains(const std::string& country_code) const;
    [[nodiscard]] std::size_t size() const noexcept { return series_.size(); }
    [[nodiscard]] bool empty() const noexcept { return series_.empty(); }
    [[nodiscard]] std::vector<std::string> country_codes() const;

    [[nodiscard]] auto begin() const noexcept { return series_.begin(); }
    [[nodiscard]] auto end() const noexcept { return series_.end(); }

    friend bool operator==(const SeriesCollection&, const SeriesCollection&) = default;

private:
    std::map<std::string, MonthlyLoadSeries> series_;
};

/// A parsed but not yet validated CSV row.
struct CsvRow {
    std::size_t line = 0;
    std::string country;
    YearMonth when;
    double demand = 0.0;
};

/// Outcome of validating one country's rows.
struct CountryValidation {
    std::string country_code;
    std::size_t row_count = 0;
    std::vector<std::string> problems;  // empty when the series is valid
};

/// Parses `country,year,month,demand_mwh` rows. Throws DataError naming the
/// line on malformed rows. Does not check ordering, gaps or duplicates.
std::vector<CsvRow> parse_csv_rows(std::istream& in, const std::string& source = "<stream>");

/// Groups rows by country and checks duplicates, gaps and positivity,
/// collecting every problem instead of stopping at the first.
std::vector<CountryValidation> validate_rows(const std::vector<CsvRow>& rows);

SeriesCollection read_csv(std::istream& in, const std::string& source = "<stream>");
SeriesCollection load_csv(const std::string& path);

/// Writes the canonical CSV. Demand values use the shortest representation
/// that round-trips exactly.
void write_csv(std::ostream& out, const SeriesCollection& collection);
void save_csv(const std::string& path, const SeriesCollection& collection);

/// Splits off the 12 months of `test_year`. `min_history` is the number of
/// months required before January of the test year.
std::pair<MonthlyLoadSeries, MonthlyLoadSeries> split_train_test(const MonthlyLoadSeries& series, int test_year,
                                                                 std::size_t min_history = 1);

/// Locale-independent number formatting shared by all CSV writers.
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace psfm
