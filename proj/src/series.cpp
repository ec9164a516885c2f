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

#include "psfm/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace psfm {

namespace {

constexpr std::string_view kHeader = "country,year,month,demand_mwh";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

int parse_int(std::string_view text) {
    int value = 0;
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    return value;
}

std::string gap_message(const std::string& country, YearMonth prev, YearMonth next) {
    YearMonth first_missing = prev.next();
    YearMonth last_missing = first_missing;
    while (last_missing.next() != next) last_missing = last_missing.next();
    std::string msg = country + " missing " + first_missing.str();
    if (last_missing != first_missing) msg += ".." + last_missing.str();
    return msg;
}

}  // namespace

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

// ---------------------------------------------------------------------------
// MonthlyLoadSeries

MonthlyLoadSeries::MonthlyLoadSeries(std::string country_code, std::vector<Observation> observations)
    : country_code_(std::move(country_code)), observations_(std::move(observations)) {
    if (country_code_.empty()) throw DataError("series has an empty country code");
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const auto& obs = observations_[i];
        if (obs.when.month < 1 || obs.when.month > 12)
            throw DataError(country_code_ + " " + std::to_string(obs.when.year) + ": month " +
                            std::to_string(obs.when.month) + " out of range 1..12");
        if (!std::isfinite(obs.demand) || obs.demand <= 0.0)
            throw DataError(country_code_ + " " + obs.when.str() + ": non-positive or non-finite demand " +
                            format_double(obs.demand));
        if (i > 0) {
            const auto prev = observations_[i - 1].when;
            if (obs.when <= prev)
                throw DataError(country_code_ + " " + obs.when.str() + ": observations not strictly increasing");
            if (obs.when != prev.next()) throw DataError(gap_message(country_code_, prev, obs.when));
        }
    }
}

YearMonth MonthlyLoadSeries::first_month() const {
    if (observations_.empty()) throw DataError(country_code_ + ": empty series");
    return observations_.front().when;
}

YearMonth MonthlyLoadSeries::last_month() const {
    if (observations_.empty()) throw DataError(country_code_ + ": empty series");
    return observations_.back().when;
}

std::vector<double> MonthlyLoadSeries::values() const {
    std::vector<double> out;
    out.reserve(observations_.size());
    for (const auto& obs : observations_) out.push_back(obs.demand);
    return out;
}

MonthlyLoadSeries MonthlyLoadSeries::slice(std::size_t begin, std::size_t count) const {
    if (begin > observations_.size() || count > observations_.size() - begin)
        throw std::out_of_range("MonthlyLoadSeries::slice: range outside series");
    return MonthlyLoadSeries(country_code_, {observations_.begin() + static_cast<std::ptrdiff_t>(begin),
                                             observations_.begin() + static_cast<std::ptrdiff_t>(begin + count)});
}

std::size_t MonthlyLoadSeries::index_of(YearMonth when) const noexcept {
    if (observations_.empty()) return 0;
    const long offset = when.ordinal() - observations_.front().when.ordinal();
    if (offset < 0 || offset >= static_cast<long>(observations_.size())) return observations_.size();
    return static_cast<std::size_t>(offset);
}

// ---------------------------------------------------------------------------
// SeriesCollection

void SeriesCollection::add(MonthlyLoadSeries series) {
    auto code = series.country_code();
    auto [it, inserted] = series_.emplace(code, std::move(series));
    if (!inserted) throw DataError("duplicate country code " + code);
}

const MonthlyLoadSeries& SeriesCollection::at(const std::string& country_code) const {
    auto it = series_.find(country_code);
    if (it == series_.end()) throw DataError("unknown country code " + country_code);
    return it->second;
}

bool SeriesCollection::contains(const std::string& country_code) const { return series_.contains(country_code); }

std::vector<std::string> SeriesCollection::country_codes() const {
    std::vector<std::string> codes;
    codes.reserve(series_.size());
    for (const auto& [code, _] : series_) codes.push_back(code);
    return codes;
}

// ---------------------------------------------------------------------------
// CSV

std::vector<CsvRow> parse_csv_rows(std::istream& in, const std::string& source) {
    std::vector<CsvRow> rows;
    std::string raw;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (line.empty()) continue;
        if (!seen_content) {
            seen_content = true;
            if (line == kHeader) continue;
        }
        const auto fields = split_fields(line);
        auto fail = [&](const std::string& what) {
            return DataError(source + ":" + std::to_string(line_no) + ": " + what);
        };
        if (fields.size() != 4)
            throw fail("expected 4 fields (country,year,month,demand_mwh), got " + std::to_string(fields.size()));
        if (fields[0].empty()) throw fail("empty country code");
        CsvRow row;
        row.line = line_no;
        row.country = std::string(fields[0]);
        try {
            row.when.year = parse_int(fields[1]);
            row.when.month = parse_int(fields[2]);
            row.demand = parse_double(fields[3]);
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
        if (row.when.month < 1 || row.when.month > 12) throw fail("month out of range 1..12");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CountryValidation> validate_rows(const std::vector<CsvRow>& rows) {
    std::map<std::string, std::vector<const CsvRow*>> by_country;
    for (const auto& row : rows) by_country[row.country].push_back(&row);

    std::vector<CountryValidation> out;
    for (auto& [country, list] : by_country) {
        CountryValidation v{country, list.size(), {}};
        std::stable_sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->when < b->when; });
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& row = *list[i];
            if (!std::isfinite(row.demand) || row.demand <= 0.0)
                v.problems.push_back("line " + std::to_string(row.line) + ": non-positive demand " +
                                     format_double(row.demand) + " for " + country + " " + row.when.str());
            if (i == 0) continue;
            const auto& prev = *list[i - 1];
            if (row.when == prev.when)
                v.problems.push_back("line " + std::to_string(row.line) + ": duplicate " + country + " " +
                                     row.when.str() + " (first at line " + std::to_string(prev.line) + ")");
            else if (row.when != prev.when.next())
                v.problems.push_back(gap_message(country, prev.when, row.when));
        }
        out.push_back(std::move(v));
    }
    return out;
}

SeriesCollection read_csv(std::istream& in, const std::string& source) {
    const auto rows = parse_csv_rows(in, source);
    if (rows.empty()) throw DataError(source + ": no observations");
    const auto checks = validate_rows(rows);
    for (const auto& c : checks)
        if (!c.problems.empty()) throw DataError(source + ": " + c.problems.front());

    std::map<std::string, std::vector<Observation>> grouped;
    for (const auto& row : rows) grouped[row.country].push_back({row.when, row.demand});

    SeriesCollection collection;
    for (auto& [country, obs] : grouped) {
        std::sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.when < b.when; });
        collection.add(MonthlyLoadSeries(country, std::move(obs)));
    }
    return collection;
}

SeriesCollection load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_csv(in, path);
}

void write_csv(std::ostream& out, const SeriesCollection& collection) {
    out << kHeader << '\n';
    for (const auto& [code, series] : collection)
        for (const auto& obs : series.observations())
            out << code << ',' << obs.when.year << ',' << obs.when.month << ',' << format_double(obs.demand) << '\n';
}

void save_csv(const std::string& path, const SeriesCollection& collection) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    write_csv(out, collection);
}

// ---------------------------------------------------------------------------

std::pair<MonthlyLoadSeries, MonthlyLoadSeries> split_train_test(const MonthlyLoadSeries& series, int test_year,
                                                                 std::size_t min_history) {
    const auto& code = series.country_code();
    if (series.empty()) throw DataError(code + ": empty series");
    const YearMonth jan{test_year, 1};
    const YearMonth dec{test_year, 12};
    if (series.last_month() < dec)
        throw DataError(code + ": test year " + std::to_string(test_year) + " incomplete (series ends " +
                        series.last_month().str() + ")");
    if (series.first_month() > jan)
        throw DataError(code + ": test year " + std::to_string(test_year) + " incomplete (series starts " +
                        series.first_month().str() + ")");
    const std::size_t start = series.index_of(jan);
    if (start < min_history)
        throw DataError(code + ": insufficient history before " + jan.str() + ": need at least " +
                        std::to_string(min_history) + " months, have " + std::to_string(start));
    return {series.slice(0, start), series.slice(start, 12)};
}

}  // namespace psfm
