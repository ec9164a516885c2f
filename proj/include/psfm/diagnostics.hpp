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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "psfm/pattern.hpp"
#include "psfm/series.hpp"

namespace psfm {

inline constexpr std::size_t kCategories = 5;

struct DistanceSample {
    double dx = 0.0;  // distance between the x-patterns of two pairs
    double dy = 0.0;  // distance between their y-patterns
};

/// One sample per unordered pair i < j.
std::vector<DistanceSample> distance_samples(const PatternDataset& dataset);

struct QuintileBinning {
    std::vector<std::size_t> bins;        // 0..4 per input value
    std::array<double, kCategories - 1> edges{};  // inclusive upper edges of bins 0..3
};

/// Equal-frequency split into five categories at the 20/40/60/80 empirical
/// percentiles (order statistics ceil(q N / 5)). A value equal to an edge goes
/// to the lower bin, so with N not divisible by five the extra values land in
/// the leftmost bins.
QuintileBinning quintile_bins(std::span<const double> values);

struct ContingencyTable {
    std::array<std::array<long, kCategories>, kCategories> counts{};
    std::array<double, kCategories - 1> row_edges{};
    std::array<double, kCategories - 1> col_edges{};

    [[nodiscard]] long total() const noexcept;
};

struct ChiSquaredResult {
    double statistic = 0.0;
    int dof = 16;
    double critical_value = 0.0;
    bool reject_null = false;  // statistic > critical_value
    ContingencyTable table;
};

/// Upper-tail critical value of the chi-squared distribution.
double chi_squared_critical_value(int dof, double alpha = 0.05);

/// Pearson chi-squared test of independence between dx and dy on a 5 x 5
/// quintile contingency table.
ChiSquaredResult chi_squared_independence(std::span<const DistanceSample> samples, double alpha = 0.05);

/// Statistic of an arbitrary table with expected counts from its marginals.
double chi_squared_statistic(const ContingencyTable& table);

struct MetricsReport {
    double median_ape = 0.0;  // %
    double mape = 0.0;        // %
    double iqr_ape = 0.0;     // %, Q3 - Q1 with linear interpolation
    double rmse = 0.0;        // MWh
};

std::vector<double> absolute_percentage_errors(std::span<const double> actual, std::span<const double> forecast);

MetricsReport error_metrics(std::span<const double> actual, std::span<const double> forecast);

/// Percentile of sorted data with linear interpolation between order
/// statistics (position q * (N - 1)).
double percentile_sorted(std::span<const double> sorted, double q);

/// Repeats the most recent annual cycle: step h takes the value observed
/// 12 * ceil(h / 12) months before the target.
std::vector<double> seasonal_naive(std::span<const double> values, std::size_t m);
std::vector<double> seasonal_naive(const MonthlyLoadSeries& series, std::size_t m);

}  // namespace psfm
