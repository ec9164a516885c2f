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

#include "psfm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "psfm/models.hpp"

namespace psfm {

std::vector<DistanceSample> distance_samples(const PatternDataset& dataset) {
    const std::size_t n = dataset.size();
    if (n < 2) throw std::invalid_argument("distance_samples: need at least 2 pattern pairs");
    std::vector<DistanceSample> out;
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.push_back({euclidean_distance(dataset.pairs[i].x, dataset.pairs[j].x),
                           euclidean_distance(dataset.pairs[i].y, dataset.pairs[j].y)});
    return out;
}

QuintileBinning quintile_bins(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < kCategories)
        throw std::invalid_argument("quintile_bins: need at least 5 values, have " + std::to_string(n));
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) throw std::invalid_argument("quintile_bins: all values equal, nothing to bin");

    QuintileBinning out;
    for (std::size_t q = 1; q < kCategories; ++q) {
        const std::size_t rank = (q * n + kCategories - 1) / kCategories;  // ceil(q n / 5), 1-based
        out.edges[q - 1] = sorted[rank - 1];
    }
    out.bins.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = std::lower_bound(out.edges.begin(), out.edges.end(), values[i]);
        out.bins[i] = static_cast<std::size_t>(it - out.edges.begin());
    }
    return out;
}

long ContingencyTable::total() const noexcept {
    long sum = 0;
    for (const auto& row : counts)
        for (long c : row) sum += c;
    return sum;
}

double chi_squared_critical_value(int dof, double alpha) {
    if (dof < 1) throw std::invalid_argument("chi_squared_critical_value: dof must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("chi_squared_critical_value: alpha must be in (0, 1)");
    const boost::math::chi_squared_distribution<double> dist(dof);
    return boost::math::quantile(boost::math::complement(dist, alpha));
}

double chi_squared_statistic(const ContingencyTable& table) {
    std::array<double, kCategories> rows{};
    std::array<double, kCategories> cols{};
    for (std::size_t r = 0; r < kCategories; ++r)
        for (std::size_t c = 0; c < kCategories; ++c) {
            rows[r] += static_cast<double>(table.counts[r][c]);
            cols[c] += static_cast<double>(table.counts[r][c]);
        }
    const double total = static_cast<double>(table.total());
    double stat = 0.0;
    for (std::size_t r = 0; r < kCategories; ++r)
        for (std::size_t c = 0; c < kCategories; ++c) {
            const double expected = rows[r] * cols[c] / total;
            if (!(expected > 0.0))
                throw std::invalid_argument("chi_squared: expected count is zero (degenerate marginals)");
            const double diff = static_cast<double>(table.counts[r][c]) - expected;
            stat += diff * diff / expected;
        }
    return stat;
}

ChiSquaredResult chi_squared_independence(std::span<const DistanceSample> samples, double alpha) {
    if (samples.size() < kCategories * kCategories)
        throw std::invalid_argument("chi_squared_independence: need at least 25 samples, have " +
                                    std::to_string(samples.size()));
    std::vector<double> dx(samples.size());
    std::vector<double> dy(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        dx[i] = samples[i].dx;
        dy[i] = samples[i].dy;
    }
    const auto rows = quintile_bins(dx);
    const auto cols = quintile_bins(dy);

    ChiSquaredResult result;
    result.table.row_edges = rows.edges;
    result.table.col_edges = cols.edges;
    for (std::size_t i = 0; i < samples.size(); ++i) ++result.table.counts[rows.bins[i]][cols.bins[i]];
    result.statistic = chi_squared_statistic(result.table);
    result.dof = static_cast<int>((kCategories - 1) * (kCategories - 1));
    result.critical_value = chi_squared_critical_value(result.dof, alpha);
    result.reject_null = result.statistic > result.critical_value;
    return result;
}

// ---------------------------------------------------------------------------
// metrics

std::vector<double> absolute_percentage_errors(std::span<const double> actual, std::span<const double> forecast) {
    if (actual.size() != forecast.size())
        throw std::invalid_argument("error_metrics: actual and forecast lengths differ");
    if (actual.empty()) throw std::invalid_argument("error_metrics: empty input");
    std::vector<double> ape(actual.size());
    for (std::size_t t = 0; t < actual.size(); ++t) {
        if (!(actual[t] > 0.0)) throw std::invalid_argument("error_metrics: actual values must be > 0");
        ape[t] = 100.0 * std::abs(actual[t] - forecast[t]) / actual[t];
    }
    return ape;
}

double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("percentile: empty input");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

MetricsReport error_metrics(std::span<const double> actual, std::span<const double> forecast) {
    auto ape = absolute_percentage_errors(actual, forecast);
    MetricsReport r;
    double sum_ape = 0.0;
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < ape.size(); ++t) {
        sum_ape += ape[t];
        const double e = actual[t] - forecast[t];
        sum_sq += e * e;
    }
    const double count = static_cast<double>(ape.size());
    r.mape = sum_ape / count;
    r.rmse = std::sqrt(sum_sq / count);
    std::sort(ape.begin(), ape.end());
    r.median_ape = percentile_sorted(ape, 0.5);
    r.iqr_ape = percentile_sorted(ape, 0.75) - percentile_sorted(ape, 0.25);
    return r;
}

// ---------------------------------------------------------------------------

std::vector<double> seasonal_naive(std::span<const double> values, std::size_t m) {
    const std::size_t needed = 12 * std::max<std::size_t>(1, (m + 11) / 12);
    if (values.size() < needed)
        throw std::invalid_argument("seasonal_naive: need at least " + std::to_string(needed) +
                                    " months of history, have " + std::to_string(values.size()));
    const std::size_t last = values.size() - 1;
    std::vector<double> out(m);
    for (std::size_t h = 1; h <= m; ++h) {
        const std::size_t back = 12 * ((h + 11) / 12);
        out[h - 1] = values[last + h - back];
    }
    return out;
}

std::vector<double> seasonal_naive(const MonthlyLoadSeries& series, std::size_t m) {
    const auto values = series.values();
    return seasonal_naive(values, m);
}

}  // namespace psfm
