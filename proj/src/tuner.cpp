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

#include "psfm/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "psfm/parallel.hpp"

namespace psfm {

GridSpec GridSpec::defaults() {
    GridSpec g;
    for (std::size_t n = 3; n <= 24; ++n) g.n_values.push_back(n);
    for (std::size_t k = 1; k <= 50; ++k) g.k_values.push_back(k);
    for (int i = 1; i <= 50; ++i) g.a_values.push_back(i / 50.0);
    for (int i = 0; i <= 37; ++i) g.b_values.push_back((15 + 5 * i) / 100.0);
    return g;
}

void GridSpec::validate() const {
    if (n_values.empty() || k_values.empty() || a_values.empty() || b_values.empty())
        throw std::invalid_argument("GridSpec: every grid must be nonempty");
    for (auto n : n_values)
        if (n < 1) throw std::invalid_argument("GridSpec: n values must be >= 1");
    for (auto k : k_values)
        if (k < 1) throw std::invalid_argument("GridSpec: k values must be >= 1");
    for (auto a : a_values)
        if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("GridSpec: a values must be > 0");
    for (auto b : b_values)
        if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("GridSpec: b values must be > 0");
}

// ---------------------------------------------------------------------------

double median_pairwise_distance(const PatternDataset& dataset) {
    const std::size_t n = dataset.size();
    if (n < 2) throw std::invalid_argument("median_pairwise_distance: need at least 2 patterns");
    std::vector<double> d;
    d.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d.push_back(euclidean_distance(dataset.pairs[i].x, dataset.pairs[j].x));
    std::sort(d.begin(), d.end());
    const std::size_t mid = d.size() / 2;
    return d.size() % 2 == 1 ? d[mid] : 0.5 * (d[mid - 1] + d[mid]);
}

ScottBandwidths scott_bandwidths(const PatternDataset& dataset) {
    const std::size_t count = dataset.size();
    if (count < 2) throw std::invalid_argument("scott_bandwidths: need at least 2 patterns");
    const std::size_t dim = dataset.pairs.front().x.size();
    const double factor = std::pow(static_cast<double>(count), -1.0 / (static_cast<double>(dim) + 4.0));
    ScottBandwidths out;
    out.h.resize(dim);
    for (std::size_t t = 0; t < dim; ++t) {
        double mean = 0.0;
        for (const auto& p : dataset.pairs) mean += p.x[t];
        mean /= static_cast<double>(count);
        double ss = 0.0;
        for (const auto& p : dataset.pairs) ss += (p.x[t] - mean) * (p.x[t] - mean);
        out.h[t] = std::sqrt(ss / static_cast<double>(count)) * factor;
        if (!(out.h[t] > 0.0)) out.degenerate = true;
    }
    return out;
}

double sigma_from_a(double a, const PatternDataset& dataset) {
    if (!(a > 0.0)) throw std::invalid_argument("sigma_from_a: a must be > 0");
    const double dmed = median_pairwise_distance(dataset);
    if (!(dmed > 0.0)) throw std::invalid_argument("sigma_from_a: median pairwise distance is 0 (degenerate dataset)");
    return a * dmed;
}

std::vector<double> bandwidths_from_b(double b, const PatternDataset& dataset) {
    if (!(b > 0.0)) throw std::invalid_argument("bandwidths_from_b: b must be > 0");
    auto scott = scott_bandwidths(dataset);
    for (std::size_t t = 0; t < scott.h.size(); ++t)
        if (!(scott.h[t] > 0.0))
            throw std::invalid_argument("bandwidths_from_b: component " + std::to_string(t + 1) +
                                        " has zero spread (flat)");
    for (double& h : scott.h) h *= b;
    return scott.h;
}

// ---------------------------------------------------------------------------
// LOOCV

LoocvEvaluator::LoocvEvaluator(const PatternDataset& dataset) : dataset_(dataset) {
    const std::size_t count = dataset_.size();
    if (count < 2) throw std::invalid_argument("loocv: need at least 2 pattern pairs, have " + std::to_string(count));
    distances_.assign(count * count, 0.0);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j) {
            const double d = euclidean_distance(dataset_.pairs[i].x, dataset_.pairs[j].x);
            distances_[i * count + j] = d;
            distances_[j * count + i] = d;
        }

    orders_.resize(count);
    std::vector<double> row(count - 1);
    for (std::size_t fold = 0; fold < count; ++fold) {
        for (std::size_t i = 0, r = 0; i < count; ++i)
            if (i != fold) row[r++] = distances_[fold * count + i];
        orders_[fold] = kernels::neighbor_order(row);
    }

    ys_.reserve(count * dataset_.spec.m);
    for (const auto& p : dataset_.pairs) ys_.insert(ys_.end(), p.y.begin(), p.y.end());

    actuals_.reserve(count);
    for (const auto& p : dataset_.pairs) {
        auto actual = decode_y(p.y, p.y_coding, dataset_.spec);
        for (double a : actual)
            if (!(a > 0.0)) throw std::invalid_argument("loocv: decoded target demand is not positive");
        actuals_.push_back(std::move(actual));
    }
}

std::vector<double> LoocvEvaluator::fold_weights(std::size_t fold, const ModelConfig& config) const {
    const std::size_t count = dataset_.size();
    std::vector<double> row(count - 1);
    for (std::size_t i = 0, r = 0; i < count; ++i)
        if (i != fold) row[r++] = distances_[fold * count + i];

    switch (config.kind) {
        case ModelKind::knn: return kernels::knn_sorted(row, orders_[fold], config.k, 0.0, 0.0);
        case ModelKind::knn_weighted:
            return kernels::knn_sorted(row, orders_[fold], config.k, config.rho, config.gamma);
        case ModelKind::fnm: return kernels::fnm(row, config.sigma, config.alpha);
        case ModelKind::grnn: {
            std::vector<double> sigmas(count - 1, config.sigma);
            if (config.per_neuron_sigmas)
                for (std::size_t i = 0, r = 0; i < count; ++i)
                    if (i != fold) sigmas[r++] = (*config.per_neuron_sigmas)[i];
            return kernels::grnn(row, sigmas);
        }
        case ModelKind::nwe: {
            const auto& query = dataset_.pairs[fold].x;
            std::vector<double> scale(query.size());
            for (std::size_t t = 0; t < scale.size(); ++t)
                scale[t] = 1.0 / (2.0 * config.bandwidths[t] * config.bandwidths[t]);
            std::vector<double> exponents(count - 1);
            std::vector<double> kernel(count - 1);
            for (std::size_t i = 0, r = 0; i < count; ++i) {
                if (i == fold) continue;
                const auto& x = dataset_.pairs[i].x;
                double e = 0.0;
                for (std::size_t t = 0; t < x.size(); ++t) {
                    const double d = query[t] - x[t];
                    e += d * d * scale[t];
                }
                exponents[r] = e;
                kernel[r] = std::exp(-e);
                ++r;
            }
            return kernels::normalize_or_nearest(std::move(kernel), exponents);
        }
    }
    throw std::logic_error("loocv: unhandled model kind");
}

double LoocvEvaluator::error(const ModelConfig& config) const {
    const std::size_t count = dataset_.size();
    const std::size_t dim = dataset_.pairs.front().x.size();
    if (config.kind == ModelKind::grnn && config.per_neuron_sigmas) {
        validate_config(config, dim, count);
    } else {
        validate_config(config, dim, count - 1);
    }

    const std::size_t m = dataset_.spec.m;
    double total = 0.0;
    std::vector<double> pattern(m);
    for (std::size_t fold = 0; fold < count; ++fold) {
        const auto w = fold_weights(fold, config);
        std::fill(pattern.begin(), pattern.end(), 0.0);
        for (std::size_t i = 0, r = 0; i < count; ++i) {
            if (i == fold) continue;
            const double wi = w[r++];
            if (wi == 0.0) continue;
            const double* y = ys_.data() + i * m;
            for (std::size_t t = 0; t < m; ++t) pattern[t] += wi * y[t];
        }
        const auto predicted = decode_y(pattern, dataset_.pairs[fold].y_coding, dataset_.spec);
        const auto& actual = actuals_[fold];
        for (std::size_t t = 0; t < m; ++t) total += 100.0 * std::abs(actual[t] - predicted[t]) / actual[t];
    }
    return total / static_cast<double>(count * m);
}

double loocv_error(const PatternDataset& dataset, const ModelConfig& config) {
    return LoocvEvaluator(dataset).error(config);
}

// ---------------------------------------------------------------------------
// grid search

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<GridPoint> sweep_one_n(std::span<const double> values, const EncodingSpec& spec, ModelKind kind,
                                   const GridSpec& grid) {
    std::vector<GridPoint> out;
    if (pair_count(values.size(), spec) < 2) return out;
    const auto dataset = build_pairs(values, spec);
    const LoocvEvaluator evaluator(dataset);
    const std::size_t fold_size = dataset.size() - 1;

    auto record = [&](ModelConfig config, double scale) {
        GridPoint p;
        p.n = spec.n;
        p.error = evaluator.error(config);
        p.config = std::move(config);
        p.scale = scale;
        out.push_back(std::move(p));
    };

    switch (kind) {
        case ModelKind::knn:
        case ModelKind::knn_weighted:
            for (auto k : grid.k_values) {
                if (k > fold_size) break;
                record(kind == ModelKind::knn ? ModelConfig::knn(k) : ModelConfig::knn_weighted(k, 1.0, 0.0), 0.0);
            }
            break;
        case ModelKind::fnm:
        case ModelKind::grnn: {
            const double dmed = median_pairwise_distance(dataset);
            if (!(dmed > 0.0)) break;
            for (double a : grid.a_values) {
                const double sigma = a * dmed;
                record(kind == ModelKind::fnm ? ModelConfig::fnm(sigma, 2.0) : ModelConfig::grnn(sigma), a);
            }
            break;
        }
        case ModelKind::nwe: {
            const auto scott = scott_bandwidths(dataset);
            if (scott.degenerate) break;
            for (double b : grid.b_values) {
                std::vector<double> h = scott.h;
                for (double& v : h) v *= b;
                record(ModelConfig::nwe(std::move(h)), b);
            }
            break;
        }
    }
    return out;
}

}  // namespace

TuneResult grid_search(std::span<const double> values, const EncodingSpec& spec_template, ModelKind kind,
                       const GridSpec& grid_in, unsigned jobs) {
    grid_in.validate();
    spec_template.validate();
    GridSpec grid = grid_in;
    grid.n_values = sorted_unique(grid.n_values);
    grid.k_values = sorted_unique(grid.k_values);
    grid.a_values = sorted_unique(grid.a_values);
    grid.b_values = sorted_unique(grid.b_values);

    std::vector<std::vector<GridPoint>> per_n(grid.n_values.size());
    parallel_for(grid.n_values.size(), jobs, [&](std::size_t i) {
        EncodingSpec spec = spec_template;
        spec.n = grid.n_values[i];
        per_n[i] = sweep_one_n(values, spec, kind, grid);
    });

    TuneResult result;
    for (auto& points : per_n)
        for (auto& p : points) result.grid_trace.push_back(std::move(p));
    if (result.grid_trace.empty())
        throw std::invalid_argument(std::string("grid_search: no feasible grid point for ") +
                                    std::string(to_string(kind)) + " on a series of " +
                                    std::to_string(values.size()) + " months");

    const GridPoint* best = &result.grid_trace.front();
    for (const auto& p : result.grid_trace)
        if (p.error < best->error) best = &p;
    result.best_config = best->config;
    result.best_spec = spec_template;
    result.best_spec.n = best->n;
    result.best_scale = best->scale;
    result.cv_error = best->error;
    return result;
}

}  // namespace psfm
