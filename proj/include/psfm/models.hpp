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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psfm/pattern.hpp"
#include "psfm/series.hpp"

namespace psfm {

enum class ModelKind { knn, knn_weighted, fnm, nwe, grnn };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

/// A similarity model and its hyperparameters. Only the fields relevant to
/// `kind` are consulted.
struct ModelConfig {
    ModelKind kind = ModelKind::knn;
    std::size_t k = 1;                // knn, knn_weighted
    double rho = 0.0;                 // knn_weighted, in [0, 1]
    double gamma = 0.0;               // knn_weighted, >= -1
    double sigma = 1.0;               // fnm, grnn (shared bandwidth)
    double alpha = 2.0;               // fnm membership exponent
    std::vector<double> bandwidths;   // nwe, one per x-pattern component
    std::optional<std::vector<double>> per_neuron_sigmas;  // grnn, one per training pair

    static ModelConfig knn(std::size_t k);
    static ModelConfig knn_weighted(std::size_t k, double rho = 1.0, double gamma = 0.0);
    static ModelConfig fnm(double sigma, double alpha = 2.0);
    static ModelConfig nwe(std::vector<double> bandwidths);
    static ModelConfig grnn(double sigma);

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Normalized aggregation weights, one per training pair.
struct WeightVector {
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return weights[i]; }
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

/// Neighborhood weights over the k nearest x-patterns. Ties at equal distance
/// are ordered by pair position. rho = 0 gives uniform 1/k weights.
WeightVector knn_weights(std::span<const double> query, const PatternDataset& dataset, std::size_t k, double rho,
                         double gamma);

/// Fuzzy neighborhood: exp(-(d / sigma)^alpha) over all training pairs.
WeightVector fnm_weights(std::span<const double> query, const PatternDataset& dataset, double sigma, double alpha);

/// Nadaraya-Watson with a normal product kernel, bandwidth h_t per component.
WeightVector nwe_weights(std::span<const double> query, const PatternDataset& dataset,
                         std::span<const double> bandwidths);

/// GRNN pattern layer exp(-d^2 / sigma_i^2), one bandwidth per training pair.
WeightVector grnn_weights(std::span<const double> query, const PatternDataset& dataset,
                          std::span<const double> sigmas);

/// Dispatches on config.kind.
WeightVector compute_weights(std::span<const double> query, const PatternDataset& dataset, const ModelConfig& config);

/// Convex combination of the training y-patterns.
std::vector<double> aggregate(const WeightVector& weights, const PatternDataset& dataset);

struct ForecastResult {
    std::vector<double> pattern;   // forecast y-pattern
    std::vector<double> demands;   // decoded, MWh
    CodingVariables coding;        // coding variables used for decoding
    WeightVector weights;
};

/// Encodes the last n months of `values` as the query, weights the training
/// pairs built from the same values, aggregates and decodes. History coding
/// decodes with the query window's own mean and dispersion; external coding
/// requires `coding_override`.
ForecastResult forecast_detailed(std::span<const double> values, const ModelConfig& config, const EncodingSpec& spec,
                                 std::optional<CodingVariables> coding_override = std::nullopt);

std::vector<double> forecast(const MonthlyLoadSeries& series, const ModelConfig& config, const EncodingSpec& spec,
                             std::optional<CodingVariables> coding_override = std::nullopt);

// Weight kernels on precomputed distances, shared with the cross-validation
// loop. Index i of every span refers to the same training pair.
namespace kernels {

/// Normalizes `raw` to sum one. If every entry is zero (underflow), puts
/// weight one on the smallest `exponents` entry, ties to the lowest index.
std::vector<double> normalize_or_nearest(std::vector<double> raw, std::span<const double> exponents);

/// Linear-fractional neighborhood weights for the k nearest of `distances`.
std::vector<double> knn(std::span<const double> distances, std::size_t k, double rho, double gamma);

/// Same as knn() with a precomputed ascending order of indices.
std::vector<double> knn_sorted(std::span<const double> distances, std::span<const std::size_t> order, std::size_t k,
                               double rho, double gamma);

std::vector<double> fnm(std::span<const double> distances, double sigma, double alpha);
std::vector<double> grnn(std::span<const double> distances, std::span<const double> sigmas);

/// Ascending order of distances, ties by index.
std::vector<std::size_t> neighbor_order(std::span<const double> distances);

}  // namespace kernels

void validate_config(const ModelConfig& config, std::size_t n, std::size_t pair_count);

}  // namespace psfm
