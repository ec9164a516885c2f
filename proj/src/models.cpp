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

#include "psfm/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace psfm {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::knn: return "knn";
        case ModelKind::knn_weighted: return "knnw";
        case ModelKind::fnm: return "fnm";
        case ModelKind::nwe: return "nwe";
        case ModelKind::grnn: return "grnn";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    for (auto kind : {ModelKind::knn, ModelKind::knn_weighted, ModelKind::fnm, ModelKind::nwe, ModelKind::grnn})
        if (text == to_string(kind)) return kind;
    throw std::invalid_argument("unknown model kind '" + std::string(text) + "' (expected knn, knnw, fnm, nwe, grnn)");
}

ModelConfig ModelConfig::knn(std::size_t k) {
    ModelConfig c;
    c.kind = ModelKind::knn;
    c.k = k;
    return c;
}

ModelConfig ModelConfig::knn_weighted(std::size_t k, double rho, double gamma) {
    ModelConfig c;
    c.kind = ModelKind::knn_weighted;
    c.k = k;
    c.rho = rho;
    c.gamma = gamma;
    return c;
}

ModelConfig ModelConfig::fnm(double sigma, double alpha) {
    ModelConfig c;
    c.kind = ModelKind::fnm;
    c.sigma = sigma;
    c.alpha = alpha;
    return c;
}

ModelConfig ModelConfig::nwe(std::vector<double> bandwidths) {
    ModelConfig c;
    c.kind = ModelKind::nwe;
    c.bandwidths = std::move(bandwidths);
    return c;
}

ModelConfig ModelConfig::grnn(double sigma) {
    ModelConfig c;
    c.kind = ModelKind::grnn;
    c.sigma = sigma;
    return c;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance: length mismatch (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    double sum = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        const double d = a[t] - b[t];
        sum += d * d;
    }
    return sum;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

// ---------------------------------------------------------------------------
// kernels

namespace kernels {

std::vector<std::size_t> neighbor_order(std::span<const double> distances) {
    std::vector<std::size_t> order(distances.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
    return order;
}

std::vector<double> normalize_or_nearest(std::vector<double> raw, std::span<const double> exponents) {
    double sum = 0.0;
    for (double v : raw) sum += v;
    if (sum > 0.0 && std::isfinite(sum)) {
        for (double& v : raw) v /= sum;
        return raw;
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < exponents.size(); ++i)
        if (exponents[i] < exponents[best]) best = i;
    std::fill(raw.begin(), raw.end(), 0.0);
    if (!raw.empty()) raw[best] = 1.0;
    return raw;
}

std::vector<double> knn_sorted(std::span<const double> distances, std::span<const std::size_t> order, std::size_t k,
                               double rho, double gamma) {
    const std::size_t count = distances.size();
    if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
    if (k > count)
        throw std::invalid_argument("knn: k = " + std::to_string(k) + " exceeds the " + std::to_string(count) +
                                    " training pairs");
    std::vector<double> w(count, 0.0);
    if (rho == 0.0) {
        for (std::size_t r = 0; r < k; ++r) w[order[r]] = 1.0 / static_cast<double>(k);
        return w;
    }
    const double dk = distances[order[k - 1]];
    double sum = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
        const double ratio = dk > 0.0 ? distances[order[r]] / dk : 0.0;
        // gamma = -1 makes the fraction identically one (0/0 at ratio = 1 by continuity).
        const double frac = gamma == -1.0 ? 1.0 : (1.0 - ratio) / (1.0 + gamma * ratio);
        const double v = rho * (frac - 1.0) + 1.0;
        w[order[r]] = v;
        sum += v;
    }
    if (sum > 0.0) {
        for (std::size_t r = 0; r < k; ++r) w[order[r]] /= sum;
    } else {
        // rho = 1 and every neighbor sits at the k-th distance: they are interchangeable.
        for (std::size_t r = 0; r < k; ++r) w[order[r]] = 1.0 / static_cast<double>(k);
    }
    return w;
}

std::vector<double> knn(std::span<const double> distances, std::size_t k, double rho, double gamma) {
    const auto order = neighbor_order(distances);
    return knn_sorted(distances, order, k, rho, gamma);
}

std::vector<double> fnm(std::span<const double> distances, double sigma, double alpha) {
    std::vector<double> exponents(distances.size());
    std::vector<double> mu(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) {
        const double u = distances[i] / sigma;
        exponents[i] = alpha == 2.0 ? u * u : std::pow(u, alpha);  // pow(u, 2) rounds to u * u anyway
        mu[i] = std::exp(-exponents[i]);
    }
    return normalize_or_nearest(std::move(mu), exponents);
}

std::vector<double> grnn(std::span<const double> distances, std::span<const double> sigmas) {
    std::vector<double> exponents(distances.size());
    std::vector<double> g(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) {
        exponents[i] = distances[i] * distances[i] / (sigmas[i] * sigmas[i]);
        g[i] = std::exp(-exponents[i]);
    }
    return normalize_or_nearest(std::move(g), exponents);
}

}  // namespace kernels

// ---------------------------------------------------------------------------

namespace {

std::vector<double> distances_to(std::span<const double> query, const PatternDataset& dataset) {
    std::vector<double> d(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) d[i] = euclidean_distance(query, dataset.pairs[i].x);
    return d;
}

void require_nonempty(const PatternDataset& dataset, const char* what) {
    if (dataset.empty()) throw std::invalid_argument(std::string(what) + ": empty dataset");
}

}  // namespace

void validate_config(const ModelConfig& config, std::size_t n, std::size_t pair_count) {
    switch (config.kind) {
        case ModelKind::knn:
        case ModelKind::knn_weighted:
            if (config.k < 1) throw std::invalid_argument("knn: k must be >= 1");
            if (config.k > pair_count)
                throw std::invalid_argument("knn: k = " + std::to_string(config.k) + " exceeds the " +
                                            std::to_string(pair_count) + " training pairs");
            if (config.kind == ModelKind::knn_weighted) {
                if (!(config.rho >= 0.0 && config.rho <= 1.0)) throw std::invalid_argument("knn: rho must be in [0, 1]");
                if (!(config.gamma >= -1.0)) throw std::invalid_argument("knn: gamma must be >= -1");
            }
            break;
        case ModelKind::fnm:
            if (!(config.sigma > 0.0)) throw std::invalid_argument("fnm: sigma must be > 0");
            if (!(config.alpha > 0.0)) throw std::invalid_argument("fnm: alpha must be > 0");
            break;
        case ModelKind::nwe:
            if (config.bandwidths.size() != n)
                throw std::invalid_argument("nwe: expected " + std::to_string(n) + " bandwidths, got " +
                                            std::to_string(config.bandwidths.size()));
            for (double h : config.bandwidths)
                if (!(h > 0.0)) throw std::invalid_argument("nwe: bandwidths must be > 0");
            break;
        case ModelKind::grnn:
            if (config.per_neuron_sigmas) {
                if (config.per_neuron_sigmas->size() != pair_count)
                    throw std::invalid_argument("grnn: expected " + std::to_string(pair_count) + " sigmas, got " +
                                                std::to_string(config.per_neuron_sigmas->size()));
                for (double s : *config.per_neuron_sigmas)
                    if (!(s > 0.0)) throw std::invalid_argument("grnn: sigmas must be > 0");
            } else if (!(config.sigma > 0.0)) {
                throw std::invalid_argument("grnn: sigma must be > 0");
            }
            break;
    }
}

WeightVector knn_weights(std::span<const double> query, const PatternDataset& dataset, std::size_t k, double rho,
                         double gamma) {
    require_nonempty(dataset, "knn_weights");
    validate_config(ModelConfig::knn_weighted(k, rho, gamma), query.size(), dataset.size());
    return {kernels::knn(distances_to(query, dataset), k, rho, gamma)};
}

WeightVector fnm_weights(std::span<const double> query, const PatternDataset& dataset, double sigma, double alpha) {
    require_nonempty(dataset, "fnm_weights");
    validate_config(ModelConfig::fnm(sigma, alpha), query.size(), dataset.size());
    return {kernels::fnm(distances_to(query, dataset), sigma, alpha)};
}

WeightVector nwe_weights(std::span<const double> query, const PatternDataset& dataset,
                         std::span<const double> bandwidths) {
    require_nonempty(dataset, "nwe_weights");
    validate_config(ModelConfig::nwe({bandwidths.begin(), bandwidths.end()}), query.size(), dataset.size());
    std::vector<double> exponents(dataset.size());
    std::vector<double> kernel(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto& x = dataset.pairs[i].x;
        if (x.size() != query.size()) throw std::invalid_argument("nwe_weights: pattern length mismatch");
        double e = 0.0;
        for (std::size_t t = 0; t < x.size(); ++t) {
            const double d = query[t] - x[t];
            e += d * d / (2.0 * bandwidths[t] * bandwidths[t]);
        }
        exponents[i] = e;
        kernel[i] = std::exp(-e);
    }
    return {kernels::normalize_or_nearest(std::move(kernel), exponents)};
}

WeightVector grnn_weights(std::span<const double> query, const PatternDataset& dataset,
                          std::span<const double> sigmas) {
    require_nonempty(dataset, "grnn_weights");
    if (sigmas.size() != dataset.size())
        throw std::invalid_argument("grnn: expected " + std::to_string(dataset.size()) + " sigmas, got " +
                                    std::to_string(sigmas.size()));
    for (double s : sigmas)
        if (!(s > 0.0)) throw std::invalid_argument("grnn: sigmas must be > 0");
    return {kernels::grnn(distances_to(query, dataset), sigmas)};
}

WeightVector compute_weights(std::span<const double> query, const PatternDataset& dataset, const ModelConfig& config) {
    switch (config.kind) {
        case ModelKind::knn: return knn_weights(query, dataset, config.k, 0.0, 0.0);
        case ModelKind::knn_weighted: return knn_weights(query, dataset, config.k, config.rho, config.gamma);
        case ModelKind::fnm: return fnm_weights(query, dataset, config.sigma, config.alpha);
        case ModelKind::nwe: return nwe_weights(query, dataset, config.bandwidths);
        case ModelKind::grnn:
            if (config.per_neuron_sigmas) return grnn_weights(query, dataset, *config.per_neuron_sigmas);
            return grnn_weights(query, dataset, std::vector<double>(dataset.size(), config.sigma));
    }
    throw std::logic_error("compute_weights: unhandled model kind");
}

std::vector<double> aggregate(const WeightVector& weights, const PatternDataset& dataset) {
    if (weights.size() != dataset.size())
        throw std::invalid_argument("aggregate: " + std::to_string(weights.size()) + " weights for " +
                                    std::to_string(dataset.size()) + " pairs");
    require_nonempty(dataset, "aggregate");
    std::vector<double> out(dataset.pairs.front().y.size(), 0.0);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const double w = weights[i];
        if (w == 0.0) continue;
        const auto& y = dataset.pairs[i].y;
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += w * y[t];
    }
    return out;
}

ForecastResult forecast_detailed(std::span<const double> values, const ModelConfig& config, const EncodingSpec& spec,
                                 std::optional<CodingVariables> coding_override) {
    spec.validate();
    if (values.size() < spec.n)
        throw std::invalid_argument("forecast: need at least " + std::to_string(spec.n) +
                                    " months for the query window, have " + std::to_string(values.size()));
    if (spec.coding_mode == CodingMode::external && !coding_override)
        throw std::invalid_argument("forecast: external coding mode requires supplied coding variables");

    const auto dataset = build_pairs(values, spec);
    const auto query = encode_x(values.subspan(values.size() - spec.n), spec);

    ForecastResult result;
    result.weights = compute_weights(query.pattern, dataset, config);
    result.pattern = aggregate(result.weights, dataset);
    result.coding = spec.coding_mode == CodingMode::history ? query.coding : *coding_override;
    result.demands = decode_y(result.pattern, result.coding, spec);
    return result;
}

std::vector<double> forecast(const MonthlyLoadSeries& series, const ModelConfig& config, const EncodingSpec& spec,
                             std::optional<CodingVariables> coding_override) {
    const auto values = series.values();
    return forecast_detailed(values, config, spec, coding_override).demands;
}

}  // namespace psfm
