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
#include <span>
#include <vector>

#include "psfm/models.hpp"
#include "psfm/pattern.hpp"

namespace psfm {

/// Hyperparameter grids. `a` scales the median pairwise distance into sigma
/// (fnm, grnn); `b` scales the Scott bandwidths (nwe).
struct GridSpec {
    std::vector<std::size_t> n_values;
    std::vector<std::size_t> k_values;
    std::vector<double> a_values;
    std::vector<double> b_values;

    /// n = 3..24, k = 1..50, a = 0.02..1 step 0.02, b = 0.15..2 step 0.05.
    static GridSpec defaults();
    void validate() const;
};

double median_pairwise_distance(const PatternDataset& dataset);

struct ScottBandwidths {
    std::vector<double> h;    // s_t * N^(-1/(n+4)), population standard deviation s_t
    bool degenerate = false;  // some component has zero spread
};

ScottBandwidths scott_bandwidths(const PatternDataset& dataset);

/// sigma = a * median pairwise distance.
double sigma_from_a(double a, const PatternDataset& dataset);

/// h_t = b * Scott bandwidth of component t.
std::vector<double> bandwidths_from_b(double b, const PatternDataset& dataset);

/**
 * Leave-one-out cross-validation over the pattern pairs of one dataset.
 *
 * Each fold removes a single pair, predicts its y-pattern from the others,
 * decodes prediction and target with that pair's coding variables and scores
 * the absolute percentage error of every month. The result is the mean APE
 * in percent. Pairwise distances are computed once at construction, so one
 * evaluator serves a whole hyperparameter sweep at fixed n.
 */
class LoocvEvaluator {
public:
    explicit LoocvEvaluator(const PatternDataset& dataset);

    [[nodiscard]] double error(const ModelConfig& config) const;
    [[nodiscard]] std::size_t size() const noexcept { return dataset_.size(); }

private:
    PatternDataset dataset_;
    std::vector<double> distances_;                // N x N, row-major
    std::vector<std::vector<std::size_t>> orders_; // per fold, ascending, excluding the fold itself
    std::vector<std::vector<double>> actuals_;     // decoded target per pair
    std::vector<double> ys_;                       // N x m y-patterns, row-major

    [[nodiscard]] std::vector<double> fold_weights(std::size_t fold, const ModelConfig& config) const;
};

double loocv_error(const PatternDataset& dataset, const ModelConfig& config);

struct GridPoint {
    std::size_t n = 0;
    ModelConfig config;
    double scale = 0.0;  // a (fnm, grnn) or b (nwe); 0 for the knn kinds
    double error = 0.0;
};

struct TuneResult {
    ModelConfig best_config;
    EncodingSpec best_spec;
    double best_scale = 0.0;
    double cv_error = 0.0;
    std::vector<GridPoint> grid_trace;
};

/// Exhaustive search over n and the kind's own hyperparameter. knn_weighted
/// uses rho = 1, gamma = 0; fnm uses alpha = 2. Ties go to the smaller n, then
/// the smaller k/a/b. Grid points that cannot be evaluated (series too short
/// for n, k above the fold size, flat data) are skipped.
TuneResult grid_search(std::span<const double> values, const EncodingSpec& spec_template, ModelKind kind,
                       const GridSpec& grid, unsigned jobs = 1);

}  // namespace psfm
