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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "psfm/diagnostics.hpp"
#include "psfm/models.hpp"
#include "psfm/pattern.hpp"
#include "psfm/series.hpp"
#include "psfm/tuner.hpp"

namespace psfm {

/// Name of the seasonal-naive baseline in model lists and reports.
inline constexpr std::string_view kBaselineModel = "naive";

enum class CodingSource { history, external_file, drift };

struct RunConfig {
    std::string data_path;
    int test_year = 2014;
    std::vector<std::string> models{"knn", "knnw", "fnm", "nwe", "grnn", std::string(kBaselineModel)};
    EncodingSpec encoding;  // n is taken from the grid; m must be 12
    GridSpec grid = GridSpec::defaults();
    CodingSource coding_source = CodingSource::history;
    std::string coding_path;  // for CodingSource::external_file
    std::string output_dir;
    unsigned jobs = 1;

    void validate() const;
};

// ---------------------------------------------------------------------------
// coding variables for the target year

enum class NaiveCodingMethod { last, drift };

struct CodingForecast {
    CodingVariables coding;
    bool clamped = false;  // projected dispersion fell below zero and was set to zero
};

CodingForecast naive_coding_forecast(std::span<const CodingVariables> history, NaiveCodingMethod method);

/// Mean and dispersion of every complete calendar year in the series, in order.
std::vector<std::pair<int, CodingVariables>> annual_coding_history(const MonthlyLoadSeries& series);

/// (country, year) -> forecast coding variables, from
/// `country,year,mean_mwh,dispersion_mwh` rows.
using ExternalCoding = std::map<std::pair<std::string, int>, CodingVariables>;

ExternalCoding read_external_coding(std::istream& in, const std::string& source = "<stream>");
ExternalCoding load_external_coding(const std::string& path);

// ---------------------------------------------------------------------------
// reports

struct ModelOutcome {
    std::string model;
    std::string error;  // empty on success
    MetricsReport metrics;
    std::vector<double> forecast;
    std::size_t n = 0;
    std::size_t k = 0;
    double scale = 0.0;  // a or b
    double sigma = 0.0;
    double cv_error = 0.0;
    bool coding_clamped = false;

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
};

struct CountryReport {
    std::string country;
    std::string error;  // whole-country failure (e.g. incomplete test year)
    std::vector<double> actual;
    std::optional<ChiSquaredResult> chi_squared;
    std::string chi_squared_error;
    std::vector<ModelOutcome> models;

    [[nodiscard]] const ModelOutcome* find(const std::string& model) const;
};

struct AggregateRow {
    std::string model;
    std::size_t countries = 0;
    MetricsReport mean;  // plain means of the per-country metrics
};

struct RankEntry {
    std::string model;
    double value = 0.0;
};

struct Ranking {
    std::vector<RankEntry> by_median_ape;  // ascending aggregate median APE
    std::vector<RankEntry> by_mean_rank;   // ascending mean per-country MAPE rank
    std::size_t ranked_countries = 0;      // countries where every model succeeded
};

struct EvaluationReport {
    int test_year = 0;
    std::vector<std::string> model_order;
    std::vector<CountryReport> countries;
    std::vector<AggregateRow> aggregate;
    Ranking ranking;
};

/// Mid-ranks (1-based); tied values share the average of their positions.
std::vector<double> mid_ranks(std::span<const double> values);

std::vector<AggregateRow> compute_aggregate(const std::vector<CountryReport>& countries,
                                            const std::vector<std::string>& model_order);
Ranking compute_ranking(const std::vector<CountryReport>& countries, const std::vector<AggregateRow>& aggregate,
                        const std::vector<std::string>& model_order);

/// Tunes every configured model on the years before the test year, forecasts
/// the test year and scores it. Failures are recorded, never thrown.
CountryReport evaluate_country(const MonthlyLoadSeries& series, const RunConfig& config,
                               const ExternalCoding* external = nullptr);

EvaluationReport run_benchmark(const SeriesCollection& collection, const RunConfig& config);

/// Combines reports (e.g. separate runs per model) and recomputes aggregate
/// and rankings. A (country, model) pair present twice keeps the later entry.
EvaluationReport merge_reports(const std::vector<EvaluationReport>& reports);

nlohmann::ordered_json to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::ordered_json& j);

void write_ranking_csv(std::ostream& out, const Ranking& ranking);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& aggregate);
void write_per_country_csv(std::ostream& out, const EvaluationReport& report);

/// Writes report.json, aggregate.csv, per_country.csv, ranking.csv and
/// forecasts/<country>_<model>.csv under `dir`.
void write_report_files(const EvaluationReport& report, const std::string& dir);

// ---------------------------------------------------------------------------
// assumption test

struct AssumptionRow {
    std::string country;
    std::size_t pairs = 0;
    std::optional<ChiSquaredResult> result;
    std::string error;
};

std::vector<AssumptionRow> run_assumption(const SeriesCollection& collection, const EncodingSpec& spec,
                                          unsigned jobs = 1);
void write_assumption_csv(std::ostream& out, const std::vector<AssumptionRow>& rows);

}  // namespace psfm
