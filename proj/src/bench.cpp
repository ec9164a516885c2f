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

#include "psfm/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "psfm/parallel.hpp"

namespace psfm {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void RunConfig::validate() const {
    if (models.empty()) throw std::invalid_argument("no models selected");
    for (const auto& m : models)
        if (m != kBaselineModel) parse_model_kind(m);
    encoding.validate();
    if (encoding.m != 12) throw std::invalid_argument("the benchmark forecasts one calendar year: m must be 12");
    grid.validate();
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    if (coding_source == CodingSource::external_file && coding_path.empty())
        throw std::invalid_argument("external coding requires a file path");
}

// ---------------------------------------------------------------------------

CodingForecast naive_coding_forecast(std::span<const CodingVariables> history, NaiveCodingMethod method) {
    CodingForecast out;
    if (method == NaiveCodingMethod::last) {
        if (history.empty()) throw std::invalid_argument("naive_coding_forecast: 'last' needs at least 1 value");
        out.coding = history.back();
        return out;
    }
    if (history.size() < 2) throw std::invalid_argument("naive_coding_forecast: 'drift' needs at least 2 values");
    const auto& last = history[history.size() - 1];
    const auto& prev = history[history.size() - 2];
    out.coding.mean = last.mean + (last.mean - prev.mean);
    out.coding.dispersion = last.dispersion + (last.dispersion - prev.dispersion);
    if (out.coding.dispersion < 0.0) {
        out.coding.dispersion = 0.0;
        out.clamped = true;
    }
    return out;
}

std::vector<std::pair<int, CodingVariables>> annual_coding_history(const MonthlyLoadSeries& series) {
    std::vector<std::pair<int, CodingVariables>> out;
    const auto values = series.values();
    const auto& obs = series.observations();
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (obs[i].when.month != 1 || i + 12 > obs.size()) continue;
        out.emplace_back(obs[i].when.year, coding_of(std::span<const double>(values).subspan(i, 12)));
    }
    return out;
}

ExternalCoding read_external_coding(std::istream& in, const std::string& source) {
    ExternalCoding out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.starts_with("country,")) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        auto fail = [&](const std::string& what) {
            return DataError(source + ":" + std::to_string(line_no) + ": " + what);
        };
        if (fields.size() != 4) throw fail("expected country,year,mean_mwh,dispersion_mwh");
        try {
            const int year = std::stoi(fields[1]);
            CodingVariables c{parse_double(fields[2]), parse_double(fields[3])};
            if (!(c.dispersion >= 0.0) || !std::isfinite(c.mean)) throw fail("invalid coding variables");
            if (!out.emplace(std::make_pair(fields[0], year), c).second)
                throw fail("duplicate entry for " + fields[0] + " " + fields[1]);
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
    }
    return out;
}

ExternalCoding load_external_coding(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_external_coding(in, path);
}

// ---------------------------------------------------------------------------
// ranking and aggregation

const ModelOutcome* CountryReport::find(const std::string& model) const {
    for (const auto& m : models)
        if (m.model == model) return &m;
    return nullptr;
}

std::vector<double> mid_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t r = i; r <= j; ++r) ranks[order[r]] = rank;
        i = j + 1;
    }
    return ranks;
}

std::vector<AggregateRow> compute_aggregate(const std::vector<CountryReport>& countries,
                                            const std::vector<std::string>& model_order) {
    std::vector<AggregateRow> out;
    for (const auto& model : model_order) {
        AggregateRow row;
        row.model = model;
        for (const auto& c : countries) {
            const auto* m = c.find(model);
            if (!m || !m->ok()) continue;
            ++row.countries;
            row.mean.median_ape += m->metrics.median_ape;
            row.mean.mape += m->metrics.mape;
            row.mean.iqr_ape += m->metrics.iqr_ape;
            row.mean.rmse += m->metrics.rmse;
        }
        if (row.countries > 0) {
            const double n = static_cast<double>(row.countries);
            row.mean.median_ape /= n;
            row.mean.mape /= n;
            row.mean.iqr_ape /= n;
            row.mean.rmse /= n;
        }
        out.push_back(row);
    }
    return out;
}

Ranking compute_ranking(const std::vector<CountryReport>& countries, const std::vector<AggregateRow>& aggregate,
                        const std::vector<std::string>& model_order) {
    Ranking ranking;
    auto by_value = [](std::vector<RankEntry>& v) {
        std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
    };

    for (const auto& row : aggregate)
        if (row.countries > 0) ranking.by_median_ape.push_back({row.model, row.mean.median_ape});
    by_value(ranking.by_median_ape);

    std::vector<double> rank_sum(model_order.size(), 0.0);
    for (const auto& c : countries) {
        std::vector<double> mape;
        for (const auto& model : model_order) {
            const auto* m = c.find(model);
            if (!m || !m->ok()) break;
            mape.push_back(m->metrics.mape);
        }
        if (mape.size() != model_order.size()) continue;
        const auto ranks = mid_ranks(mape);
        for (std::size_t i = 0; i < ranks.size(); ++i) rank_sum[i] += ranks[i];
        ++ranking.ranked_countries;
    }
    if (ranking.ranked_countries > 0) {
        for (std::size_t i = 0; i < model_order.size(); ++i)
            ranking.by_mean_rank.push_back({model_order[i], rank_sum[i] / static_cast<double>(ranking.ranked_countries)});
        by_value(ranking.by_mean_rank);
    }
    return ranking;
}

// ---------------------------------------------------------------------------
// per-country evaluation

namespace {

std::size_t min_grid_n(const GridSpec& grid) { return *std::min_element(grid.n_values.begin(), grid.n_values.end()); }

ModelOutcome evaluate_model(const std::string& model, const MonthlyLoadSeries& train, const RunConfig& config,
                            std::span<const double> actual, std::optional<CodingForecast> coding) {
    ModelOutcome out;
    out.model = model;
    try {
        const auto values = train.values();
        if (model == kBaselineModel) {
            out.forecast = seasonal_naive(values, actual.size());
        } else {
            const auto kind = parse_model_kind(model);
            EncodingSpec spec = config.encoding;
            spec.coding_mode = config.coding_source == CodingSource::history ? CodingMode::history
                                                                              : CodingMode::external;
            // Y of the last usable anchor must start in January of the test year.
            if (values.size() < spec.tau) throw std::invalid_argument("series shorter than the horizon");
            const auto usable = std::span<const double>(values).first(values.size() - (spec.tau - 1));
            const auto tuned = grid_search(usable, spec, kind, config.grid, 1);
            std::optional<CodingVariables> override_coding;
            if (coding) {
                override_coding = coding->coding;
                out.coding_clamped = coding->clamped;
            }
            const auto result = forecast_detailed(usable, tuned.best_config, tuned.best_spec, override_coding);
            out.forecast = result.demands;
            out.n = tuned.best_spec.n;
            out.k = (kind == ModelKind::knn || kind == ModelKind::knn_weighted) ? tuned.best_config.k : 0;
            out.scale = tuned.best_scale;
            out.sigma = (kind == ModelKind::fnm || kind == ModelKind::grnn) ? tuned.best_config.sigma : 0.0;
            out.cv_error = tuned.cv_error;
        }
        out.metrics = error_metrics(actual, out.forecast);
    } catch (const std::exception& e) {
        out.error = e.what();
        out.forecast.clear();
    }
    return out;
}

}  // namespace

CountryReport evaluate_country(const MonthlyLoadSeries& series, const RunConfig& config,
                               const ExternalCoding* external) {
    CountryReport report;
    report.country = series.country_code();
    std::optional<std::pair<MonthlyLoadSeries, MonthlyLoadSeries>> split;
    try {
        const std::size_t min_history =
            min_grid_n(config.grid) + config.encoding.m + config.encoding.tau - 1;
        split.emplace(split_train_test(series, config.test_year, min_history));
    } catch (const std::exception& e) {
        report.error = e.what();
        return report;
    }
    const auto& [train, test] = *split;
    report.actual = test.values();

    try {
        EncodingSpec assumption_spec = config.encoding;
        assumption_spec.coding_mode = CodingMode::history;
        const auto samples = distance_samples(build_pairs(train, assumption_spec));
        report.chi_squared = chi_squared_independence(samples);
    } catch (const std::exception& e) {
        report.chi_squared_error = e.what();
    }

    std::optional<CodingForecast> coding;
    std::string coding_error;
    try {
        if (config.coding_source == CodingSource::external_file) {
            if (!external) throw std::invalid_argument("external coding file not loaded");
            auto it = external->find({report.country, config.test_year});
            if (it == external->end())
                throw std::invalid_argument("no external coding variables for " + report.country + " " +
                                            std::to_string(config.test_year));
            coding = CodingForecast{it->second, false};
        } else if (config.coding_source == CodingSource::drift) {
            std::vector<CodingVariables> history;
            for (const auto& [year, c] : annual_coding_history(train)) history.push_back(c);
            coding = naive_coding_forecast(history, NaiveCodingMethod::drift);
        }
    } catch (const std::exception& e) {
        coding_error = e.what();
    }

    for (const auto& model : config.models) {
        if (!coding_error.empty() && model != kBaselineModel) {
            ModelOutcome failed;
            failed.model = model;
            failed.error = coding_error;
            report.models.push_back(std::move(failed));
            continue;
        }
        report.models.push_back(evaluate_model(model, train, config, report.actual, coding));
    }
    return report;
}

EvaluationReport run_benchmark(const SeriesCollection& collection, const RunConfig& config) {
    config.validate();
    std::optional<ExternalCoding> external;
    if (config.coding_source == CodingSource::external_file) external = load_external_coding(config.coding_path);

    std::vector<const MonthlyLoadSeries*> series;
    for (const auto& [code, s] : collection) series.push_back(&s);

    EvaluationReport report;
    report.test_year = config.test_year;
    report.model_order = config.models;
    report.countries.resize(series.size());
    parallel_for(series.size(), config.jobs, [&](std::size_t i) {
        report.countries[i] = evaluate_country(*series[i], config, external ? &*external : nullptr);
    });
    report.aggregate = compute_aggregate(report.countries, report.model_order);
    report.ranking = compute_ranking(report.countries, report.aggregate, report.model_order);
    return report;
}

EvaluationReport merge_reports(const std::vector<EvaluationReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("merge_reports: no reports");
    EvaluationReport merged;
    merged.test_year = reports.front().test_year;
    std::map<std::string, CountryReport> by_country;
    for (const auto& r : reports) {
        if (r.test_year != merged.test_year)
            throw std::invalid_argument("merge_reports: reports cover different test years");
        for (const auto& model : r.model_order)
            if (std::find(merged.model_order.begin(), merged.model_order.end(), model) == merged.model_order.end())
                merged.model_order.push_back(model);
        for (const auto& c : r.countries) {
            auto [it, inserted] = by_country.emplace(c.country, c);
            if (inserted) continue;
            auto& target = it->second;
            if (target.actual.empty()) target.actual = c.actual;
            if (!target.chi_squared && c.chi_squared) target.chi_squared = c.chi_squared;
            for (const auto& m : c.models) {
                auto existing = std::find_if(target.models.begin(), target.models.end(),
                                             [&](const auto& x) { return x.model == m.model; });
                if (existing != target.models.end()) *existing = m;
                else target.models.push_back(m);
            }
        }
    }
    for (auto& [code, c] : by_country) merged.countries.push_back(std::move(c));
    merged.aggregate = compute_aggregate(merged.countries, merged.model_order);
    merged.ranking = compute_ranking(merged.countries, merged.aggregate, merged.model_order);
    return merged;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

ordered_json metrics_json(const MetricsReport& m) {
    return {{"median_ape", m.median_ape}, {"mape", m.mape}, {"iqr_ape", m.iqr_ape}, {"rmse", m.rmse}};
}

MetricsReport metrics_from(const ordered_json& j) {
    return {j.at("median_ape").get<double>(), j.at("mape").get<double>(), j.at("iqr_ape").get<double>(),
            j.at("rmse").get<double>()};
}

ordered_json chi_json(const ChiSquaredResult& r) {
    ordered_json counts = ordered_json::array();
    for (const auto& row : r.table.counts) counts.push_back(row);
    return {{"statistic", r.statistic},
            {"dof", r.dof},
            {"critical_value", r.critical_value},
            {"reject_null", r.reject_null},
            {"counts", counts},
            {"row_edges", r.table.row_edges},
            {"col_edges", r.table.col_edges}};
}

ChiSquaredResult chi_from(const ordered_json& j) {
    ChiSquaredResult r;
    r.statistic = j.at("statistic").get<double>();
    r.dof = j.at("dof").get<int>();
    r.critical_value = j.at("critical_value").get<double>();
    r.reject_null = j.at("reject_null").get<bool>();
    if (j.contains("counts"))
        for (std::size_t a = 0; a < kCategories; ++a)
            for (std::size_t b = 0; b < kCategories; ++b) r.table.counts[a][b] = j["counts"].at(a).at(b).get<long>();
    if (j.contains("row_edges")) r.table.row_edges = j["row_edges"].get<std::array<double, kCategories - 1>>();
    if (j.contains("col_edges")) r.table.col_edges = j["col_edges"].get<std::array<double, kCategories - 1>>();
    return r;
}

}  // namespace

ordered_json to_json(const EvaluationReport& report) {
    ordered_json j;
    j["test_year"] = report.test_year;
    j["models"] = report.model_order;
    ordered_json countries = ordered_json::object();
    for (const auto& c : report.countries) {
        ordered_json cj;
        if (!c.error.empty()) cj["error"] = c.error;
        cj["actual"] = c.actual;
        if (c.chi_squared) cj["chi_squared"] = chi_json(*c.chi_squared);
        if (!c.chi_squared_error.empty()) cj["chi_squared_error"] = c.chi_squared_error;
        ordered_json models = ordered_json::object();
        for (const auto& m : c.models) {
            ordered_json mj;
            if (!m.ok()) {
                mj["error"] = m.error;
            } else {
                mj["metrics"] = metrics_json(m.metrics);
                mj["forecast"] = m.forecast;
                mj["hyperparameters"] = {{"n", m.n}, {"k", m.k},           {"scale", m.scale},
                                         {"sigma", m.sigma}, {"cv_error", m.cv_error}};
                if (m.coding_clamped) mj["coding_clamped"] = true;
            }
            models[m.model] = mj;
        }
        cj["models"] = models;
        countries[c.country] = cj;
    }
    j["per_country"] = countries;

    ordered_json agg = ordered_json::object();
    for (const auto& row : report.aggregate) {
        auto rj = metrics_json(row.mean);
        rj["countries"] = row.countries;
        agg[row.model] = rj;
    }
    j["aggregate"] = agg;

    auto entries = [](const std::vector<RankEntry>& v, const char* key) {
        ordered_json a = ordered_json::array();
        for (const auto& e : v) a.push_back({{"model", e.model}, {key, e.value}});
        return a;
    };
    j["ranking"] = {{"by_median_ape", entries(report.ranking.by_median_ape, "median_ape")},
                    {"by_mean_rank", entries(report.ranking.by_mean_rank, "mean_rank")},
                    {"ranked_countries", report.ranking.ranked_countries}};
    return j;
}

EvaluationReport report_from_json(const ordered_json& j) {
    EvaluationReport r;
    r.test_year = j.at("test_year").get<int>();
    r.model_order = j.at("models").get<std::vector<std::string>>();
    for (const auto& [code, cj] : j.at("per_country").items()) {
        CountryReport c;
        c.country = code;
        if (cj.contains("error")) c.error = cj["error"].get<std::string>();
        c.actual = cj.value("actual", std::vector<double>{});
        if (cj.contains("chi_squared")) c.chi_squared = chi_from(cj["chi_squared"]);
        if (cj.contains("chi_squared_error")) c.chi_squared_error = cj["chi_squared_error"].get<std::string>();
        if (cj.contains("models"))
            for (const auto& [name, mj] : cj["models"].items()) {
                ModelOutcome m;
                m.model = name;
                if (mj.contains("error")) {
                    m.error = mj["error"].get<std::string>();
                } else {
                    m.metrics = metrics_from(mj.at("metrics"));
                    m.forecast = mj.value("forecast", std::vector<double>{});
                    const auto& h = mj.at("hyperparameters");
                    m.n = h.at("n").get<std::size_t>();
                    m.k = h.at("k").get<std::size_t>();
                    m.scale = h.at("scale").get<double>();
                    m.sigma = h.at("sigma").get<double>();
                    m.cv_error = h.at("cv_error").get<double>();
                    m.coding_clamped = mj.value("coding_clamped", false);
                }
                c.models.push_back(std::move(m));
            }
        r.countries.push_back(std::move(c));
    }
    r.aggregate = compute_aggregate(r.countries, r.model_order);
    r.ranking = compute_ranking(r.countries, r.aggregate, r.model_order);
    return r;
}

// ---------------------------------------------------------------------------
// CSV outputs

void write_ranking_csv(std::ostream& out, const Ranking& ranking) {
    out << "ranking,position,model,value\n";
    for (std::size_t i = 0; i < ranking.by_median_ape.size(); ++i)
        out << "median_ape," << i + 1 << ',' << ranking.by_median_ape[i].model << ','
            << format_double(ranking.by_median_ape[i].value) << '\n';
    for (std::size_t i = 0; i < ranking.by_mean_rank.size(); ++i)
        out << "mean_rank," << i + 1 << ',' << ranking.by_mean_rank[i].model << ','
            << format_double(ranking.by_mean_rank[i].value) << '\n';
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& aggregate) {
    out << "model,countries,median_ape,mape,iqr_ape,rmse\n";
    for (const auto& row : aggregate)
        out << row.model << ',' << row.countries << ',' << format_double(row.mean.median_ape) << ','
            << format_double(row.mean.mape) << ',' << format_double(row.mean.iqr_ape) << ','
            << format_double(row.mean.rmse) << '\n';
}

void write_per_country_csv(std::ostream& out, const EvaluationReport& report) {
    out << "country,model,median_ape,mape,iqr_ape,rmse,n,k,scale,sigma,cv_error,error\n";
    for (const auto& c : report.countries) {
        if (!c.error.empty()) {
            out << c.country << ",,,,,,,,,,,\"" << c.error << "\"\n";
            continue;
        }
        for (const auto& m : c.models) {
            out << c.country << ',' << m.model << ',';
            if (!m.ok()) {
                out << ",,,,,,,,,\"" << m.error << "\"\n";
                continue;
            }
            out << format_double(m.metrics.median_ape) << ',' << format_double(m.metrics.mape) << ','
                << format_double(m.metrics.iqr_ape) << ',' << format_double(m.metrics.rmse) << ',' << m.n << ','
                << m.k << ',' << format_double(m.scale) << ',' << format_double(m.sigma) << ','
                << format_double(m.cv_error) << ",\n";
        }
    }
}

void write_report_files(const EvaluationReport& report, const std::string& dir) {
    const fs::path root(dir);
    fs::create_directories(root / "forecasts");
    auto open = [](const fs::path& p) {
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        return f;
    };
    {
        auto f = open(root / "report.json");
        f << to_json(report).dump(2) << '\n';
    }
    {
        auto f = open(root / "aggregate.csv");
        write_aggregate_csv(f, report.aggregate);
    }
    {
        auto f = open(root / "per_country.csv");
        write_per_country_csv(f, report);
    }
    {
        auto f = open(root / "ranking.csv");
        write_ranking_csv(f, report.ranking);
    }
    for (const auto& c : report.countries)
        for (const auto& m : c.models) {
            if (!m.ok()) continue;
            auto f = open(root / "forecasts" / (c.country + "_" + m.model + ".csv"));
            f << "country,year,month,actual,forecast\n";
            for (std::size_t t = 0; t < m.forecast.size(); ++t)
                f << c.country << ',' << report.test_year << ',' << t + 1 << ',' << format_double(c.actual[t]) << ','
                  << format_double(m.forecast[t]) << '\n';
        }
}

// ---------------------------------------------------------------------------

std::vector<AssumptionRow> run_assumption(const SeriesCollection& collection, const EncodingSpec& spec_in,
                                          unsigned jobs) {
    EncodingSpec spec = spec_in;
    spec.coding_mode = CodingMode::history;
    std::vector<const MonthlyLoadSeries*> series;
    for (const auto& [code, s] : collection) series.push_back(&s);
    std::vector<AssumptionRow> rows(series.size());
    parallel_for(series.size(), jobs, [&](std::size_t i) {
        auto& row = rows[i];
        row.country = series[i]->country_code();
        try {
            const auto dataset = build_pairs(*series[i], spec);
            row.pairs = dataset.size();
            row.result = chi_squared_independence(distance_samples(dataset));
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

void write_assumption_csv(std::ostream& out, const std::vector<AssumptionRow>& rows) {
    out << "country,pairs,statistic,dof,critical_value,reject_null,error\n";
    for (const auto& r : rows) {
        out << r.country << ',' << r.pairs << ',';
        if (r.result)
            out << format_double(r.result->statistic) << ',' << r.result->dof << ','
                << format_double(r.result->critical_value) << ',' << (r.result->reject_null ? "true" : "false") << ",\n";
        else
            out << ",,,,\"" << r.error << "\"\n";
    }
}

}  // namespace psfm
