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

// psfm: command-line driver for pattern similarity-based forecasting of
// monthly demand series.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "psfm/bench.hpp"
#include "psfm/diagnostics.hpp"
#include "psfm/series.hpp"
#include "psfm/synthetic.hpp"
#include "psfm/tuner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "3:24", "0.02:1:0.02" or "3,6,12".
std::vector<double> parse_range(const std::string& text, double default_step) {
    if (text.find(':') == std::string::npos) {
        std::vector<double> out;
        for (const auto& item : split(text, ',')) out.push_back(psfm::parse_double(item));
        if (out.empty()) throw std::invalid_argument("empty grid '" + text + "'");
        return out;
    }
    const auto parts = split(text, ':');
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("bad range '" + text + "'");
    const double lo = psfm::parse_double(parts[0]);
    const double hi = psfm::parse_double(parts[1]);
    const double step = parts.size() == 3 ? psfm::parse_double(parts[2]) : default_step;
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad range '" + text + "'");
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out;
    for (long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

std::vector<std::size_t> parse_int_range(const std::string& text) {
    std::vector<std::size_t> out;
    for (double v : parse_range(text, 1.0)) {
        if (v < 1.0 || v != std::floor(v)) throw std::invalid_argument("grid values must be positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

struct Options {
    std::string data;
    std::string config;
    int test_year = 2014;
    std::string models = "knn,knnw,fnm,nwe,grnn,naive";
    std::size_t n = 0;  // 0: search the n grid
    std::size_t tau = 1;
    std::string x_def = "standardized";
    std::string y_def = "standardized";
    std::string coding = "history";
    std::string grid_n, grid_k, grid_a, grid_b;
    std::string out;
    unsigned jobs = 1;
    std::uint64_t seed = 1;
};

psfm::RunConfig make_run_config(const Options& o) {
    psfm::RunConfig c;
    c.data_path = o.data;
    c.test_year = o.test_year;
    c.models = split(o.models, ',');
    c.encoding.x_definition = psfm::parse_pattern_definition(o.x_def);
    c.encoding.y_definition = psfm::parse_pattern_definition(o.y_def);
    c.encoding.tau = o.tau;
    if (!o.grid_n.empty()) c.grid.n_values = parse_int_range(o.grid_n);
    if (o.n > 0) c.grid.n_values = {o.n};
    if (!o.grid_k.empty()) c.grid.k_values = parse_int_range(o.grid_k);
    if (!o.grid_a.empty()) c.grid.a_values = parse_range(o.grid_a, 0.02);
    if (!o.grid_b.empty()) c.grid.b_values = parse_range(o.grid_b, 0.05);
    if (o.coding == "history") {
        c.coding_source = psfm::CodingSource::history;
    } else if (o.coding == "drift") {
        c.coding_source = psfm::CodingSource::drift;
    } else if (o.coding.starts_with("external:")) {
        c.coding_source = psfm::CodingSource::external_file;
        c.coding_path = o.coding.substr(9);
        if (!std::filesystem::exists(c.coding_path))
            throw psfm::DataError("coding file not found: " + c.coding_path);
    } else {
        throw std::invalid_argument("--coding must be history, drift or external:<path>");
    }
    c.output_dir = o.out;
    c.jobs = o.jobs;
    c.validate();
    return c;
}

void add_data_option(CLI::App* cmd, Options& o) {
    cmd->add_option("--data", o.data, "CSV with country,year,month,demand_mwh rows");
    cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--config", o.config, "key = value file with the same keys as the flags")
        ->check(CLI::ExistingFile);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Fills options not given on the command line from a `key = value` file.
// Blank lines and lines starting with '#' are skipped.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw psfm::DataError("cannot open config file " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        const std::string where = path + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw psfm::DataError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key == "config") throw psfm::DataError(where + "config files cannot include other config files");
        auto* opt = cmd->get_option_no_throw("--" + key);
        if (!opt) throw psfm::DataError(where + "unknown key '" + key + "' for " + cmd->get_name());
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

int cmd_validate(const Options& o) {
    std::ifstream in(o.data);
    if (!in) {
        std::cerr << "error: cannot open " << o.data << '\n';
        return kExitValidation;
    }
    const auto rows = psfm::parse_csv_rows(in, o.data);
    if (rows.empty()) {
        std::cerr << "error: " << o.data << ": no observations\n";
        return kExitValidation;
    }
    const auto checks = psfm::validate_rows(rows);
    std::size_t invalid = 0;
    std::cout << "country,months,status\n";
    for (const auto& c : checks) {
        std::cout << c.country_code << ',' << c.row_count << ',' << (c.problems.empty() ? "ok" : "invalid") << '\n';
        for (const auto& p : c.problems) std::cerr << c.country_code << ": " << p << '\n';
        if (!c.problems.empty()) ++invalid;
    }
    std::cerr << checks.size() << " series, " << invalid << " invalid\n";
    return invalid == 0 ? kExitOk : kExitValidation;
}

int cmd_assumption(const Options& o) {
    const auto data = psfm::load_csv(o.data);
    psfm::EncodingSpec spec;
    spec.x_definition = psfm::parse_pattern_definition(o.x_def);
    spec.y_definition = psfm::parse_pattern_definition(o.y_def);
    spec.tau = o.tau;
    if (o.n > 0) spec.n = o.n;
    spec.validate();
    const auto rows = psfm::run_assumption(data, spec, o.jobs);
    if (o.out.empty()) {
        psfm::write_assumption_csv(std::cout, rows);
    } else {
        std::filesystem::create_directories(o.out);
        std::ofstream f(std::filesystem::path(o.out) / "assumption.csv");
        psfm::write_assumption_csv(f, rows);
    }
    for (const auto& r : rows)
        if (!r.error.empty()) std::cerr << r.country << ": " << r.error << '\n';
    return kExitOk;
}

int cmd_forecast(const Options& o) {
    const auto config = make_run_config(o);
    const auto data = psfm::load_csv(o.data);
    const auto report = psfm::run_benchmark(data, config);
    if (!o.out.empty()) psfm::write_report_files(report, o.out);
    psfm::write_aggregate_csv(std::cout, report.aggregate);

    std::size_t failures = 0;
    std::size_t attempts = 0;
    for (const auto& c : report.countries) {
        if (!c.error.empty()) {
            std::cerr << c.country << ": " << c.error << '\n';
            failures += config.models.size();
            attempts += config.models.size();
            continue;
        }
        for (const auto& m : c.models) {
            ++attempts;
            if (m.ok()) continue;
            ++failures;
            std::cerr << c.country << " " << m.model << ": " << m.error << '\n';
        }
    }
    if (failures > 0) std::cerr << failures << " of " << attempts << " country/model runs failed\n";
    return attempts > 0 && failures == attempts ? kExitRuntime : kExitOk;
}

int cmd_rank(const std::vector<std::string>& paths, const std::string& out) {
    std::vector<psfm::EvaluationReport> reports;
    for (const auto& p : paths) {
        std::ifstream in(p);
        if (!in) throw psfm::DataError("cannot open " + p);
        reports.push_back(psfm::report_from_json(nlohmann::ordered_json::parse(in)));
    }
    const auto merged = psfm::merge_reports(reports);
    if (out.empty()) {
        psfm::write_ranking_csv(std::cout, merged.ranking);
    } else {
        std::ofstream f(out);
        psfm::write_ranking_csv(f, merged.ranking);
    }
    return kExitOk;
}

int cmd_synth(const std::string& out, const std::string& kind, int countries, int years, int start_year,
              std::uint64_t seed) {
    psfm::SeriesCollection collection;
    for (int i = 0; i < countries; ++i) {
        const std::string code = (i < 9 ? "S0" : "S") + std::to_string(i + 1);
        if (kind == "trend") {
            psfm::synthetic::TrendSeasonalSpec spec;
            spec.start_year = start_year;
            spec.years = years;
            spec.seed = seed + static_cast<std::uint64_t>(i);
            spec.level = 20000.0 + 5000.0 * i;
            collection.add(psfm::synthetic::trend_seasonal(code, spec));
        } else if (kind == "tiled") {
            collection.add(psfm::synthetic::tiled_annual(code, start_year, years, 20000.0 + 5000.0 * i));
        } else if (kind == "noise") {
            collection.add(psfm::synthetic::white_noise(code, start_year, years, seed + static_cast<std::uint64_t>(i)));
        } else {
            throw std::invalid_argument("--kind must be trend, tiled or noise");
        }
    }
    if (out.empty()) psfm::write_csv(std::cout, collection);
    else psfm::save_csv(out, collection);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pattern similarity-based forecasting of monthly demand series"};
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate", "check the data file and report per-country status");
    add_data_option(validate, o);

    auto* assumption = app.add_subcommand("assumption", "chi-squared test of the pattern similarity assumption");
    add_data_option(assumption, o);
    assumption->add_option("--n", o.n, "x-pattern length (default 12)");
    assumption->add_option("--tau", o.tau, "forecast horizon in months");
    assumption->add_option("--out", o.out, "output directory (default: stdout)");

    auto* forecast = app.add_subcommand("forecast", "tune, forecast the test year and score every model");
    add_data_option(forecast, o);
    forecast->add_option("--test-year", o.test_year, "year to forecast");
    forecast->add_option("--models", o.models, "comma list of knn,knnw,fnm,nwe,grnn,naive");
    forecast->add_option("--n", o.n, "fix the x-pattern length instead of searching it");
    forecast->add_option("--tau", o.tau, "forecast horizon in months");
    forecast->add_option("--x-pattern", o.x_def, "raw|centered|ratio|standardized");
    forecast->add_option("--y-pattern", o.y_def, "raw|centered|ratio|standardized");
    forecast->add_option("--coding", o.coding, "history | drift | external:<path>");
    forecast->add_option("--grid-n", o.grid_n, "n grid, e.g. 3:24");
    forecast->add_option("--grid-k", o.grid_k, "k grid, e.g. 1:50");
    forecast->add_option("--grid-a", o.grid_a, "sigma scale grid, e.g. 0.02:1:0.02");
    forecast->add_option("--grid-b", o.grid_b, "bandwidth scale grid, e.g. 0.15:2:0.05");
    forecast->add_option("--out", o.out, "output directory for report.json and CSVs");

    std::vector<std::string> report_paths;
    std::string rank_out;
    auto* rank = app.add_subcommand("rank", "rank models across one or more report.json files");
    rank->add_option("reports", report_paths, "report.json files")->required()->check(CLI::ExistingFile);
    rank->add_option("--out", rank_out, "output CSV (default: stdout)");

    std::string synth_out;
    std::string synth_kind = "trend";
    int synth_countries = 10;
    int synth_years = 20;
    int synth_start = 1995;
    auto* synth = app.add_subcommand("synth", "write a seeded synthetic corpus");
    synth->add_option("--out", synth_out, "output CSV (default: stdout)");
    synth->add_option("--kind", synth_kind, "trend | tiled | noise");
    synth->add_option("--countries", synth_countries)->check(CLI::PositiveNumber);
    synth->add_option("--years", synth_years)->check(CLI::PositiveNumber);
    synth->add_option("--start-year", synth_start);
    synth->add_option("--seed", o.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        for (auto* cmd : {validate, assumption, forecast}) {
            if (!*cmd) continue;
            if (!o.config.empty()) apply_config_file(cmd, o.config);
            if (o.data.empty()) throw std::invalid_argument("--data is required");
        }
        if (*validate) return cmd_validate(o);
        if (*assumption) return cmd_assumption(o);
        if (*forecast) return cmd_forecast(o);
        if (*rank) return cmd_rank(report_paths, rank_out);
        if (*synth) return cmd_synth(synth_out, synth_kind, synth_countries, synth_years, synth_start, o.seed);
    } catch (const psfm::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
