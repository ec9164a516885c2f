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

#include "psfm/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace psfm::synthetic {

double annual_shape(int month) {
    const double phase = 2.0 * std::numbers::pi * (month - 1) / 12.0;
    return 1.0 + 0.12 * std::cos(phase) + 0.04 * std::cos(2.0 * phase) + 0.02 * std::sin(3.0 * phase);
}

MonthlyLoadSeries trend_seasonal(const std::string& country, const TrendSeasonalSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise);
    std::vector<Observation> obs;
    obs.reserve(static_cast<std::size_t>(spec.years) * 12);
    for (int y = 0; y < spec.years; ++y)
        for (int month = 1; month <= 12; ++month) {
            const double t = y + (month - 1) / 12.0;
            const double trend = spec.level * (1.0 + spec.growth_per_year * t);
            obs.push_back({{spec.start_year + y, month}, trend * annual_shape(month) * (1.0 + noise(rng))});
        }
    return {country, std::move(obs)};
}

MonthlyLoadSeries tiled_annual(const std::string& country, int start_year, int years, double level) {
    std::vector<Observation> obs;
    for (int y = 0; y < years; ++y)
        for (int month = 1; month <= 12; ++month) obs.push_back({{start_year + y, month}, level * annual_shape(month)});
    return {country, std::move(obs)};
}

MonthlyLoadSeries white_noise(const std::string& country, int start_year, int years, std::uint64_t seed,
                              double level, double relative_sd) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, relative_sd);
    std::vector<Observation> obs;
    for (int y = 0; y < years; ++y)
        for (int month = 1; month <= 12; ++month)
            obs.push_back({{start_year + y, month}, level * std::exp(noise(rng))});
    return {country, std::move(obs)};
}

}  // namespace psfm::synthetic
