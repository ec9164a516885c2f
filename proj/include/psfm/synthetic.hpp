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

#include <cstdint>
#include <string>

#include "psfm/series.hpp"

namespace psfm::synthetic {

/// Linear trend times a fixed annual shape times (1 + noise).
struct TrendSeasonalSpec {
    int start_year = 1995;
    int years = 20;
    double level = 40000.0;         // MWh at the first month
    double growth_per_year = 0.02;  // linear trend, fraction of level per year
    double noise = 0.02;            // standard deviation of the multiplicative noise
    std::uint64_t seed = 1;
};

/// Annual shape factor for month 1..12 (mean one, winter peak, summer trough).
double annual_shape(int month);

MonthlyLoadSeries trend_seasonal(const std::string& country, const TrendSeasonalSpec& spec);

/// The annual shape times `level`, repeated `years` times with no trend or noise.
MonthlyLoadSeries tiled_annual(const std::string& country, int start_year, int years, double level = 40000.0);

/// Independent positive noise around `level`; carries no shape information.
MonthlyLoadSeries white_noise(const std::string& country, int start_year, int years, std::uint64_t seed,
                              double level = 40000.0, double relative_sd = 0.05);

}  // namespace psfm::synthetic
