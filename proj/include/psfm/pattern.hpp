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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "psfm/series.hpp"

namespace psfm {

/// How a window of demands is mapped onto a pattern.
enum class PatternDefinition {
    raw,           // E
    centered,      // E - mean
    ratio,         // E / mean
    standardized,  // (E - mean) / D
};

/// Where the y-pattern coding variables come from.
enum class CodingMode {
    history,   // mean and dispersion of the input window X_i
    external,  // mean and dispersion of Y_i for training pairs, supplied for the forecast
};

std::string_view to_string(PatternDefinition def);
std::string_view to_string(CodingMode mode);
PatternDefinition parse_pattern_definition(std::string_view text);

struct EncodingSpec {
    PatternDefinition x_definition = PatternDefinition::standardized;
    PatternDefinition y_definition = PatternDefinition::standardized;
    std::size_t n = 12;    // x-pattern length
    std::size_t m = 12;    // y-pattern length
    std::size_t tau = 1;   // forecast horizon in months
    CodingMode coding_mode = CodingMode::history;

    /// Throws std::invalid_argument when a length or the horizon is zero.
    void validate() const;
    /// Shortest series from which one pair can be built: n + tau + m - 1.
    [[nodiscard]] std::size_t min_series_length() const noexcept { return n + tau + m - 1; }

    friend bool operator==(const EncodingSpec&, const EncodingSpec&) = default;
};

struct CodingVariables {
    double mean = 0.0;
    double dispersion = 0.0;  // sqrt of the sum (not the mean) of squared deviations

    friend bool operator==(const CodingVariables&, const CodingVariables&) = default;
};

/// Mean and root-sum-of-squares dispersion of a window.
CodingVariables coding_of(std::span<const double> window);

struct EncodedWindow {
    std::vector<double> pattern;
    CodingVariables coding;
    bool degenerate = false;  // flat window (D = 0) or zero mean for the ratio form
};

/// Encodes an x-window of length spec.n with its own mean and dispersion.
EncodedWindow encode_x(std::span<const double> window, const EncodingSpec& spec);

/// Encodes a y-window of length spec.m with the supplied coding variables.
/// `degenerate`, when given, is set if the degenerate rule was applied.
std::vector<double> encode_y(std::span<const double> window, const CodingVariables& coding, const EncodingSpec& spec,
                             bool* degenerate = nullptr);

/// Inverse of encode_y for the same coding variables. A forecast from a
/// degenerate coding decodes to the constant mean.
std::vector<double> decode_y(std::span<const double> pattern, const CodingVariables& coding, const EncodingSpec& spec);

/// Definition-level primitives; encode_x/encode_y/decode_y add the length checks.
std::vector<double> encode_with(std::span<const double> window, const CodingVariables& coding, PatternDefinition def,
                                bool* degenerate = nullptr);
std::vector<double> decode_with(std::span<const double> pattern, const CodingVariables& coding,
                                PatternDefinition def);

struct PatternPair {
    std::vector<double> x;
    std::vector<double> y;
    CodingVariables x_coding;
    CodingVariables y_coding;
    std::size_t anchor_index = 0;  // index of the last month of X_i in the source series
    bool degenerate = false;
};

struct PatternDataset {
    std::vector<PatternPair> pairs;
    EncodingSpec spec;
    std::string source_id;

    [[nodiscard]] std::size_t size() const noexcept { return pairs.size(); }
    [[nodiscard]] bool empty() const noexcept { return pairs.empty(); }
};

/// Number of pairs a series of `length` months yields: L - n - m - tau + 2, or 0.
std::size_t pair_count(std::size_t length, const EncodingSpec& spec) noexcept;

/// Builds one pair per anchor i whose X_i (n months ending at i) and Y_i
/// (m months from i + tau) both lie inside the series, stride one month.
/// In external coding mode the training y-patterns are coded with Y_i's own
/// mean and dispersion.
PatternDataset build_pairs(std::span<const double> values, const EncodingSpec& spec, std::string source_id = {});
PatternDataset build_pairs(const MonthlyLoadSeries& series, const EncodingSpec& spec);

}  // namespace psfm
