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

#include "psfm/pattern.hpp"

#include <algorithm>
#include <cmath>

namespace psfm {

namespace {

// Relative threshold below which a dispersion (or a ratio mean) counts as zero.
constexpr double kDegenerateTolerance = 1e-12;

double magnitude(std::span<const double> values, double mean) {
    double scale = std::abs(mean);
    for (double v : values) scale = std::max(scale, std::abs(v));
    return scale;
}

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

void require_length(std::span<const double> values, std::size_t expected, const char* what) {
    if (values.size() != expected)
        throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(expected) + ", got " +
                                    std::to_string(values.size()));
}

}  // namespace

std::string_view to_string(PatternDefinition def) {
    switch (def) {
        case PatternDefinition::raw: return "raw";
        case PatternDefinition::centered: return "centered";
        case PatternDefinition::ratio: return "ratio";
        case PatternDefinition::standardized: return "standardized";
    }
    return "?";
}

std::string_view to_string(CodingMode mode) { return mode == CodingMode::history ? "history" : "external"; }

PatternDefinition parse_pattern_definition(std::string_view text) {
    for (auto def : {PatternDefinition::raw, PatternDefinition::centered, PatternDefinition::ratio,
                     PatternDefinition::standardized})
        if (text == to_string(def)) return def;
    throw std::invalid_argument("unknown pattern definition '" + std::string(text) + "'");
}

void EncodingSpec::validate() const {
    if (n < 1) throw std::invalid_argument("EncodingSpec: n must be >= 1");
    if (m < 1) throw std::invalid_argument("EncodingSpec: m must be >= 1");
    if (tau < 1) throw std::invalid_argument("EncodingSpec: tau must be >= 1");
}

CodingVariables coding_of(std::span<const double> window) {
    if (window.empty()) throw std::invalid_argument("coding_of: empty window");
    double sum = 0.0;
    for (double v : window) sum += v;
    const double mean = sum / static_cast<double>(window.size());
    double ss = 0.0;
    for (double v : window) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss)};
}

std::vector<double> encode_with(std::span<const double> window, const CodingVariables& coding, PatternDefinition def,
                                bool* degenerate) {
    require_finite(window, "encode");
    const double scale = magnitude(window, coding.mean);
    bool flat = false;
    std::vector<double> out(window.size());
    switch (def) {
        case PatternDefinition::raw:
            std::copy(window.begin(), window.end(), out.begin());
            break;
        case PatternDefinition::centered:
            for (std::size_t t = 0; t < window.size(); ++t) out[t] = window[t] - coding.mean;
            break;
        case PatternDefinition::ratio:
            if (std::abs(coding.mean) <= kDegenerateTolerance * scale || coding.mean == 0.0) {
                flat = true;
                std::fill(out.begin(), out.end(), 1.0);
            } else {
                for (std::size_t t = 0; t < window.size(); ++t) out[t] = window[t] / coding.mean;
            }
            break;
        case PatternDefinition::standardized:
            if (coding.dispersion <= kDegenerateTolerance * scale * std::sqrt(static_cast<double>(window.size()))) {
                flat = true;
                std::fill(out.begin(), out.end(), 0.0);
            } else {
                for (std::size_t t = 0; t < window.size(); ++t) out[t] = (window[t] - coding.mean) / coding.dispersion;
            }
            break;
    }
    if (degenerate) *degenerate = flat;
    return out;
}

std::vector<double> decode_with(std::span<const double> pattern, const CodingVariables& coding,
                                PatternDefinition def) {
    require_finite(pattern, "decode");
    std::vector<double> out(pattern.size());
    for (std::size_t t = 0; t < pattern.size(); ++t) {
        switch (def) {
            case PatternDefinition::raw: out[t] = pattern[t]; break;
            case PatternDefinition::centered: out[t] = pattern[t] + coding.mean; break;
            case PatternDefinition::ratio: out[t] = pattern[t] * coding.mean; break;
            case PatternDefinition::standardized: out[t] = pattern[t] * coding.dispersion + coding.mean; break;
        }
    }
    return out;
}

EncodedWindow encode_x(std::span<const double> window, const EncodingSpec& spec) {
    require_length(window, spec.n, "encode_x");
    require_finite(window, "encode_x");
    EncodedWindow enc;
    enc.coding = coding_of(window);
    enc.pattern = encode_with(window, enc.coding, spec.x_definition, &enc.degenerate);
    return enc;
}

std::vector<double> encode_y(std::span<const double> window, const CodingVariables& coding, const EncodingSpec& spec,
                             bool* degenerate) {
    require_length(window, spec.m, "encode_y");
    return encode_with(window, coding, spec.y_definition, degenerate);
}

std::vector<double> decode_y(std::span<const double> pattern, const CodingVariables& coding, const EncodingSpec& spec) {
    require_length(pattern, spec.m, "decode_y");
    return decode_with(pattern, coding, spec.y_definition);
}

std::size_t pair_count(std::size_t length, const EncodingSpec& spec) noexcept {
    const std::size_t need = spec.min_series_length();
    return length < need ? 0 : length - need + 1;
}

PatternDataset build_pairs(std::span<const double> values, const EncodingSpec& spec, std::string source_id) {
    spec.validate();
    const std::size_t count = pair_count(values.size(), spec);
    if (count == 0)
        throw std::invalid_argument("build_pairs: series " + (source_id.empty() ? std::string() : source_id + " ") +
                                    "too short: need at least " + std::to_string(spec.min_series_length()) +
                                    " months (n + tau + m - 1), have " + std::to_string(values.size()));
    PatternDataset ds;
    ds.spec = spec;
    ds.source_id = std::move(source_id);
    ds.pairs.reserve(count);
    for (std::size_t p = 0; p < count; ++p) {
        const std::size_t anchor = p + spec.n - 1;
        const auto x_window = values.subspan(p, spec.n);
        const auto y_window = values.subspan(anchor + spec.tau, spec.m);
        PatternPair pair;
        pair.anchor_index = anchor;
        auto enc = encode_x(x_window, spec);
        pair.x = std::move(enc.pattern);
        pair.x_coding = enc.coding;
        pair.y_coding = spec.coding_mode == CodingMode::history ? enc.coding : coding_of(y_window);
        bool y_flat = false;
        pair.y = encode_y(y_window, pair.y_coding, spec, &y_flat);
        pair.degenerate = enc.degenerate || y_flat;
        ds.pairs.push_back(std::move(pair));
    }
    return ds;
}

PatternDataset build_pairs(const MonthlyLoadSeries& series, const EncodingSpec& spec) {
    const auto values = series.values();
    return build_pairs(values, spec, series.country_code());
}

}  // namespace psfm
