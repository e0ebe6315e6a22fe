// Copyright 2026 The qmedr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

#include "qmedr/graph_embedding.hpp"
#include "qmedr/qmedr_sim.hpp"

namespace qmedr {

using json = nlohmann::ordered_json;

/// Every knob of a run. Field names (kebab-case) double as CLI flags.
///
/// eps1 and eps2 are the errors of the e^{S1} and e^{-S2} encodings; the
/// phase-estimation and inner-product precisions are derived from n-bits and
/// eps (or inner-product-eps) instead.
struct RunConfig {
    Variant variant = Variant::ELPP;
    int m = 2;
    int k = 5;
    std::optional<double> sigma;  ///< heat-kernel width; nullopt = median distance
    std::optional<double> radius; ///< NPE neighbourhood ball; nullopt = k nearest
    double kappaTarget = 10.0;
    double eps = 1e-2;
    double eps1 = 1e-10;
    double eps2 = 1e-10;
    std::optional<double> innerProductEps;
    int nBits = 16;
    double eta = 0.1;
    int q2 = 32;
    int integerBits = 7;
    std::uint64_t seed = 0;
    NoiseMode mode = NoiseMode::Deterministic;
    SignSource signSource = SignSource::Anchor;
    bool analog = false;
    long long hadamardShots = 0;
    bool strict = false;

    /// Throws ValidationError on non-positive tolerances and other bad values.
    void validate() const;
    [[nodiscard]] QuantumConfig quantum() const;
};

json to_json(const RunConfig &c);
RunConfig run_config_from_json(const json &j);

} // namespace qmedr
