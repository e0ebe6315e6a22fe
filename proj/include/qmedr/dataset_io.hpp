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
#include <string>

#include "qmedr/graph_embedding.hpp"

namespace qmedr {

/// Parse a dataset CSV: one sample per row, comma separated, '.' decimals.
/// The first line is a header when any field fails to parse as a number. A
/// last column named "label" holds integer class labels; without a header the
/// last column is taken as labels when `labelsInLastColumn` is set.
Dataset read_dataset_csv(const std::string &path, bool labelsInLastColumn = false);
Dataset parse_dataset_csv(const std::string &text, bool labelsInLastColumn = false);

/// Write a matrix with a header row `prefix0,prefix1,...`.
void write_matrix_csv(const std::string &path, const RealMatrix &m, const std::string &prefix);
std::string format_matrix_csv(const RealMatrix &m, const std::string &prefix);

/// Write a dataset with header x0..x{M-1} and a trailing label column when present.
void write_dataset_csv(const std::string &path, const Dataset &ds);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

enum class SynthKind { Blobs, Ring };
SynthKind parse_synth_kind(const std::string &name);

/// Seeded synthetic data. Blobs: Gaussian clusters around random centres.
/// Ring: concentric noisy circles in the first two coordinates.
Dataset synth_dataset(SynthKind kind, int n, int m, int classes, std::uint64_t seed);

} // namespace qmedr
