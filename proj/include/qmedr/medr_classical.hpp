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

#include <map>
#include <string>
#include <vector>

#include "qmedr/graph_embedding.hpp"

namespace qmedr {

enum class Direction { Smallest, Largest };

/// Minimisation variants keep the smallest eigenvalues, EDA the largest.
[[nodiscard]] Direction default_direction(Variant v);
[[nodiscard]] std::string to_string(Direction d);

/// How the eigenproblem of e^{-S2} e^{S1} was solved: directly on the
/// symmetrised operator, or through the Hermitian dilation
/// [[0, E], [E^T, 0]] whose positive eigenpairs carry the singular values and
/// right singular vectors of E.
enum class EigenRoute { Symmetric, Dilation };
[[nodiscard]] std::string to_string(EigenRoute r);

/// Asymmetry at or below which E is symmetrised rather than dilated.
inline constexpr double kSymmetrizeThreshold = 1e-8;

struct EigenSolution {
    RealVector eigenvalues;  ///< m values, sorted per direction
    RealMatrix eigenvectors; ///< M x m, orthonormal columns (the projection W)
    Direction direction = Direction::Smallest;
    EigenRoute route = EigenRoute::Symmetric;
    bool degenerateCut = false;
    double cutGap = 0.0;    ///< |lambda_m - lambda_{m+1}| across the selection cut
    double asymmetry = 0.0; ///< max |E - E^T|
    double residual = 0.0;  ///< max eigen-residual on the route's Hermitian operator
    std::vector<std::string> warnings;
};

struct CompressedOutput {
    RealMatrix Y; ///< N x m, y_ij = <x_i, v_j>
    double frobeniusY = 0.0;
    std::string provenance; ///< "classical" or "quantum"
    double errorBound = 0.0;
    std::map<std::string, double> resources;
};

/// e^{-S2} e^{S1} from the preconditioned pair.
RealMatrix medr_operator(const MedrProblem &p);

/// The Hermitian dilation |0><1| (x) E + |1><0| (x) E^T.
RealMatrix hermitian_dilation(const RealMatrix &e);

/// Select m eigenpairs from a Hermitian spectrum per direction. Used by both
/// routes; `values` and `vectors` are the candidate pairs.
EigenSolution select_eigenpairs(const RealVector &values, const RealMatrix &vectors, int m,
                                Direction direction);

/// Flip eigenvector signs so every column of X W sums to a nonnegative value.
/// Columns whose sum vanishes keep the first-component convention.
void apply_sign_convention(EigenSolution &sol, const RealMatrix &x);

/// Classical MEDR reference: the m principal eigenvectors of e^{-S2} e^{S1}.
EigenSolution solve_medr(const MedrProblem &p, int m);
EigenSolution solve_medr(const MedrProblem &p, int m, Direction direction);
/// As above, with the data-dependent sign convention applied.
EigenSolution solve_medr(const MedrProblem &p, int m, const RealMatrix &x);

/// Y = X W.
CompressedOutput project(const Dataset &ds, const EigenSolution &sol);
CompressedOutput project(const RealMatrix &x, const EigenSolution &sol);

/// Largest principal angle (radians) between the column spans of a and b.
double subspace_angle(const RealMatrix &a, const RealMatrix &b);

} // namespace qmedr
