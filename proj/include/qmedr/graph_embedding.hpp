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

#include <optional>
#include <string>
#include <vector>

#include "qmedr/matrix_core.hpp"

namespace qmedr {

/// MEDR instantiations. Generic accepts any caller-supplied (S1, S2).
enum class Variant { ELPP, EUDP, ENPE, EDA, Generic };

[[nodiscard]] std::string to_string(Variant v);
/// Case-insensitive; throws ValidationError on unknown names.
[[nodiscard]] Variant parse_variant(const std::string &name);

/// N x M sample matrix (rows are samples) with cached row norms and optional
/// class labels.
struct Dataset {
    RealMatrix X;
    RealVector rowNorms;
    std::optional<std::vector<int>> labels;

    /// Validates N >= 2, M >= 1, finite entries and label count.
    static Dataset from_matrix(RealMatrix x, std::optional<std::vector<int>> labels = std::nullopt);

    [[nodiscard]] Eigen::Index samples() const { return X.rows(); }
    [[nodiscard]] Eigen::Index features() const { return X.cols(); }
};

struct SimilarityGraph {
    RealMatrix S; ///< heat-kernel weights on the symmetric kNN relation
    RealMatrix D; ///< diagonal degree matrix
    RealMatrix L; ///< D - S
    int k = 0;
    double sigma = 0.0;
    bool sigmaAuto = false;
};

/// Affine spectral map S -> scale * (S + shift * I) that places the spectrum
/// of S inside [1/kappa, 1].
struct PreconditionRecord {
    double shift = 0.0;
    double scale = 1.0;
    double sourceMin = 0.0; ///< smallest eigenvalue before the map
    double sourceMax = 0.0; ///< spectral norm before the map
    double kappaTarget = 10.0;
    bool degenerate = false; ///< zero matrix, mapped to I
    bool indefinite = false; ///< negative eigenvalues were shifted away
};

struct MedrProblem {
    Variant variant = Variant::Generic;
    RealMatrix S1raw;
    RealMatrix S2raw;
    RealMatrix S1; ///< preconditioned
    RealMatrix S2; ///< preconditioned
    double kappa1 = 10.0;
    double kappa2 = 10.0;
    PreconditionRecord pre1;
    PreconditionRecord pre2;
    std::vector<std::string> warnings;
};

/// Indices of the k nearest neighbours of every sample (self excluded,
/// equal distances resolved towards the lower index).
std::vector<std::vector<int>> knn_neighbors(const Dataset &ds, int k);

/// Median of all pairwise Euclidean distances.
double median_pairwise_distance(const Dataset &ds);

/// Heat-kernel similarity graph over the symmetric kNN relation.
/// sigma = nullopt selects the median pairwise distance.
SimilarityGraph knn_graph(const Dataset &ds, int k, std::optional<double> sigma = std::nullopt);

/// Precondition a symmetric matrix (see PreconditionRecord).
RealMatrix precondition(const RealMatrix &s, double kappaTarget, PreconditionRecord &record);

/// Generic constructor: symmetry check, then precondition both matrices.
MedrProblem make_problem(Variant variant, RealMatrix s1raw, RealMatrix s2raw,
                         double kappaTarget = 10.0);

MedrProblem build_elpp(const Dataset &ds, const SimilarityGraph &g, double kappaTarget = 10.0);

/// S'_ij = 1 - S_ij off the diagonal, with its degree matrix and Laplacian.
struct ComplementGraph {
    RealMatrix S;
    RealMatrix D;
    RealMatrix L;
};
ComplementGraph complement_graph(const SimilarityGraph &g);

MedrProblem build_eudp(const Dataset &ds, const SimilarityGraph &g, double kappaTarget = 10.0);

/// Neighbourhood reconstruction weights. Each row i minimises
/// |x_i - sum_j W_ij x_j| subject to sum_j W_ij = 1 over the neighbourhood of
/// x_i: the radius ball when given and non-empty, else the k nearest.
RealMatrix npe_weights(const Dataset &ds, int k, std::optional<double> radius = std::nullopt);

MedrProblem build_enpe(const Dataset &ds, const RealMatrix &weights, double kappaTarget = 10.0);

struct ScatterMatrices {
    RealMatrix between;
    RealMatrix within;
    RealMatrix total;
};
/// Between/within/total scatter, each normalised by 1/N. Requires labels.
ScatterMatrices scatter_matrices(const Dataset &ds);

MedrProblem build_eda(const Dataset &ds, double kappaTarget = 10.0);

} // namespace qmedr
