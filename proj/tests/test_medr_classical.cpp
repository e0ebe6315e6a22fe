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

#include <gtest/gtest.h>

#include <algorithm>

#include "qmedr/dataset_io.hpp"
#include "qmedr/medr_classical.hpp"
#include "test_support.hpp"

using namespace qmedr;

namespace {

MedrProblem blobs_elpp(Dataset &ds, int k = 4) {
    ds = synth_dataset(SynthKind::Blobs, 32, 16, 2, 13);
    return build_elpp(ds, knn_graph(ds, k));
}

/// Distance between the two class centroids over the mean distance to the
/// own centroid.
double separation(const RealMatrix &y, const std::vector<int> &labels) {
    RealVector c0 = RealVector::Zero(y.cols()), c1 = RealVector::Zero(y.cols());
    int n0 = 0, n1 = 0;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        if (labels[i] == 0) {
            c0 += y.row(i).transpose();
            ++n0;
        } else {
            c1 += y.row(i).transpose();
            ++n1;
        }
    }
    c0 /= n0;
    c1 /= n1;
    double spread = 0.0;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        spread += (y.row(i).transpose() - (labels[i] == 0 ? c0 : c1)).norm();
    }
    return (c0 - c1).norm() / (spread / static_cast<double>(y.rows()));
}

} // namespace

TEST(SolveMedr, EqualMatricesAreDegenerate) {
    std::mt19937_64 rng(1);
    const RealMatrix s = testutil::random_spectrum_matrix(5, 0.1, 1.0, rng);
    auto p = make_problem(Variant::Generic, s, s);
    const auto sol = solve_medr(p, 2, Direction::Smallest);
    EXPECT_TRUE(sol.degenerateCut);
    EXPECT_LE((sol.eigenvalues.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(SolveMedr, CommutingDiagonals) {
    RealMatrix a = RealVector((RealVector(4) << 0.3, 0.9, 0.5, 0.2).finished()).asDiagonal();
    RealMatrix b = RealVector((RealVector(4) << 0.6, 0.1, 0.4, 0.8).finished()).asDiagonal();
    MedrProblem p;
    p.variant = Variant::Generic;
    p.S1 = a;
    p.S2 = b;
    const auto sol = solve_medr(p, 4, Direction::Smallest);
    // e^{a-b}: -0.3, 0.8, 0.1, -0.6 -> ascending order indices 3, 0, 2, 1
    const int order[] = {3, 0, 2, 1};
    for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(sol.eigenvalues(j), std::exp(a(order[j], order[j]) - b(order[j], order[j])),
                    1e-13);
        EXPECT_NEAR(std::abs(sol.eigenvectors(order[j], j)), 1.0, 1e-12);
    }
    EXPECT_EQ(sol.route, EigenRoute::Symmetric);
}

TEST(SolveMedr, BlobsResidual) {
    Dataset ds;
    const auto p = blobs_elpp(ds);
    const auto sol = solve_medr(p, 2, ds.X);
    EXPECT_LE(sol.residual, 1e-7);
    EXPECT_EQ(sol.direction, Direction::Smallest);
    const RealMatrix e = medr_operator(p);
    if (sol.route == EigenRoute::Symmetric) {
        for (int j = 0; j < 2; ++j) {
            const RealVector v = sol.eigenvectors.col(j);
            EXPECT_LE((e * v - sol.eigenvalues(j) * v).norm(), 1e-7);
        }
    } else {
        // right singular vectors of E
        const RealMatrix ete = e.transpose() * e;
        for (int j = 0; j < 2; ++j) {
            const RealVector v = sol.eigenvectors.col(j);
            const double s2 = sol.eigenvalues(j) * sol.eigenvalues(j);
            EXPECT_LE((ete * v - s2 * v).norm(), 1e-7);
        }
    }
    // cross-check the smallest values against the full classical spectrum
    const auto full = solve_medr(p, 16, Direction::Smallest);
    EXPECT_NEAR(full.eigenvalues(0), sol.eigenvalues(0), 1e-12);
    EXPECT_NEAR(full.eigenvalues(1), sol.eigenvalues(1), 1e-12);
}

TEST(SolveMedr, OrthonormalAndSigned) {
    Dataset ds;
    const auto p = blobs_elpp(ds);
    for (int m : {1, 2, 4}) {
        const auto sol = solve_medr(p, m, ds.X);
        const RealMatrix g = sol.eigenvectors.transpose() * sol.eigenvectors;
        EXPECT_LE((g - RealMatrix::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-9);
        const RealVector sums = (ds.X * sol.eigenvectors).colwise().sum().transpose();
        EXPECT_GE(sums.minCoeff(), 0.0);
    }
}

TEST(SolveMedr, EdaTakesLargest) {
    const auto ds = synth_dataset(SynthKind::Blobs, 32, 8, 3, 5);
    const auto p = build_eda(ds);
    const auto sol = solve_medr(p, 2);
    EXPECT_EQ(sol.direction, Direction::Largest);
    EXPECT_GE(sol.eigenvalues(0), sol.eigenvalues(1));
    const auto all = solve_medr(p, 8, Direction::Largest);
    EXPECT_NEAR(all.eigenvalues(0), sol.eigenvalues(0), 1e-12);
}

TEST(SolveMedr, NonCommutingUsesDilation) {
    std::mt19937_64 rng(17);
    const RealMatrix a = testutil::random_spectrum_matrix(4, 0.1, 1.0, rng);
    const RealMatrix b = testutil::random_spectrum_matrix(4, 0.1, 1.0, rng);
    MedrProblem p;
    p.S1 = a;
    p.S2 = b;
    const auto sol = solve_medr(p, 2, Direction::Smallest);
    EXPECT_EQ(sol.route, EigenRoute::Dilation);
    Eigen::JacobiSVD<RealMatrix> svd(medr_operator(p));
    const RealVector s = svd.singularValues();
    EXPECT_NEAR(sol.eigenvalues(0), s(3), 1e-12);
    EXPECT_NEAR(sol.eigenvalues(1), s(2), 1e-12);
    EXPECT_LE(sol.residual, 1e-7);
}

TEST(SolveMedr, RejectsBadM) {
    Dataset ds;
    const auto p = blobs_elpp(ds);
    EXPECT_THROW(solve_medr(p, 0), ValidationError);
    EXPECT_THROW(solve_medr(p, 17), ValidationError);
}

TEST(Project, StandardBasisPicksColumns) {
    std::mt19937_64 rng(2);
    const RealMatrix x = testutil::gaussian_matrix(6, 4, rng);
    EigenSolution sol;
    sol.eigenvectors = RealMatrix::Identity(4, 2);
    const auto out = project(x, sol);
    EXPECT_EQ(out.Y, x.leftCols(2));
    EXPECT_EQ(out.provenance, "classical");
    EXPECT_NEAR(out.frobeniusY, out.Y.norm(), 1e-12);
}

TEST(Project, ColumnsAreProjections) {
    Dataset ds;
    const auto p = blobs_elpp(ds);
    const auto sol = solve_medr(p, 3, ds.X);
    const auto out = project(ds, sol);
    for (int j = 0; j < 3; ++j) {
        EXPECT_LE((out.Y.col(j) - ds.X * sol.eigenvectors.col(j)).norm(), 1e-9);
    }
}

TEST(Project, ScalingData) {
    Dataset ds;
    const auto p = blobs_elpp(ds);
    const auto sol = solve_medr(p, 2, ds.X);
    const RealMatrix y1 = project(ds.X, sol).Y;
    auto sol2 = solve_medr(p, 2);
    apply_sign_convention(sol2, 3.5 * ds.X);
    const RealMatrix y2 = project(RealMatrix(3.5 * ds.X), sol2).Y;
    EXPECT_LE((y2 - 3.5 * y1).cwiseAbs().maxCoeff(), 1e-12 * y2.cwiseAbs().maxCoeff());
}

TEST(Project, SeparationBeatsRandomProjections) {
    Dataset ds;
    const auto p = blobs_elpp(ds);
    const auto sol = solve_medr(p, 2, ds.X);
    const double ours = separation(project(ds, sol).Y, *ds.labels);
    std::mt19937_64 rng(20);
    std::vector<double> rand;
    for (int r = 0; r < 20; ++r) {
        const RealMatrix q = testutil::random_orthogonal(16, rng).leftCols(2);
        rand.push_back(separation(ds.X * q, *ds.labels));
    }
    std::nth_element(rand.begin(), rand.begin() + 10, rand.end());
    EXPECT_GE(ours, rand[10]);
}

TEST(SubspaceAngle, Basics) {
    const RealMatrix a = RealMatrix::Identity(4, 2);
    RealMatrix b = RealMatrix::Zero(4, 2);
    b(1, 0) = 1.0;
    b(0, 1) = -1.0;
    EXPECT_NEAR(subspace_angle(a, b), 0.0, 1e-7);
    RealMatrix c = RealMatrix::Zero(4, 2);
    c(2, 0) = 1.0;
    c(1, 1) = 1.0;
    EXPECT_NEAR(subspace_angle(a, c), std::acos(0.0), 1e-12);
}
