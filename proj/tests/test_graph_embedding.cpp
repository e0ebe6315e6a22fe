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
#include <numeric>

#include "qmedr/dataset_io.hpp"
#include "qmedr/graph_embedding.hpp"
#include "test_support.hpp"

using namespace qmedr;

namespace {

Dataset blobs() { return synth_dataset(SynthKind::Blobs, 32, 16, 2, 13); }

double min_eig(const RealMatrix &m) { return hermitian_eig(m).eigenvalues(0); }

void expect_laplacian(const RealMatrix &l) {
    EXPECT_LE(l.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GE(min_eig(l), -1e-9);
}

void expect_window(const RealMatrix &s, double kappa) {
    const auto ev = hermitian_eig(s).eigenvalues;
    EXPECT_GE(ev(0), 1.0 / kappa - 1e-9);
    EXPECT_LE(ev(ev.size() - 1), 1.0 + 1e-9);
}

} // namespace

TEST(Dataset, RowNormsAndShape) {
    const auto ds = blobs();
    ASSERT_EQ(ds.samples(), 32);
    ASSERT_EQ(ds.features(), 16);
    for (Eigen::Index i = 0; i < 32; ++i) {
        EXPECT_NEAR(ds.rowNorms(i), ds.X.row(i).norm(), 1e-12);
    }
    EXPECT_THROW(Dataset::from_matrix(RealMatrix::Ones(1, 3)), ValidationError);
}

TEST(KnnGraph, HeatKernelValue) {
    RealMatrix x(2, 3);
    x << 0, 0, 0, 1, 2, 2;
    const double d = 3.0;
    const auto g = knn_graph(Dataset::from_matrix(x), 1, d / std::sqrt(2.0));
    EXPECT_NEAR(g.S(0, 1), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(g.S(0, 1), 0.367879, 1e-6);
    EXPECT_EQ(g.S(0, 0), 0.0);
}

TEST(KnnGraph, CoincidentNeighbours) {
    RealMatrix x(3, 2);
    x << 1, 1, 1, 1, 5, 0;
    const auto g = knn_graph(Dataset::from_matrix(x), 1, 1.0);
    EXPECT_EQ(g.S(0, 1), 1.0);
    EXPECT_EQ(g.S(1, 0), 1.0);
}

TEST(KnnGraph, LaplacianInvariants) {
    const auto ds = blobs();
    for (int k : {1, 3, 5, 10}) {
        const auto g = knn_graph(ds, k);
        EXPECT_TRUE(g.sigmaAuto);
        EXPECT_TRUE(g.S.isApprox(g.S.transpose(), 0.0));
        EXPECT_GE(g.S.minCoeff(), 0.0);
        EXPECT_LE(g.S.maxCoeff(), 1.0);
        EXPECT_EQ(g.S.diagonal().cwiseAbs().maxCoeff(), 0.0);
        expect_laplacian(g.L);
    }
}

TEST(KnnGraph, AutoSigmaIsMedianDistance) {
    RealMatrix x(3, 1);
    x << 0, 1, 3;
    // pairwise distances 1, 2, 3
    EXPECT_DOUBLE_EQ(median_pairwise_distance(Dataset::from_matrix(x)), 2.0);
}

TEST(KnnGraph, Errors) {
    const auto ds = blobs();
    EXPECT_THROW(knn_graph(ds, 32), ValidationError);
    EXPECT_THROW(knn_graph(ds, 0), ValidationError);
    RealMatrix dup = RealMatrix::Ones(4, 2);
    EXPECT_THROW(knn_graph(Dataset::from_matrix(dup), 2), ValidationError);
}

TEST(KnnGraph, PermutationInvariance) {
    const auto ds = blobs();
    const auto g = knn_graph(ds, 4);
    std::vector<int> perm(32);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(99);
    std::shuffle(perm.begin(), perm.end(), rng);
    RealMatrix xp(32, 16);
    for (int i = 0; i < 32; ++i) {
        xp.row(i) = ds.X.row(perm[i]);
    }
    const auto gp = knn_graph(Dataset::from_matrix(xp), 4);
    double worst = 0.0;
    for (int i = 0; i < 32; ++i) {
        for (int j = 0; j < 32; ++j) {
            worst = std::max(worst, std::abs(gp.S(i, j) - g.S(perm[i], perm[j])));
        }
    }
    EXPECT_LE(worst, 1e-14);
}

TEST(Elpp, IdentityData) {
    const auto ds = Dataset::from_matrix(RealMatrix::Identity(5, 5));
    const auto g = knn_graph(ds, 2, 1.0);
    const auto p = build_elpp(ds, g);
    EXPECT_LE((p.S1raw - g.L).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Elpp, BlobsPsdAndWindow) {
    const auto ds = blobs();
    const auto p = build_elpp(ds, knn_graph(ds, 5));
    EXPECT_GE(min_eig(p.S1raw), -1e-9 * spectral_norm(p.S1raw));
    EXPECT_GE(min_eig(p.S2raw), -1e-9 * spectral_norm(p.S2raw));
    expect_window(p.S1, p.kappa1);
    expect_window(p.S2, p.kappa2);
    EXPECT_NEAR(p.pre1.shift, p.pre1.sourceMax / (p.pre1.kappaTarget - 1.0), 1e-12);
}

TEST(Eudp, FullySimilarGraphIsDegenerate) {
    RealMatrix x = RealMatrix::Ones(4, 3);
    x(3, 2) = 1.0 + 1e-9;
    const auto ds = Dataset::from_matrix(x);
    auto g = knn_graph(ds, 3, 1e3);
    g.S = RealMatrix::Ones(4, 4);
    g.S.diagonal().setZero();
    g.D = g.S.rowwise().sum().asDiagonal();
    g.L = g.D - g.S;
    const auto c = complement_graph(g);
    EXPECT_EQ(c.S.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(c.L.cwiseAbs().maxCoeff(), 0.0);
    const auto p = build_eudp(ds, g);
    EXPECT_TRUE(p.pre2.degenerate);
    EXPECT_FALSE(p.warnings.empty());
}

TEST(Eudp, ComplementIdentity) {
    const auto ds = blobs();
    const auto g = knn_graph(ds, 5);
    const auto c = complement_graph(g);
    RealMatrix joff = RealMatrix::Ones(32, 32);
    joff.diagonal().setZero();
    EXPECT_LE((g.L + c.L - (g.D + c.D - joff)).cwiseAbs().maxCoeff(), 1e-12);
    expect_laplacian(c.L);
    const auto p = build_eudp(ds, g);
    expect_window(p.S1, p.kappa1);
    expect_window(p.S2, p.kappa2);
}

TEST(NpeWeights, MidpointReconstruction) {
    RealMatrix x(3, 2);
    x << 0, 0, 2, 2, 1, 1;
    const RealMatrix w = npe_weights(Dataset::from_matrix(x), 2);
    EXPECT_NEAR(w(2, 0), 0.5, 1e-6);
    EXPECT_NEAR(w(2, 1), 0.5, 1e-6);
    EXPECT_EQ(w(2, 2), 0.0);
}

TEST(NpeWeights, RowsSumToOneWithLocalSupport) {
    const auto ds = blobs();
    for (int k : {2, 5, 8}) {
        const RealMatrix w = npe_weights(ds, k);
        EXPECT_LE((w.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
        const auto nb = knn_neighbors(ds, k);
        for (Eigen::Index i = 0; i < 32; ++i) {
            for (Eigen::Index j = 0; j < 32; ++j) {
                const bool inside = std::find(nb[i].begin(), nb[i].end(), j) != nb[i].end();
                if (!inside) {
                    EXPECT_EQ(w(i, j), 0.0);
                }
            }
        }
    }
}

TEST(NpeWeights, BallNeighbourhood) {
    RealMatrix x(4, 1);
    x << 0, 1, 2, 10;
    const RealMatrix w = npe_weights(Dataset::from_matrix(x), 1, 1.5);
    // sample 1 has both 0 and 2 within the ball
    EXPECT_NEAR(w(1, 0), 0.5, 1e-6);
    EXPECT_NEAR(w(1, 2), 0.5, 1e-6);
    // sample 3 has an empty ball and falls back to its nearest neighbour
    EXPECT_NEAR(w(3, 2), 1.0, 1e-12);
}

TEST(NpeWeights, BeatsRandomSimplexWeights) {
    std::mt19937_64 rng(3);
    const RealMatrix x = testutil::gaussian_matrix(12, 4, rng);
    const auto ds = Dataset::from_matrix(x);
    const int k = 5;
    const RealMatrix w = npe_weights(ds, k);
    const auto nb = knn_neighbors(ds, k);
    std::exponential_distribution<double> ex(1.0);
    for (Eigen::Index i = 0; i < 12; ++i) {
        RealVector recon = RealVector::Zero(4);
        for (int j : nb[i]) {
            recon += w(i, j) * x.row(j).transpose();
        }
        const double ours = (x.row(i).transpose() - recon).norm();
        for (int trial = 0; trial < 100; ++trial) {
            RealVector c(k);
            for (int a = 0; a < k; ++a) {
                c(a) = ex(rng);
            }
            c /= c.sum();
            RealVector r = RealVector::Zero(4);
            for (int a = 0; a < k; ++a) {
                r += c(a) * x.row(nb[i][a]).transpose();
            }
            EXPECT_LE(ours, (x.row(i).transpose() - r).norm() + 1e-9);
        }
    }
}

TEST(Enpe, IdentityWeights) {
    const auto ds = blobs();
    const auto p = build_enpe(ds, RealMatrix::Identity(32, 32));
    EXPECT_LE((p.S1raw - p.S2raw).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Enpe, GramSpectrumIsSquaredSingularValues) {
    const auto ds = blobs();
    const auto p = build_enpe(ds, npe_weights(ds, 5));
    Eigen::JacobiSVD<RealMatrix> svd(ds.X);
    RealVector sq = svd.singularValues().array().square();
    std::sort(sq.data(), sq.data() + sq.size());
    const auto ev = hermitian_eig(p.S2raw).eigenvalues;
    EXPECT_LE((ev - sq).cwiseAbs().maxCoeff(), 1e-9 * sq.maxCoeff());
    expect_window(p.S1, p.kappa1);
    expect_window(p.S2, p.kappa2);
}

TEST(Precondition, IndefiniteInputIsShifted) {
    RealMatrix s(2, 2);
    s << -1, 0, 0, 3;
    PreconditionRecord rec;
    const RealMatrix out = precondition(s, 10.0, rec);
    EXPECT_TRUE(rec.indefinite);
    const auto ev = hermitian_eig(out).eigenvalues;
    EXPECT_NEAR(ev(0), 0.1, 1e-12);
    EXPECT_NEAR(ev(1), 1.0, 1e-12);
}

TEST(Eda, IdenticalSamplesAreDegenerate) {
    const RealMatrix x = RealMatrix::Constant(4, 3, 2.0);
    const auto ds = Dataset::from_matrix(x, std::vector<int>{0, 0, 1, 1});
    const auto s = scatter_matrices(ds);
    EXPECT_EQ(s.between.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.within.cwiseAbs().maxCoeff(), 0.0);
    const auto p = build_eda(ds);
    EXPECT_TRUE(p.pre1.degenerate);
    EXPECT_TRUE(p.pre2.degenerate);
}

TEST(Eda, MirroredClassMeans) {
    RealMatrix x(4, 2);
    x << 1.0, 2.5, 3.0, 1.5, -1.0, -2.5, -3.0, -1.5;
    const auto ds = Dataset::from_matrix(x, std::vector<int>{0, 0, 1, 1});
    RealVector mu(2);
    mu << 2.0, 2.0;
    const auto s = scatter_matrices(ds);
    EXPECT_LE((s.between - mu * mu.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Eda, ScatterDecomposition) {
    const auto ds = blobs();
    const auto s = scatter_matrices(ds);
    EXPECT_LE((s.between + s.within - s.total).cwiseAbs().maxCoeff(), 1e-10);
    // independent total scatter
    const RealMatrix c = ds.X.rowwise() - ds.X.colwise().mean();
    EXPECT_LE((s.total - c.transpose() * c / 32.0).cwiseAbs().maxCoeff(), 1e-10);
    const auto p = build_eda(ds);
    expect_window(p.S1, p.kappa1);
    expect_window(p.S2, p.kappa2);
}

TEST(Eda, Errors) {
    std::mt19937_64 rng(1);
    const RealMatrix x = testutil::gaussian_matrix(4, 2, rng);
    EXPECT_THROW(build_eda(Dataset::from_matrix(x)), ValidationError);
    EXPECT_THROW(build_eda(Dataset::from_matrix(x, std::vector<int>{1, 1, 1, 1})),
                 ValidationError);
}

TEST(Variant, NamesRoundTrip) {
    for (auto v : {Variant::ELPP, Variant::EUDP, Variant::ENPE, Variant::EDA}) {
        EXPECT_EQ(parse_variant(to_string(v)), v);
    }
    EXPECT_THROW((void)parse_variant("PCA"), ValidationError);
}
