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
#include "qmedr/graph_embedding.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace qmedr {

std::string to_string(Variant v) {
    switch (v) {
    case Variant::ELPP:
        return "ELPP";
    case Variant::EUDP:
        return "EUDP";
    case Variant::ENPE:
        return "ENPE";
    case Variant::EDA:
        return "EDA";
    case Variant::Generic:
        return "GENERIC";
    }
    return "GENERIC";
}

Variant parse_variant(const std::string &name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto v : {Variant::ELPP, Variant::EUDP, Variant::ENPE, Variant::EDA, Variant::Generic}) {
        if (to_string(v) == up) {
            return v;
        }
    }
    throw ValidationError("unknown variant '" + name + "' (expected ELPP, EUDP, ENPE or EDA)");
}

Dataset Dataset::from_matrix(RealMatrix x, std::optional<std::vector<int>> labels) {
    if (x.rows() < 2) {
        throw ValidationError("dataset needs at least 2 samples");
    }
    if (x.cols() < 1) {
        throw ValidationError("dataset needs at least 1 feature");
    }
    if (!x.allFinite()) {
        throw ValidationError("dataset contains non-finite values");
    }
    if (labels && static_cast<Eigen::Index>(labels->size()) != x.rows()) {
        throw ValidationError("label count does not match sample count");
    }
    Dataset ds;
    ds.rowNorms = x.rowwise().norm();
    ds.X = std::move(x);
    ds.labels = std::move(labels);
    return ds;
}

namespace {

RealMatrix squared_distances(const RealMatrix &x) {
    const auto n = x.rows();
    RealMatrix d2 = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            d2(i, j) = d2(j, i) = (x.row(i) - x.row(j)).squaredNorm();
        }
    }
    return d2;
}

std::vector<int> nearest(const RealMatrix &d2, Eigen::Index i, int k) {
    const auto n = d2.rows();
    std::vector<int> idx;
    idx.reserve(n - 1);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) {
            idx.push_back(static_cast<int>(j));
        }
    }
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return d2(i, a) < d2(i, b); });
    idx.resize(k);
    return idx;
}

bool is_symmetric(const RealMatrix &m, double tol) {
    return m.rows() == m.cols() && (m.size() == 0 || (m - m.transpose()).cwiseAbs().maxCoeff() <= tol);
}

} // namespace

std::vector<std::vector<int>> knn_neighbors(const Dataset &ds, int k) {
    const auto n = ds.samples();
    if (k < 1 || k >= n) {
        throw ValidationError("neighbour count k must satisfy 1 <= k < N");
    }
    const RealMatrix d2 = squared_distances(ds.X);
    std::vector<std::vector<int>> out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = nearest(d2, i, k);
    }
    return out;
}

double median_pairwise_distance(const Dataset &ds) {
    const auto n = ds.samples();
    std::vector<double> d;
    d.reserve(n * (n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            d.push_back((ds.X.row(i) - ds.X.row(j)).norm());
        }
    }
    std::sort(d.begin(), d.end());
    const auto h = d.size() / 2;
    return d.size() % 2 == 1 ? d[h] : 0.5 * (d[h - 1] + d[h]);
}

SimilarityGraph knn_graph(const Dataset &ds, int k, std::optional<double> sigma) {
    const auto n = ds.samples();
    if (k < 1 || k >= n) {
        throw ValidationError("neighbour count k must satisfy 1 <= k < N");
    }
    SimilarityGraph g;
    g.k = k;
    if (sigma) {
        if (!(*sigma > 0.0)) {
            throw ValidationError("sigma must be positive");
        }
        g.sigma = *sigma;
    } else {
        g.sigma = median_pairwise_distance(ds);
        g.sigmaAuto = true;
        if (!(g.sigma > 0.0)) {
            throw ValidationError("median pairwise distance is zero (duplicate samples); set sigma");
        }
    }
    const RealMatrix d2 = squared_distances(ds.X);
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j : nearest(d2, i, k)) {
            adj[i][j] = 1;
            adj[j][i] = 1;
        }
    }
    const double denom = 2.0 * g.sigma * g.sigma;
    g.S = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j && adj[i][j]) {
                g.S(i, j) = std::exp(-d2(i, j) / denom);
            }
        }
    }
    g.D = g.S.rowwise().sum().asDiagonal();
    g.L = g.D - g.S;
    return g;
}

RealMatrix precondition(const RealMatrix &s, double kappaTarget, PreconditionRecord &record) {
    if (!(kappaTarget > 1.0)) {
        throw ValidationError("kappa target must exceed 1");
    }
    if (!is_symmetric(s, 1e-9 * std::max(1.0, s.cwiseAbs().maxCoeff()))) {
        throw ValidationError("precondition: matrix is not symmetric");
    }
    const auto n = s.rows();
    const auto spec = hermitian_eig(s, 1e-6);
    record = PreconditionRecord{};
    record.kappaTarget = kappaTarget;
    record.sourceMin = spec.eigenvalues(0);
    record.sourceMax = spectral_norm(s);
    const double smax = record.sourceMax;
    if (smax <= 1e-300) {
        record.degenerate = true;
        record.shift = 1.0;
        record.scale = 1.0;
        return RealMatrix::Identity(n, n);
    }
    if (record.sourceMin < -1e-9 * smax) {
        // Indefinite: shift the bottom of the spectrum up to zero first.
        record.indefinite = true;
        const double top = spec.eigenvalues(n - 1);
        const double width = top - record.sourceMin;
        const double mu = width / (kappaTarget - 1.0);
        record.shift = -record.sourceMin + mu;
        record.scale = 1.0 / (width + mu);
    } else {
        const double mu = smax / (kappaTarget - 1.0);
        record.shift = mu;
        record.scale = 1.0 / (smax + mu);
    }
    RealMatrix out = record.scale * (s + record.shift * RealMatrix::Identity(n, n));
    return (out + out.transpose()) / 2.0;
}

MedrProblem make_problem(Variant variant, RealMatrix s1raw, RealMatrix s2raw, double kappaTarget) {
    if (s1raw.rows() != s1raw.cols() || s2raw.rows() != s2raw.cols() ||
        s1raw.rows() != s2raw.rows()) {
        throw ValidationError("S1 and S2 must be square and of equal size");
    }
    for (const RealMatrix *m : {&s1raw, &s2raw}) {
        if (!is_symmetric(*m, 1e-9 * std::max(1.0, m->cwiseAbs().maxCoeff()))) {
            throw ValidationError("S1 and S2 must be symmetric");
        }
    }
    MedrProblem p;
    p.variant = variant;
    p.S1raw = (s1raw + s1raw.transpose()) / 2.0;
    p.S2raw = (s2raw + s2raw.transpose()) / 2.0;
    p.S1 = precondition(p.S1raw, kappaTarget, p.pre1);
    p.S2 = precondition(p.S2raw, kappaTarget, p.pre2);
    p.kappa1 = kappaTarget;
    p.kappa2 = kappaTarget;
    if (p.pre1.degenerate) {
        p.warnings.emplace_back("S1 is the zero matrix; preconditioned to the identity");
    }
    if (p.pre2.degenerate) {
        p.warnings.emplace_back("S2 is the zero matrix; preconditioned to the identity");
    }
    if (p.pre1.indefinite) {
        p.warnings.emplace_back("S1 is indefinite; spectrum shifted before scaling");
    }
    if (p.pre2.indefinite) {
        p.warnings.emplace_back("S2 is indefinite; spectrum shifted before scaling");
    }
    return p;
}

namespace {

void warn_isolated(const RealMatrix &d, MedrProblem &p) {
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        if (d(i, i) <= 0.0) {
            p.warnings.push_back("vertex " + std::to_string(i) + " has zero degree");
        }
    }
}

} // namespace

MedrProblem build_elpp(const Dataset &ds, const SimilarityGraph &g, double kappaTarget) {
    if (g.S.rows() != ds.samples()) {
        throw ValidationError("graph size does not match dataset");
    }
    const RealMatrix &x = ds.X;
    auto p = make_problem(Variant::ELPP, x.transpose() * g.L * x, x.transpose() * g.D * x,
                          kappaTarget);
    warn_isolated(g.D, p);
    return p;
}

ComplementGraph complement_graph(const SimilarityGraph &g) {
    const auto n = g.S.rows();
    ComplementGraph c;
    c.S = RealMatrix::Ones(n, n) - g.S;
    c.S.diagonal().setZero();
    c.D = c.S.rowwise().sum().asDiagonal();
    c.L = c.D - c.S;
    return c;
}

MedrProblem build_eudp(const Dataset &ds, const SimilarityGraph &g, double kappaTarget) {
    if (g.S.rows() != ds.samples()) {
        throw ValidationError("graph size does not match dataset");
    }
    const auto c = complement_graph(g);
    const RealMatrix &x = ds.X;
    auto p = make_problem(Variant::EUDP, x.transpose() * g.L * x, x.transpose() * c.L * x,
                          kappaTarget);
    warn_isolated(g.D, p);
    if (c.L.cwiseAbs().maxCoeff() <= 1e-12) {
        p.warnings.emplace_back("complement Laplacian vanishes (fully similar graph)");
    }
    return p;
}

RealMatrix npe_weights(const Dataset &ds, int k, std::optional<double> radius) {
    const auto n = ds.samples();
    const auto knn = knn_neighbors(ds, k);
    RealMatrix w = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<int> q;
        if (radius) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j != i && (ds.X.row(i) - ds.X.row(j)).norm() <= *radius) {
                    q.push_back(static_cast<int>(j));
                }
            }
        }
        if (q.empty()) {
            q = knn[i];
        }
        const auto kk = static_cast<Eigen::Index>(q.size());
        RealMatrix diff(kk, ds.features());
        for (Eigen::Index a = 0; a < kk; ++a) {
            diff.row(a) = ds.X.row(i) - ds.X.row(q[a]);
        }
        RealMatrix gram = diff * diff.transpose();
        const double tr = gram.trace();
        gram.diagonal().array() += tr > 0.0 ? 1e-8 * tr : 1e-8;
        Eigen::LDLT<RealMatrix> ldlt(gram);
        if (ldlt.info() != Eigen::Success) {
            throw NumericalError("npe_weights: singular local Gram matrix");
        }
        const RealVector sol = ldlt.solve(RealVector::Ones(kk));
        const double total = sol.sum();
        if (!(std::abs(total) > 0.0) || !sol.allFinite()) {
            throw NumericalError("npe_weights: degenerate local system");
        }
        for (Eigen::Index a = 0; a < kk; ++a) {
            w(i, q[a]) = sol(a) / total;
        }
    }
    return w;
}

MedrProblem build_enpe(const Dataset &ds, const RealMatrix &weights, double kappaTarget) {
    const auto n = ds.samples();
    if (weights.rows() != n || weights.cols() != n) {
        throw ValidationError("weight matrix size does not match dataset");
    }
    const RealMatrix wsym = (weights + weights.transpose()) / 2.0;
    const RealMatrix &x = ds.X;
    return make_problem(Variant::ENPE, x.transpose() * wsym * x, x.transpose() * x, kappaTarget);
}

ScatterMatrices scatter_matrices(const Dataset &ds) {
    if (!ds.labels) {
        throw ValidationError("EDA requires class labels");
    }
    const auto n = ds.samples();
    const auto m = ds.features();
    std::map<int, std::vector<Eigen::Index>> classes;
    for (Eigen::Index i = 0; i < n; ++i) {
        classes[(*ds.labels)[i]].push_back(i);
    }
    if (classes.size() < 2) {
        throw ValidationError("EDA requires at least two classes");
    }
    const RealVector mu = ds.X.colwise().mean().transpose();
    ScatterMatrices s{RealMatrix::Zero(m, m), RealMatrix::Zero(m, m), RealMatrix::Zero(m, m)};
    for (const auto &[label, members] : classes) {
        RealVector muc = RealVector::Zero(m);
        for (auto i : members) {
            muc += ds.X.row(i).transpose();
        }
        muc /= static_cast<double>(members.size());
        const RealVector dc = muc - mu;
        s.between += static_cast<double>(members.size()) * dc * dc.transpose();
        for (auto i : members) {
            const RealVector d = ds.X.row(i).transpose() - muc;
            s.within += d * d.transpose();
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const RealVector d = ds.X.row(i).transpose() - mu;
        s.total += d * d.transpose();
    }
    const double inv = 1.0 / static_cast<double>(n);
    s.between *= inv;
    s.within *= inv;
    s.total *= inv;
    return s;
}

MedrProblem build_eda(const Dataset &ds, double kappaTarget) {
    const auto s = scatter_matrices(ds);
    return make_problem(Variant::EDA, s.between, s.within, kappaTarget);
}

} // namespace qmedr
