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
#include "qmedr/medr_classical.hpp"

#include <numeric>

namespace qmedr {

Direction default_direction(Variant v) {
    return v == Variant::EDA ? Direction::Largest : Direction::Smallest;
}

std::string to_string(Direction d) { return d == Direction::Smallest ? "smallest" : "largest"; }

std::string to_string(EigenRoute r) { return r == EigenRoute::Symmetric ? "symmetric" : "dilation"; }

RealMatrix medr_operator(const MedrProblem &p) {
    const RealMatrix s2neg = -p.S2;
    return expm(s2neg) * expm(p.S1);
}

RealMatrix hermitian_dilation(const RealMatrix &e) {
    const auto n = e.rows();
    RealMatrix h = RealMatrix::Zero(2 * n, 2 * n);
    h.topRightCorner(n, n) = e;
    h.bottomLeftCorner(n, n) = e.transpose();
    return h;
}

EigenSolution select_eigenpairs(const RealVector &values, const RealMatrix &vectors, int m,
                                Direction direction) {
    const auto total = values.size();
    if (m < 1 || m > total) {
        throw ValidationError("number of components m must satisfy 1 <= m <= M");
    }
    std::vector<Eigen::Index> order(total);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return direction == Direction::Smallest ? values(a) < values(b) : values(a) > values(b);
    });
    EigenSolution sol;
    sol.direction = direction;
    sol.eigenvalues.resize(m);
    sol.eigenvectors.resize(vectors.rows(), m);
    for (int j = 0; j < m; ++j) {
        sol.eigenvalues(j) = values(order[j]);
        sol.eigenvectors.col(j) = vectors.col(order[j]);
    }
    if (m < total) {
        sol.cutGap = std::abs(values(order[m]) - values(order[m - 1]));
        if (sol.cutGap < 1e-12) {
            sol.degenerateCut = true;
            sol.warnings.emplace_back(
                "degenerate eigenvalue at the selection cut; basis choice is arbitrary");
        }
    } else {
        sol.cutGap = std::numeric_limits<double>::infinity();
    }
    return sol;
}

void apply_sign_convention(EigenSolution &sol, const RealMatrix &x) {
    if (x.cols() != sol.eigenvectors.rows()) {
        throw ValidationError("sign convention: data dimension mismatch");
    }
    const RealVector sums = (x * sol.eigenvectors).colwise().sum().transpose();
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff()) * static_cast<double>(x.rows());
    for (Eigen::Index j = 0; j < sums.size(); ++j) {
        if (sums(j) < -1e-12 * scale) {
            sol.eigenvectors.col(j) = -sol.eigenvectors.col(j);
        }
    }
}

EigenSolution solve_medr(const MedrProblem &p, int m, Direction direction) {
    const auto dim = p.S1.rows();
    if (m < 1 || m > dim) {
        throw ValidationError("number of components m must satisfy 1 <= m <= M");
    }
    const RealMatrix e = medr_operator(p);
    const double asym = (e - e.transpose()).cwiseAbs().maxCoeff();
    EigenSolution sol;
    if (asym <= kSymmetrizeThreshold) {
        const RealMatrix sym = (e + e.transpose()) / 2.0;
        const auto spec = hermitian_eig(sym);
        sol = select_eigenpairs(spec.eigenvalues, spec.eigenvectors, m, direction);
        sol.route = EigenRoute::Symmetric;
        RealMatrix r = e * sol.eigenvectors - sol.eigenvectors * sol.eigenvalues.asDiagonal();
        sol.residual = r.colwise().norm().maxCoeff();
    } else {
        const RealMatrix hbar = hermitian_dilation(e);
        const auto spec = hermitian_eig(hbar);
        // Positive branch: eigenvalues sigma_i with w = (u, v) / sqrt(2).
        RealVector sig(dim);
        RealMatrix w(2 * dim, dim);
        RealMatrix v(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const auto col = 2 * dim - 1 - i;
            sig(i) = spec.eigenvalues(col);
            w.col(i) = spec.eigenvectors.col(col);
            v.col(i) = w.col(i).tail(dim).normalized();
        }
        sol = select_eigenpairs(sig, v, m, direction);
        sol.route = EigenRoute::Dilation;
        double res = 0.0;
        for (int j = 0; j < m; ++j) {
            // Residual of the dilation eigenpair assembled from (u, v).
            const RealVector vj = sol.eigenvectors.col(j);
            const RealVector uj = (e * vj) / sol.eigenvalues(j);
            RealVector wj(2 * dim);
            wj << uj, vj;
            wj /= std::sqrt(2.0);
            res = std::max(res, (hbar * wj - sol.eigenvalues(j) * wj).norm());
        }
        sol.residual = res;
    }
    sol.asymmetry = asym;
    fix_column_phases(sol.eigenvectors);
    if (sol.residual > 1e-7) {
        sol.warnings.emplace_back("eigen-residual above 1e-7");
    }
    return sol;
}

EigenSolution solve_medr(const MedrProblem &p, int m) {
    return solve_medr(p, m, default_direction(p.variant));
}

EigenSolution solve_medr(const MedrProblem &p, int m, const RealMatrix &x) {
    auto sol = solve_medr(p, m);
    apply_sign_convention(sol, x);
    return sol;
}

CompressedOutput project(const RealMatrix &x, const EigenSolution &sol) {
    if (x.cols() != sol.eigenvectors.rows()) {
        throw ValidationError("project: data dimension does not match eigenvectors");
    }
    CompressedOutput out;
    out.Y = x * sol.eigenvectors;
    out.frobeniusY = out.Y.norm();
    out.provenance = "classical";
    return out;
}

CompressedOutput project(const Dataset &ds, const EigenSolution &sol) { return project(ds.X, sol); }

double subspace_angle(const RealMatrix &a, const RealMatrix &b) {
    if (a.rows() != b.rows()) {
        throw ValidationError("subspace_angle: dimension mismatch");
    }
    const RealMatrix qa = Eigen::HouseholderQR<RealMatrix>(a).householderQ() *
                          RealMatrix::Identity(a.rows(), a.cols());
    const RealMatrix qb = Eigen::HouseholderQR<RealMatrix>(b).householderQ() *
                          RealMatrix::Identity(b.rows(), b.cols());
    Eigen::JacobiSVD<RealMatrix> svd(qa.transpose() * qb);
    const double smin = svd.singularValues().minCoeff();
    return std::acos(std::clamp(smin, -1.0, 1.0));
}

} // namespace qmedr
