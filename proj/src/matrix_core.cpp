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
#include "qmedr/matrix_core.hpp"

namespace qmedr {

Matrix completion_unitary(const Vector &v) {
    const auto n = v.size();
    const double nv = v.norm();
    if (n == 0 || nv == 0.0) {
        throw ValidationError("completion_unitary: zero vector");
    }
    const Vector y = v / nv;
    const cplx phase = std::abs(y(0)) > 0.0 ? y(0) / std::abs(y(0)) : cplx{1.0, 0.0};
    Vector w = -y;
    w(0) += phase;
    Matrix u = Matrix::Identity(n, n);
    const double nw = w.squaredNorm();
    if (nw > 1e-300) {
        u -= (2.0 / nw) * (w * w.adjoint());
    }
    u.col(0) *= phase;
    return u;
}

RealMatrix completion_orthogonal(const RealVector &v) {
    const auto n = v.size();
    const double nv = v.norm();
    if (n == 0 || nv == 0.0) {
        throw ValidationError("completion_orthogonal: zero vector");
    }
    const RealVector y = v / nv;
    const double sign = y(0) < 0.0 ? -1.0 : 1.0;
    RealVector w = -y;
    w(0) += sign;
    RealMatrix u = RealMatrix::Identity(n, n);
    const double nw = w.squaredNorm();
    if (nw > 1e-300) {
        u -= (2.0 / nw) * (w * w.transpose());
    }
    u.col(0) *= sign;
    return u;
}

int qubits_for(std::size_t n) noexcept {
    int q = 0;
    while ((std::size_t{1} << q) < n) {
        ++q;
    }
    return q;
}

Matrix pad_to_power_of_two(const Matrix &a) {
    if (a.rows() != a.cols()) {
        throw ValidationError("pad_to_power_of_two: matrix is not square");
    }
    const auto n = static_cast<Eigen::Index>(std::size_t{1} << qubits_for(a.rows()));
    if (n == a.rows()) {
        return a;
    }
    Matrix out = Matrix::Zero(n, n);
    out.topLeftCorner(a.rows(), a.cols()) = a;
    return out;
}

} // namespace qmedr
