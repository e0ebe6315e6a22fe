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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <type_traits>
#include <vector>

#include "qmedr/errors.hpp"

namespace qmedr {

using cplx = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Complex dense matrix; the working type for unitaries and block-encodings.
using Matrix = Mat<cplx>;
using Vector = Vec<cplx>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Eigen-decomposition of a Hermitian matrix: eigenvalues ascending,
/// eigenvectors as orthonormal columns with a fixed phase convention.
template <typename Scalar> struct HermitianSpectrum {
    RealVector eigenvalues;
    Mat<Scalar> eigenvectors;
};

namespace detail {

template <typename Scalar> constexpr bool is_complex_v = false;
template <typename T> constexpr bool is_complex_v<std::complex<T>> = true;

template <typename Scalar> double magnitude(const Scalar &x) { return std::abs(x); }

// Index of the first component whose magnitude exceeds the threshold.
template <typename Derived>
Eigen::Index first_significant(const Eigen::MatrixBase<Derived> &v, double thresh) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > thresh) {
            return i;
        }
    }
    return 0;
}

} // namespace detail

/// Largest elementwise deviation of m from its conjugate transpose.
template <typename Derived> double hermitian_defect(const Eigen::MatrixBase<Derived> &m) {
    if (m.rows() != m.cols()) {
        throw ValidationError("hermitian_defect: matrix is not square");
    }
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest singular value.
template <typename Derived> double spectral_norm(const Eigen::MatrixBase<Derived> &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    // Values-only BDCSVD misreports singular values on some inputs; the Gram
    // spectrum gives the largest one to relative precision.
    using S = typename Derived::Scalar;
    const Mat<S> dense = m;
    const Mat<S> gram = dense.rows() < dense.cols() ? Mat<S>(dense * dense.adjoint())
                                                     : Mat<S>(dense.adjoint() * dense);
    Eigen::SelfAdjointEigenSolver<Mat<S>> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

template <typename Derived> double frobenius_norm(const Eigen::MatrixBase<Derived> &m) {
    return m.norm();
}

/// True iff max |U^H U - I| <= tol.
template <typename Derived>
bool unitarity_check(const Eigen::MatrixBase<Derived> &u, double tol) {
    if (u.rows() != u.cols()) {
        throw ValidationError("unitarity_check: matrix is not square");
    }
    using S = typename Derived::Scalar;
    Mat<S> g = u.adjoint() * u;
    g -= Mat<S>::Identity(u.rows(), u.cols());
    return g.size() == 0 || g.cwiseAbs().maxCoeff() <= tol;
}

/// Scale each column so its first significant component is real and
/// nonnegative.
template <typename Scalar> void fix_column_phases(Mat<Scalar> &vecs) {
    for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
        auto col = vecs.col(j);
        const double scale = col.cwiseAbs().maxCoeff();
        if (scale == 0.0) {
            continue;
        }
        const auto i = detail::first_significant(col, 1e-12 * scale);
        const Scalar c = col(i);
        if constexpr (detail::is_complex_v<Scalar>) {
            col *= std::conj(c) / std::abs(c);
        } else if (c < 0) {
            col = -col;
        }
    }
}

/// Eigen-decomposition of a Hermitian matrix.
///
/// Eigenvalues ascend. Each eigenvector has its first significant component
/// real and nonnegative; within a cluster of equal eigenvalues the columns are
/// ordered by the index of that component.
template <typename Derived>
HermitianSpectrum<typename Derived::Scalar>
hermitian_eig(const Eigen::MatrixBase<Derived> &m, double tol = 1e-9) {
    using S = typename Derived::Scalar;
    if (m.rows() != m.cols()) {
        throw ValidationError("hermitian_eig: matrix is not square");
    }
    if (!m.allFinite()) {
        throw ValidationError("hermitian_eig: non-finite entries");
    }
    if (hermitian_defect(m) > tol) {
        throw ValidationError("hermitian_eig: matrix is not Hermitian within tolerance");
    }
    const Mat<S> sym = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat<S>> es(sym);
    if (es.info() != Eigen::Success) {
        throw NumericalError("hermitian_eig: eigensolver did not converge");
    }
    HermitianSpectrum<S> out{es.eigenvalues(), es.eigenvectors()};
    fix_column_phases(out.eigenvectors);

    const auto n = out.eigenvalues.size();
    std::vector<Eigen::Index> lead(n), order(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        lead[j] = detail::first_significant(out.eigenvectors.col(j), 1e-8);
    }
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto &ev = out.eigenvalues;
    const auto tie = [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(ev(a) - ev(b)) <= 1e-12 * std::max(1.0, std::abs(ev(a)));
    };
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index stop = start + 1;
        while (stop < n && tie(stop - 1, stop)) {
            ++stop;
        }
        std::stable_sort(order.begin() + start, order.begin() + stop,
                         [&](Eigen::Index a, Eigen::Index b) { return lead[a] < lead[b]; });
        start = stop;
    }
    HermitianSpectrum<S> sorted{RealVector(n), Mat<S>(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        sorted.eigenvalues(j) = out.eigenvalues(order[j]);
        sorted.eigenvectors.col(j) = out.eigenvectors.col(order[j]);
    }
    return sorted;
}

/// Apply a real function to the spectrum of a Hermitian matrix.
template <typename Derived, typename F>
Mat<typename Derived::Scalar> hermitian_function(const Eigen::MatrixBase<Derived> &m, F &&f,
                                                  double tol = 1e-9) {
    const auto spec = hermitian_eig(m, tol);
    const RealVector fl = spec.eigenvalues.unaryExpr(f);
    return spec.eigenvectors * fl.asDiagonal() * spec.eigenvectors.adjoint();
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues below zero (rounding) are clamped.
template <typename Derived>
Mat<typename Derived::Scalar> psd_sqrt(const Eigen::MatrixBase<Derived> &m, double tol = 1e-9) {
    return hermitian_function(m, [](double x) { return std::sqrt(std::max(x, 0.0)); }, tol);
}

namespace detail {

// Order-13 Pade approximant with scaling and squaring.
template <typename S> Mat<S> expm_pade13(const Mat<S> &a) {
    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;
    const auto n = a.rows();
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    if (norm1 > theta13) {
        s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    }
    const Mat<S> as = a / std::ldexp(1.0, s);
    const Mat<S> id = Mat<S>::Identity(n, n);
    const Mat<S> a2 = as * as;
    const Mat<S> a4 = a2 * a2;
    const Mat<S> a6 = a4 * a2;
    const Mat<S> u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                           b[3] * a2 + b[1] * id;
    const Mat<S> u = as * u_inner;
    const Mat<S> v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    Mat<S> r = (v - u).partialPivLu().solve(v + u);
    for (int k = 0; k < s; ++k) {
        r = (r * r).eval();
    }
    return r;
}

} // namespace detail

/// Matrix exponential. Hermitian input goes through the eigendecomposition,
/// anything else through order-13 Pade with scaling and squaring.
template <typename Derived> Mat<typename Derived::Scalar> expm(const Eigen::MatrixBase<Derived> &m) {
    using S = typename Derived::Scalar;
    if (m.rows() != m.cols()) {
        throw ValidationError("expm: matrix is not square");
    }
    if (!m.allFinite()) {
        throw ValidationError("expm: non-finite entries");
    }
    if (m.size() == 0) {
        return Mat<S>(0, 0);
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (hermitian_defect(m) <= 1e-14 * scale) {
        return hermitian_function(m, [](double x) { return std::exp(x); });
    }
    return detail::expm_pade13<S>(Mat<S>(m));
}

/// Unitary whose first column is v / |v|. Remaining columns complete an
/// orthonormal basis (Householder reflection, up to a phase on column 0).
Matrix completion_unitary(const Vector &v);

/// Real orthogonal version of completion_unitary.
RealMatrix completion_orthogonal(const RealVector &v);

[[nodiscard]] constexpr bool is_power_of_two(std::size_t n) noexcept {
    return n != 0 && (n & (n - 1)) == 0;
}

/// Number of qubits needed to index n basis states (ceil(log2 n), at least 0).
[[nodiscard]] int qubits_for(std::size_t n) noexcept;

/// Zero-pad a square matrix up to the next power-of-two dimension.
Matrix pad_to_power_of_two(const Matrix &a);

/// Kronecker product a (x) b; a indexes the high-order qubits.
template <typename S> Mat<S> kron(const Mat<S> &a, const Mat<S> &b) {
    Mat<S> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace qmedr
