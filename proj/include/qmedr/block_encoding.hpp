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
#include <memory>
#include <string>
#include <vector>

#include "qmedr/matrix_core.hpp"
#include "qmedr/resource_model.hpp"

namespace qmedr {

/// A unitary known through its action on blocks of column vectors. Dense
/// unitaries store the matrix; composite ones (products, dilations) apply
/// their factors on demand so that wide ancilla registers stay tractable.
class UnitaryOp {
  public:
    virtual ~UnitaryOp() = default;
    [[nodiscard]] virtual Eigen::Index dim() const = 0;
    [[nodiscard]] virtual Matrix apply(const Matrix &cols) const = 0;
    [[nodiscard]] virtual Matrix apply_adjoint(const Matrix &cols) const = 0;
};

/// (alpha, a, epsilon)-block-encoding on s system qubits. Ancillas are the
/// high-order qubits, so the encoded block is the top-left 2^s x 2^s corner:
///
///     |target - alpha * (<0|^a (x) I) U (|0>^a (x) I)| <= epsilon
///
/// `target` is the matrix the encoding claims to represent.
struct BlockEncoding {
    std::shared_ptr<const UnitaryOp> U;
    double alpha = 1.0;
    int ancillas = 0;
    int systemQubits = 0;
    double epsilon = 0.0;
    Eigen::Index logicalDim = 0; ///< size before zero padding to 2^s
    Matrix target;
    CostModel cost;
    std::vector<std::string> notes;

    [[nodiscard]] Eigen::Index dim() const { return Eigen::Index{1} << (ancillas + systemQubits); }
    [[nodiscard]] Eigen::Index systemDim() const { return Eigen::Index{1} << systemQubits; }
    [[nodiscard]] Matrix dense() const;
};

/// alpha * (<0|^a (x) I) U (|0>^a (x) I): the full 2^s x 2^s block.
Matrix be_extract(const BlockEncoding &u);

/// Spectral-norm distance between the encoded block and `target`.
double block_error(const BlockEncoding &u, const Matrix &target);
double block_error(const BlockEncoding &u);

/// Unitarity of U within tol. Dimensions up to `dense_limit` are checked
/// exactly; larger ones on the first 2^s basis columns plus random probes.
bool verify_unitary(const BlockEncoding &u, double tol, std::uint64_t seed = 0,
                    Eigen::Index dense_limit = 2048);

/// One-ancilla dilation [[B, sqrt(I - BB^H)], [sqrt(I - B^H B), -B^H]] with
/// B = A / alpha. Non-power-of-two A is zero padded first.
BlockEncoding block_encode_dense(const Matrix &a, double alpha);
BlockEncoding block_encode_dense(const RealMatrix &a, double alpha);

/// Encoding of A*B from encodings of A and B on disjoint ancilla registers.
/// alpha = alpha_A alpha_B, epsilon = alpha_A eps_B + alpha_B eps_A.
BlockEncoding be_product(const BlockEncoding &ua, const BlockEncoding &ub);

/// Encoding of |0><1| (x) H + |1><0| (x) H^H with one extra system qubit
/// (the new most significant system bit). alpha kept, epsilon doubled.
BlockEncoding be_hermitian_dilation(const BlockEncoding &u);

/// Taylor data of e^{sign*H} expanded around H = I, normalised by B = e^2.
struct ExpSeries {
    int sign = 1;
    int lmax = 0;
    std::vector<double> coefficients; ///< c_0..c_lmax (signed)
    double normalization = 0.0;       ///< B = e^2
    double keptMass = 0.0;            ///< sum |c_l|, l <= lmax
    double tailBound = 0.0;           ///< sum |c_l|, l > lmax
    int registerQubits = 0;
};

/// Shortest series whose tail is at most eps * B / 2.
ExpSeries exp_series(int sign, double eps);

/// Encoding of e^{sign*H} for Hermitian H with I/kappa <= H <= I, realised as
/// prepare-select-unprepare over the powers (H - I)^l. alpha = e^2,
/// epsilon = e^2 * eps when the input error is at most eps/2.
BlockEncoding be_exp(const BlockEncoding &u, int sign, double eps, double kappa);

/// sum_m |m><m| (x) e^{i m gamma H} over the signed (J+1)-bit index
/// m in [-2^J, 2^J - 1]. Blocks are produced on demand from the spectrum of
/// the encoded H.
struct ControlledSimUnitary {
    int J = 0;
    double bigM = 1.0;
    double gamma = 0.0;
    double epsilon = 0.0;
    Matrix hamiltonian; ///< extracted encoded H
    HermitianSpectrum<cplx> spectrum;
    CostModel cost;

    [[nodiscard]] Matrix block(long long m) const;
    /// Signed value of register basis state r (two's complement on J+1 bits).
    [[nodiscard]] long long index_value(long long r) const;
    [[nodiscard]] Matrix dense() const;
};

ControlledSimUnitary be_controlled_sim(const BlockEncoding &u, int J, double gamma, double eps);

} // namespace qmedr
