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
#include "qmedr/block_encoding.hpp"

#include <random>

namespace qmedr {

namespace {

class DenseUnitary final : public UnitaryOp {
  public:
    explicit DenseUnitary(Matrix u) : u_(std::move(u)) {}
    [[nodiscard]] Eigen::Index dim() const override { return u_.rows(); }
    [[nodiscard]] Matrix apply(const Matrix &cols) const override { return u_ * cols; }
    [[nodiscard]] Matrix apply_adjoint(const Matrix &cols) const override {
        return u_.adjoint() * cols;
    }

  private:
    Matrix u_;
};

// U_A U_B with register layout [ancA][ancB][sys]; U_B acts on (ancB, sys),
// U_A on (ancA, sys).
class ProductUnitary final : public UnitaryOp {
  public:
    ProductUnitary(std::shared_ptr<const UnitaryOp> a, int aa, std::shared_ptr<const UnitaryOp> b,
                   int ab, int s)
        : a_(std::move(a)), b_(std::move(b)), aa_(aa), ab_(ab), s_(s) {}

    [[nodiscard]] Eigen::Index dim() const override { return Eigen::Index{1} << (aa_ + ab_ + s_); }

    [[nodiscard]] Matrix apply(const Matrix &cols) const override {
        return apply_a(apply_b(cols, false), false);
    }
    [[nodiscard]] Matrix apply_adjoint(const Matrix &cols) const override {
        return apply_b(apply_a(cols, true), true);
    }

  private:
    [[nodiscard]] Matrix apply_b(const Matrix &cols, bool adjoint) const {
        const Eigen::Index db = Eigen::Index{1} << (ab_ + s_);
        const Eigen::Index slices = Eigen::Index{1} << aa_;
        Matrix out(cols.rows(), cols.cols());
        for (Eigen::Index ia = 0; ia < slices; ++ia) {
            const Matrix blk = cols.middleRows(ia * db, db);
            if (blk.isZero(0.0)) {
                out.middleRows(ia * db, db).setZero();
                continue;
            }
            out.middleRows(ia * db, db) = adjoint ? b_->apply_adjoint(blk) : b_->apply(blk);
        }
        return out;
    }

    [[nodiscard]] Matrix apply_a(const Matrix &cols, bool adjoint) const {
        const Eigen::Index ds = Eigen::Index{1} << s_;
        const Eigen::Index db = Eigen::Index{1} << (ab_ + s_);
        const Eigen::Index na = Eigen::Index{1} << aa_;
        const Eigen::Index nb = Eigen::Index{1} << ab_;
        Matrix out(cols.rows(), cols.cols());
        Matrix g(na * ds, cols.cols());
        for (Eigen::Index ib = 0; ib < nb; ++ib) {
            for (Eigen::Index ia = 0; ia < na; ++ia) {
                g.middleRows(ia * ds, ds) = cols.middleRows(ia * db + ib * ds, ds);
            }
            const Matrix r = g.isZero(0.0) ? Matrix(g) : (adjoint ? a_->apply_adjoint(g) : a_->apply(g));
            for (Eigen::Index ia = 0; ia < na; ++ia) {
                out.middleRows(ia * db + ib * ds, ds) = r.middleRows(ia * ds, ds);
            }
        }
        return out;
    }

    std::shared_ptr<const UnitaryOp> a_, b_;
    int aa_, ab_, s_;
};

// S^H (|0><0| (x) U + |1><1| (x) U^H) (X (x) I) S, where S moves the new
// qubit from just below the ancillas (encoding order [anc][flag][sys]) to the
// top (inner order [flag][anc][sys]).
class DilationUnitary final : public UnitaryOp {
  public:
    DilationUnitary(std::shared_ptr<const UnitaryOp> u, int a, int s)
        : u_(std::move(u)), a_(a), s_(s) {}

    [[nodiscard]] Eigen::Index dim() const override { return Eigen::Index{1} << (a_ + 1 + s_); }

    [[nodiscard]] Matrix apply(const Matrix &cols) const override {
        const Eigen::Index half = Eigen::Index{1} << (a_ + s_);
        Matrix inner = to_inner(cols);
        Matrix out(inner.rows(), inner.cols());
        // X on the flag swaps the halves; then U on flag 0, U^H on flag 1.
        out.topRows(half) = u_->apply(inner.bottomRows(half));
        out.bottomRows(half) = u_->apply_adjoint(inner.topRows(half));
        return to_encoding(out);
    }

    [[nodiscard]] Matrix apply_adjoint(const Matrix &cols) const override {
        const Eigen::Index half = Eigen::Index{1} << (a_ + s_);
        Matrix inner = to_inner(cols);
        Matrix out(inner.rows(), inner.cols());
        out.bottomRows(half) = u_->apply_adjoint(inner.topRows(half));
        out.topRows(half) = u_->apply(inner.bottomRows(half));
        return to_encoding(out);
    }

  private:
    [[nodiscard]] Matrix to_inner(const Matrix &enc) const {
        const Eigen::Index ds = Eigen::Index{1} << s_;
        const Eigen::Index na = Eigen::Index{1} << a_;
        Matrix inner(enc.rows(), enc.cols());
        for (Eigen::Index anc = 0; anc < na; ++anc) {
            for (Eigen::Index f = 0; f < 2; ++f) {
                inner.middleRows(f * na * ds + anc * ds, ds) =
                    enc.middleRows(anc * 2 * ds + f * ds, ds);
            }
        }
        return inner;
    }
    [[nodiscard]] Matrix to_encoding(const Matrix &inner) const {
        const Eigen::Index ds = Eigen::Index{1} << s_;
        const Eigen::Index na = Eigen::Index{1} << a_;
        Matrix enc(inner.rows(), inner.cols());
        for (Eigen::Index anc = 0; anc < na; ++anc) {
            for (Eigen::Index f = 0; f < 2; ++f) {
                enc.middleRows(anc * 2 * ds + f * ds, ds) =
                    inner.middleRows(f * na * ds + anc * ds, ds);
            }
        }
        return enc;
    }

    std::shared_ptr<const UnitaryOp> u_;
    int a_, s_;
};

Matrix basis_columns(Eigen::Index dim, Eigen::Index count) {
    return Matrix::Identity(dim, count);
}

// Verify the encoding claim on construction; every builder goes through here.
void certify(BlockEncoding &u, const char *who) {
    const double err = block_error(u);
    if (!(err <= u.epsilon + 1e-9)) {
        throw NumericalError(std::string(who) + ": encoded block deviates from its target by " +
                             std::to_string(err) + " > epsilon " + std::to_string(u.epsilon));
    }
}

} // namespace

Matrix BlockEncoding::dense() const { return U->apply(Matrix::Identity(dim(), dim())); }

Matrix be_extract(const BlockEncoding &u) {
    const auto ds = u.systemDim();
    const Matrix cols = u.U->apply(basis_columns(u.dim(), ds));
    return u.alpha * cols.topRows(ds);
}

double block_error(const BlockEncoding &u, const Matrix &target) {
    if (target.rows() != u.systemDim() || target.cols() != u.systemDim()) {
        throw ValidationError("block_error: target has the wrong dimension");
    }
    return spectral_norm(Matrix(target - be_extract(u)));
}

double block_error(const BlockEncoding &u) { return block_error(u, u.target); }

bool verify_unitary(const BlockEncoding &u, double tol, std::uint64_t seed,
                    Eigen::Index dense_limit) {
    const auto d = u.dim();
    if (d <= dense_limit) {
        return unitarity_check(u.dense(), tol);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const auto ds = u.systemDim();
    const Eigen::Index probes = 4;
    Matrix v(d, ds + probes);
    v.leftCols(ds) = basis_columns(d, ds);
    for (Eigen::Index j = ds; j < ds + probes; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            v(i, j) = cplx{nd(rng), nd(rng)};
        }
        v.col(j).normalize();
    }
    const Matrix uv = u.U->apply(v);
    // Isometry on the probes: Gram matrices agree, and U^H U v = v.
    const Matrix gram_in = v.adjoint() * v;
    const Matrix gram_out = uv.adjoint() * uv;
    if ((gram_in - gram_out).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    const Matrix back = u.U->apply_adjoint(uv);
    return (back - v).cwiseAbs().maxCoeff() <= tol;
}

BlockEncoding block_encode_dense(const Matrix &a, double alpha) {
    if (a.rows() != a.cols()) {
        throw ValidationError("block_encode_dense: matrix must be square (embed it first)");
    }
    if (!a.allFinite()) {
        throw ValidationError("block_encode_dense: non-finite entries");
    }
    const double norm = spectral_norm(a);
    if (!(alpha > 0.0) || alpha < norm * (1.0 - 1e-12)) {
        throw ValidationError("block_encode_dense: alpha must be at least the spectral norm");
    }
    const Matrix ap = pad_to_power_of_two(a);
    const auto n = ap.rows();
    const Matrix b = ap / alpha;
    const Matrix id = Matrix::Identity(n, n);
    Matrix u(2 * n, 2 * n);
    u.topLeftCorner(n, n) = b;
    // Both square roots from one SVD, so a singular value at 1 stays exact.
    Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector s = svd.singularValues().cwiseMin(1.0);
    const RealVector c = (1.0 - s.array().square()).max(0.0).sqrt().matrix();
    u.topRightCorner(n, n) = svd.matrixU() * c.asDiagonal() * svd.matrixU().adjoint();
    u.bottomLeftCorner(n, n) = svd.matrixV() * c.asDiagonal() * svd.matrixV().adjoint();
    u.bottomRightCorner(n, n) = -b.adjoint();
    if (!unitarity_check(u, 1e-9)) {
        throw NumericalError("block_encode_dense: dilation is not unitary within 1e-9");
    }
    BlockEncoding be;
    be.U = std::make_shared<DenseUnitary>(std::move(u));
    be.alpha = alpha;
    be.ancillas = 1;
    be.systemQubits = qubits_for(n);
    be.logicalDim = a.rows();
    be.target = ap;
    be.epsilon = 0.0;
    be.epsilon = block_error(be);
    be.cost.charge("oracle_calls", 1.0);
    be.cost.charge("time", 1.0);
    if (n != a.rows()) {
        be.notes.push_back("zero padded from " + std::to_string(a.rows()) + " to " +
                           std::to_string(n));
    }
    return be;
}

BlockEncoding block_encode_dense(const RealMatrix &a, double alpha) {
    return block_encode_dense(Matrix(a.cast<cplx>()), alpha);
}

BlockEncoding be_product(const BlockEncoding &ua, const BlockEncoding &ub) {
    if (ua.systemQubits != ub.systemQubits) {
        throw ValidationError("be_product: system dimensions differ");
    }
    BlockEncoding be;
    be.U = std::make_shared<ProductUnitary>(ua.U, ua.ancillas, ub.U, ub.ancillas, ua.systemQubits);
    be.alpha = ua.alpha * ub.alpha;
    be.ancillas = ua.ancillas + ub.ancillas;
    be.systemQubits = ua.systemQubits;
    be.epsilon = ua.alpha * ub.epsilon + ub.alpha * ua.epsilon;
    be.logicalDim = ua.logicalDim;
    be.target = ua.target * ub.target;
    be.cost = ua.cost;
    be.cost += ub.cost;
    certify(be, "be_product");
    return be;
}

BlockEncoding be_hermitian_dilation(const BlockEncoding &u) {
    const auto n = u.systemDim();
    BlockEncoding be;
    be.U = std::make_shared<DilationUnitary>(u.U, u.ancillas, u.systemQubits);
    be.alpha = u.alpha;
    be.ancillas = u.ancillas;
    be.systemQubits = u.systemQubits + 1;
    be.epsilon = 2.0 * u.epsilon;
    be.logicalDim = 2 * n;
    be.target = Matrix::Zero(2 * n, 2 * n);
    be.target.topRightCorner(n, n) = u.target;
    be.target.bottomLeftCorner(n, n) = u.target.adjoint();
    be.cost = u.cost;
    be.cost.charge("oracle_calls", u.cost.get("oracle_calls"));
    certify(be, "be_hermitian_dilation");
    return be;
}

ExpSeries exp_series(int sign, double eps) {
    if (sign != 1 && sign != -1) {
        throw ValidationError("exp_series: sign must be +1 or -1");
    }
    if (!(eps > 0.0) || eps > 0.5) {
        throw ValidationError("exp_series: eps must lie in (0, 1/2]");
    }
    constexpr int kTerms = 80;
    // |c_l| = e^{sign} / l!
    std::vector<long double> mag(kTerms);
    long double fact = 1.0L;
    const long double base = std::exp(static_cast<long double>(sign));
    for (int l = 0; l < kTerms; ++l) {
        if (l > 0) {
            fact *= static_cast<long double>(l);
        }
        mag[l] = base / fact;
    }
    ExpSeries s;
    s.sign = sign;
    s.normalization = std::exp(2.0);
    const long double budget = static_cast<long double>(eps) * std::exp(2.0L) / 2.0L;
    int lmax = 0;
    for (;; ++lmax) {
        long double tail = 0.0L;
        for (int l = kTerms - 1; l > lmax; --l) {
            tail += mag[l];
        }
        if (tail <= budget) {
            s.tailBound = static_cast<double>(tail);
            break;
        }
    }
    s.lmax = lmax;
    long double kept = 0.0L;
    for (int l = 0; l <= lmax; ++l) {
        const double sgn = (sign < 0 && (l % 2 == 1)) ? -1.0 : 1.0;
        s.coefficients.push_back(sgn * static_cast<double>(mag[l]));
        kept += mag[l];
    }
    s.keptMass = static_cast<double>(kept);
    // lmax + 1 powers plus one slot carrying the normalisation remainder.
    s.registerQubits = qubits_for(static_cast<std::size_t>(lmax) + 2);
    return s;
}

BlockEncoding be_exp(const BlockEncoding &u, int sign, double eps, double kappa) {
    if (!(kappa >= 1.0)) {
        throw ValidationError("be_exp: kappa must be at least 1");
    }
    const auto series = exp_series(sign, eps);
    const auto ds = u.systemDim();
    if (u.logicalDim != ds) {
        throw ValidationError("be_exp: zero-padded input has a spectrum outside [1/kappa, 1]");
    }
    const Matrix h = be_extract(u);
    const auto spec = hermitian_eig(h, 1e-9);
    const double tol = 1e-9;
    if (spec.eigenvalues.minCoeff() < 1.0 / kappa - tol || spec.eigenvalues.maxCoeff() > 1.0 + tol) {
        throw ValidationError("be_exp: spectrum of H is outside [1/kappa, 1]");
    }

    const int a = u.ancillas;
    const int s = u.systemQubits;
    const Eigen::Index inner = Eigen::Index{1} << (a + s);
    const Eigen::Index slots = Eigen::Index{1} << series.registerQubits;
    const Eigen::Index upper = Eigen::Index{1} << (a - 1);

    // Prepare amplitudes sqrt(|c_l| / B), remainder on slot lmax + 1.
    RealVector amp = RealVector::Zero(slots);
    for (int l = 0; l <= series.lmax; ++l) {
        amp(l) = std::sqrt(std::abs(series.coefficients[l]) / series.normalization);
    }
    const long double rest =
        1.0L - static_cast<long double>(series.keptMass) / std::exp(2.0L);
    amp(series.lmax + 1) = std::sqrt(static_cast<double>(std::max(rest, 0.0L)));
    const RealMatrix prep = completion_orthogonal(amp);

    // SELECT entries: V_l = sign(c_l) * (I (x) dilation of (H - I)^l); the
    // remainder slot flips the lowest ancilla so its block is zero.
    const Matrix shifted = h - Matrix::Identity(ds, ds);
    std::vector<Matrix> select(slots);
    Matrix power = Matrix::Identity(ds, ds);
    const Matrix id_upper = Matrix::Identity(upper, upper);
    for (int l = 0; l <= series.lmax; ++l) {
        if (l > 0) {
            power = (power * shifted).eval();
        }
        const auto dil = block_encode_dense(power, 1.0).dense();
        Matrix v = kron<cplx>(id_upper, dil);
        if (series.coefficients[l] < 0.0) {
            v = -v;
        }
        select[l] = std::move(v);
    }
    {
        Matrix flip = Matrix::Zero(2 * ds, 2 * ds);
        flip.topRightCorner(ds, ds) = Matrix::Identity(ds, ds);
        flip.bottomLeftCorner(ds, ds) = Matrix::Identity(ds, ds);
        select[series.lmax + 1] = kron<cplx>(id_upper, flip);
    }
    for (Eigen::Index l = series.lmax + 2; l < slots; ++l) {
        select[l] = Matrix::Identity(inner, inner);
    }

    // U = (P^T (x) I) SELECT (P (x) I), blockwise.
    const Eigen::Index total = slots * inner;
    Matrix full = Matrix::Zero(total, total);
    for (Eigen::Index r = 0; r < slots; ++r) {
        for (Eigen::Index c = 0; c < slots; ++c) {
            auto blk = full.block(r * inner, c * inner, inner, inner);
            for (Eigen::Index l = 0; l < slots; ++l) {
                const double w = prep(l, r) * prep(l, c);
                if (w != 0.0) {
                    blk += w * select[l];
                }
            }
        }
    }
    if (!unitarity_check(full, 1e-9)) {
        throw NumericalError("be_exp: LCU unitary is not unitary within 1e-9");
    }

    BlockEncoding be;
    be.U = std::make_shared<DenseUnitary>(std::move(full));
    be.alpha = series.normalization;
    be.ancillas = series.registerQubits + a;
    be.systemQubits = s;
    be.logicalDim = ds;
    const Matrix signed_target = static_cast<double>(sign) * u.target;
    be.target = expm(signed_target);
    const double e2 = series.normalization;
    if (u.epsilon <= eps / 2.0) {
        be.epsilon = e2 * eps;
    } else {
        be.epsilon = e2 * (eps / 2.0 + u.epsilon);
        be.notes.emplace_back("input error exceeds eps/2; bound widened to e^2 (eps/2 + delta)");
    }
    be.cost = u.cost;
    be.cost.charge("lcu_powers", series.lmax);
    be.cost.charge("controlled_U_queries", series.lmax);
    be.cost.charge("time", formulas::exp_encoding_cost(u.alpha, kappa, eps, a, u.cost.get("time")));
    certify(be, "be_exp");
    return be;
}

long long ControlledSimUnitary::index_value(long long r) const {
    const long long half = 1LL << J;
    return r >= half ? r - 2 * half : r;
}

Matrix ControlledSimUnitary::block(long long m) const {
    const long long half = 1LL << J;
    if (m < -half || m >= half) {
        throw ValidationError("controlled simulation index out of range");
    }
    const double md = static_cast<double>(m);
    Vector phases(spectrum.eigenvalues.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::polar(1.0, md * gamma * spectrum.eigenvalues(i));
    }
    return spectrum.eigenvectors * phases.asDiagonal() * spectrum.eigenvectors.adjoint();
}

Matrix ControlledSimUnitary::dense() const {
    const auto d = hamiltonian.rows();
    const long long count = 2LL << J;
    Matrix w = Matrix::Zero(count * d, count * d);
    for (long long r = 0; r < count; ++r) {
        w.block(r * d, r * d, d, d) = block(index_value(r));
    }
    return w;
}

ControlledSimUnitary be_controlled_sim(const BlockEncoding &u, int J, double gamma, double eps) {
    if (J < 0 || J > 40) {
        throw ValidationError("be_controlled_sim: J out of range");
    }
    if (!(eps > 0.0)) {
        throw ValidationError("be_controlled_sim: eps must be positive");
    }
    ControlledSimUnitary w;
    w.J = J;
    w.bigM = std::ldexp(1.0, J);
    w.gamma = gamma;
    const Matrix h = be_extract(u);
    const double defect = hermitian_defect(h);
    if (defect > 1e-8) {
        throw ValidationError("be_controlled_sim: encoded matrix is not Hermitian; dilate it first");
    }
    w.hamiltonian = (h + h.adjoint()) / 2.0;
    w.spectrum = hermitian_eig(w.hamiltonian);
    const Matrix recon = w.spectrum.eigenvectors * w.spectrum.eigenvalues.cast<cplx>().asDiagonal() *
                         w.spectrum.eigenvectors.adjoint();
    const double residual = spectral_norm(Matrix(recon - w.hamiltonian));
    w.epsilon = (u.epsilon + defect + residual) * w.bigM * std::abs(gamma) + 1e-12;
    w.cost = u.cost;
    w.cost.charge("controlled_U_queries",
                  formulas::controlled_sim_queries(u.alpha, w.bigM, gamma, J, eps));
    return w;
}

} // namespace qmedr
