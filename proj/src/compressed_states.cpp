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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <map>
#include <random>

#include "qmedr/errors.hpp"
#include "qmedr/qmedr_sim.hpp"

namespace qmedr {

namespace {

constexpr double kPi = std::numbers::pi;

// Amplitude-estimation register size for an absolute error eps on p.
int ae_bits(double eps) {
    for (int bits = 1; bits < 40; ++bits) {
        const double step = kPi / std::ldexp(1.0, bits);
        if (step + step * step <= eps) {
            return bits;
        }
    }
    return 40;
}

// One amplitude-estimation readout of p = sin^2(pi * theta).
double ae_draw(double p, int bits, std::mt19937_64 &rng) {
    const long long size = 1LL << bits;
    const double theta = std::asin(std::sqrt(std::clamp(p, 0.0, 1.0))) / kPi;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double omega = u(rng) < 0.5 ? theta : 1.0 - theta;
    const long long mode = std::llround(omega * static_cast<double>(size));
    const long long span = std::min<long long>(64, size / 2);
    std::vector<long long> bins;
    std::vector<double> probs;
    double inWindow = 0.0;
    for (long long d = -span; d <= span; ++d) {
        const long long b = ((mode + d) % size + size) % size;
        if (d > -span && d == span && 2 * span >= size) {
            break;
        }
        bins.push_back(b);
        probs.push_back(fejer_probability(bits, omega, b));
        inWindow += probs.back();
    }
    long long b = 0;
    double r = u(rng);
    if (r >= inWindow) {
        std::uniform_int_distribution<long long> any(0, size - 1);
        b = any(rng);
    } else {
        for (std::size_t i = 0; i < bins.size(); ++i) {
            r -= probs[i];
            if (r < 0.0 || i + 1 == bins.size()) {
                b = bins[i];
                break;
            }
        }
    }
    const double s = std::sin(kPi * static_cast<double>(b) / static_cast<double>(size));
    return s * s;
}

// Worst case |y - yhat| when y^2 lies within e of yhat^2 and y >= 0.
double sqrt_error(double yhat2, double e) {
    const double yhat = std::sqrt(std::max(yhat2, 0.0));
    if (yhat == 0.0) {
        return std::sqrt(e);
    }
    const double lo = std::sqrt(std::max(yhat2 - e, 0.0));
    const double hi = std::sqrt(std::max(yhat2 + e, 0.0));
    return std::max(yhat - lo, hi - yhat);
}

} // namespace

RealMatrix estimate_inner_products(const RealMatrix &x, const EigenSolution &sol, double eps2,
                                   const InnerProductOptions &options, CostModel *cost) {
    if (!(eps2 > 0.0) || !std::isfinite(eps2)) {
        throw ValidationError("estimate_inner_products: eps2 must be positive");
    }
    const RealMatrix &v = sol.eigenvectors;
    if (x.cols() != v.rows()) {
        throw ValidationError("estimate_inner_products: data dimension does not match eigenvectors");
    }
    const auto n = x.rows();
    const auto m = v.cols();
    const auto dim = v.rows();
    if (m < 1) {
        throw ValidationError("estimate_inner_products: no eigenvectors");
    }
    const double rootM = std::sqrt(static_cast<double>(m));

    // |phi> = sum over the found branches; its preparation post-selects mass m/M.
    const RealMatrix gram = v.transpose() * v;
    if ((gram - RealMatrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-8) {
        throw ValidationError("estimate_inner_products: eigenvectors are not orthonormal");
    }
    const double projected = (v * v.transpose()).squaredNorm() / static_cast<double>(dim);
    const double expected = static_cast<double>(m) / static_cast<double>(dim);
    if (std::abs(projected - expected) > 1e-9) {
        throw NumericalError("estimate_inner_products: projection mass differs from m/M");
    }

    const int bits = ae_bits(eps2 * rootM);
    std::mt19937_64 rng(options.seed);
    RealMatrix table(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = x.row(i).norm();
        for (Eigen::Index j = 0; j < m; ++j) {
            const double overlap = norm > 0.0 ? x.row(i).dot(v.col(j)) / norm : 0.0;
            const double p = overlap * overlap;
            if (options.mode == NoiseMode::Deterministic) {
                table(i, j) = p / rootM + eps2 / 2.0;
            } else {
                std::vector<double> draws;
                for (int r = 0; r < std::max(1, options.repetitions); ++r) {
                    draws.push_back(ae_draw(p, bits, rng));
                }
                std::nth_element(draws.begin(), draws.begin() + draws.size() / 2, draws.end());
                table(i, j) = draws[draws.size() / 2] / rootM;
            }
        }
    }

    if (cost != nullptr) {
        const double aa = formulas::grover_iterations(expected);
        const double reps = options.mode == NoiseMode::Deterministic ? 1.0 : options.repetitions;
        cost->charge("aa_iterations", aa);
        cost->charge("ae_register_bits", bits);
        cost->charge("inner_product_estimates", static_cast<double>(n * m));
        cost->charge("step3_controlled_queries",
                     options.qpeQueries * std::ldexp(1.0, bits) * reps * aa);
    }
    return table;
}

RealMatrix estimate_inner_products(const Dataset &ds, const EigenSolution &sol, double eps2,
                                   const InnerProductOptions &options, CostModel *cost) {
    return estimate_inner_products(ds.X, sol, eps2, options, cost);
}

DigitalState assemble_digital_state(const RealMatrix &x, const EigenSolution &sol,
                                    const RealMatrix &table, const DigitalOptions &options) {
    const auto n = x.rows();
    const auto m = sol.eigenvectors.cols();
    if (table.rows() != n || table.cols() != m) {
        throw ValidationError("assemble_digital_state: table shape does not match N x m");
    }
    if (x.cols() != sol.eigenvectors.rows()) {
        throw ValidationError("assemble_digital_state: data dimension does not match eigenvectors");
    }
    const auto &fmt = options.format;
    if (fmt.q2 < 2 || fmt.integerBits < 0 || fmt.fractionBits() < 0) {
        throw ValidationError("assemble_digital_state: invalid fixed-point format");
    }
    if (options.signSource == SignSource::Reference &&
        (!options.referenceY || options.referenceY->rows() != n || options.referenceY->cols() != m)) {
        throw ValidationError("assemble_digital_state: reference signs need an N x m reference Y");
    }
    if (options.eigenvectorError.size() != 0 && options.eigenvectorError.size() != m) {
        throw ValidationError("assemble_digital_state: eigenvector error needs one value per column");
    }
    const double rootM = std::sqrt(static_cast<double>(m));

    // O1 norm lookup, two multiply-add stages, then f(x) = sqrt(sqrt(m) x).
    const RealVector norms2 = x.rowwise().squaredNorm();
    RealMatrix squares(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double stage1 = norms2(i) * table(i, j);
            squares(i, j) = rootM * stage1;
        }
    }
    const RealMatrix magnitude = squares.cwiseMax(0.0).cwiseSqrt();

    const int frac = fmt.fractionBits();
    const double ulp = std::ldexp(1.0, -frac);
    const double maxValue = std::ldexp(1.0, fmt.integerBits) - ulp;
    const double peak = n * m > 0 ? magnitude.maxCoeff() : 0.0;
    if (peak > maxValue) {
        int need = fmt.integerBits;
        while (std::ldexp(1.0, need) - ulp < peak) {
            ++need;
        }
        throw OverflowError("fixed-point register too small: |y| up to " + std::to_string(peak) +
                                " needs " + std::to_string(need) + " integer bits",
                            need);
    }

    DigitalState st;
    st.q2 = fmt.q2;
    st.integerBits = fmt.integerBits;
    st.signSource = options.signSource;
    st.entries.resize(n, m);
    st.errorBound.resize(n, m);
    st.amplitude = n * m > 0 ? 1.0 / std::sqrt(static_cast<double>(n * m)) : 0.0;

    std::vector<Matrix> columnPreps;
    if (options.signSource == SignSource::Anchor) {
        for (Eigen::Index j = 0; j < m; ++j) {
            columnPreps.push_back(state_preparation(sol.eigenvectors.col(j)));
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double rowNorm = std::sqrt(norms2(i));
        Matrix rowPrep;
        if (options.signSource == SignSource::Anchor && rowNorm > 0.0) {
            rowPrep = state_preparation(x.row(i).transpose());
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            double sign = 1.0;
            if (options.signSource == SignSource::Reference) {
                sign = (*options.referenceY)(i, j) < 0.0 ? -1.0 : 1.0;
            } else if (rowNorm > 0.0) {
                const auto h = hadamard_test(rowPrep, columnPreps[j], HadamardMode::Real);
                sign = h.estimate < 0.0 ? -1.0 : 1.0;
            }
            const double q = std::round(magnitude(i, j) / ulp) * ulp;
            st.entries(i, j) = sign * q;
            const double e = rootM * norms2(i) * options.eps2;
            const double dv = options.eigenvectorError.size() ? options.eigenvectorError(j) : 0.0;
            st.errorBound(i, j) = sqrt_error(squares(i, j), e) + ulp + 2.0 * rowNorm * dv;
        }
    }
    st.epsilonTotal = n * m > 0 ? st.errorBound.maxCoeff() : 0.0;
    st.cost.charge("norm_lookups", 1.0);
    st.cost.charge("qma_stages", 2.0);
    st.cost.charge("sqrt_evaluations", 1.0);
    if (options.signSource == SignSource::Anchor) {
        st.cost.charge("hadamard_tests", static_cast<double>(n * m));
    }
    return st;
}

Matrix state_preparation(const RealVector &v) { return completion_unitary(v.cast<cplx>()); }

HadamardResult hadamard_test(const Matrix &prepA, const Matrix &prepB, HadamardMode mode,
                             long long shots, std::uint64_t seed) {
    if (prepA.rows() != prepA.cols() || prepB.rows() != prepB.cols() ||
        prepA.rows() != prepB.rows() || prepA.rows() == 0) {
        throw ValidationError("hadamard_test: preparations must be square and of equal size");
    }
    if (shots < 0) {
        throw ValidationError("hadamard_test: negative shot count");
    }
    const auto d = prepA.rows();
    // Control qubit is the high bit: |c>|s>.
    Vector state = Vector::Zero(2 * d);
    state(0) = 1.0;
    // H on the control.
    Vector s1(2 * d);
    s1.head(d) = state.head(d) / std::sqrt(2.0);
    s1.tail(d) = state.head(d) / std::sqrt(2.0);
    // Controlled preparations: control 0 -> A, control 1 -> B.
    s1.head(d) = prepA * s1.head(d).eval();
    s1.tail(d) = prepB * s1.tail(d).eval();
    if (mode == HadamardMode::Imag) {
        s1.tail(d) *= cplx{0.0, 1.0}; // S gate
    }
    const Vector zero = (s1.head(d) + s1.tail(d)) / std::sqrt(2.0);
    const Vector one = (s1.head(d) - s1.tail(d)) / std::sqrt(2.0);
    HadamardResult r;
    const double n1 = one.squaredNorm();
    r.probabilityOne = std::clamp(n1 / (n1 + zero.squaredNorm()), 0.0, 1.0);
    if (shots == 0) {
        r.estimate = 1.0 - 2.0 * r.probabilityOne;
    } else {
        std::mt19937_64 rng(seed);
        std::binomial_distribution<long long> draw(shots, r.probabilityOne);
        r.estimate = 1.0 - 2.0 * static_cast<double>(draw(rng)) / static_cast<double>(shots);
    }
    return r;
}

AnalogState assemble_analog_state(const RealMatrix &x, const EigenSolution &sol,
                                  const AnalogOptions &options) {
    const RealMatrix &v = sol.eigenvectors;
    const auto n = x.rows();
    const auto m = v.cols();
    const auto dim = v.rows();
    if (n < 1 || m < 1) {
        throw ValidationError("assemble_analog_state: empty data or solution");
    }
    if (x.cols() != dim) {
        throw ValidationError("assemble_analog_state: data dimension does not match eigenvectors");
    }
    const double frobX = x.norm();
    if (frobX == 0.0) {
        throw ValidationError("assemble_analog_state: zero dataset");
    }
    const RealMatrix y = x * v;
    if (y.norm() == 0.0) {
        throw ValidationError("assemble_analog_state: data has no support on the eigenvectors");
    }
    const RealMatrix target = y / y.norm();

    AnalogState st;
    std::mt19937_64 rng(options.seed);
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::shuffle(order.begin(), order.end(), rng);

    // Anchor: a sample with non-negligible overlap on every selected eigenvector.
    std::vector<Matrix> vPreps;
    for (Eigen::Index j = 0; j < m; ++j) {
        vPreps.push_back(state_preparation(v.col(j)));
    }
    bool ok = false;
    for (Eigen::Index attempt = 0; attempt < n && !ok; ++attempt) {
        const auto idx = order[attempt];
        st.anchorAttempts = static_cast<int>(attempt + 1);
        const double norm = x.row(idx).norm();
        if (norm == 0.0) {
            continue;
        }
        const RealVector anchor = x.row(idx).transpose() / norm;
        const RealVector xi = v.transpose() * anchor;
        if (xi.cwiseAbs().minCoeff() <= options.overlapFloor) {
            continue;
        }
        RealVector xiHat = xi;
        if (options.hadamardShots > 0) {
            const Matrix anchorPrep = state_preparation(anchor);
            for (Eigen::Index j = 0; j < m; ++j) {
                xiHat(j) = hadamard_test(vPreps[j], anchorPrep, HadamardMode::Real,
                                         options.hadamardShots, options.seed + 1 + attempt * m + j)
                               .estimate;
            }
            st.cost.charge("hadamard_shots", static_cast<double>(options.hadamardShots * m));
        }
        if (xiHat.cwiseAbs().minCoeff() == 0.0) {
            continue;
        }
        st.anchorIndex = static_cast<int>(idx);
        st.xi = xi;
        st.xiHat = xiHat;
        ok = true;
    }
    if (!ok) {
        throw NumericalError("assemble_analog_state: no anchor sample overlaps every eigenvector");
    }
    st.C = st.xiHat.cwiseAbs().minCoeff();
    const RealVector ratio = st.C * st.xiHat.cwiseInverse();

    if (options.qpe == nullptr) {
        // Exact eigenvalue tags: label j is written exactly on branch j.
        Matrix amp(n, m);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                amp(i, j) = y(i, j) * st.xi(j) * ratio(j) / frobX;
            }
        }
        st.successMass = amp.squaredNorm();
        st.amplitudes = amp / std::sqrt(st.successMass);
        const cplx overlap = (target.cast<cplx>().cwiseProduct(st.amplitudes)).sum();
        st.fidelityVsClassical = std::norm(overlap);
    } else {
        const auto &per = *options.qpe;
        if (options.branches == nullptr || static_cast<Eigen::Index>(options.branches->size()) != m) {
            throw ValidationError("assemble_analog_state: found branches must accompany the QPE data");
        }
        const auto &found = *options.branches;
        const auto nb = static_cast<Eigen::Index>(per.branches.size());
        const auto pdim = per.branches.front().vector.size();
        if (pdim < dim) {
            throw ValidationError("assemble_analog_state: QPE branches are smaller than the data");
        }
        RealMatrix w(pdim, nb);
        for (Eigen::Index k = 0; k < nb; ++k) {
            w.col(k) = per.branches[k].vector;
        }
        // Align the found branches with the (sign-fixed) solution columns.
        for (Eigen::Index j = 0; j < m; ++j) {
            const auto k = found[j];
            if (w.col(k).head(dim).dot(v.col(j)) < 0.0) {
                w.col(k) = -w.col(k);
            }
        }
        RealMatrix xp = RealMatrix::Zero(n, pdim);
        xp.leftCols(dim) = x;
        const RealMatrix yAll = xp * w;
        RealVector anchorP = RealVector::Zero(pdim);
        anchorP.head(dim) = x.row(st.anchorIndex).transpose() / x.row(st.anchorIndex).norm();
        const RealVector xiAll = w.transpose() * anchorP;

        const long long size = per.registerSize();
        const long long half = 2LL << (per.q1 - per.nBits);
        const auto circ = [size](long long a, long long b) {
            const long long d = ((a - b) % size + size) % size;
            return std::min(d, size - d);
        };
        // U_lambda: readout b carries label j when it lies within two accuracy
        // intervals of branch j's mode (nearest found mode on overlap).
        std::map<long long, int> labelOf;
        for (Eigen::Index j = 0; j < m; ++j) {
            const long long mode = per.branches[found[j]].modeBin;
            for (long long d = -half; d <= half; ++d) {
                const long long b = ((mode + d) % size + size) % size;
                const auto it = labelOf.find(b);
                if (it == labelOf.end() ||
                    circ(b, mode) < circ(b, per.branches[found[it->second]].modeBin)) {
                    labelOf[b] = static_cast<int>(j);
                }
            }
        }
        // After labelling, inverse phase estimation returns branch k to the
        // empty register with amplitude sum_{b in W_j} |alpha_k(b)|^2; the
        // remainder stays entangled with the register and counts as garbage.
        RealMatrix windowMass = RealMatrix::Zero(nb, m);
        double denom = 0.0;
        for (const auto &[b, j] : labelOf) {
            Vector c(nb);
            for (Eigen::Index k = 0; k < nb; ++k) {
                const cplx a = qpe_amplitude(per.q1, per.branches[k].phase, b);
                c(k) = xiAll(k) * a;
                windowMass(k, j) += std::norm(a);
            }
            const Vector phi = ratio(j) * (yAll.cast<cplx>() * c) / frobX;
            denom += phi.squaredNorm();
        }
        Matrix coherent(n, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            const RealVector weights = xiAll.cwiseProduct(windowMass.col(j));
            coherent.col(j) = (ratio(j) * (yAll * weights) / frobX).cast<cplx>();
        }
        st.successMass = denom;
        const cplx overlap = target.cast<cplx>().cwiseProduct(coherent).sum();
        st.fidelityVsClassical = denom > 0.0 ? std::norm(overlap) / denom : 0.0;
        const double cn = coherent.norm();
        if (cn == 0.0) {
            throw NumericalError("assemble_analog_state: post-selected branch is empty");
        }
        st.amplitudes = coherent / cn;
    }
    st.cost.charge("analog_aa_iterations", formulas::grover_iterations(std::min(1.0, st.successMass)));
    st.cost.charge("controlled_rotations", static_cast<double>(m));
    return st;
}

AnalogState assemble_analog_state(const Dataset &ds, const EigenSolution &sol,
                                  const AnalogOptions &options) {
    return assemble_analog_state(ds.X, sol, options);
}

} // namespace qmedr
