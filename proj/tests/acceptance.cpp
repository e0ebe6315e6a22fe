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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qmedr/dataset_io.hpp"
#include "qmedr/qmedr_sim.hpp"
#include "qmedr/resource_model.hpp"
#include "test_support.hpp"

using namespace qmedr;
namespace tu = qmedr::testutil;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string &what) {
        if (!ok && pass) {
            detail << "first failure: " << what << "; ";
        }
        pass = pass && ok;
    }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int id, const std::string &title, const std::function<void(Outcome &)> &body) {
    Outcome out;
    const auto t0 = Clock::now();
    try {
        body(out);
    } catch (const std::exception &e) {
        out.pass = false;
        out.detail << "exception: " << e.what() << "; ";
    }
    out.detail << "time " << seconds_since(t0) << " s";
    std::printf("[%s] criterion %2d: %s (%s)\n", out.pass ? "PASS" : "FAIL", id, title.c_str(),
                out.detail.str().c_str());
    std::fflush(stdout);
    g_failures += out.pass ? 0 : 1;
}

Matrix identity_padded(const RealMatrix &h) {
    const auto n = h.rows();
    const auto size = Eigen::Index{1} << qubits_for(static_cast<std::size_t>(n));
    Matrix out = Matrix::Identity(size, size);
    out.topLeftCorner(n, n) = h.cast<cplx>();
    return out;
}

// Register distribution of phase estimation by explicit inverse Fourier sum.
double accurate_probability_oracle(int q, double phi, int n) {
    const long long size = 1LL << q;
    double acc = 0.0;
    for (long long b = 0; b < size; ++b) {
        double d = std::abs(static_cast<double>(b) / static_cast<double>(size) - phi);
        d = std::min(d, 1.0 - d);
        if (d >= std::ldexp(1.0, -n)) {
            continue;
        }
        cplx s = 0.0;
        for (long long k = 0; k < size; ++k) {
            s += std::polar(1.0, 2.0 * kPi * static_cast<double>(k) *
                                     (phi - static_cast<double>(b) / static_cast<double>(size)));
        }
        acc += std::norm(s) / static_cast<double>(size * size);
    }
    return acc;
}

MedrProblem build(Variant v, const Dataset &ds, int k) {
    switch (v) {
    case Variant::ELPP:
        return build_elpp(ds, knn_graph(ds, k));
    case Variant::EUDP:
        return build_eudp(ds, knn_graph(ds, k));
    case Variant::ENPE:
        return build_enpe(ds, npe_weights(ds, k));
    default:
        return build_eda(ds);
    }
}

RealMatrix align_subspace(const RealMatrix &yc, const RealMatrix &yq) {
    Eigen::JacobiSVD<RealMatrix> svd(yc.transpose() * yq, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return yc * svd.matrixU() * svd.matrixV().transpose();
}

double worst_audit_ratio = 0.0;
void collect_audit(const QuantumRun &run) {
    for (const auto &a : run.audit) {
        worst_audit_ratio = std::max(worst_audit_ratio, a.ratio());
    }
}

void criterion1(Outcome &o) {
    std::mt19937_64 rng(1);
    double worst = -1.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 16);
        BlockEncoding be;
        Matrix a;
        switch (trial % 4) {
        case 0:
        case 1: {
            a = tu::complex_gaussian(n, n, rng);
            be = block_encode_dense(a, spectral_norm(a) * (1.0 + 0.5 * (trial % 3)));
            break;
        }
        case 2: {
            const Eigen::Index p = Eigen::Index{1} << (rng() % 4);
            const Matrix x = tu::complex_gaussian(p, p, rng);
            const Matrix y = tu::complex_gaussian(p, p, rng);
            be = be_product(block_encode_dense(x, spectral_norm(x)),
                            block_encode_dense(y, 1.2 * spectral_norm(y)));
            a = x * y;
            break;
        }
        default: {
            const Eigen::Index p = Eigen::Index{1} << (rng() % 4);
            const Matrix x = tu::complex_gaussian(p, p, rng);
            be = be_hermitian_dilation(block_encode_dense(x, spectral_norm(x)));
            a = Matrix::Zero(2 * p, 2 * p);
            a.topRightCorner(p, p) = x;
            a.bottomLeftCorner(p, p) = x.adjoint();
            break;
        }
        }
        const Matrix padded = pad_to_power_of_two(a);
        const double err = spectral_norm(Matrix(padded - be_extract(be)));
        worst = std::max(worst, err - be.epsilon);
        o.require(err <= be.epsilon + 1e-9, "block error at trial " + std::to_string(trial));
        o.require(spectral_norm(a) <= be.alpha + be.epsilon + 1e-12, "norm bound");
        o.require(verify_unitary(be, 1e-9), "unitarity at trial " + std::to_string(trial));
    }
    o.detail << "200 constructions, max(err - eps) " << worst << "; ";
}

void criterion2(Outcome &o) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2);
    const double e2 = std::exp(2.0);
    double worst = 0.0;
    const double kappas[] = {2.0, 5.0, 10.0};
    const double epss[] = {1e-2, 1e-3, 1e-4};
    for (int trial = 0; trial < 50; ++trial) {
        const double kappa = kappas[trial % 3];
        const double eps = epss[(trial / 3) % 3];
        const int sign = trial % 2 == 0 ? 1 : -1;
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 16);
        const RealMatrix h = tu::random_spectrum_matrix(n, 1.0 / kappa, 1.0, rng);
        const auto be = be_exp(block_encode_dense(identity_padded(h), 1.0), sign, eps, kappa);
        o.require(be.alpha == e2, "normalisation differs from e^2");
        const Matrix oracle = (static_cast<double>(sign) * h).cast<cplx>().exp();
        const Matrix got = be_extract(be).topLeftCorner(n, n);
        const double err = spectral_norm(Matrix(oracle - got));
        worst = std::max(worst, err / (e2 * eps));
        o.require(err <= e2 * eps, "exp error at trial " + std::to_string(trial));
    }
    o.require(exp_series(1, 1e-3).normalization == e2, "series normalisation");
    const double took = seconds_since(t0);
    o.require(took < 60.0, "runtime");
    o.detail << "50 cases, max err/(e^2 eps) " << worst << "; ";
}

void criterion3(Outcome &o) {
    std::mt19937_64 rng(3);
    const double e4 = std::exp(4.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = Eigen::Index{1} << (1 + trial % 4);
        const double kappa = trial % 2 ? 10.0 : 5.0;
        const double eps1 = std::ldexp(1.0, -(4 + trial % 9));
        const double eps2 = std::ldexp(1.0, -(5 + trial % 7));
        const RealMatrix s1 = tu::random_spectrum_matrix(n, 1.0 / kappa, 1.0, rng);
        const RealMatrix s2 = tu::random_spectrum_matrix(n, 1.0 / kappa, 1.0, rng);
        const auto p = be_product(be_exp(block_encode_dense(s2, 1.0), -1, eps2, kappa),
                                  be_exp(block_encode_dense(s1, 1.0), +1, eps1, kappa));
        const RealMatrix exact = expm(RealMatrix(-s2)) * expm(s1);
        const double err = spectral_norm(Matrix(be_extract(p) - exact.cast<cplx>()));
        const double bound = e4 * (eps1 + eps2);
        worst = std::max(worst, err / bound);
        o.require(err <= bound + 1e-8, "product error at trial " + std::to_string(trial));
        o.require(p.epsilon <= bound * (1 + 1e-12), "declared epsilon exceeds e^4(eps1+eps2)");
        o.require(std::abs(p.alpha - e4) <= 1e-12 * e4, "alpha differs from e^4");
    }
    o.detail << "20 cases, max err/bound " << worst << "; ";
}

void criterion4(Outcome &o) {
    std::mt19937_64 rng(4);
    double worstVal = 0.0, worstVec = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = Eigen::Index{1} << (trial % 4);
        const Matrix h = tu::complex_gaussian(n, n, rng);
        const auto d = be_hermitian_dilation(block_encode_dense(h, 1.05 * spectral_norm(h)));
        const auto spec = hermitian_eig(be_extract(d));
        Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (int sign : {1, -1}) {
                const Eigen::Index col = sign > 0 ? 2 * n - 1 - i : i;
                const double sigma = sign * svd.singularValues()(i);
                worstVal = std::max(worstVal, std::abs(spec.eigenvalues(col) - sigma));
                Vector w(2 * n);
                w << svd.matrixU().col(i), static_cast<double>(sign) * svd.matrixV().col(i);
                w /= std::sqrt(2.0);
                worstVec = std::max(worstVec, 1.0 - std::abs(spec.eigenvectors.col(col).dot(w)));
            }
        }
    }
    o.require(worstVal <= 1e-8, "spectrum");
    o.require(worstVec <= 1e-6, "eigenvector structure");
    o.detail << "20 cases, max eigenvalue error " << worstVal << ", max 1-overlap " << worstVec
             << "; ";
}

void criterion5(Outcome &o) {
    std::mt19937_64 rng(5);
    const double t = default_evolution_time();
    std::uniform_real_distribution<double> ud(0.0, 0.999 * 2.0 * kPi / t);
    double worstMargin = 1.0;
    for (auto [n, eta] : {std::pair{4, 0.1}, std::pair{6, 0.05}}) {
        const int q1 = qpe_register_bits(n, eta);
        o.require(q1 == n + static_cast<int>(std::ceil(std::log2(2.0 + 1.0 / eta))), "q1 sizing");
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 7);
            RealVector d(dim);
            for (auto &x : d) {
                x = ud(rng);
            }
            const RealMatrix h = d.asDiagonal();
            const auto r = simulate_qpe(block_encode_dense(h, d.maxCoeff()), q1, t,
                                        QpeOptions{n, eta});
            for (const auto &br : r.branches) {
                const double oracle = accurate_probability_oracle(q1, br.phase, n);
                o.require(std::abs(oracle - br.accurateMass) <= 1e-9, "Fejer mass vs oracle");
                o.require(oracle >= 1.0 - eta, "accurate mass below 1 - eta");
                worstMargin = std::min(worstMargin, oracle - (1.0 - eta));
            }
        }
        // exactly representable phases
        RealVector d(4);
        const long long size = 1LL << q1;
        for (int k = 0; k < 4; ++k) {
            d(k) = 2.0 * kPi * static_cast<double>((7 * k + 3) % size) / (static_cast<double>(size) * t);
        }
        const auto r = simulate_qpe(block_encode_dense(RealMatrix(d.asDiagonal()), d.maxCoeff()), q1, t,
                                    QpeOptions{n, eta});
        for (const auto &br : r.branches) {
            o.require(std::abs(br.accurateMass - 1.0) <= 1e-12, "exact phase mass");
            o.require(std::abs(fejer_probability(q1, br.phase, br.modeBin) - 1.0) <= 1e-12,
                      "exact phase bin");
        }
    }
    o.detail << "40 spectra, min margin over 1-eta " << worstMargin << "; ";
}

void criterion6(Outcome &o) {
    std::mt19937_64 rng(6);
    const double t = default_evolution_time();
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 15);
        const int m = 1 + static_cast<int>(rng() % std::min(dim, 4));
        const auto dir = trial % 2 ? Direction::Largest : Direction::Smallest;
        const RealMatrix h = tu::random_spectrum_matrix(dim, 0.05, 1.0, rng);
        const auto spec = hermitian_eig(h);
        const int n = 10;
        const int q1 = qpe_register_bits(n, 0.1);
        const auto r = simulate_qpe(block_encode_dense(h, 1.0), q1, t, QpeOptions{n, 0.1});
        const auto found = find_extreme_eigenvalues(r, m, dir, static_cast<std::uint64_t>(trial));
        std::vector<std::pair<long long, int>> keyed;
        const double size = std::ldexp(1.0, q1);
        for (int k = 0; k < dim; ++k) {
            const long long b = std::llround(spec.eigenvalues(k) * t / (2.0 * kPi) * size);
            keyed.push_back({dir == Direction::Smallest ? b : -b, k});
        }
        std::sort(keyed.begin(), keyed.end());
        for (int j = 0; j < m; ++j) {
            const double want = 2.0 * kPi * std::abs(static_cast<double>(keyed[j].first)) / (size * t);
            o.require(std::abs(found.solution.eigenvalues(j) - want) <= 1e-12,
                      "extreme set at trial " + std::to_string(trial));
            const double exact = spec.eigenvalues(keyed[j].second);
            o.require(std::abs(found.solution.eigenvalues(j) - exact) <= 2.0 * kPi * std::ldexp(1.0, -n) / t,
                      "readout outside 2^-n");
        }
    }
    std::vector<double> ratio;
    std::ostringstream r;
    for (int dim : {4, 8, 16}) {
        double total = 0.0;
        const int reps = 40;
        for (int k = 0; k < reps; ++k) {
            const RealMatrix h = tu::random_spectrum_matrix(dim, 0.05, 1.0, rng);
            const auto per = simulate_qpe(block_encode_dense(h, 1.0), 12, t, QpeOptions{8, 0.1});
            total += find_extreme_eigenvalues(per, 1, Direction::Smallest, k).cost.get(
                "dh_grover_iterations");
        }
        ratio.push_back(total / reps / std::sqrt(static_cast<double>(dim)));
        r << ratio.back() << " ";
    }
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    o.require(*hi / *lo <= 2.0, "Grover iterations do not scale as sqrt(M)");
    o.detail << "50 problems exact; iterations/sqrt(M) over M=4,8,16: " << r.str() << "; ";
}

void criterion7(Outcome &o) {
    const auto t0 = Clock::now();
    const auto ds = synth_dataset(SynthKind::Blobs, 32, 16, 2, 13);
    for (auto v : {Variant::ELPP, Variant::EUDP, Variant::ENPE, Variant::EDA}) {
        const auto p = build(v, ds, 5);
        const auto cls = solve_medr(p, 2, ds.X);
        QuantumConfig qc;
        qc.m = 2;
        qc.noise = NoiseMode::Deterministic;
        qc.epsTarget = 1e-2;
        const auto run = run_qmedr(ds, p, qc);
        collect_audit(run);
        RealMatrix yc = project(ds, cls).Y;
        if (cls.degenerateCut || run.solution.degenerateCut) {
            yc = align_subspace(yc, run.digital.entries);
        }
        const double diff = (run.digital.entries - yc).cwiseAbs().maxCoeff();
        o.require(diff <= 1e-2, to_string(v) + " max diff");
        o.detail << to_string(v) << " " << diff << "; ";
    }
    o.require(seconds_since(t0) < 300.0, "runtime");
}

void criterion8(Outcome &o) {
    double worstExact = 1.0, worstSampled = 1.0;
    const Variant variants[] = {Variant::ELPP, Variant::EUDP, Variant::ENPE, Variant::EDA};
    for (int c = 0; c < 10; ++c) {
        const auto ds = synth_dataset(c % 2 ? SynthKind::Ring : SynthKind::Blobs, 32,
                                      c < 5 ? 16 : 8, 2, 100 + static_cast<std::uint64_t>(c));
        const auto p = build(variants[c % 4], ds, 5);
        QuantumConfig qc;
        qc.m = 2;
        qc.analog = true;
        qc.seed = static_cast<std::uint64_t>(c);
        const auto run = run_qmedr(ds, p, qc);
        collect_audit(run);
        const double exact = run.analog->fidelityVsClassical;
        AnalogOptions aopt;
        aopt.seed = static_cast<std::uint64_t>(c);
        aopt.hadamardShots = 100000;
        aopt.qpe = &run.qpe;
        aopt.branches = &run.search.branches;
        const auto sampled = assemble_analog_state(ds.X, run.solution, aopt);
        o.require(exact >= 0.99, "exact-xi fidelity case " + std::to_string(c));
        o.require(sampled.fidelityVsClassical >= 0.95, "sampled fidelity case " + std::to_string(c));
        o.require(std::abs(run.analog->amplitudes.squaredNorm() - 1.0) <= 1e-9, "normalisation");
        worstExact = std::min(worstExact, exact);
        worstSampled = std::min(worstSampled, sampled.fidelityVsClassical);
    }
    o.detail << "10 cases, min fidelity exact " << worstExact << ", sampled (1e5 shots) "
             << worstSampled << "; ";
}

void criterion9(Outcome &o) {
    std::mt19937_64 rng(9);
    double worst = 0.0, gap = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(trial % 7);
        RealVector x = tu::gaussian_matrix(n, 1, rng);
        RealVector v = tu::gaussian_matrix(n, 1, rng);
        x.normalize();
        v.normalize();
        const Matrix prepA = kron<cplx>(state_preparation(x), Matrix::Identity(n, n));
        const Matrix uv = state_preparation(v);
        const Matrix prepB = kron<cplx>(uv, uv);
        const double est = hadamard_test(prepA, prepB, HadamardMode::Real).estimate;
        worst = std::max(worst, std::abs(est - x.dot(v) * v(0)));
        gap = std::max(gap, std::abs(est - x.dot(v)));
    }
    // constructed case: <x|v> = <0|v> = 0.6
    RealVector x(2);
    x << 1.0, 0.0;
    const Matrix prepA = kron<cplx>(state_preparation(x), Matrix::Identity(2, 2));
    RealVector v2(2);
    v2 << 0.6, 0.8;
    const Matrix prepB = kron<cplx>(state_preparation(v2), state_preparation(v2));
    const double est = hadamard_test(prepA, prepB, HadamardMode::Real).estimate;
    o.require(std::abs(est - 0.6 * 0.6) <= 1e-9, "constructed confound value");
    o.require(std::abs(est - 0.6) > 0.2, "confound indistinguishable from the overlap");
    o.require(worst <= 1e-9, "random confound values");
    o.detail << "max |est - <x|v><0|v>| " << worst << ", constructed est " << est
             << " vs <x|v> 0.6; ";
}

void criterion10(Outcome &o) {
    ResourceParams p;
    p.N = 32;
    p.M = 16;
    p.m = 2;
    p.kappa1 = 10;
    p.kappa2 = 10;
    p.alpha = 1;
    p.beta = 1;
    p.a = 1;
    p.b = 1;
    p.eps = 1e-2;
    p.eps1 = 1e-3;
    p.eps2 = 1e-4;
    p.maxRowNorm = 3;
    const auto r0 = eval_step_costs(p);
    o.require(r0.perStep.at("step1").formula == "T = max{alpha*kappa1*(a+T1), beta*kappa2*(b+T2)}",
              "step1 golden");
    o.require(r0.perStep.at("step2").formula == "(T+a+b)*m*sqrt(M)/eps1", "step2 golden");
    o.require(r0.perStep.at("step3").formula == "(T+a+b)/(eps1*eps2)*sqrt(M/m)", "step3 golden");
    o.require(r0.perStep.at("total").formula == "(T+a+b)*max_i|x_i|^2*m*sqrt(M)/eps", "total golden");
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.5, 30.0);
    for (int k = 0; k < 5; ++k) {
        ResourceParams q = p;
        q.N = std::ceil(u(rng) * 4);
        q.M = std::ceil(u(rng));
        q.m = 1 + k;
        q.kappa1 = u(rng);
        q.kappa2 = u(rng);
        q.alpha = u(rng);
        q.beta = u(rng);
        q.a = 1 + k;
        q.b = 3;
        q.T1 = u(rng);
        q.T2 = u(rng);
        q.eps1 = 1e-3 / u(rng);
        q.eps2 = 1e-3 / u(rng);
        q.eps = 1e-2 / u(rng);
        q.maxRowNorm = u(rng);
        const auto r = eval_step_costs(q);
        const double t = std::max(q.alpha * q.kappa1 * (q.a + q.T1), q.beta * q.kappa2 * (q.b + q.T2));
        const double unit = t + q.a + q.b;
        const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); };
        o.require(close(r.perStep.at("step1").count, t), "step1 value");
        o.require(close(r.perStep.at("step2").count, unit * q.m * std::sqrt(q.M) / q.eps1), "step2 value");
        o.require(close(r.perStep.at("step3").count, unit / (q.eps1 * q.eps2) * std::sqrt(q.M / q.m)),
                  "step3 value");
        o.require(close(r.perStep.at("total").count,
                        unit * q.maxRowNorm * q.maxRowNorm * q.m * std::sqrt(q.M) / q.eps),
                  "total value");
    }
    // Tallies from the pipeline runs of criteria 7 and 8 plus a size grid.
    for (int dim : {4, 8, 16}) {
        for (int m : {1, 2, 4}) {
            if (m > dim) {
                continue;
            }
            const auto ds = synth_dataset(SynthKind::Blobs, 24, dim, 2, 40 + static_cast<std::uint64_t>(dim + m));
            QuantumConfig qc;
            qc.m = m;
            const auto run = run_qmedr(ds, build(Variant::ELPP, ds, 4), qc);
            collect_audit(run);
        }
    }
    o.require(worst_audit_ratio <= 8.0, "tally above 8x its expression");
    o.detail << "4 golden strings, 5 numeric sets, worst tally/expression " << worst_audit_ratio
             << "; ";
}

void criterion11(Outcome &o) {
    double rowSum = 0.0, minEig = 0.0, npeSum = 0.0, scatter = 0.0;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto ds = synth_dataset(SynthKind::Blobs, 32, 16, 3, seed);
        const auto g = knn_graph(ds, 5);
        const auto c = complement_graph(g);
        for (const RealMatrix *l : {&g.L, &c.L}) {
            rowSum = std::max(rowSum, l->rowwise().sum().cwiseAbs().maxCoeff());
            minEig = std::min(minEig, hermitian_eig(*l).eigenvalues(0));
        }
        const RealMatrix w = npe_weights(ds, 5);
        npeSum = std::max(npeSum, (w.rowwise().sum().array() - 1.0).abs().maxCoeff());
        const auto s = scatter_matrices(ds);
        scatter = std::max(scatter, (s.between + s.within - s.total).cwiseAbs().maxCoeff());
    }
    o.require(rowSum <= 1e-10, "Laplacian row sums");
    o.require(minEig >= -1e-9, "Laplacian PSD");
    o.require(npeSum <= 1e-10, "NPE rows sum to one");
    o.require(scatter <= 1e-10, "scatter decomposition");
    // NPE residual against 100 random simplex weights
    std::mt19937_64 rng(3);
    const RealMatrix x = tu::gaussian_matrix(16, 5, rng);
    const auto ds = Dataset::from_matrix(x);
    const int k = 6;
    const RealMatrix w = npe_weights(ds, k);
    const auto nb = knn_neighbors(ds, k);
    std::exponential_distribution<double> ex(1.0);
    int beaten = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double ours = (x.row(i) - w.row(i) * x).norm();
        for (int trial = 0; trial < 100; ++trial) {
            RealVector c(k);
            for (auto &ci : c) {
                ci = ex(rng);
            }
            c /= c.sum();
            Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(x.cols());
            for (int a = 0; a < k; ++a) {
                r += c(a) * x.row(nb[i][a]);
            }
            beaten += (x.row(i) - r).norm() + 1e-9 < ours ? 1 : 0;
        }
    }
    o.require(beaten == 0, "a random simplex candidate beat the NPE weights");
    o.detail << "row sums " << rowSum << ", min eig " << minEig << ", NPE row sums " << npeSum
             << ", scatter " << scatter << ", simplex wins " << beaten << "; ";
}

} // namespace

int main() {
    const auto t0 = Clock::now();
    report(1, "block-encoding verification", criterion1);
    report(2, "exponential encoding error", criterion2);
    report(3, "product composition", criterion3);
    report(4, "Hermitian dilation", criterion4);
    report(5, "phase estimation register sizing", criterion5);
    report(6, "minimum/maximum finding", criterion6);
    report(7, "end-to-end digital pipeline", criterion7);
    report(8, "analog pipeline", criterion8);
    report(9, "Hadamard-test confound", criterion9);
    report(10, "resource formulas and tallies", criterion10);
    report(11, "graph and scatter constructions", criterion11);
    std::printf("%d of 11 criteria passed in %.1f s\n", 11 - g_failures, seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
