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
#include <random>

#include "qmedr/errors.hpp"
#include "qmedr/qmedr_sim.hpp"

namespace qmedr {

namespace {

constexpr double kPi = std::numbers::pi;

// Circular distance between two phases in turns.
double turn_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 1.0);
    return std::min(d, 1.0 - d);
}

long long signed_bin(long long b, long long size, EigenRoute route) {
    if (route == EigenRoute::Dilation && b >= size / 2) {
        return b - size;
    }
    return b;
}

} // namespace

int qpe_register_bits(int nBits, double eta) {
    if (nBits < 1) {
        throw ValidationError("phase estimation accuracy must be at least one bit");
    }
    if (!(eta > 0.0) || eta >= 1.0) {
        throw ValidationError("phase estimation failure budget eta must lie in (0, 1)");
    }
    return nBits + static_cast<int>(std::ceil(std::log2(2.0 + 1.0 / eta)));
}

double fejer_probability(int q, double phi, long long b) {
    const double size = std::ldexp(1.0, q);
    const double x = phi * size - static_cast<double>(b);
    const double den = std::sin(kPi * x / size);
    if (std::abs(den) < 1e-15) {
        return 1.0;
    }
    const double num = std::sin(kPi * x);
    return (num * num) / (size * size * den * den);
}

cplx qpe_amplitude(int q, double phi, long long b) {
    const double size = std::ldexp(1.0, q);
    const double x = phi * size - static_cast<double>(b);
    const double den = std::sin(kPi * x / size);
    if (std::abs(den) < 1e-15) {
        return {1.0, 0.0};
    }
    const double mag = std::sin(kPi * x) / (size * den);
    return std::polar(mag, kPi * x * (1.0 - 1.0 / size));
}

double default_evolution_time() { return kPi / (std::exp(2.0) + 1e-6); }

double PhaseEstimationResult::estimate(long long b) const {
    const long long size = registerSize();
    const double s = static_cast<double>(signed_bin(b, size, route));
    return 2.0 * kPi * s / (static_cast<double>(size) * t);
}

PhaseEstimationResult simulate_qpe(const BlockEncoding &be, int q1, double t,
                                   const QpeOptions &options) {
    if (q1 < 1 || q1 > 40) {
        throw ValidationError("simulate_qpe: q1 must lie in [1, 40]");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw ValidationError("simulate_qpe: evolution time must be positive");
    }
    PhaseEstimationResult r;
    r.q1 = q1;
    r.t = t;
    r.eta = options.eta;
    r.route = options.route;
    r.nBits = options.nBits > 0
                  ? options.nBits
                  : std::max(1, q1 - static_cast<int>(std::ceil(std::log2(2.0 + 1.0 / options.eta))));
    if (r.nBits > q1) {
        throw ValidationError("simulate_qpe: accuracy exceeds the register size");
    }

    const double simEps = std::max(be.epsilon, 1e-12);
    const auto sim = be_controlled_sim(be, q1, t, simEps);
    r.cost = sim.cost;
    // The probe covers the logical subspace only; zero padding is decoupled.
    auto spec = sim.spectrum;
    const Eigen::Index logical = be.logicalDim;
    if (r.route == EigenRoute::Symmetric && logical > 0 && logical < spec.eigenvalues.size()) {
        const Matrix &h = sim.hamiltonian;
        const Eigen::Index pad = h.rows() - logical;
        if (h.topRightCorner(logical, pad).cwiseAbs().maxCoeff() > 1e-12) {
            throw NumericalError("simulate_qpe: padding is coupled to the logical block");
        }
        spec = hermitian_eig(Matrix(h.topLeftCorner(logical, logical)));
    }
    const auto dim = spec.eigenvalues.size();
    if (spec.eigenvectors.imag().cwiseAbs().maxCoeff() > 1e-8) {
        r.warnings.emplace_back("eigenvectors carry imaginary parts; real parts used");
    }
    const RealMatrix vecs = spec.eigenvectors.real();

    // Branch table: eigenpairs on the Hermitian route, positive pairs of the
    // dilation (singular triplets) otherwise.
    std::vector<int> source;
    if (r.route == EigenRoute::Symmetric) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            source.push_back(static_cast<int>(k));
        }
    } else {
        if (dim % 2 != 0) {
            throw ValidationError("simulate_qpe: dilation route needs an even dimension");
        }
        const double scale = std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
        for (Eigen::Index k = 0; k < dim; ++k) {
            if (spec.eigenvalues(k) > 1e-12 * scale) {
                source.push_back(static_cast<int>(k));
            }
        }
        if (static_cast<Eigen::Index>(source.size()) != dim / 2) {
            throw NumericalError("simulate_qpe: dilated operator is singular; positive branches "
                                 "do not cover the probe");
        }
    }
    const auto half = r.route == EigenRoute::Symmetric ? dim : dim / 2;
    const double weight = 1.0 / static_cast<double>(half);

    RealMatrix branchVecs(half, static_cast<Eigen::Index>(source.size()));
    if (r.route == EigenRoute::Dilation) {
        // Mass of |1>|probe> on the positive eigenspace, then amplify it.
        double mass = 0.0;
        for (std::size_t i = 0; i < source.size(); ++i) {
            const RealVector lower = vecs.col(source[i]).tail(half);
            mass += lower.squaredNorm() / static_cast<double>(half);
            branchVecs.col(static_cast<Eigen::Index>(i)) = lower.normalized();
        }
        r.positiveBranchMass = mass;
        r.cost.charge("dilation_aa_iterations", formulas::grover_iterations(mass));
    } else {
        branchVecs = vecs;
    }
    {
        const RealMatrix coeff = branchVecs * branchVecs.transpose() / std::sqrt(double(half));
        const RealMatrix reduced = coeff * coeff.transpose();
        r.probeMixedness =
            (reduced - RealMatrix::Identity(half, half) / double(half)).cwiseAbs().maxCoeff();
    }

    const long long size = 1LL << q1;
    const long long accHalf = 1LL << (q1 - r.nBits);
    const long long window = 2 * accHalf;
    const bool allBins = 2 * window + 1 >= size;
    const double accuracy = std::ldexp(1.0, -r.nBits);
    double stored = 0.0;
    r.minAccurateMass = 1.0;

    for (std::size_t i = 0; i < source.size(); ++i) {
        QpeBranch br;
        br.eigenvalue = spec.eigenvalues(source[i]);
        br.vector = branchVecs.col(static_cast<Eigen::Index>(i));
        br.weight = weight;
        const double raw = br.eigenvalue * t / (2.0 * kPi);
        if (r.route == EigenRoute::Symmetric) {
            if (raw < -1e-12 || raw >= 1.0) {
                throw NumericalError("simulate_qpe: phase wraparound (lambda * t outside [0, 2pi))");
            }
        } else if (raw >= 0.5) {
            throw NumericalError("simulate_qpe: phase wraparound (|sigma| * t >= pi)");
        }
        br.phase = std::clamp(raw, 0.0, std::nextafter(1.0, 0.0));
        br.modeBin = static_cast<long long>(std::llround(br.phase * static_cast<double>(size))) % size;

        double inWindow = 0.0;
        double accurate = 0.0;
        const long long lo = allBins ? 0 : br.modeBin - window;
        const long long hi = allBins ? size - 1 : br.modeBin + window;
        for (long long raw_b = lo; raw_b <= hi; ++raw_b) {
            const long long b = ((raw_b % size) + size) % size;
            const double p = fejer_probability(q1, br.phase, b);
            inWindow += p;
            if (turn_distance(static_cast<double>(b) / static_cast<double>(size), br.phase) <
                accuracy) {
                accurate += p;
            }
            if (p > 0.0) {
                r.bins.push_back({b, 0.0, p * weight, static_cast<int>(i)});
            }
        }
        br.accurateMass = accurate;
        br.tailMass = std::max(0.0, 1.0 - inWindow) * weight;
        stored += inWindow * weight;
        r.tailMass += br.tailMass;
        r.minAccurateMass = std::min(r.minAccurateMass, accurate);
        r.branches.push_back(std::move(br));
    }
    for (auto &bin : r.bins) {
        bin.eigenvalueEstimate = r.estimate(bin.registerValue);
    }
    for (auto &br : r.branches) {
        br.modeEstimate = r.estimate(br.modeBin);
    }
    if (std::abs(stored + r.tailMass - 1.0) > 1e-9) {
        throw NumericalError("simulate_qpe: register distribution does not sum to one");
    }
    r.cost.charge("qpe_calls", 1.0);
    r.cost.charge("qpe_controlled_queries", static_cast<double>(size - 1));
    return r;
}

double expected_min_finding_iterations(const std::vector<long long> &values) {
    const auto n = values.size();
    if (n == 0) {
        return 0.0;
    }
    // Under the strict (value, index) order only the rank of the threshold
    // matters: from rank r the marked set is ranks 0..r-1.
    const double total = static_cast<double>(n);
    std::vector<double> e(n, 0.0);
    double prefix = 0.0;
    const double finalCheck = formulas::grover_iterations(1.0 / total);
    for (std::size_t r = 0; r < n; ++r) {
        if (r == 0) {
            e[r] = finalCheck;
        } else {
            e[r] = formulas::grover_iterations(static_cast<double>(r) / total) +
                   prefix / static_cast<double>(r);
        }
        prefix += e[r];
    }
    return prefix / total;
}

ExtremeSearch find_extreme_eigenvalues(const PhaseEstimationResult &per, int m,
                                       Direction direction, std::uint64_t seed) {
    const auto count = static_cast<int>(per.branches.size());
    if (m < 1 || m > count) {
        throw ValidationError("find_extreme_eigenvalues: m must lie in [1, number of branches]");
    }
    const long long size = per.registerSize();
    std::vector<long long> key(count);
    for (int i = 0; i < count; ++i) {
        const long long s = signed_bin(per.branches[i].modeBin, size, per.route);
        key[i] = direction == Direction::Smallest ? s : -s;
    }
    const auto better = [&](int a, int b) {
        return key[a] < key[b] || (key[a] == key[b] && a < b);
    };

    std::mt19937_64 rng(seed);
    ExtremeSearch out;
    std::vector<bool> found(count, false);
    const double total = static_cast<double>(count);
    for (int j = 0; j < m; ++j) {
        std::vector<int> open;
        for (int i = 0; i < count; ++i) {
            if (!found[i]) {
                open.push_back(i);
            }
        }
        std::uniform_int_distribution<std::size_t> pick0(0, open.size() - 1);
        int threshold = open[pick0(rng)];
        for (;;) {
            std::vector<int> marked;
            for (int i : open) {
                if (better(i, threshold)) {
                    marked.push_back(i);
                }
            }
            if (marked.empty()) {
                out.cost.charge("dh_grover_iterations", formulas::grover_iterations(1.0 / total));
                break;
            }
            const double p = static_cast<double>(marked.size()) / total;
            out.cost.charge("dh_grover_iterations", formulas::grover_iterations(p));
            out.cost.charge("dh_oracle_calls", 1.0);
            std::uniform_int_distribution<std::size_t> pick(0, marked.size() - 1);
            threshold = marked[pick(rng)];
            ++out.thresholdUpdates;
        }
        found[threshold] = true;
        out.branches.push_back(threshold);
    }

    const auto dim = per.branches.front().vector.size();
    EigenSolution &sol = out.solution;
    sol.direction = direction;
    sol.route = per.route;
    sol.eigenvalues.resize(m);
    sol.eigenvectors.resize(dim, m);
    for (int j = 0; j < m; ++j) {
        const auto &br = per.branches[out.branches[j]];
        sol.eigenvalues(j) = br.modeEstimate;
        sol.eigenvectors.col(j) = br.vector;
    }
    // Cut diagnostics against the best branch left out.
    int next = -1;
    for (int i = 0; i < count; ++i) {
        if (!found[i] && (next < 0 || better(i, next))) {
            next = i;
        }
    }
    if (next >= 0) {
        const int last = out.branches.back();
        sol.cutGap = std::abs(per.branches[next].modeEstimate - per.branches[last].modeEstimate);
        if (key[next] == key[last]) {
            sol.degenerateCut = true;
            sol.warnings.emplace_back("identical register readouts at the selection cut");
        }
    }
    return out;
}

} // namespace qmedr
