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
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmedr/errors.hpp"
#include "qmedr/qmedr_sim.hpp"

namespace qmedr {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

RealMatrix pad_block(const RealMatrix &s, Eigen::Index size, double fill) {
    RealMatrix out = RealMatrix::Zero(size, size);
    const auto n = s.rows();
    out.topLeftCorner(n, n) = s;
    for (Eigen::Index i = n; i < size; ++i) {
        out(i, i) = fill;
    }
    return out;
}

} // namespace

std::string to_string(NoiseMode m) {
    return m == NoiseMode::Deterministic ? "deterministic" : "sampled";
}

std::string to_string(SignSource s) { return s == SignSource::Anchor ? "anchor" : "reference"; }

NoiseMode parse_noise_mode(const std::string &name) {
    const auto n = lower(name);
    if (n == "deterministic") {
        return NoiseMode::Deterministic;
    }
    if (n == "sampled") {
        return NoiseMode::Sampled;
    }
    throw ValidationError("unknown noise mode '" + name + "' (deterministic|sampled)");
}

SignSource parse_sign_source(const std::string &name) {
    const auto n = lower(name);
    if (n == "anchor") {
        return SignSource::Anchor;
    }
    if (n == "reference") {
        return SignSource::Reference;
    }
    throw ValidationError("unknown sign source '" + name + "' (anchor|reference)");
}

std::pair<RealMatrix, RealMatrix> pad_problem(const MedrProblem &problem, Direction direction) {
    const auto dim = problem.S1.rows();
    const auto size = Eigen::Index{1} << qubits_for(static_cast<std::size_t>(dim));
    // Smallest search: padded e^{-S2} e^{S1} eigenvalue e^{1 - 1/kappa2} bounds
    // the spectrum from above. Largest search: e^{1/kappa1 - 1} from below.
    if (direction == Direction::Smallest) {
        return {pad_block(problem.S1, size, 1.0), pad_block(problem.S2, size, 1.0 / problem.kappa2)};
    }
    return {pad_block(problem.S1, size, 1.0 / problem.kappa1), pad_block(problem.S2, size, 1.0)};
}

QuantumRun run_qmedr(const RealMatrix &x, const MedrProblem &problem, const QuantumConfig &config) {
    const auto dim = problem.S1.rows();
    if (problem.S2.rows() != dim || x.cols() != dim) {
        throw ValidationError("run_qmedr: data and problem dimensions differ");
    }
    if (x.rows() < 1) {
        throw ValidationError("run_qmedr: no samples");
    }
    if (config.m < 1 || config.m > dim) {
        throw ValidationError("run_qmedr: m must satisfy 1 <= m <= M");
    }
    if (config.nBits < 1 || config.maxBits < config.nBits) {
        throw ValidationError("run_qmedr: need 1 <= nBits <= maxBits");
    }
    if (!(config.epsTarget > 0.0)) {
        throw ValidationError("run_qmedr: epsTarget must be positive");
    }
    const Direction direction = config.direction.value_or(default_direction(problem.variant));
    QuantumRun run;

    // Step 1: encodings of e^{S1}, e^{-S2} and their product.
    const auto [s1, s2] = pad_problem(problem, direction);
    run.paddedDim = s1.rows();
    const auto be1 = block_encode_dense(s1, 1.0);
    const auto be2 = block_encode_dense(s2, 1.0);
    const auto exp1 = be_exp(be1, +1, config.expEps1, problem.kappa1);
    const auto exp2 = be_exp(be2, -1, config.expEps2, problem.kappa2);
    const auto product = be_product(exp2, exp1);
    run.encodingAlpha = product.alpha;
    run.encodingEpsilon = product.epsilon;
    run.encodingAncillas = product.ancillas;
    run.cost += product.cost;

    const RealMatrix e = be_extract(product).real();
    const double asym = (e - e.transpose()).cwiseAbs().maxCoeff();
    const EigenRoute route = asym <= kSymmetrizeThreshold ? EigenRoute::Symmetric : EigenRoute::Dilation;
    const BlockEncoding qbe = route == EigenRoute::Symmetric ? product : be_hermitian_dilation(product);

    // Step 2: phase estimation and extreme-value search, refining the
    // register while the selection cut is unresolved.
    const double t = default_evolution_time();
    int n = config.nBits;
    for (;;) {
        const int q1 = qpe_register_bits(n, config.eta);
        run.qpe = simulate_qpe(qbe, q1, t, QpeOptions{n, config.eta, route});
        run.cost += run.qpe.cost;
        run.search = find_extreme_eigenvalues(run.qpe, config.m, direction, config.seed);
        run.cost += run.search.cost;
        if (!run.search.solution.degenerateCut || n + 2 > config.maxBits) {
            break;
        }
        run.warnings.push_back("selection cut unresolved at " + std::to_string(n) +
                               " bits; refining");
        n += 2;
    }
    for (const auto &w : run.qpe.warnings) {
        run.warnings.push_back(w);
    }

    EigenSolution sol = run.search.solution;
    for (Eigen::Index j = 0; j < sol.eigenvectors.cols(); ++j) {
        if (sol.eigenvectors.col(j).tail(run.paddedDim - dim).norm() > 1e-6) {
            throw NumericalError("run_qmedr: a padding direction was selected");
        }
    }
    sol.eigenvectors = RealMatrix(sol.eigenvectors.topRows(dim));
    for (Eigen::Index j = 0; j < sol.eigenvectors.cols(); ++j) {
        sol.eigenvectors.col(j).normalize();
    }
    sol.asymmetry = asym;
    {
        double res = 0.0;
        const RealMatrix eTop = e.topLeftCorner(dim, dim);
        for (Eigen::Index j = 0; j < sol.eigenvectors.cols(); ++j) {
            const double lam = run.qpe.branches[run.search.branches[j]].eigenvalue;
            const RealVector v = sol.eigenvectors.col(j);
            const RealVector r = route == EigenRoute::Symmetric
                                     ? RealVector(eTop * v - lam * v)
                                     : RealVector(eTop.transpose() * (eTop * v) - lam * lam * v);
            res = std::max(res, r.norm());
        }
        sol.residual = res;
    }
    apply_sign_convention(sol, x);
    if (sol.degenerateCut) {
        run.warnings.emplace_back("degenerate eigenvalue cut; only the subspace is meaningful");
    }

    // Step 3: inner products and the digital state.
    const double maxNorm2 = x.rowwise().squaredNorm().maxCoeff();
    const double rootM = std::sqrt(static_cast<double>(config.m));
    run.innerProductEps = config.innerProductEps.value_or(
        maxNorm2 > 0.0 ? config.epsTarget * config.epsTarget / (rootM * maxNorm2)
                       : config.epsTarget * config.epsTarget);
    InnerProductOptions ipo;
    ipo.mode = config.noise;
    ipo.seed = config.seed;
    ipo.qpeQueries = static_cast<double>(run.qpe.registerSize() - 1);
    const RealMatrix table = estimate_inner_products(x, sol, run.innerProductEps, ipo, &run.cost);

    DigitalOptions dopt;
    dopt.format = config.format;
    dopt.signSource = config.signSource;
    dopt.eps2 = run.innerProductEps;
    if (config.signSource == SignSource::Reference) {
        const auto ref = solve_medr(problem, config.m, direction);
        EigenSolution aligned = ref;
        apply_sign_convention(aligned, x);
        dopt.referenceY = RealMatrix(x * aligned.eigenvectors);
    }
    // Perturbation of each selected vector from the encoding error, with the
    // gap taken from the register readouts less one bin of slack.
    {
        const double bin = 2.0 * std::numbers::pi / (static_cast<double>(run.qpe.registerSize()) * t);
        const double pert = qbe.epsilon;
        dopt.eigenvectorError = RealVector::Zero(config.m);
        for (int j = 0; j < config.m; ++j) {
            const int b = run.search.branches[j];
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < run.qpe.branches.size(); ++k) {
                if (static_cast<int>(k) != b) {
                    gap = std::min(gap, std::abs(run.qpe.branches[k].modeEstimate -
                                                 run.qpe.branches[b].modeEstimate));
                }
            }
            gap -= bin;
            dopt.eigenvectorError(j) = gap > 0.0 ? std::min(2.0, 2.0 * pert / gap) : 2.0;
        }
    }
    run.digital = assemble_digital_state(x, sol, table, dopt);
    run.cost += run.digital.cost;

    if (config.analog) {
        AnalogOptions aopt;
        aopt.seed = config.seed;
        aopt.hadamardShots = config.hadamardShots;
        aopt.qpe = &run.qpe;
        aopt.branches = &run.search.branches;
        run.analog = assemble_analog_state(x, sol, aopt);
        run.cost += run.analog->cost;
    }
    run.solution = std::move(sol);

    // Parameters of the complexity expressions for this run.
    auto &p = run.params;
    p.N = static_cast<double>(x.rows());
    p.M = static_cast<double>(dim);
    p.m = config.m;
    p.kappa1 = problem.kappa1;
    p.kappa2 = problem.kappa2;
    p.alpha = be1.alpha;
    p.beta = be2.alpha;
    p.a = be1.ancillas;
    p.b = be2.ancillas;
    p.T1 = 1.0;
    p.T2 = 1.0;
    p.eps = config.epsTarget;
    p.eps1 = std::ldexp(1.0, -run.qpe.nBits);
    p.eps2 = run.innerProductEps;
    p.frobeniusX = x.norm();
    p.maxRowNorm = std::sqrt(maxNorm2);
    p.eta = config.eta;

    // The search runs over the padded register and per phase-estimation call.
    ResourceParams audit = p;
    audit.M = static_cast<double>(run.paddedDim);
    audit.eps = std::min(config.expEps1, config.expEps2);
    run.audit = audit_tallies(run.cost, audit);
    return run;
}

QuantumRun run_qmedr(const Dataset &ds, const MedrProblem &problem, const QuantumConfig &config) {
    return run_qmedr(ds.X, problem, config);
}

} // namespace qmedr
