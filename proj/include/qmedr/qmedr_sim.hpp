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
#include <optional>
#include <string>
#include <vector>

#include "qmedr/block_encoding.hpp"
#include "qmedr/graph_embedding.hpp"
#include "qmedr/medr_classical.hpp"
#include "qmedr/resource_model.hpp"

namespace qmedr {

enum class NoiseMode { Deterministic, Sampled };
enum class SignSource { Anchor, Reference };
enum class HadamardMode { Real, Imag };

[[nodiscard]] std::string to_string(NoiseMode m);
[[nodiscard]] std::string to_string(SignSource s);
NoiseMode parse_noise_mode(const std::string &name);
SignSource parse_sign_source(const std::string &name);

// ---------------------------------------------------------------------------
// Phase estimation

/// q1 = n + ceil(log2(2 + 1/eta)).
[[nodiscard]] int qpe_register_bits(int nBits, double eta);

/// |<b|QPE|phi>|^2 for a q-bit register: sin^2(pi 2^q d) / (2^{2q} sin^2(pi d)),
/// d = phi - b / 2^q.
[[nodiscard]] double fejer_probability(int q, double phi, long long b);

/// Complex amplitude of register value b for eigenphase phi (turns).
[[nodiscard]] cplx qpe_amplitude(int q, double phi, long long b);

struct QpeBin {
    long long registerValue = 0;
    double eigenvalueEstimate = 0.0;
    double probabilityMass = 0.0;
    int eigenvectorIndex = 0;
};

/// One eigen-branch of the probe after phase estimation.
struct QpeBranch {
    double eigenvalue = 0.0;     ///< exact eigenvalue (singular value on the dilation route)
    RealVector vector;           ///< eigenvector (right singular vector on the dilation route)
    double phase = 0.0;          ///< eigenvalue * t / 2pi, in turns, reduced to [0, 1)
    long long modeBin = 0;       ///< most likely register value
    double modeEstimate = 0.0;   ///< eigenvalue read from modeBin
    double weight = 0.0;         ///< probe weight of the branch
    double accurateMass = 0.0;   ///< P(n-bit accurate readout | branch)
    double tailMass = 0.0;       ///< probability not stored in explicit bins (absolute)
};

struct QpeOptions {
    int nBits = -1; ///< accuracy target; -1 derives it from q1 and eta
    double eta = 0.1;
    EigenRoute route = EigenRoute::Symmetric;
};

struct PhaseEstimationResult {
    int q1 = 0;
    int nBits = 0;
    double t = 0.0;
    double eta = 0.1;
    EigenRoute route = EigenRoute::Symmetric;
    std::vector<QpeBin> bins;
    std::vector<QpeBranch> branches;
    double tailMass = 0.0;          ///< total probability outside the explicit bins
    double positiveBranchMass = 1.0; ///< dilation route: mass amplified before readout
    double probeMixedness = 0.0;    ///< max |Tr_1(probe) - I/M|
    double minAccurateMass = 1.0;   ///< min over branches of accurateMass
    CostModel cost;
    std::vector<std::string> warnings;

    /// Eigenvalue estimate attached to register value b.
    [[nodiscard]] double estimate(long long b) const;
    [[nodiscard]] long long registerSize() const { return 1LL << q1; }
};

/// Exact phase estimation of e^{iHt}, H the matrix encoded by `be`, on the
/// maximally entangled probe. On the dilation route `be` encodes the Hermitian
/// dilation of a non-Hermitian operator; only the positive branches survive
/// amplitude amplification.
PhaseEstimationResult simulate_qpe(const BlockEncoding &be, int q1, double t,
                                   const QpeOptions &options = {});

/// Time step that keeps every eigenphase of |H| <= e^2 inside half a turn.
[[nodiscard]] double default_evolution_time();

struct ExtremeSearch {
    EigenSolution solution; ///< eigenvalues are register readouts
    std::vector<int> branches;
    int thresholdUpdates = 0;
    CostModel cost;
};

/// Simulated Duerr-Hoyer search over the branches of `per`, repeated m times
/// with previously found branches excluded from the threshold oracle.
ExtremeSearch find_extreme_eigenvalues(const PhaseEstimationResult &per, int m,
                                       Direction direction, std::uint64_t seed = 0);

/// Expected Grover iterations for one minimum search over `values` (exact
/// expectation over the random thresholds, ties resolved towards lower index).
double expected_min_finding_iterations(const std::vector<long long> &values);

// ---------------------------------------------------------------------------
// Compressed states

struct InnerProductOptions {
    NoiseMode mode = NoiseMode::Deterministic;
    std::uint64_t seed = 0;
    int repetitions = 7; ///< sampled mode: median of this many estimates
    double qpeQueries = 1.0; ///< controlled-U queries behind one |phi> preparation
};

/// (<x_i|v_j>)^2 / sqrt(m) per entry, with simulated estimation noise <= eps2.
RealMatrix estimate_inner_products(const RealMatrix &x, const EigenSolution &sol, double eps2,
                                   const InnerProductOptions &options = {},
                                   CostModel *cost = nullptr);
RealMatrix estimate_inner_products(const Dataset &ds, const EigenSolution &sol, double eps2,
                                   const InnerProductOptions &options = {},
                                   CostModel *cost = nullptr);

struct FixedPointFormat {
    int q2 = 32;
    int integerBits = 7; ///< fraction bits are q2 - 1 - integerBits
    [[nodiscard]] int fractionBits() const { return q2 - 1 - integerBits; }
};

struct DigitalOptions {
    FixedPointFormat format;
    SignSource signSource = SignSource::Anchor;
    double eps2 = 0.0;          ///< noise bound the table was produced with
    std::optional<RealMatrix> referenceY; ///< required for SignSource::Reference
    RealVector eigenvectorError; ///< per column bound on |v_j - v_j^exact|; empty = 0
};

struct DigitalState {
    RealMatrix entries;     ///< quantised y_ij readouts
    RealMatrix errorBound;  ///< certified per-entry bound
    int q2 = 32;
    int integerBits = 7;
    SignSource signSource = SignSource::Anchor;
    double epsilonTotal = 0.0;
    double amplitude = 0.0; ///< uniform 1/sqrt(Nm)
    CostModel cost;
};

/// y_ij = sqrt(sqrt(m) * |x_i|^2 * table_ij) with signs restored, quantised.
DigitalState assemble_digital_state(const RealMatrix &x, const EigenSolution &sol,
                                    const RealMatrix &table, const DigitalOptions &options);

struct HadamardResult {
    double probabilityOne = 0.0;
    double estimate = 0.0; ///< Re(zeta <Psi|Phi>) = 1 - 2 P(1), or its sampled value
};

/// Hadamard test on prepA|0> and prepB|0>. shots = 0 returns the exact value.
HadamardResult hadamard_test(const Matrix &prepA, const Matrix &prepB, HadamardMode mode,
                             long long shots = 0, std::uint64_t seed = 0);

/// Preparation unitary with first column v / |v|.
Matrix state_preparation(const RealVector &v);

struct AnalogOptions {
    std::uint64_t seed = 0;
    long long hadamardShots = 0; ///< 0 = exact overlaps
    double overlapFloor = 1e-6;
    /// Phase estimation data; when absent, readouts are taken as exact.
    const PhaseEstimationResult *qpe = nullptr;
    const std::vector<int> *branches = nullptr; ///< found branches in qpe
};

struct AnalogState {
    Matrix amplitudes; ///< N x m, register-clean component, normalised
    /// <target|rho|target>; amplitude left entangled with the eigenvalue
    /// register is counted as loss, so this is a lower bound.
    double fidelityVsClassical = 0.0;
    int anchorIndex = -1;
    int anchorAttempts = 0;
    RealVector xi;    ///< exact <v_j|x>
    RealVector xiHat; ///< estimates used in the rotations
    double C = 0.0;
    double successMass = 0.0; ///< post-selection probability before amplification
    CostModel cost;
};

/// Anchor-state construction of sum_ij y_ij |i>|j> / |Y|_F.
AnalogState assemble_analog_state(const RealMatrix &x, const EigenSolution &sol,
                                  const AnalogOptions &options = {});
AnalogState assemble_analog_state(const Dataset &ds, const EigenSolution &sol,
                                  const AnalogOptions &options = {});

// ---------------------------------------------------------------------------
// End-to-end pipeline

struct QuantumConfig {
    int m = 2;
    std::optional<Direction> direction;
    double expEps1 = 1e-10; ///< error of the e^{S1} encoding
    double expEps2 = 1e-10; ///< error of the e^{-S2} encoding
    double epsTarget = 1e-2;
    std::optional<double> innerProductEps; ///< overrides the derived eps2
    int nBits = 16;
    int maxBits = 26;
    double eta = 0.1;
    NoiseMode noise = NoiseMode::Deterministic;
    std::uint64_t seed = 0;
    FixedPointFormat format;
    SignSource signSource = SignSource::Anchor;
    bool analog = false;
    long long hadamardShots = 0;
};

struct QuantumRun {
    EigenSolution solution;
    PhaseEstimationResult qpe;
    ExtremeSearch search;
    DigitalState digital;
    std::optional<AnalogState> analog;
    CostModel cost;
    ResourceParams params;
    std::vector<TallyAudit> audit;
    double encodingEpsilon = 0.0; ///< declared error of the e^{-S2} e^{S1} encoding
    double encodingAlpha = 0.0;
    int encodingAncillas = 0;
    Eigen::Index paddedDim = 0;
    double innerProductEps = 0.0;
    std::vector<std::string> warnings;
};

/// Steps 1-3 on a prepared problem; x supplies the samples to compress.
QuantumRun run_qmedr(const RealMatrix &x, const MedrProblem &problem, const QuantumConfig &config);
QuantumRun run_qmedr(const Dataset &ds, const MedrProblem &problem, const QuantumConfig &config);

/// Identity-type padding of the preconditioned pair to a power-of-two size;
/// the padded directions sit at the far end of the spectrum from the search.
std::pair<RealMatrix, RealMatrix> pad_problem(const MedrProblem &problem, Direction direction);

} // namespace qmedr
