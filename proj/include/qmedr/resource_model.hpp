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

#include <map>
#include <string>
#include <vector>

#include "qmedr/graph_embedding.hpp"

namespace qmedr {

/// Abstract query/gate tallies charged by constructions and pipeline stages.
/// Keys are free-form; std::map keeps serialisation order stable.
struct CostModel {
    std::map<std::string, double> tallies;

    void charge(const std::string &key, double amount) { tallies[key] += amount; }
    [[nodiscard]] double get(const std::string &key) const {
        const auto it = tallies.find(key);
        return it == tallies.end() ? 0.0 : it->second;
    }
    CostModel &operator+=(const CostModel &other) {
        for (const auto &[k, v] : other.tallies) {
            tallies[k] += v;
        }
        return *this;
    }
};

/// Closed-form cost expressions with constants dropped. Logarithms are base 2.
namespace formulas {

/// alpha*kappa*log(1/eps)*(a + T_U) + kappa*log(kappa/eps)*log(1/eps)
double exp_encoding_cost(double alpha, double kappa, double eps, double ancillas, double unitTime);

/// Controlled-U uses of a controlled (bigM, gamma)-simulation:
/// |alpha*bigM*gamma| + J*log(J/eps)/loglog(J/eps).
double controlled_sim_queries(double alpha, double bigM, double gamma, int J, double eps);

/// Controlled-U uses of an eps-precise e^{iHt}: |alpha*t| + log(1/eps)/loglog(1/eps).
double hamiltonian_sim_queries(double alpha, double t, double eps);

/// Grover iterations for marked mass p: ceil(pi/4 * sqrt(1/p)).
double grover_iterations(double p);

} // namespace formulas

/// Every parameter the complexity expressions read.
struct ResourceParams {
    double N = 0, M = 0, m = 0;
    double kappa1 = 0, kappa2 = 0;
    double alpha = 0, beta = 0; ///< normalisations of the S1 / S2 encodings
    double a = 0, b = 0;        ///< their ancilla counts
    double T1 = 1, T2 = 1;      ///< their implementation times
    double eps = 0;             ///< target error on y_ij
    double eps1 = 0;            ///< phase-estimation error
    double eps2 = 0;            ///< inner-product estimation error
    double frobeniusX = 0;
    double maxRowNorm = 0;
    double k = 0;               ///< neighbourhood size (ELPP/EUDP/ENPE)
    double frobeniusLprime = 0; ///< |L'|_F (EUDP)
    double eta = 0.1;           ///< phase-estimation failure budget
};

struct StepCost {
    std::string formula;
    double count = 0.0;
};

struct ResourceReport {
    ResourceParams parameters;
    std::map<std::string, StepCost> perStep; ///< step1, step2, step3, total
    double quantumTotal = 0.0;
    double classicalTotal = 0.0;
    std::vector<std::string> polylogFactors;
};

/// Evaluate the per-step expressions and the end-to-end total.
ResourceReport eval_step_costs(const ResourceParams &params);

/// Classical running time of the variant (constants dropped).
double classical_cost(const ResourceParams &params, Variant variant);
std::string classical_formula(Variant variant);

/// Quantum running time of the variant as tabulated per application.
/// with_k keeps the neighbourhood factor k that the table drops for ELPP/EUDP.
double quantum_cost(const ResourceParams &params, Variant variant, bool with_k = false);
std::string quantum_formula(Variant variant, bool with_k = false);

/// One logged tally set against the expression that bounds it.
struct TallyAudit {
    std::string name;
    std::string formula;
    double logged = 0.0;
    double bound = 0.0;
    [[nodiscard]] double ratio() const { return bound > 0.0 ? logged / bound : 0.0; }
};

/// Compare pipeline tallies with their bounding expressions.
std::vector<TallyAudit> audit_tallies(const CostModel &cost, const ResourceParams &params);

} // namespace qmedr
