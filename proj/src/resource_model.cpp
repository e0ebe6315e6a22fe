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
#include "qmedr/resource_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmedr/errors.hpp"

namespace qmedr {

namespace formulas {

namespace {
double log_ratio(double x) { return std::log2(std::max(x, 2.0)); }
double loglog_ratio(double x) { return std::max(1.0, std::log2(log_ratio(x))); }
} // namespace

double exp_encoding_cost(double alpha, double kappa, double eps, double ancillas, double unitTime) {
    const double l = log_ratio(1.0 / eps);
    return alpha * kappa * l * (ancillas + unitTime) + kappa * log_ratio(kappa / eps) * l;
}

double controlled_sim_queries(double alpha, double bigM, double gamma, int J, double eps) {
    const double x = std::max(J, 1) / eps;
    return std::abs(alpha * bigM * gamma) + std::max(J, 1) * log_ratio(x) / loglog_ratio(x);
}

double hamiltonian_sim_queries(double alpha, double t, double eps) {
    const double x = 1.0 / eps;
    return std::abs(alpha * t) + log_ratio(x) / loglog_ratio(x);
}

double grover_iterations(double p) {
    if (!(p > 0.0) || p > 1.0) {
        throw ValidationError("grover_iterations: marked mass must lie in (0, 1]");
    }
    return std::ceil(std::numbers::pi / 4.0 * std::sqrt(1.0 / p));
}

} // namespace formulas

namespace {

void require_positive(double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string("resource parameter ") + name + " must be positive");
    }
}

void validate(const ResourceParams &p) {
    require_positive(p.N, "N");
    require_positive(p.M, "M");
    require_positive(p.m, "m");
    require_positive(p.kappa1, "kappa1");
    require_positive(p.kappa2, "kappa2");
    require_positive(p.alpha, "alpha");
    require_positive(p.beta, "beta");
    require_positive(p.a, "a");
    require_positive(p.b, "b");
    require_positive(p.T1, "T1");
    require_positive(p.T2, "T2");
    require_positive(p.eps, "eps");
    require_positive(p.eps1, "eps1");
    require_positive(p.eps2, "eps2");
    require_positive(p.maxRowNorm, "maxRowNorm");
}

double step1_time(const ResourceParams &p) {
    return std::max(p.alpha * p.kappa1 * (p.a + p.T1), p.beta * p.kappa2 * (p.b + p.T2));
}

double eta_factor(const ResourceParams &p) { return std::sqrt(p.m) * p.maxRowNorm * p.maxRowNorm; }

} // namespace

ResourceReport eval_step_costs(const ResourceParams &p) {
    validate(p);
    ResourceReport r;
    r.parameters = p;
    const double t = step1_time(p);
    const double unit = t + p.a + p.b;
    r.perStep["step1"] = {"T = max{alpha*kappa1*(a+T1), beta*kappa2*(b+T2)}", t};
    r.perStep["step2"] = {"(T+a+b)*m*sqrt(M)/eps1", unit * p.m * std::sqrt(p.M) / p.eps1};
    r.perStep["step3"] = {"(T+a+b)/(eps1*eps2)*sqrt(M/m)",
                          unit / (p.eps1 * p.eps2) * std::sqrt(p.M / p.m)};
    r.perStep["total"] = {"(T+a+b)*max_i|x_i|^2*m*sqrt(M)/eps",
                          unit * p.maxRowNorm * p.maxRowNorm * p.m * std::sqrt(p.M) / p.eps};
    r.quantumTotal = r.perStep["total"].count;
    r.classicalTotal = classical_cost(p, Variant::Generic);
    r.polylogFactors = {"log(1/eps) [exp encoding]", "log(kappa/eps) [exp encoding]",
                        "log(M) [state preparation]", "log(1/eta) [phase estimation]",
                        "polylog(NM/eps) [oracle access]"};
    return r;
}

double classical_cost(const ResourceParams &p, Variant v) {
    require_positive(p.N, "N");
    require_positive(p.M, "M");
    const double n = p.N, m = p.M;
    switch (v) {
    case Variant::ELPP:
    case Variant::EUDP:
        return m * n * n + m * m * m;
    case Variant::ENPE:
        require_positive(p.k, "k");
        return p.k * p.k * p.k * n * m + m * m * m;
    case Variant::EDA:
        return m * n * n + n * n * n;
    case Variant::Generic:
        return n * n * m + m * m * m;
    }
    throw ValidationError("classical_cost: unknown variant");
}

std::string classical_formula(Variant v) {
    switch (v) {
    case Variant::ELPP:
    case Variant::EUDP:
        return "M*N^2 + M^3";
    case Variant::ENPE:
        return "k^3*N*M + M^3";
    case Variant::EDA:
        return "M*N^2 + N^3";
    case Variant::Generic:
        return "N^2*M + M^3";
    }
    throw ValidationError("classical_formula: unknown variant");
}

double quantum_cost(const ResourceParams &p, Variant v, bool with_k) {
    require_positive(p.N, "N");
    require_positive(p.M, "M");
    require_positive(p.m, "m");
    require_positive(p.maxRowNorm, "maxRowNorm");
    const double n = p.N;
    const double eta = eta_factor(p);
    const double rm = std::sqrt(p.M);
    const double f2 = p.frobeniusX * p.frobeniusX;
    const double kk = with_k ? p.k + 1.0 : 1.0;
    if (with_k && (v == Variant::ELPP || v == Variant::EUDP)) {
        require_positive(p.k, "k");
    }
    switch (v) {
    case Variant::ELPP: {
        const double t = std::max(kk * f2 * p.kappa1, f2 * p.kappa2);
        return (with_k ? p.k : 1.0) * n * std::sqrt(n) + t * eta * rm;
    }
    case Variant::EUDP: {
        const double t = std::max(kk * f2 * p.kappa1, f2 * p.frobeniusLprime * p.kappa2);
        return n * n + t * eta * rm;
    }
    case Variant::ENPE: {
        require_positive(p.k, "k");
        const double t = std::max(f2 * p.kappa1, f2 * p.kappa2);
        return p.k * n + t * eta * rm;
    }
    case Variant::EDA:
        return std::max(p.kappa1, p.kappa2) * eta * rm;
    case Variant::Generic:
        return eval_step_costs(p).quantumTotal;
    }
    throw ValidationError("quantum_cost: unknown variant");
}

std::string quantum_formula(Variant v, bool with_k) {
    const std::string tail = "T*eta*sqrt(M), eta = sqrt(m)*max_i|x_i|^2";
    switch (v) {
    case Variant::ELPP:
        return with_k ? "k*N^(3/2) + " + tail + ", T = max{(k+1)*|X|_F^2*kappa1, |X|_F^2*kappa2}"
                      : "N^(3/2) + " + tail + ", T = max{|X|_F^2*kappa1, |X|_F^2*kappa2}";
    case Variant::EUDP:
        return with_k ? "N^2 + " + tail + ", T = max{(k+1)*|X|_F^2*kappa1, |X|_F^2*|L'|_F*kappa2}"
                      : "N^2 + " + tail + ", T = max{|X|_F^2*kappa1, |X|_F^2*|L'|_F*kappa2}";
    case Variant::ENPE:
        return "k*N + " + tail + ", T = max{|X|_F^2*kappa1, |X|_F^2*kappa2}";
    case Variant::EDA:
        return "max{kappa1, kappa2}*eta*sqrt(M), eta = sqrt(m)*max_i|x_i|^2";
    case Variant::Generic:
        return "(T+a+b)*max_i|x_i|^2*m*sqrt(M)/eps";
    }
    throw ValidationError("quantum_formula: unknown variant");
}

std::vector<TallyAudit> audit_tallies(const CostModel &cost, const ResourceParams &p) {
    std::vector<TallyAudit> out;
    const double rm = std::sqrt(p.M);
    if (cost.get("dh_grover_iterations") > 0.0) {
        out.push_back({"minimum finding Grover iterations", "m*sqrt(M)",
                       cost.get("dh_grover_iterations"), p.m * rm});
    }
    const double calls = cost.get("qpe_calls");
    if (calls > 0.0 && p.eps1 > 0.0 && p.eta > 0.0) {
        out.push_back({"phase estimation queries per call", "(2+1/(2*eta))/eps1",
                       cost.get("qpe_controlled_queries") / calls,
                       (2.0 + 1.0 / (2.0 * p.eta)) / p.eps1});
    }
    if (cost.get("aa_iterations") > 0.0) {
        out.push_back({"amplitude amplification iterations", "sqrt(M/m)",
                       cost.get("aa_iterations"), std::sqrt(p.M / p.m)});
    }
    if (cost.get("lcu_powers") > 0.0) {
        const double l = std::log2(1.0 / std::max(std::min(p.eps, 0.5), 1e-300));
        out.push_back({"LCU series powers", "alpha*kappa1*log(1/eps) + beta*kappa2*log(1/eps)",
                       cost.get("lcu_powers"), (p.alpha * p.kappa1 + p.beta * p.kappa2) * l});
    }
    return out;
}

} // namespace qmedr
