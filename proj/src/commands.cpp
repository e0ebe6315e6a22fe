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
#include "qmedr/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "qmedr/dataset_io.hpp"
#include "qmedr/errors.hpp"
#include "qmedr/medr_classical.hpp"
#include "qmedr/qmedr_sim.hpp"

namespace qmedr {

namespace {

namespace fs = std::filesystem;

json vec_json(const RealVector &v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(std::isfinite(v(i)) ? json(v(i)) : json(nullptr));
    }
    return a;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json strings_json(const std::vector<std::string> &s) {
    json a = json::array();
    for (const auto &x : s) {
        a.push_back(x);
    }
    return a;
}

json precondition_json(const PreconditionRecord &r) {
    json j;
    j["shift"] = r.shift;
    j["scale"] = r.scale;
    j["source-min"] = r.sourceMin;
    j["source-max"] = r.sourceMax;
    j["kappa-target"] = r.kappaTarget;
    j["degenerate"] = r.degenerate;
    j["indefinite"] = r.indefinite;
    return j;
}

json tallies_json(const CostModel &c) {
    json j = json::object();
    for (const auto &[k, v] : c.tallies) {
        j[k] = v;
    }
    return j;
}

std::string join(const std::string &dir, const std::string &name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw ValidationError("cannot create output directory '" + dir + "': " + ec.message());
    }
}

void write_report(CommandResult &res, const std::string &dir, const std::string &name) {
    const auto path = join(dir, name);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write report '" + path + "'");
    }
    out << dump_report(res.report);
    res.files.push_back(path);
}

struct Prepared {
    Dataset ds;
    MedrProblem problem;
    json graph;
};

Prepared prepare(const std::string &path, const RunConfig &cfg) {
    cfg.validate();
    Prepared p;
    p.ds = read_dataset_csv(path, cfg.variant == Variant::EDA);
    const auto &ds = p.ds;
    json g;
    g["variant"] = to_string(cfg.variant);
    g["N"] = ds.samples();
    g["M"] = ds.features();
    switch (cfg.variant) {
    case Variant::ELPP:
    case Variant::EUDP: {
        const auto graph = knn_graph(ds, cfg.k, cfg.sigma);
        p.problem = cfg.variant == Variant::ELPP ? build_elpp(ds, graph, cfg.kappaTarget)
                                                 : build_eudp(ds, graph, cfg.kappaTarget);
        int edges = 0;
        for (Eigen::Index i = 0; i < graph.S.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < graph.S.cols(); ++j) {
                edges += graph.S(i, j) != 0.0 ? 1 : 0;
            }
        }
        g["k"] = graph.k;
        g["sigma"] = graph.sigma;
        g["sigma-auto"] = graph.sigmaAuto;
        g["edges"] = edges;
        g["laplacian-row-sum-max"] = graph.L.rowwise().sum().cwiseAbs().maxCoeff();
        g["laplacian-min-eigenvalue"] = hermitian_eig(graph.L).eigenvalues.minCoeff();
        if (cfg.variant == Variant::EUDP) {
            g["complement-laplacian-frobenius"] = complement_graph(graph).L.norm();
        }
        break;
    }
    case Variant::ENPE: {
        const RealMatrix w = npe_weights(ds, cfg.k, cfg.radius);
        p.problem = build_enpe(ds, w, cfg.kappaTarget);
        g["k"] = cfg.k;
        g["radius"] = cfg.radius ? json(*cfg.radius) : json(nullptr);
        g["weight-row-sum-deviation"] =
            (w.rowwise().sum().array() - 1.0).abs().maxCoeff();
        break;
    }
    case Variant::EDA: {
        const auto sc = scatter_matrices(ds);
        p.problem = build_eda(ds, cfg.kappaTarget);
        std::set<int> classes(ds.labels->begin(), ds.labels->end());
        g["classes"] = classes.size();
        g["scatter-decomposition-error"] = (sc.between + sc.within - sc.total).cwiseAbs().maxCoeff();
        break;
    }
    case Variant::Generic:
        throw ValidationError("the generic variant needs caller-supplied matrices; pick "
                              "ELPP, EUDP, ENPE or EDA");
    }
    if (cfg.m > ds.features()) {
        throw ValidationError("m exceeds the feature dimension M");
    }
    g["kappa1"] = p.problem.kappa1;
    g["kappa2"] = p.problem.kappa2;
    g["precondition"] = {{"S1", precondition_json(p.problem.pre1)},
                         {"S2", precondition_json(p.problem.pre2)}};
    g["warnings"] = strings_json(p.problem.warnings);
    p.graph = std::move(g);
    return p;
}

EigenSolution classical_solution(const Prepared &p, const RunConfig &cfg) {
    return solve_medr(p.problem, cfg.m, p.ds.X);
}

json classical_json(const EigenSolution &sol, const CompressedOutput &out) {
    json j;
    j["route"] = to_string(sol.route);
    j["direction"] = to_string(sol.direction);
    j["eigenvalues"] = vec_json(sol.eigenvalues);
    j["degenerate-cut"] = sol.degenerateCut;
    j["cut-gap"] = num(sol.cutGap);
    j["asymmetry"] = sol.asymmetry;
    j["residual"] = sol.residual;
    j["frobenius-Y"] = out.frobeniusY;
    j["warnings"] = strings_json(sol.warnings);
    return j;
}

json quantum_json(const QuantumRun &run) {
    json j;
    const auto &q = run.qpe;
    j["route"] = to_string(run.solution.route);
    j["direction"] = to_string(run.solution.direction);
    j["eigenvalues"] = vec_json(run.solution.eigenvalues);
    json br = json::array();
    for (int b : run.search.branches) {
        br.push_back(b);
    }
    j["branches"] = br;
    j["degenerate-cut"] = run.solution.degenerateCut;
    j["phase-estimation"] = {{"q1", q.q1},
                             {"n-bits", q.nBits},
                             {"t", q.t},
                             {"eta", q.eta},
                             {"tail-mass", q.tailMass},
                             {"min-accurate-mass", q.minAccurateMass},
                             {"positive-branch-mass", q.positiveBranchMass},
                             {"probe-mixedness", q.probeMixedness}};
    j["threshold-updates"] = run.search.thresholdUpdates;
    j["encoding"] = {{"alpha", run.encodingAlpha},
                     {"epsilon", run.encodingEpsilon},
                     {"ancillas", run.encodingAncillas},
                     {"padded-dimension", run.paddedDim}};
    j["inner-product-eps"] = run.innerProductEps;
    j["digital"] = {{"q2", run.digital.q2},
                    {"integer-bits", run.digital.integerBits},
                    {"sign-source", to_string(run.digital.signSource)},
                    {"epsilon-total", run.digital.epsilonTotal},
                    {"amplitude", run.digital.amplitude}};
    if (run.analog) {
        j["analog"] = {{"fidelity", run.analog->fidelityVsClassical},
                       {"anchor-index", run.analog->anchorIndex},
                       {"anchor-attempts", run.analog->anchorAttempts},
                       {"C", run.analog->C},
                       {"success-mass", run.analog->successMass}};
    } else {
        j["analog"] = nullptr;
    }
    j["tallies"] = tallies_json(run.cost);
    json audit = json::array();
    for (const auto &a : run.audit) {
        audit.push_back({{"name", a.name},
                         {"formula", a.formula},
                         {"logged", a.logged},
                         {"bound", a.bound},
                         {"ratio", a.ratio()}});
    }
    j["audit"] = audit;
    j["warnings"] = strings_json(run.warnings);
    return j;
}

json resources_section(const ResourceParams &params, Variant variant) {
    json j = to_json(eval_step_costs(params));
    j["variant"] = to_string(variant);
    j["classical-formula"] = classical_formula(variant);
    j["classical-cost"] = classical_cost(params, variant);
    j["quantum-formula"] = quantum_formula(variant, false);
    j["quantum-cost"] = quantum_cost(params, variant, false);
    j["quantum-formula-with-k"] = quantum_formula(variant, true);
    j["quantum-cost-with-k"] =
        params.k > 0 || (variant != Variant::ELPP && variant != Variant::EUDP)
            ? num(quantum_cost(params, variant, true))
            : json(nullptr);
    return j;
}

QuantumRun run_quantum(const Prepared &p, const RunConfig &cfg, ResourceParams &params) {
    auto run = run_qmedr(p.ds, p.problem, cfg.quantum());
    params = run.params;
    params.k = cfg.k;
    if (cfg.variant == Variant::EUDP) {
        params.frobeniusLprime = p.graph.value("complement-laplacian-frobenius", 0.0);
    }
    return run;
}

} // namespace

std::string dump_report(const json &j) { return j.dump(2) + "\n"; }

json to_json(const ResourceParams &p) {
    return json{{"N", p.N},           {"M", p.M},
                {"m", p.m},           {"kappa1", p.kappa1},
                {"kappa2", p.kappa2}, {"alpha", p.alpha},
                {"beta", p.beta},     {"a", p.a},
                {"b", p.b},           {"T1", p.T1},
                {"T2", p.T2},         {"eps", p.eps},
                {"eps1", p.eps1},     {"eps2", p.eps2},
                {"frobeniusX", p.frobeniusX}, {"maxRowNorm", p.maxRowNorm},
                {"k", p.k},           {"frobeniusLprime", p.frobeniusLprime},
                {"eta", p.eta}};
}

json to_json(const ResourceReport &r) {
    json j;
    j["parameters"] = to_json(r.parameters);
    json steps = json::object();
    for (const auto &[name, s] : r.perStep) {
        steps[name] = {{"formula", s.formula}, {"count", s.count}};
    }
    j["per-step"] = steps;
    j["quantum-total"] = r.quantumTotal;
    j["classical-total"] = r.classicalTotal;
    j["polylog-factors"] = strings_json(r.polylogFactors);
    return j;
}

ResourceParams resource_params_from_json(const json &j) {
    if (!j.is_object()) {
        throw ValidationError("resource parameters: expected a JSON object");
    }
    ResourceParams p;
    const std::pair<const char *, double *> fields[] = {
        {"N", &p.N},         {"M", &p.M},           {"m", &p.m},
        {"kappa1", &p.kappa1}, {"kappa2", &p.kappa2}, {"alpha", &p.alpha},
        {"beta", &p.beta},   {"a", &p.a},           {"b", &p.b},
        {"T1", &p.T1},       {"T2", &p.T2},         {"eps", &p.eps},
        {"eps1", &p.eps1},   {"eps2", &p.eps2},     {"frobeniusX", &p.frobeniusX},
        {"maxRowNorm", &p.maxRowNorm}, {"k", &p.k}, {"frobeniusLprime", &p.frobeniusLprime},
        {"eta", &p.eta}};
    for (const auto &item : j.items()) {
        if (item.key() == "variant" || item.key() == "with-k") {
            continue;
        }
        bool found = false;
        for (const auto &[name, ptr] : fields) {
            if (item.key() == name) {
                if (!item.value().is_number()) {
                    throw ValidationError(std::string("resource parameter '") + name +
                                          "' must be a number");
                }
                *ptr = item.value().get<double>();
                found = true;
            }
        }
        if (!found) {
            throw ValidationError("resource parameters: unknown field '" + item.key() + "'");
        }
    }
    return p;
}

CommandResult cmd_graph(const std::string &datasetPath, const RunConfig &config,
                        const std::string &outDir) {
    ensure_dir(outDir);
    const auto p = prepare(datasetPath, config);
    CommandResult res;
    res.report["config"] = to_json(config);
    res.report["graph"] = p.graph;
    write_report(res, outDir, "graph_report.json");
    return res;
}

CommandResult cmd_classical(const std::string &datasetPath, const RunConfig &config,
                            const std::string &outDir) {
    ensure_dir(outDir);
    const auto p = prepare(datasetPath, config);
    const auto sol = classical_solution(p, config);
    const auto out = project(p.ds, sol);
    CommandResult res;
    res.report["config"] = to_json(config);
    res.report["graph"] = p.graph;
    res.report["classical"] = classical_json(sol, out);
    const auto ypath = join(outDir, "classical_Y.csv");
    write_matrix_csv(ypath, out.Y, "y");
    res.files.push_back(ypath);
    write_report(res, outDir, "classical_report.json");
    if (config.strict && sol.degenerateCut) {
        res.exitCode = 3;
    }
    return res;
}

CommandResult cmd_quantum_sim(const std::string &datasetPath, const RunConfig &config,
                              const std::string &outDir) {
    ensure_dir(outDir);
    const auto p = prepare(datasetPath, config);
    ResourceParams params;
    const auto run = run_quantum(p, config, params);
    CommandResult res;
    res.report["config"] = to_json(config);
    res.report["graph"] = p.graph;
    res.report["quantum"] = quantum_json(run);
    res.report["resources"] = resources_section(params, config.variant);
    const auto ypath = join(outDir, "quantum_Y.csv");
    write_matrix_csv(ypath, run.digital.entries, "y");
    res.files.push_back(ypath);
    write_report(res, outDir, "quantum_report.json");
    if (config.strict && run.solution.degenerateCut) {
        res.exitCode = 3;
    }
    return res;
}

CommandResult cmd_compare(const std::string &datasetPath, const RunConfig &config,
                          const std::string &outDir) {
    ensure_dir(outDir);
    const auto p = prepare(datasetPath, config);
    const auto sol = classical_solution(p, config);
    const auto cls = project(p.ds, sol);
    ResourceParams params;
    const auto run = run_quantum(p, config, params);

    // Align the quantum table with the classical one: per-column signs, or an
    // orthogonal Procrustes rotation when either cut is degenerate.
    const bool subspace = sol.degenerateCut || run.solution.degenerateCut;
    RealMatrix yq = run.digital.entries;
    const RealMatrix &yc = cls.Y;
    if (subspace) {
        Eigen::JacobiSVD<RealMatrix> svd(yq.transpose() * yc, Eigen::ComputeFullU | Eigen::ComputeFullV);
        yq = yq * (svd.matrixU() * svd.matrixV().transpose());
    } else {
        for (Eigen::Index j = 0; j < yq.cols(); ++j) {
            if (yq.col(j).dot(yc.col(j)) < 0.0) {
                yq.col(j) = -yq.col(j);
            }
        }
    }
    const RealMatrix diff = (yq - yc).cwiseAbs();
    const double maxDiff = diff.size() ? diff.maxCoeff() : 0.0;
    const double meanDiff = diff.size() ? diff.mean() : 0.0;
    long long signMatches = 0;
    for (Eigen::Index i = 0; i < yc.rows(); ++i) {
        for (Eigen::Index j = 0; j < yc.cols(); ++j) {
            signMatches += std::signbit(run.digital.entries(i, j)) == std::signbit(yc(i, j)) ? 1 : 0;
        }
    }
    const double denom = yq.norm() * yc.norm();
    const double digitalFidelity =
        denom > 0.0 ? std::pow(yq.cwiseProduct(yc).sum(), 2) / (denom * denom) : 0.0;
    bool pass = true;
    for (Eigen::Index i = 0; i < diff.rows(); ++i) {
        for (Eigen::Index j = 0; j < diff.cols(); ++j) {
            pass = pass && diff(i, j) <= run.digital.errorBound(i, j);
        }
    }

    CommandResult res;
    res.report["config"] = to_json(config);
    res.report["graph"] = p.graph;
    res.report["classical"] = classical_json(sol, cls);
    res.report["quantum"] = quantum_json(run);
    json c;
    c["alignment"] = subspace ? "subspace" : "sign";
    c["max-abs-diff"] = maxDiff;
    c["mean-abs-diff"] = meanDiff;
    c["subspace-angle"] = subspace_angle(run.solution.eigenvectors, sol.eigenvectors);
    c["sign-matches"] = signMatches;
    c["entries"] = yc.size();
    c["digital-fidelity"] = digitalFidelity;
    c["analog-fidelity"] = run.analog ? json(run.analog->fidelityVsClassical) : json(nullptr);
    c["epsilon-total"] = run.digital.epsilonTotal;
    c["eps-target"] = config.eps;
    c["pass"] = pass;
    res.report["compare"] = c;
    res.report["resources"] = resources_section(params, config.variant);

    const auto cpath = join(outDir, "classical_Y.csv");
    const auto qpath = join(outDir, "quantum_Y.csv");
    write_matrix_csv(cpath, yc, "y");
    write_matrix_csv(qpath, run.digital.entries, "y");
    std::string plot = "i,j,classical,quantum,abs_diff,bound\n";
    for (Eigen::Index i = 0; i < yc.rows(); ++i) {
        for (Eigen::Index j = 0; j < yc.cols(); ++j) {
            plot += std::to_string(i) + "," + std::to_string(j) + "," + format_double(yc(i, j)) + "," +
                    format_double(yq(i, j)) + "," + format_double(diff(i, j)) + "," +
                    format_double(run.digital.errorBound(i, j)) + "\n";
        }
    }
    const auto ppath = join(outDir, "compare_plot.csv");
    {
        std::ofstream out(ppath, std::ios::binary);
        out << plot;
    }
    res.files.insert(res.files.end(), {cpath, qpath, ppath});
    write_report(res, outDir, "compare_report.json");
    if (config.strict && (!pass || subspace)) {
        res.exitCode = 3;
    }
    return res;
}

CommandResult cmd_resources(const std::string &paramsPath, const std::string &outDir) {
    ensure_dir(outDir);
    std::ifstream in(paramsPath, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read parameter file '" + paramsPath + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("parameter file is not valid JSON: ") + e.what());
    }
    const auto params = resource_params_from_json(j);
    Variant variant = Variant::Generic;
    if (j.contains("variant")) {
        variant = parse_variant(j.at("variant").get<std::string>());
    }
    CommandResult res;
    res.report["resources"] = resources_section(params, variant);
    write_report(res, outDir, "resources_report.json");
    return res;
}

CommandResult cmd_synth(const std::string &kind, int n, int m, int classes, std::uint64_t seed,
                        const std::string &outPath) {
    const auto ds = synth_dataset(parse_synth_kind(kind), n, m, classes, seed);
    const auto parent = fs::path(outPath).parent_path();
    if (!parent.empty()) {
        ensure_dir(parent.string());
    }
    write_dataset_csv(outPath, ds);
    CommandResult res;
    res.report["synth"] = {{"kind", kind}, {"N", n}, {"M", m}, {"classes", classes},
                           {"seed", seed}, {"path", outPath}};
    res.files.push_back(outPath);
    return res;
}

} // namespace qmedr
