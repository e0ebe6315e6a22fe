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
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qmedr/commands.hpp"
#include "qmedr/errors.hpp"

namespace {

struct Flags {
    std::string variant = "elpp";
    std::string mode = "deterministic";
    std::string signSource = "anchor";
    double sigma = 0.0;
    double radius = 0.0;
    double innerProductEps = 0.0;
    std::string configFile;
};

// Register the RunConfig flags on a subcommand.
void add_run_flags(CLI::App *cmd, qmedr::RunConfig &cfg, Flags &f) {
    cmd->add_option("--config", f.configFile, "JSON RunConfig; explicit flags override it");
    cmd->add_option("--variant", f.variant, "elpp|eudp|enpe|eda");
    cmd->add_option("--m", cfg.m, "number of retained components");
    cmd->add_option("--k", cfg.k, "neighbourhood size");
    cmd->add_option("--sigma", f.sigma, "heat-kernel width (default: median distance)");
    cmd->add_option("--radius", f.radius, "NPE neighbourhood radius (default: k nearest)");
    cmd->add_option("--kappa-target", cfg.kappaTarget, "condition number after preconditioning");
    cmd->add_option("--eps", cfg.eps, "target error on y_ij");
    cmd->add_option("--eps1", cfg.eps1, "error of the e^{S1} encoding");
    cmd->add_option("--eps2", cfg.eps2, "error of the e^{-S2} encoding");
    cmd->add_option("--inner-product-eps", f.innerProductEps, "inner-product precision override");
    cmd->add_option("--n-bits", cfg.nBits, "phase-estimation accuracy bits");
    cmd->add_option("--eta", cfg.eta, "phase-estimation failure budget");
    cmd->add_option("--q2", cfg.q2, "fixed-point register width");
    cmd->add_option("--integer-bits", cfg.integerBits, "integer bits of the fixed-point format");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--mode", f.mode, "deterministic|sampled");
    cmd->add_option("--sign-source", f.signSource, "anchor|reference");
    cmd->add_flag("--analog", cfg.analog, "also assemble the analog-encoded state");
    cmd->add_option("--hadamard-shots", cfg.hadamardShots, "shots per Hadamard test (0 = exact)");
    cmd->add_flag("--strict", cfg.strict, "exit 3 on degenerate cuts or failed comparisons");
}

// Merge a config file (if any) under the explicitly given flags.
qmedr::RunConfig finalize(CLI::App *cmd, qmedr::RunConfig cfg, const Flags &f) {
    if (!f.configFile.empty()) {
        std::ifstream in(f.configFile, std::ios::binary);
        if (!in) {
            throw qmedr::ValidationError("cannot read config '" + f.configFile + "'");
        }
        qmedr::json j;
        try {
            j = qmedr::json::parse(in);
        } catch (const qmedr::json::parse_error &e) {
            throw qmedr::ValidationError(std::string("config is not valid JSON: ") + e.what());
        }
        auto base = qmedr::run_config_from_json(j);
        const auto given = [cmd](const char *name) { return cmd->count(name) > 0; };
        if (given("--m")) base.m = cfg.m;
        if (given("--k")) base.k = cfg.k;
        if (given("--kappa-target")) base.kappaTarget = cfg.kappaTarget;
        if (given("--eps")) base.eps = cfg.eps;
        if (given("--eps1")) base.eps1 = cfg.eps1;
        if (given("--eps2")) base.eps2 = cfg.eps2;
        if (given("--n-bits")) base.nBits = cfg.nBits;
        if (given("--eta")) base.eta = cfg.eta;
        if (given("--q2")) base.q2 = cfg.q2;
        if (given("--integer-bits")) base.integerBits = cfg.integerBits;
        if (given("--seed")) base.seed = cfg.seed;
        if (given("--analog")) base.analog = cfg.analog;
        if (given("--hadamard-shots")) base.hadamardShots = cfg.hadamardShots;
        if (given("--strict")) base.strict = cfg.strict;
        if (!given("--variant")) cfg.variant = base.variant;
        if (!given("--mode")) cfg.mode = base.mode;
        if (!given("--sign-source")) cfg.signSource = base.signSource;
        if (!given("--sigma")) cfg.sigma = base.sigma;
        if (!given("--radius")) cfg.radius = base.radius;
        if (!given("--inner-product-eps")) cfg.innerProductEps = base.innerProductEps;
        base.variant = cfg.variant;
        base.mode = cfg.mode;
        base.signSource = cfg.signSource;
        base.sigma = cfg.sigma;
        base.radius = cfg.radius;
        base.innerProductEps = cfg.innerProductEps;
        cfg = base;
    }
    cfg.validate();
    return cfg;
}

qmedr::RunConfig apply_flags(CLI::App *cmd, qmedr::RunConfig cfg, const Flags &f) {
    if (cmd->count("--variant")) cfg.variant = qmedr::parse_variant(f.variant);
    if (cmd->count("--mode")) cfg.mode = qmedr::parse_noise_mode(f.mode);
    if (cmd->count("--sign-source")) cfg.signSource = qmedr::parse_sign_source(f.signSource);
    if (cmd->count("--sigma")) cfg.sigma = f.sigma;
    if (cmd->count("--radius")) cfg.radius = f.radius;
    if (cmd->count("--inner-product-eps")) cfg.innerProductEps = f.innerProductEps;
    return finalize(cmd, cfg, f);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qmedr: matrix exponential dimensionality reduction, classical and simulated quantum"};
    app.require_subcommand(1);

    const char *env = std::getenv("QMEDR_OUT_DIR");
    std::string outDir = env != nullptr && *env != '\0' ? env : ".";
    app.add_option("--out-dir", outDir, "directory for reports (default: $QMEDR_OUT_DIR or .)");

    qmedr::RunConfig cfg;
    Flags flags;
    std::string dataset;

    auto *graph = app.add_subcommand("graph", "build the similarity graph and MEDR matrices");
    auto *classical = app.add_subcommand("classical", "classical MEDR reference");
    auto *quantum = app.add_subcommand("quantum-sim", "simulated quantum pipeline");
    auto *compare = app.add_subcommand("compare", "quantum vs classical comparison");
    for (auto *cmd : {graph, classical, quantum, compare}) {
        cmd->add_option("dataset", dataset, "CSV dataset")->required();
        add_run_flags(cmd, cfg, flags);
    }

    std::string paramsFile;
    auto *resources = app.add_subcommand("resources", "evaluate the complexity expressions");
    resources->add_option("params", paramsFile, "JSON parameter file")->required();

    std::string kind = "blobs";
    int n = 32;
    int m = 16;
    int classes = 2;
    std::uint64_t seed = 0;
    std::string out = "dataset.csv";
    auto *synth = app.add_subcommand("synth", "write a seeded synthetic dataset");
    synth->add_option("kind", kind, "blobs|ring")->required();
    synth->add_option("--n", n, "samples");
    synth->add_option("--features", m, "feature dimension M");
    synth->add_option("--classes", classes, "number of classes");
    synth->add_option("--seed", seed, "random seed");
    synth->add_option("--out", out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        qmedr::CommandResult res;
        if (*synth) {
            res = qmedr::cmd_synth(kind, n, m, classes, seed, out);
        } else if (*resources) {
            res = qmedr::cmd_resources(paramsFile, outDir);
        } else {
            CLI::App *cmd = *graph ? graph : *classical ? classical : *quantum ? quantum : compare;
            const auto run = apply_flags(cmd, cfg, flags);
            if (cmd == graph) {
                res = qmedr::cmd_graph(dataset, run, outDir);
            } else if (cmd == classical) {
                res = qmedr::cmd_classical(dataset, run, outDir);
            } else if (cmd == quantum) {
                res = qmedr::cmd_quantum_sim(dataset, run, outDir);
            } else {
                res = qmedr::cmd_compare(dataset, run, outDir);
            }
        }
        for (const auto &f : res.files) {
            std::cout << "wrote " << f << '\n';
        }
        if (res.report.contains("compare")) {
            const auto &c = res.report["compare"];
            std::cout << "max |dy| = " << c["max-abs-diff"].get<double>()
                      << ", epsilon-total = " << c["epsilon-total"].get<double>()
                      << ", pass = " << (c["pass"].get<bool>() ? "yes" : "no") << '\n';
        }
        return res.exitCode;
    } catch (const qmedr::ValidationError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const qmedr::NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
