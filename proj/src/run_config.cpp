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
#include "qmedr/run_config.hpp"

#include <cmath>

#include "qmedr/errors.hpp"

namespace qmedr {

namespace {

void positive(double v, const char *name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string("config: ") + name + " must be positive");
    }
}

template <typename T> void read(const json &j, const char *key, T &out) {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

template <typename T> void read_optional(const json &j, const char *key, std::optional<T> &out) {
    if (!j.contains(key)) {
        return;
    }
    if (j.at(key).is_null()) {
        out.reset();
        return;
    }
    T v{};
    read(j, key, v);
    out = v;
}

template <typename T> json optional_json(const std::optional<T> &v) {
    return v ? json(*v) : json(nullptr);
}

} // namespace

void RunConfig::validate() const {
    if (m < 1) {
        throw ValidationError("config: m must be at least 1");
    }
    if (k < 1) {
        throw ValidationError("config: k must be at least 1");
    }
    if (sigma) {
        positive(*sigma, "sigma");
    }
    if (radius) {
        positive(*radius, "radius");
    }
    if (!(kappaTarget > 1.0) || !std::isfinite(kappaTarget)) {
        throw ValidationError("config: kappa-target must exceed 1");
    }
    positive(eps, "eps");
    positive(eps1, "eps1");
    positive(eps2, "eps2");
    if (eps1 > 0.5 || eps2 > 0.5) {
        throw ValidationError("config: eps1 and eps2 must not exceed 1/2");
    }
    if (innerProductEps) {
        positive(*innerProductEps, "inner-product-eps");
    }
    if (nBits < 1 || nBits > 30) {
        throw ValidationError("config: n-bits must lie in [1, 30]");
    }
    if (!(eta > 0.0) || eta >= 1.0) {
        throw ValidationError("config: eta must lie in (0, 1)");
    }
    if (q2 < 2 || q2 > 64 || integerBits < 0 || integerBits > q2 - 1) {
        throw ValidationError("config: need 2 <= q2 <= 64 and 0 <= integer-bits <= q2 - 1");
    }
    if (hadamardShots < 0) {
        throw ValidationError("config: hadamard-shots must be non-negative");
    }
}

QuantumConfig RunConfig::quantum() const {
    QuantumConfig q;
    q.m = m;
    q.expEps1 = eps1;
    q.expEps2 = eps2;
    q.epsTarget = eps;
    q.innerProductEps = innerProductEps;
    q.nBits = nBits;
    q.maxBits = std::max(nBits, 26);
    q.eta = eta;
    q.noise = mode;
    q.seed = seed;
    q.format = FixedPointFormat{q2, integerBits};
    q.signSource = signSource;
    q.analog = analog;
    q.hadamardShots = hadamardShots;
    return q;
}

json to_json(const RunConfig &c) {
    json j;
    j["variant"] = to_string(c.variant);
    j["m"] = c.m;
    j["k"] = c.k;
    j["sigma"] = optional_json(c.sigma);
    j["radius"] = optional_json(c.radius);
    j["kappa-target"] = c.kappaTarget;
    j["eps"] = c.eps;
    j["eps1"] = c.eps1;
    j["eps2"] = c.eps2;
    j["inner-product-eps"] = optional_json(c.innerProductEps);
    j["n-bits"] = c.nBits;
    j["eta"] = c.eta;
    j["q2"] = c.q2;
    j["integer-bits"] = c.integerBits;
    j["seed"] = c.seed;
    j["mode"] = to_string(c.mode);
    j["sign-source"] = to_string(c.signSource);
    j["analog"] = c.analog;
    j["hadamard-shots"] = c.hadamardShots;
    j["strict"] = c.strict;
    return j;
}

RunConfig run_config_from_json(const json &j) {
    if (!j.is_object()) {
        throw ValidationError("config: expected a JSON object");
    }
    static const char *known[] = {"variant", "m", "k", "sigma", "radius", "kappa-target", "eps",
                                  "eps1", "eps2", "inner-product-eps", "n-bits", "eta", "q2",
                                  "integer-bits", "seed", "mode", "sign-source", "analog",
                                  "hadamard-shots", "strict"};
    for (const auto &item : j.items()) {
        bool ok = false;
        for (const char *k : known) {
            ok = ok || item.key() == k;
        }
        if (!ok) {
            throw ValidationError("config: unknown field '" + item.key() + "'");
        }
    }
    RunConfig c;
    std::string s;
    if (j.contains("variant")) {
        read(j, "variant", s);
        c.variant = parse_variant(s);
    }
    read(j, "m", c.m);
    read(j, "k", c.k);
    read_optional(j, "sigma", c.sigma);
    read_optional(j, "radius", c.radius);
    read(j, "kappa-target", c.kappaTarget);
    read(j, "eps", c.eps);
    read(j, "eps1", c.eps1);
    read(j, "eps2", c.eps2);
    read_optional(j, "inner-product-eps", c.innerProductEps);
    read(j, "n-bits", c.nBits);
    read(j, "eta", c.eta);
    read(j, "q2", c.q2);
    read(j, "integer-bits", c.integerBits);
    read(j, "seed", c.seed);
    if (j.contains("mode")) {
        read(j, "mode", s);
        c.mode = parse_noise_mode(s);
    }
    if (j.contains("sign-source")) {
        read(j, "sign-source", s);
        c.signSource = parse_sign_source(s);
    }
    read(j, "analog", c.analog);
    read(j, "hadamard-shots", c.hadamardShots);
    read(j, "strict", c.strict);
    c.validate();
    return c;
}

} // namespace qmedr
