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
#include "qmedr/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "qmedr/errors.hpp"

namespace qmedr {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

bool parse_number(const std::string &s, double &out) {
    if (s.empty()) {
        return false;
    }
    const char *first = s.data();
    if (*first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        throw ValidationError("failed writing '" + path + "'");
    }
}

} // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) {
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

Dataset parse_dataset_csv(const std::string &text, bool labelsInLastColumn) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> lineNo;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (trim(line).empty()) {
            continue;
        }
        rows.push_back(split(line));
        lineNo.push_back(no);
    }
    if (rows.empty()) {
        throw ValidationError("dataset is empty");
    }
    bool header = false;
    for (const auto &f : rows.front()) {
        double d = 0.0;
        if (!parse_number(f, d)) {
            header = true;
            break;
        }
    }
    bool labels = labelsInLastColumn;
    std::size_t first = 0;
    if (header) {
        labels = lower(rows.front().back()) == "label";
        first = 1;
    }
    const std::size_t width = rows.front().size();
    if (rows.size() <= first) {
        throw ValidationError("dataset has a header but no samples");
    }
    const std::size_t features = labels ? width - 1 : width;
    if (features == 0) {
        throw ValidationError("dataset has no feature columns");
    }
    const auto n = static_cast<Eigen::Index>(rows.size() - first);
    RealMatrix x(n, static_cast<Eigen::Index>(features));
    std::vector<int> lab;
    for (std::size_t r = first; r < rows.size(); ++r) {
        const auto &row = rows[r];
        if (row.size() != width) {
            throw ValidationError("line " + std::to_string(lineNo[r]) + ": expected " +
                                  std::to_string(width) + " columns, found " +
                                  std::to_string(row.size()));
        }
        for (std::size_t c = 0; c < width; ++c) {
            double d = 0.0;
            if (!parse_number(row[c], d)) {
                throw ValidationError("line " + std::to_string(lineNo[r]) + ", column " +
                                      std::to_string(c + 1) + ": '" + row[c] +
                                      "' is not a number");
            }
            if (c < features) {
                x(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(c)) = d;
            } else {
                if (d != std::floor(d) || std::abs(d) > 1e9) {
                    throw ValidationError("line " + std::to_string(lineNo[r]) +
                                          ": label must be an integer");
                }
                lab.push_back(static_cast<int>(d));
            }
        }
    }
    if (labels) {
        return Dataset::from_matrix(std::move(x), std::move(lab));
    }
    return Dataset::from_matrix(std::move(x));
}

Dataset read_dataset_csv(const std::string &path, bool labelsInLastColumn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read dataset '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_dataset_csv(ss.str(), labelsInLastColumn);
}

std::string format_matrix_csv(const RealMatrix &m, const std::string &prefix) {
    std::string out;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out += (j ? "," : "") + prefix + std::to_string(j);
    }
    out += '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out += (j ? "," : "") + format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

void write_matrix_csv(const std::string &path, const RealMatrix &m, const std::string &prefix) {
    write_text(path, format_matrix_csv(m, prefix));
}

void write_dataset_csv(const std::string &path, const Dataset &ds) {
    std::string out;
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
        out += (j ? ",x" : "x") + std::to_string(j);
    }
    if (ds.labels) {
        out += ",label";
    }
    out += '\n';
    for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
            out += (j ? "," : "") + format_double(ds.X(i, j));
        }
        if (ds.labels) {
            out += "," + std::to_string((*ds.labels)[static_cast<std::size_t>(i)]);
        }
        out += '\n';
    }
    write_text(path, out);
}

SynthKind parse_synth_kind(const std::string &name) {
    const auto n = lower(name);
    if (n == "blobs") {
        return SynthKind::Blobs;
    }
    if (n == "ring") {
        return SynthKind::Ring;
    }
    throw ValidationError("unknown synthetic kind '" + name + "' (blobs|ring)");
}

Dataset synth_dataset(SynthKind kind, int n, int m, int classes, std::uint64_t seed) {
    if (n < 2 || m < 1) {
        throw ValidationError("synth: need N >= 2 and M >= 1");
    }
    if (classes < 1 || classes > n) {
        throw ValidationError("synth: classes must lie in [1, N]");
    }
    if (kind == SynthKind::Ring && m < 2) {
        throw ValidationError("synth: ring data needs M >= 2");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RealMatrix x(n, m);
    std::vector<int> labels(static_cast<std::size_t>(n));
    if (kind == SynthKind::Blobs) {
        RealMatrix centres(classes, m);
        for (int c = 0; c < classes; ++c) {
            for (int j = 0; j < m; ++j) {
                centres(c, j) = 4.0 * gauss(rng);
            }
        }
        for (int i = 0; i < n; ++i) {
            const int c = i % classes;
            labels[static_cast<std::size_t>(i)] = c;
            for (int j = 0; j < m; ++j) {
                x(i, j) = centres(c, j) + gauss(rng);
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const int c = i % classes;
            labels[static_cast<std::size_t>(i)] = c;
            const double radius = 1.0 + 2.0 * c;
            const double angle = 2.0 * 3.14159265358979323846 * unit(rng);
            x(i, 0) = radius * std::cos(angle) + 0.1 * gauss(rng);
            x(i, 1) = radius * std::sin(angle) + 0.1 * gauss(rng);
            for (int j = 2; j < m; ++j) {
                x(i, j) = 0.1 * gauss(rng);
            }
        }
    }
    return Dataset::from_matrix(std::move(x), std::move(labels));
}

} // namespace qmedr
