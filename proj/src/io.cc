// Copyright 2026 The qhedge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qhedge/io.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qhedge::io {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string &where, const std::string &what) {
    throw ParseError("at " + where + ": " + what);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ParseError(e.what());
    }
}

const json &field(const json &obj, const char *name, const std::string &where) {
    if (!obj.is_object()) {
        fail(where, "expected an object");
    }
    auto it = obj.find(name);
    if (it == obj.end()) {
        fail(where, std::string("missing field '") + name + "'");
    }
    return *it;
}

std::size_t dimension(const json &obj, const char *name) {
    const json &v = field(obj, name, "$");
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        fail(std::string("$.") + name, "expected a positive integer");
    }
    return v.get<std::size_t>();
}

Complex parse_complex(const json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(where, "expected a [re, im] pair of numbers");
    }
    Complex z(v[0].get<double>(), v[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        fail(where, "entry is not finite");
    }
    return z;
}

ComplexMatrix parse_matrix(const json &v, std::size_t n, const std::string &where) {
    if (!v.is_array()) {
        fail(where, "expected an array");
    }
    std::vector<Complex> entries;
    entries.reserve(n * n);
    bool nested = !v.empty() && v[0].is_array() && !v[0].empty() && v[0][0].is_array();
    if (nested) {
        if (v.size() != n) {
            fail(where, "expected " + std::to_string(n) + " rows, got " + std::to_string(v.size()));
        }
        for (std::size_t r = 0; r < n; r++) {
            std::string row_where = where + "[" + std::to_string(r) + "]";
            if (!v[r].is_array() || v[r].size() != n) {
                fail(row_where, "expected a row of " + std::to_string(n) + " entries");
            }
            for (std::size_t c = 0; c < n; c++) {
                entries.push_back(parse_complex(v[r][c], row_where + "[" + std::to_string(c) + "]"));
            }
        }
    } else {
        if (v.size() != n * n) {
            fail(where, "expected " + std::to_string(n * n) + " entries, got " + std::to_string(v.size()));
        }
        for (std::size_t k = 0; k < n * n; k++) {
            entries.push_back(parse_complex(v[k], where + "[" + std::to_string(k) + "]"));
        }
    }
    return ComplexMatrix(n, n, std::move(entries));
}

ordered_json matrix_json(const ComplexMatrix &m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); r++) {
        ordered_json row = ordered_json::array();
        for (std::size_t c = 0; c < m.cols(); c++) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// One row per line keeps files diffable without blowing up the line count.
std::string render(const ordered_json &doc, const std::vector<std::string> &matrix_keys) {
    std::string out = "{\n";
    bool first = true;
    for (const auto &[key, value] : doc.items()) {
        out += first ? "" : ",\n";
        first = false;
        out += "  " + json(key).dump() + ": ";
        auto render_matrix = [](const ordered_json &m, const std::string &indent) {
            std::string s = "[\n";
            for (std::size_t r = 0; r < m.size(); r++) {
                s += indent + "  " + m[r].dump() + (r + 1 < m.size() ? ",\n" : "\n");
            }
            return s + indent + "]";
        };
        if (std::find(matrix_keys.begin(), matrix_keys.end(), key) != matrix_keys.end()) {
            out += render_matrix(value, "  ");
        } else if (key == "measurements") {
            out += "{\n";
            bool first_m = true;
            for (const auto &[label, m] : value.items()) {
                out += first_m ? "" : ",\n";
                first_m = false;
                out += "    " + json(label).dump() + ": " + render_matrix(m, "    ");
            }
            out += "\n  }";
        } else {
            out += value.dump();
        }
    }
    return out + "\n}\n";
}

}  // namespace

InteractiveMeasurement parse_test(std::string_view text) {
    json doc = parse_json(text);
    if (!doc.is_object()) {
        fail("$", "expected an object");
    }
    InteractiveMeasurement im;
    im.dims = {dimension(doc, "dim_x"), dimension(doc, "dim_y"), dimension(doc, "dim_z")};
    im.rho = parse_matrix(field(doc, "rho", "$"), im.dims.x * im.dims.z, "$.rho");
    const json &ms = field(doc, "measurements", "$");
    if (!ms.is_object() || ms.empty()) {
        fail("$.measurements", "expected a non-empty object of label -> matrix");
    }
    for (const auto &[label, m] : ms.items()) {
        im.outcomes.emplace(label, parse_matrix(m, im.dims.y * im.dims.z, "$.measurements." + label));
    }
    return im;
}

std::string format_test(const InteractiveMeasurement &im) {
    ordered_json doc;
    doc["dim_x"] = im.dims.x;
    doc["dim_y"] = im.dims.y;
    doc["dim_z"] = im.dims.z;
    doc["rho"] = matrix_json(im.rho);
    ordered_json ms = ordered_json::object();
    for (const auto &[label, p] : im.outcomes) {
        ms[label] = matrix_json(p);
    }
    doc["measurements"] = std::move(ms);
    return render(doc, {"rho"});
}

ChoiOperator parse_channel(std::string_view text) {
    json doc = parse_json(text);
    if (!doc.is_object()) {
        fail("$", "expected an object");
    }
    std::size_t din = dimension(doc, "dim_in");
    std::size_t dout = dimension(doc, "dim_out");
    return ChoiOperator(din, dout, parse_matrix(field(doc, "matrix", "$"), din * dout, "$.matrix"));
}

std::string format_channel(const ChoiOperator &j) {
    ordered_json doc;
    doc["dim_in"] = j.dim_in();
    doc["dim_out"] = j.dim_out();
    doc["matrix"] = matrix_json(j.matrix());
    return render(doc, {"matrix"});
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << contents;
}

std::string fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qhedge::io
