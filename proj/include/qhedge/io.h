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

// Test and channel files.
//
// Both are JSON objects. Matrices are arrays of rows, each row an array of
// [re, im] pairs; a flat row-major array of pairs is also accepted on input.
//
//   test file:    {"dim_x": 2, "dim_y": 2, "dim_z": 2,
//                  "rho": [[[re, im], ...], ...],
//                  "measurements": {"0": [[...]], "1": [[...]]}}
//   channel file: {"dim_in": 2, "dim_out": 2, "matrix": [[[re, im], ...], ...]}
//
// Reals are written in shortest round-trip form (at most 17 significant digits),
// so write-then-read is exact.

#ifndef QHEDGE_IO_H
#define QHEDGE_IO_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qhedge/channel.h"
#include "qhedge/interactive.h"

namespace qhedge::io {

/// Malformed text or a missing/ill-typed field. The message names the position.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

InteractiveMeasurement parse_test(std::string_view text);
std::string format_test(const InteractiveMeasurement &im);

ChoiOperator parse_channel(std::string_view text);
std::string format_channel(const ChoiOperator &j);

/// Throws std::runtime_error when the file cannot be read.
std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view contents);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a64(std::string_view bytes);

}  // namespace qhedge::io

#endif
