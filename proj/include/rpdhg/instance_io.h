// Copyright 2026 The rpdhg-lab Authors
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

#ifndef RPDHG_INSTANCE_IO_H_
#define RPDHG_INSTANCE_IO_H_

// Instance files are JSON documents:
//
//   { "format_version": 1, "m": .., "n": .., "seed": <u64>,
//     "dist": { "matrix": .., "sigma_A": .., "solution": .., "level": ..,
//               "fixed_values": {..} },
//     "presolved": bool, "certificate": {..}, "shuffled": bool,
//     "A": { "hex": [[..], ..], "dec": [[..], ..] },
//     "b" | "c" | "x_star" | "s_star" | "y_star": { "hex": [..], "dec": [..] },
//     "basis": [0-based indices] }
//
// Every real is stored as a C99 hexadecimal float string ("%a"), which is
// lossless; "dec" holds %.17g shadow copies for people and is ignored on load.

#include <filesystem>
#include <string>

#include "rpdhg/instance.h"

namespace rpdhg {

inline constexpr int kInstanceFormatVersion = 1;

std::string instance_to_json(const LpInstance& inst);
// Throws kParse (with line and byte offset) on malformed text and
// kValidation when the decoded instance violates an invariant.
LpInstance instance_from_json(const std::string& text);

void save_instance(const LpInstance& inst, const std::filesystem::path& path);
LpInstance load_instance(const std::filesystem::path& path);

// Fixed-format MPS of (A, b, c) with objective row COST. No optimum metadata.
std::string instance_to_mps(const LpInstance& inst, const std::string& name);
void export_mps(const LpInstance& inst, const std::filesystem::path& path);

// Lossless text form of a double and its inverse; exposed for CSV writers.
std::string HexDouble(double v);
double ParseHexDouble(const std::string& text);

}  // namespace rpdhg

#endif  // RPDHG_INSTANCE_IO_H_
