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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "rpdhg/error.h"
#include "rpdhg/instance_io.h"
#include "test_util.h"

namespace rpdhg {
namespace {

std::filesystem::path TempPath(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rpdhg_io_" + name);
}

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an rpdhg::Error");
  return ErrorKind::kArgument;
}

TEST_SUITE("instance_io") {

TEST_CASE("hex doubles round-trip bit-exactly") {
  for (double v : {0.0, -0.0, 1.0, -2.5, 0.1, 1e-300, 5e-324, 1.7976931348623157e308,
                   std::nextafter(1.0, 2.0)}) {
    const double back = ParseHexDouble(HexDouble(v));
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
  CHECK(KindOf([] { ParseHexDouble("0x1.8p+1junk"); }) == ErrorKind::kParse);
  CHECK(KindOf([] { ParseHexDouble(""); }) == ErrorKind::kParse);
}

TEST_CASE("save then load preserves every field") {
  for (bool presolve : {false, true}) {
    GeneratorSpec spec;
    spec.m = 5;
    spec.n = 11;
    spec.seed = 0xfeedfacecafebeefull;  // above 2^63: must survive as u64
    spec.presolve = presolve;
    spec.shuffle = presolve;
    const LpInstance inst = generate_instance(spec);
    const auto path = TempPath(presolve ? "p.json" : "r.json");
    save_instance(inst, path);
    CHECK(load_instance(path) == inst);
    std::filesystem::remove(path);
  }
  GeneratorSpec fixed;
  fixed.m = 2;
  fixed.n = 3;
  fixed.solution.kind = SolutionKind::kFixedVector;
  fixed.solution.fixed_values = {1, 1, 1};
  const LpInstance f = generate_instance(fixed);
  CHECK(instance_from_json(instance_to_json(f)) == f);
  const LpInstance d = gen_disparity(4, 2, {MatrixKind::kRademacher, 1.0}, 3, true).instance;
  CHECK(instance_from_json(instance_to_json(d)) == d);
}

TEST_CASE("truncated or malformed text is a parse error") {
  const std::string text = instance_to_json(testing::Generated(3, 6, 1));
  CHECK(KindOf([&] { instance_from_json(text.substr(0, text.size() / 2)); }) ==
        ErrorKind::kParse);
  CHECK(KindOf([] { instance_from_json("{\"format_version\": 1}"); }) == ErrorKind::kParse);
  CHECK(KindOf([] { instance_from_json("[1, 2"); }) == ErrorKind::kParse);
  try {
    instance_from_json("{\n  \"m\": 3,\n  oops\n}");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(KindOf([] { load_instance(TempPath("does_not_exist.json")); }) != ErrorKind::kValidation);
}

TEST_CASE("loading an inconsistent instance is a validation error") {
  LpInstance inst = testing::Generated(3, 6, 4);
  inst.b[1] += 0.5;
  const std::string text = instance_to_json(inst);
  CHECK(KindOf([&] { instance_from_json(text); }) == ErrorKind::kValidation);
}

TEST_CASE("MPS export lists rows, columns, rhs") {
  const DenseMatrix a(2, 3, {1, 0, 1, 0, 1, 1});
  const LpInstance inst = assemble(a, {1, 2, 0}, {0, 0, 3}, {}, 0);
  const std::string mps = instance_to_mps(inst, "tiny");
  CHECK(mps.rfind("NAME", 0) == 0);
  for (const char* section : {"ROWS", "COLUMNS", "RHS", "ENDATA", " N  COST", " E  R0000002"}) {
    CHECK(mps.find(section) != std::string::npos);
  }
  // Zero coefficients are omitted.
  CHECK(mps.find("X0000001  R0000002") == std::string::npos);
  CHECK(mps.find("X0000003  R0000002") != std::string::npos);
}

}  // TEST_SUITE

}  // namespace
}  // namespace rpdhg
