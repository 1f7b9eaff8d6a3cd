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

#include "rpdhg/instance_io.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rpdhg/error.h"

namespace rpdhg {
namespace {

using Json = nlohmann::json;

Json EncodeVector(const Vector& v) {
  Json hex = Json::array();
  Json dec = Json::array();
  for (double x : v) {
    hex.push_back(HexDouble(x));
    dec.push_back(x);
  }
  return Json{{"hex", std::move(hex)}, {"dec", std::move(dec)}};
}

Json EncodeMatrix(const DenseMatrix& a) {
  Json hex = Json::array();
  Json dec = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json hex_row = Json::array();
    Json dec_row = Json::array();
    for (double x : a.row(i)) {
      hex_row.push_back(HexDouble(x));
      dec_row.push_back(x);
    }
    hex.push_back(std::move(hex_row));
    dec.push_back(std::move(dec_row));
  }
  return Json{{"hex", std::move(hex)}, {"dec", std::move(dec)}};
}

[[noreturn]] void ParseFailure(const std::string& what) {
  Fail(ErrorKind::kParse, "instance file: " + what);
}

const Json& Field(const Json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    ParseFailure(std::string("missing field '") + name + "'");
  }
  return obj.at(name);
}

Vector DecodeVector(const Json& obj, const char* name) {
  const Json& hex = Field(Field(obj, name), "hex");
  if (!hex.is_array()) ParseFailure(std::string("field '") + name + "' is not an array");
  Vector out;
  out.reserve(hex.size());
  for (const Json& item : hex) {
    if (!item.is_string()) ParseFailure(std::string("non-string real in '") + name + "'");
    out.push_back(ParseHexDouble(item.get<std::string>()));
  }
  return out;
}

template <typename T>
T Get(const Json& obj, const char* name) {
  try {
    return Field(obj, name).get<T>();
  } catch (const Json::exception& e) {
    ParseFailure(std::string("field '") + name + "': " + e.what());
  }
}

}  // namespace

std::string HexDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double ParseHexDouble(const std::string& text) {
  if (text.empty()) ParseFailure("empty real literal");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    ParseFailure("bad real literal '" + text + "'");
  }
  return v;
}

std::string instance_to_json(const LpInstance& inst) {
  const InstanceMeta& meta = inst.meta;
  Json dist{{"matrix", MatrixKindName(meta.matrix.kind)},
            {"sigma_A", meta.matrix.sigma_a},
            {"solution", SolutionKindName(meta.solution.kind)},
            {"level", meta.solution.level}};
  if (!meta.solution.fixed_values.empty()) {
    dist["fixed_values"] = EncodeVector(meta.solution.fixed_values);
  }
  const Certificate& cert = meta.certificate;
  Json certificate{{"full_rank_basis", cert.full_rank_basis},
                   {"strictly_complementary", cert.strictly_complementary},
                   {"sigma_min_basis", EncodeVector({cert.sigma_min_basis})},
                   {"sigma_max_basis", EncodeVector({cert.sigma_max_basis})},
                   {"min_u", EncodeVector({cert.min_u})}};
  Json doc{{"format_version", kInstanceFormatVersion},
           {"m", inst.m},
           {"n", inst.n},
           {"seed", inst.seed},
           {"dist", std::move(dist)},
           {"presolved", inst.presolved},
           {"certificate", std::move(certificate)},
           {"shuffled", meta.shuffled},
           {"shuffle_seed", meta.shuffle_seed},
           {"A", EncodeMatrix(inst.a)},
           {"b", EncodeVector(inst.b)},
           {"c", EncodeVector(inst.c)},
           {"x_star", EncodeVector(inst.x_star)},
           {"s_star", EncodeVector(inst.s_star)},
           {"y_star", EncodeVector(inst.y_star)},
           {"basis", inst.basis}};
  return doc.dump(1) + "\n";
}

LpInstance instance_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < offset; ++i) {
      if (text[i] == '\n') ++line;
    }
    ParseFailure("malformed JSON at line " + std::to_string(line) +
                 ", byte offset " + std::to_string(e.byte) + ": " + e.what());
  }
  const int version = Get<int>(doc, "format_version");
  if (version != kInstanceFormatVersion) {
    ParseFailure("unsupported format_version " + std::to_string(version));
  }

  LpInstance inst;
  inst.m = Get<std::size_t>(doc, "m");
  inst.n = Get<std::size_t>(doc, "n");
  inst.seed = Get<std::uint64_t>(doc, "seed");
  inst.presolved = Get<bool>(doc, "presolved");

  const Json& dist = Field(doc, "dist");
  try {
    inst.meta.matrix.kind = ParseMatrixKind(Get<std::string>(dist, "matrix"));
    inst.meta.solution.kind = ParseSolutionKind(Get<std::string>(dist, "solution"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse) throw;
    ParseFailure(e.what());
  }
  inst.meta.matrix.sigma_a = Get<double>(dist, "sigma_A");
  inst.meta.solution.level = Get<int>(dist, "level");
  if (dist.contains("fixed_values")) {
    inst.meta.solution.fixed_values = DecodeVector(dist, "fixed_values");
  }
  const Json& cert = Field(doc, "certificate");
  inst.meta.certificate.full_rank_basis = Get<bool>(cert, "full_rank_basis");
  inst.meta.certificate.strictly_complementary =
      Get<bool>(cert, "strictly_complementary");
  auto scalar = [&](const char* name) {
    const Vector v = DecodeVector(cert, name);
    if (v.size() != 1) ParseFailure(std::string("'") + name + "' must hold one real");
    return v[0];
  };
  inst.meta.certificate.sigma_min_basis = scalar("sigma_min_basis");
  inst.meta.certificate.sigma_max_basis = scalar("sigma_max_basis");
  inst.meta.certificate.min_u = scalar("min_u");
  inst.meta.shuffled = Get<bool>(doc, "shuffled");
  inst.meta.shuffle_seed = Get<std::uint64_t>(doc, "shuffle_seed");

  const Json& a_hex = Field(Field(doc, "A"), "hex");
  if (!a_hex.is_array() || a_hex.size() != inst.m) {
    ParseFailure("'A' must have m rows");
  }
  std::vector<double> entries;
  entries.reserve(inst.m * inst.n);
  for (const Json& row : a_hex) {
    if (!row.is_array() || row.size() != inst.n) {
      ParseFailure("every row of 'A' must have n entries");
    }
    for (const Json& item : row) {
      if (!item.is_string()) ParseFailure("non-string real in 'A'");
      entries.push_back(ParseHexDouble(item.get<std::string>()));
    }
  }
  try {
    inst.a = DenseMatrix(inst.m, inst.n, std::move(entries));
  } catch (const Error& e) {
    Fail(ErrorKind::kValidation, std::string("invalid instance: ") + e.what());
  }
  inst.b = DecodeVector(doc, "b");
  inst.c = DecodeVector(doc, "c");
  inst.x_star = DecodeVector(doc, "x_star");
  inst.s_star = DecodeVector(doc, "s_star");
  inst.y_star = DecodeVector(doc, "y_star");
  inst.basis = Get<std::vector<std::size_t>>(doc, "basis");
  validate_instance(inst);
  return inst;
}

void save_instance(const LpInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kArgument, "cannot open " + path.string() + " for writing");
  out << instance_to_json(inst);
  if (!out) Fail(ErrorKind::kArgument, "failed writing " + path.string());
}

LpInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kArgument, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

std::string instance_to_mps(const LpInstance& inst, const std::string& name) {
  auto row_name = [](std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "R%07zu", i + 1);
    return std::string(buf);
  };
  auto col_name = [](std::size_t j) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "X%07zu", j + 1);
    return std::string(buf);
  };
  auto entry = [](const std::string& a, const std::string& b, double v) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "    %-8s  %-8s  %12.5e\n", a.c_str(),
                  b.c_str(), v);
    return std::string(buf);
  };
  std::string out = "NAME          " + name.substr(0, 8) + "\nROWS\n N  COST\n";
  for (std::size_t i = 0; i < inst.m; ++i) out += " E  " + row_name(i) + "\n";
  out += "COLUMNS\n";
  for (std::size_t j = 0; j < inst.n; ++j) {
    const std::string col = col_name(j);
    if (inst.c[j] != 0.0) out += entry(col, "COST", inst.c[j]);
    for (std::size_t i = 0; i < inst.m; ++i) {
      if (inst.a(i, j) != 0.0) out += entry(col, row_name(i), inst.a(i, j));
    }
  }
  out += "RHS\n";
  for (std::size_t i = 0; i < inst.m; ++i) {
    if (inst.b[i] != 0.0) out += entry("RHS", row_name(i), inst.b[i]);
  }
  out += "ENDATA\n";
  return out;
}

void export_mps(const LpInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorKind::kArgument, "cannot open " + path.string() + " for writing");
  out << instance_to_mps(inst, "RPDHG");
}

}  // namespace rpdhg
