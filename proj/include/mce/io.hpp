#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "instances.hpp"
#include "json.hpp"

namespace mce::io {

using nlohmann::json;

inline constexpr const char* kInstanceSchema = "mce-instance/1";
inline constexpr const char* kSolutionSchema = "mce-solution/1";

inline json matrix_to_json(const BaseMat& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
  return rows;
}

inline json code_to_json(const BaseCode& c) {
  json basis = json::array();
  for (const auto& b : c.basis()) basis.push_back(matrix_to_json(b));
  return {{"q", c.field().characteristic()}, {"m", c.m()}, {"n", c.n()}, {"k", c.k()}, {"basis", basis}};
}

namespace detail {

[[noreturn]] inline void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ValidationError, field + ": " + what);
}

inline const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::ParseError, where + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::uint64_t unsigned_field(const json& j, const std::string& key, const std::string& where) {
  const auto& v = member(j, key, where);
  if (!v.is_number_unsigned()) throw Error(ErrorKind::ParseError, where + "." + key + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

}  // namespace detail

inline BaseMat matrix_from_json(const PrimeField& f, const json& j, std::size_t rows, std::size_t cols,
                                const std::string& where) {
  if (!j.is_array() || j.size() != rows) detail::invalid(where, "expected " + std::to_string(rows) + " rows");
  BaseMat a(rows, cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols) detail::invalid(where + "[" + std::to_string(i) + "]", "expected " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& x = row[c];
      if (!x.is_number_unsigned() || x.get<std::uint64_t>() >= f.characteristic()) {
        detail::invalid(where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]", "entry must lie in [0, q)");
      }
      a(i, c) = x.get<std::uint64_t>();
    }
  }
  return a;
}

inline BaseCode code_from_json(const json& j, const std::string& where) {
  const auto q = detail::unsigned_field(j, "q", where);
  const auto m = detail::unsigned_field(j, "m", where);
  const auto n = detail::unsigned_field(j, "n", where);
  const auto k = detail::unsigned_field(j, "k", where);
  if (!mce::detail::is_prime(q) || q == 2) detail::invalid(where + ".q", "must be an odd prime");
  const PrimeField f(q);
  const auto& basis = detail::member(j, "basis", where);
  if (!basis.is_array() || basis.size() != k) detail::invalid(where + ".basis", "expected k = " + std::to_string(k) + " matrices");
  std::vector<BaseMat> gens;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    gens.push_back(matrix_from_json(f, basis[i], m, n, where + ".basis[" + std::to_string(i) + "]"));
  }
  auto code = BaseCode::span(f, m, n, gens);
  if (code.k() != k) detail::invalid(where + ".basis", "rank " + std::to_string(code.k()) + " != k = " + std::to_string(k));
  return code;
}

inline json instance_to_json(const Instance& inst, const PlantedSolution* sol = nullptr) {
  json j = {{"schema", kInstanceSchema}, {"q", inst.q},          {"m", inst.m},
            {"n", inst.n},               {"k", inst.k},          {"C", code_to_json(inst.c)},
            {"D", code_to_json(inst.d)}};
  if (sol) j["solution"] = {{"P", matrix_to_json(sol->p)}, {"Q", matrix_to_json(sol->q)}};
  return j;
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, source + ": " + e.what());
  }
}

struct LoadedInstance {
  Instance instance;
  std::optional<PlantedSolution> solution;
};

inline LoadedInstance instance_from_json(const json& j) {
  const auto schema = detail::member(j, "schema", "instance");
  if (!schema.is_string() || schema.get<std::string>() != kInstanceSchema) {
    throw Error(ErrorKind::ParseError, std::string("instance.schema: expected '") + kInstanceSchema + "'");
  }
  const auto q = detail::unsigned_field(j, "q", "instance");
  const auto m = detail::unsigned_field(j, "m", "instance");
  const auto n = detail::unsigned_field(j, "n", "instance");
  const auto k = detail::unsigned_field(j, "k", "instance");
  auto c = code_from_json(detail::member(j, "C", "instance"), "instance.C");
  auto d = code_from_json(detail::member(j, "D", "instance"), "instance.D");
  for (const auto* code : {&c, &d}) {
    if (code->field().characteristic() != q || code->m() != m || code->n() != n || code->k() != k) {
      detail::invalid("instance", "code parameters disagree with the header");
    }
  }
  LoadedInstance out{Instance{q, m, n, k, std::move(c), std::move(d)}, std::nullopt};
  const auto& inst = out.instance;
  if (j.contains("solution")) {
    const PrimeField f(inst.q);
    const auto& s = j.at("solution");
    out.solution = PlantedSolution{matrix_from_json(f, detail::member(s, "P", "solution"), inst.m, inst.m, "solution.P"),
                                   matrix_from_json(f, detail::member(s, "Q", "solution"), inst.n, inst.n, "solution.Q")};
  }
  return out;
}

inline json solution_to_json(const BaseMat& p, const BaseMat& q) {
  return {{"schema", kSolutionSchema}, {"P", matrix_to_json(p)}, {"Q", matrix_to_json(q)}};
}

inline PlantedSolution solution_from_json(const json& j, const Instance& inst) {
  const auto schema = detail::member(j, "schema", "solution");
  if (!schema.is_string() || schema.get<std::string>() != kSolutionSchema) {
    throw Error(ErrorKind::ParseError, std::string("solution.schema: expected '") + kSolutionSchema + "'");
  }
  const PrimeField f(inst.q);
  return PlantedSolution{matrix_from_json(f, detail::member(j, "P", "solution"), inst.m, inst.m, "solution.P"),
                         matrix_from_json(f, detail::member(j, "Q", "solution"), inst.n, inst.n, "solution.Q")};
}

inline json stats_to_json(const AttackStats& s) {
  return {{"draws", s.draws},
          {"dim1_hulls", s.dim1_hulls},
          {"probes_used", s.probes_used},
          {"keys", s.keys},
          {"collisions", s.collisions},
          {"false_positives", s.false_positives},
          {"dict_size", s.dict_size},
          {"probes", s.probes},
          {"saturated", s.saturated},
          {"transposed", s.transform.transposed},
          {"dual_swapped", s.transform.dual_swapped},
          {"phase_times_ms", s.phase_times_ms},
          {"success", s.success}};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, path + ": cannot write");
  out << text;
}

inline LoadedInstance read_instance(const std::string& path) { return instance_from_json(parse_text(read_file(path), path)); }

inline void write_instance(const std::string& path, const Instance& inst, const PlantedSolution* sol = nullptr) {
  write_file(path, instance_to_json(inst, sol).dump(1) + "\n");
}

}  // namespace mce::io
