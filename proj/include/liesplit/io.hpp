#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "liesplit/integrators.hpp"
#include "liesplit/rotor.hpp"

namespace liesplit {
namespace io {

using nlohmann::json;

/// Shortest representation that round-trips a double through text.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json vec_to_json(const Vec& v) { return json(v); }

inline Vec vec_from_json(const json& j, const char* where) {
  if (!j.is_array()) throw invalid_input(std::string(where) + ": expected an array of numbers");
  Vec v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw invalid_input(std::string(where) + ": expected a number");
    v.push_back(x.get<double>());
  }
  return v;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.empty())
    throw invalid_input(std::string(where) + ": expected a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw invalid_input(std::string(where) + ": expected nonempty rows");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    Vec row = vec_from_json(j[i], where);
    if (row.size() != cols) throw invalid_input(std::string(where) + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = row[c];
  }
  return m;
}

// Trig polynomials serialize as {omega, order, n, a0, cos, sin} where cos and
// sin list one coefficient block per harmonic, lowest first.

inline json to_json(const VecTrigPoly& p) {
  json cs = json::array(), ss = json::array();
  for (int i = 1; i <= p.order(); ++i) {
    cs.push_back(vec_to_json(p.cos_coeff(i)));
    ss.push_back(vec_to_json(p.sin_coeff(i)));
  }
  return json{{"omega", p.omega()},
              {"order", p.order()},
              {"n", p.constant_coeff().size()},
              {"a0", vec_to_json(p.constant_coeff())},
              {"cos", std::move(cs)},
              {"sin", std::move(ss)}};
}

inline json to_json(const MatTrigPoly& p) {
  json cs = json::array(), ss = json::array();
  for (int i = 1; i <= p.order(); ++i) {
    cs.push_back(matrix_to_json(p.cos_coeff(i)));
    ss.push_back(matrix_to_json(p.sin_coeff(i)));
  }
  return json{{"omega", p.omega()},
              {"order", p.order()},
              {"n", p.constant_coeff().rows()},
              {"a0", matrix_to_json(p.constant_coeff())},
              {"cos", std::move(cs)},
              {"sin", std::move(ss)}};
}

namespace detail {

inline void check_poly_header(const json& j, const char* where) {
  for (const char* key : {"omega", "order", "n", "a0", "cos", "sin"})
    if (!j.contains(key))
      throw invalid_input(std::string(where) + ": missing key '" + key + "'");
  if (!j["omega"].is_number() || !j["order"].is_number_integer() || !j["n"].is_number_integer())
    throw invalid_input(std::string(where) + ": omega/order/n malformed");
  const auto order = j["order"].get<std::int64_t>();
  if (order < 0) throw invalid_input(std::string(where) + ": negative order");
  if (j["cos"].size() != static_cast<std::size_t>(order) ||
      j["sin"].size() != static_cast<std::size_t>(order))
    throw invalid_input(std::string(where) + ": cos/sin length does not match order");
}

}  // namespace detail

inline VecTrigPoly vec_poly_from_json(const json& j, const char* where = "vector polynomial") {
  detail::check_poly_header(j, where);
  const std::size_t n = j["n"].get<std::size_t>();
  Vec a0 = vec_from_json(j["a0"], where);
  if (a0.size() != n) throw invalid_input(std::string(where) + ": a0 length does not match n");
  std::vector<Vec> cs, ss;
  for (const auto& c : j["cos"]) cs.push_back(vec_from_json(c, where));
  for (const auto& s : j["sin"]) ss.push_back(vec_from_json(s, where));
  for (const Vec& v : cs)
    if (v.size() != n) throw invalid_input(std::string(where) + ": cos block length mismatch");
  for (const Vec& v : ss)
    if (v.size() != n) throw invalid_input(std::string(where) + ": sin block length mismatch");
  return VecTrigPoly(j["omega"].get<double>(), std::move(a0), std::move(cs), std::move(ss));
}

inline MatTrigPoly mat_poly_from_json(const json& j, const char* where = "matrix polynomial") {
  detail::check_poly_header(j, where);
  const std::size_t n = j["n"].get<std::size_t>();
  Matrix a0 = matrix_from_json(j["a0"], where);
  if (a0.rows() != n || a0.cols() != n)
    throw invalid_input(std::string(where) + ": a0 shape does not match n");
  std::vector<Matrix> cs, ss;
  for (const auto& c : j["cos"]) cs.push_back(matrix_from_json(c, where));
  for (const auto& s : j["sin"]) ss.push_back(matrix_from_json(s, where));
  for (const Matrix& m : cs)
    if (m.rows() != n || m.cols() != n)
      throw invalid_input(std::string(where) + ": cos block shape mismatch");
  for (const Matrix& m : ss)
    if (m.rows() != n || m.cols() != n)
      throw invalid_input(std::string(where) + ": sin block shape mismatch");
  return MatTrigPoly(j["omega"].get<double>(), std::move(a0), std::move(cs), std::move(ss));
}

inline json to_json(const LieElement& el) {
  return json{{"A", to_json(el.A)}, {"f", to_json(el.f)}, {"alpha", el.alpha}};
}

inline LieElement lie_element_from_json(const json& j) {
  for (const char* key : {"A", "f", "alpha"})
    if (!j.contains(key)) throw invalid_input(std::string("lie element: missing key '") + key + "'");
  return LieElement(mat_poly_from_json(j["A"], "lie element A"),
                    vec_poly_from_json(j["f"], "lie element f"), j["alpha"].get<double>());
}

// A system file is {omega, algebra, A, f} with A a matrix polynomial and f a
// vector polynomial at the same base frequency.

inline json to_json(const LinearSystem& sys) {
  return json{{"omega", sys.omega()},
              {"algebra", std::string(algebra_name(sys.algebra))},
              {"A", to_json(sys.A)},
              {"f", to_json(sys.f)}};
}

inline LinearSystem system_from_json(const json& j) {
  for (const char* key : {"omega", "A", "f"})
    if (!j.contains(key)) throw invalid_input(std::string("system: missing key '") + key + "'");
  MatTrigPoly A = mat_poly_from_json(j["A"], "system A");
  VecTrigPoly f = vec_poly_from_json(j["f"], "system f");
  check_same_frequency(j["omega"].get<double>(), A.omega());
  MatrixAlgebra g = MatrixAlgebra::general_linear;
  if (j.contains("algebra")) g = parse_algebra(j["algebra"].get<std::string>());
  return LinearSystem(std::move(A), std::move(f), g);
}

inline json to_json(const rotor::RotorParams& p) {
  return json{{"m", p.m}, {"k", p.k}, {"omega", p.omega}, {"eps", p.eps}, {"x0", vec_to_json(p.x0)}};
}

inline rotor::RotorParams rotor_params_from_json(const json& j) {
  rotor::RotorParams p;
  for (const char* key : {"m", "k", "omega", "eps"})
    if (!j.contains(key))
      throw invalid_input(std::string("rotor parameters: missing key '") + key + "'");
  p.m = j["m"].get<double>();
  p.k = j["k"].get<double>();
  p.omega = j["omega"].get<double>();
  p.eps = j["eps"].get<double>();
  if (j.contains("x0")) p.x0 = vec_from_json(j["x0"], "rotor parameters x0");
  rotor::validate(p);
  return p;
}

inline std::vector<std::string> state_column_names(std::size_t n) {
  if (n == 4) return {"q1", "q2", "p1", "p2"};
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

/// Trajectory CSV: header "t,q1,q2,p1,p2" (or t,x1..xn), one row per grid
/// point, every value printed with full round-trip precision. Output is a
/// pure function of the trajectory, so identical runs are byte-identical.
inline std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  for (const std::string& c : state_column_names(n)) out += "," + c;
  out += "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out += format_double(traj.times[i]);
    for (double v : traj.states[i]) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw invalid_input("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw invalid_input("failed writing '" + path + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw invalid_input("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw invalid_input("parse failure in '" + path + "': " + e.what());
  }
}

}  // namespace io
}  // namespace liesplit
