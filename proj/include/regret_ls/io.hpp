#ifndef REGRET_LS_IO_HPP
#define REGRET_LS_IO_HPP

// JSON wire format.
//
//   matrix:  {"rows": m, "cols": n, "data": [[re, im], ...]}   (row-major)
//   problem: {"variant": "regret", "H": matrix, "y": matrix, "delta_H": .., "delta_Y": ..,
//             "mu": .., "structure": {"H_basis": [matrix..], "y_basis": [matrix..],
//                                     "delta_alpha": .., "delta_beta": ..}}
//
// Vectors are m x 1 matrices. "variant", "mu" and "structure" are optional.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regret_ls/errors.hpp"
#include "regret_ls/linalg.hpp"
#include "regret_ls/problem.hpp"
#include "regret_ls/sdp.hpp"

namespace regret_ls::io {

using nlohmann::json;

/// Malformed JSON text; carries the 1-based line and column of the failure.
class ParseError : public ArgumentError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : ArgumentError(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline json parse(const std::string& text, const std::string& source = "<input>") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << source << ":" << line << ":" << column << ": invalid JSON: " << e.what();
    throw ParseError(msg.str(), line, column);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json matrix_to_json(const ComplexMatrix& a) {
  json data = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      data.push_back({a(i, j).real(), a(i, j).imag()});
    }
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

namespace detail {

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ArgumentError(what + ": expected a number");
  return j.get<double>();
}

inline Eigen::Index count(const json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0) {
    throw ArgumentError(what + ": '" + key + "' must be a nonnegative integer");
  }
  return static_cast<Eigen::Index>(j[key].get<long long>());
}

inline double optional_number(const json& j, const std::string& key, double fallback,
                              const std::string& what) {
  if (!j.contains(key)) return fallback;
  return number(j[key], what + "." + key);
}

}  // namespace detail

inline ComplexMatrix matrix_from_json(const json& j, const std::string& what = "matrix") {
  if (!j.is_object()) throw ArgumentError(what + ": expected an object with rows, cols, data");
  const Eigen::Index rows = detail::count(j, "rows", what);
  const Eigen::Index cols = detail::count(j, "cols", what);
  if (!j.contains("data") || !j["data"].is_array()) {
    throw ArgumentError(what + ": 'data' must be an array of [re, im] pairs");
  }
  const json& data = j["data"];
  if (data.size() != static_cast<std::size_t>(rows * cols)) {
    throw ArgumentError(what + ": expected " + std::to_string(rows * cols) + " entries, got " +
                        std::to_string(data.size()));
  }
  ComplexMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) {
      const json& e = data[static_cast<std::size_t>(i * cols + j2)];
      const std::string where = what + ".data[" + std::to_string(i * cols + j2) + "]";
      if (e.is_number()) {
        a(i, j2) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        a(i, j2) = Complex(detail::number(e[0], where), detail::number(e[1], where));
      } else {
        throw ArgumentError(where + ": expected [re, im]");
      }
    }
  }
  linalg::require_finite(a, what);
  return a;
}

inline ComplexVector vector_from_json(const json& j, const std::string& what = "vector") {
  const ComplexMatrix a = matrix_from_json(j, what);
  if (a.cols() != 1) throw ArgumentError(what + ": expected a column vector (cols = 1)");
  return a.col(0);
}

struct ProblemFile {
  ProblemSpec spec;
  std::optional<Formulation> variant;
};

inline json problem_to_json(const ProblemSpec& spec,
                            const std::optional<Formulation>& variant = {}) {
  json j;
  if (variant) j["variant"] = std::string(to_string(*variant));
  j["H"] = matrix_to_json(spec.H);
  j["y"] = matrix_to_json(spec.y);
  j["delta_H"] = spec.delta_H;
  j["delta_Y"] = spec.delta_Y;
  j["mu"] = spec.mu;
  if (spec.structure) {
    json s;
    s["H_basis"] = json::array();
    for (const auto& b : spec.structure->H_basis) s["H_basis"].push_back(matrix_to_json(b));
    s["y_basis"] = json::array();
    for (const auto& b : spec.structure->y_basis) s["y_basis"].push_back(matrix_to_json(b));
    s["delta_alpha"] = spec.structure->delta_alpha;
    s["delta_beta"] = spec.structure->delta_beta;
    j["structure"] = std::move(s);
  }
  return j;
}

inline ProblemFile problem_from_json(const json& j) {
  if (!j.is_object()) throw ArgumentError("problem: expected a JSON object");
  ProblemFile out;
  if (!j.contains("H") || !j.contains("y")) throw ArgumentError("problem: 'H' and 'y' are required");
  out.spec.H = matrix_from_json(j["H"], "problem.H");
  out.spec.y = vector_from_json(j["y"], "problem.y");
  out.spec.delta_H = detail::optional_number(j, "delta_H", 0.0, "problem");
  out.spec.delta_Y = detail::optional_number(j, "delta_Y", 0.0, "problem");
  out.spec.mu = detail::optional_number(j, "mu", 0.0, "problem");
  if (j.contains("variant")) {
    if (!j["variant"].is_string()) throw ArgumentError("problem.variant: expected a string");
    out.variant = formulation_from_string(j["variant"].get<std::string>());
  }
  if (j.contains("structure") && !j["structure"].is_null()) {
    const json& s = j["structure"];
    if (!s.is_object()) throw ArgumentError("problem.structure: expected an object");
    Structure st;
    for (const char* key : {"H_basis", "y_basis"}) {
      if (!s.contains(key) || !s[key].is_array()) {
        throw ArgumentError(std::string("problem.structure.") + key + ": expected an array");
      }
    }
    for (std::size_t i = 0; i < s["H_basis"].size(); ++i) {
      st.H_basis.push_back(
          matrix_from_json(s["H_basis"][i], "problem.structure.H_basis[" + std::to_string(i) + "]"));
    }
    for (std::size_t i = 0; i < s["y_basis"].size(); ++i) {
      st.y_basis.push_back(
          vector_from_json(s["y_basis"][i], "problem.structure.y_basis[" + std::to_string(i) + "]"));
    }
    st.delta_alpha = detail::optional_number(s, "delta_alpha", 0.0, "problem.structure");
    st.delta_beta = detail::optional_number(s, "delta_beta", 0.0, "problem.structure");
    out.spec.structure = std::move(st);
  }
  out.spec.validate_shape();
  return out;
}

inline ProblemFile load_problem(const std::string& path) {
  return problem_from_json(parse(read_file(path), path));
}

inline json lmi_to_json(const sdp::LmiSystem& sys) {
  json j;
  j["num_vars"] = sys.num_vars;
  j["objective"] = std::vector<double>(sys.objective.data(), sys.objective.data() + sys.objective.size());
  j["variable_names"] = sys.variable_names;
  if (sys.initial_point.size()) {
    j["initial_point"] = std::vector<double>(sys.initial_point.data(),
                                             sys.initial_point.data() + sys.initial_point.size());
  }
  if (sys.inflate_variable) j["inflate_variable"] = *sys.inflate_variable;
  j["blocks"] = json::array();
  for (const auto& b : sys.blocks) {
    json jb;
    jb["name"] = b.name;
    jb["F0"] = matrix_to_json(b.constant);
    jb["F"] = json::array();
    for (const auto& f : b.coefficients) jb["F"].push_back(matrix_to_json(f));
    j["blocks"].push_back(std::move(jb));
  }
  return j;
}

namespace detail {

inline sdp::LmiSystem lmi_from_json_unchecked(const json& j) {
  if (!j.is_object()) throw ArgumentError("lmi: expected a JSON object");
  sdp::LmiSystem sys;
  sys.num_vars = detail::count(j, "num_vars", "lmi");
  if (!j.contains("objective") || !j["objective"].is_array() ||
      j["objective"].size() != static_cast<std::size_t>(sys.num_vars)) {
    throw ArgumentError("lmi.objective: expected num_vars numbers");
  }
  sys.objective.resize(sys.num_vars);
  for (Eigen::Index i = 0; i < sys.num_vars; ++i) {
    sys.objective(i) = detail::number(j["objective"][static_cast<std::size_t>(i)], "lmi.objective");
  }
  if (j.contains("variable_names")) {
    sys.variable_names = j["variable_names"].get<std::vector<std::string>>();
  }
  if (!j.contains("blocks") || !j["blocks"].is_array()) throw ArgumentError("lmi.blocks: expected an array");
  for (std::size_t k = 0; k < j["blocks"].size(); ++k) {
    const json& jb = j["blocks"][k];
    const std::string what = "lmi.blocks[" + std::to_string(k) + "]";
    sdp::LmiBlock b;
    b.name = jb.value("name", std::string());
    b.constant = matrix_from_json(jb.at("F0"), what + ".F0");
    for (std::size_t i = 0; i < jb.at("F").size(); ++i) {
      b.coefficients.push_back(matrix_from_json(jb["F"][i], what + ".F[" + std::to_string(i) + "]"));
    }
    sys.blocks.push_back(std::move(b));
  }
  if (j.contains("initial_point")) {
    const auto v = j["initial_point"].get<std::vector<double>>();
    sys.initial_point = Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  if (j.contains("inflate_variable")) {
    sys.inflate_variable = detail::count(j, "inflate_variable", "lmi");
  }
  sys.validate();
  return sys;
}

}  // namespace detail

inline sdp::LmiSystem lmi_from_json(const json& j) {
  try {
    return detail::lmi_from_json_unchecked(j);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("lmi: ") + e.what());
  }
}

}  // namespace regret_ls::io

#endif  // REGRET_LS_IO_HPP
