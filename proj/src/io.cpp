#include "npsl/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "npsl/error.hpp"

namespace npsl {

Json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double number_from_json(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf" || s == "+inf" || s == "Infinity") return kInf;
    if (s == "-inf" || s == "-Infinity") return -kInf;
  }
  fail(ErrorCode::parse, what + ": expected a number or \"inf\"/\"-inf\", got " + j.dump());
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v(i)));
  return out;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), ErrorCode::parse, what + ": expected a nonempty list of rows");
  require(j.front().is_array(), ErrorCode::parse, what + ": expected a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols, ErrorCode::parse,
            what + ": ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = number_from_json(row[static_cast<std::size_t>(k)], what);
  }
  return m;
}

Vector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) return Vector::Constant(1, number_from_json(j, what));
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from_json(j[i], what);
  return v;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::parse, source + ": " + e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::parse, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

namespace {

const Json& field(const Json& j, const char* key, const std::string& what) {
  require(j.is_object(), ErrorCode::parse, what + ": expected a JSON object");
  const auto it = j.find(key);
  require(it != j.end(), ErrorCode::parse, what + ": missing field \"" + key + "\"");
  return *it;
}

// A flat list is a column for B and a row for C.
Matrix matrix_or_vector(const Json& j, const std::string& what, bool column) {
  if (j.is_array() && !j.empty() && !j.front().is_array()) {
    const Vector v = vector_from_json(j, what);
    return column ? Matrix(v) : Matrix(v.transpose());
  }
  return matrix_from_json(j, what);
}

Vector per_channel(const Json& j, Eigen::Index m, const std::string& what) {
  Vector v = vector_from_json(j, what);
  if (v.size() == 1 && m > 1) v = Vector::Constant(m, v(0));
  require(v.size() == m, ErrorCode::dimension_mismatch, what + ": expected one value per channel");
  return v;
}

double p_from_json(const Json& j) {
  const double p = number_from_json(j, "p");
  require(p >= 1.0, ErrorCode::parse, "p must be in [1, ∞]");
  return p;
}

}  // namespace

LureSystem system_from_json(const Json& j) try {
  LureSystem sys;
  sys.a = matrix_from_json(field(j, "A", "system"), "A");
  sys.b = matrix_or_vector(field(j, "B", "system"), "B", true);
  sys.c = matrix_or_vector(field(j, "C", "system"), "C", false);
  const Eigen::Index m = sys.b.cols();
  sys.kappa = per_channel(field(j, "kappa", "system"), m, "kappa");
  sys.zeta = j.contains("zeta") ? per_channel(j["zeta"], m, "zeta") : Vector::Zero(m);
  validate_system(sys);
  return sys;
} catch (const nlohmann::json::exception& e) {
  fail(ErrorCode::parse, std::string("system: ") + e.what());
}

Json system_to_json(const LureSystem& sys) {
  Json j;
  j["A"] = matrix_to_json(sys.a);
  j["B"] = matrix_to_json(sys.b);
  j["C"] = matrix_to_json(sys.c);
  j["zeta"] = vector_to_json(sys.zeta);
  j["kappa"] = vector_to_json(sys.kappa);
  return j;
}

FormFamily family_from_json(const Json& j) try {
  FormFamily f;
  const double p = j.contains("p") ? p_from_json(j["p"]) : 2.0;
  f.conic = j.value("conic", false);
  if (j.contains("weight")) {
    const Json& w = j["weight"];
    if (w.is_array() && !w.empty() && !w.front().is_array())
      f.spec = NormSpec::diagonal(p, vector_from_json(w, "weight"));
    else
      f.spec = NormSpec(p, matrix_from_json(w, "weight"));
  } else {
    f.spec = NormSpec(p);
  }
  const Json& forms = field(j, "forms", "family");
  require(forms.is_array() && !forms.empty(), ErrorCode::parse, "forms: expected [P0, P1, ...]");
  for (std::size_t i = 0; i < forms.size(); ++i) f.forms.push_back(matrix_from_json(forms[i], "forms[" + std::to_string(i) + "]"));
  f.rho = j.contains("rho") ? vector_from_json(j["rho"], "rho") : Vector(0);
  validate_family(f);
  return f;
} catch (const nlohmann::json::exception& e) {
  fail(ErrorCode::parse, std::string("family: ") + e.what());
}

Json family_to_json(const FormFamily& f) {
  Json j;
  j["p"] = number_to_json(f.spec.p());
  j["conic"] = f.conic;
  if (f.spec.weighted()) j["weight"] = matrix_to_json(f.spec.weight());
  Json forms = Json::array();
  for (const auto& m : f.forms) forms.push_back(matrix_to_json(m));
  j["forms"] = std::move(forms);
  j["rho"] = vector_to_json(f.rho);
  return j;
}

Matrix matrix_file_from_json(const Json& j) {
  if (j.is_object()) return matrix_from_json(field(j, "A", "matrix file"), "A");
  return matrix_from_json(j, "matrix");
}

Json certificate_to_json(const Certificate& c) {
  Json j;
  j["method"] = to_string(c.method);
  j["status"] = to_string(c.status);
  j["p"] = number_to_json(c.p);
  j["rate"] = number_to_json(c.rate);
  j["weight"] = matrix_to_json(c.weight);
  j["input_weight"] = vector_to_json(c.input_weight);
  j["tau"] = vector_to_json(c.tau);
  j["reason"] = c.reason;
  j["notes"] = c.notes;
  Json metrics = Json::object();
  for (const auto& [k, v] : c.metrics) metrics[k] = number_to_json(v);
  j["metrics"] = std::move(metrics);
  j["system"] = system_to_json(c.system);
  return j;
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  try {
    c.method = method_from_string(field(j, "method", "certificate").get<std::string>());
    c.status = status_from_string(field(j, "status", "certificate").get<std::string>());
    c.p = p_from_json(field(j, "p", "certificate"));
    c.rate = number_from_json(field(j, "rate", "certificate"), "rate");
    c.weight = matrix_from_json(field(j, "weight", "certificate"), "weight");
    c.input_weight = vector_from_json(field(j, "input_weight", "certificate"), "input_weight");
    c.tau = vector_from_json(field(j, "tau", "certificate"), "tau");
    c.reason = j.value("reason", "");
    if (j.contains("notes")) c.notes = j["notes"].get<std::vector<std::string>>();
    if (j.contains("metrics"))
      for (const auto& [k, v] : j["metrics"].items()) c.metrics[k] = number_from_json(v, "metrics." + k);
    c.system = system_from_json(field(j, "system", "certificate"));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, std::string("certificate: ") + e.what());
  }
  return c;
}

}  // namespace npsl
