#include "maslov/problem.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <set>
#include <sstream>

#include "maslov/error.hpp"
#include "maslov/propagation.hpp"

namespace maslov {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) config_error(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

int positive_int(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    config_error(std::string("\"") + key + "\" must be a positive integer");
  return v.get<int>();
}

std::vector<double> number_list(const json& v, const char* key) {
  if (!v.is_array()) config_error(std::string("\"") + key + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) config_error(std::string("\"") + key + "\" must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::string> string_list(const json& v, const char* key) {
  if (!v.is_array()) config_error(std::string("\"") + key + "\" must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) config_error(std::string("\"") + key + "\" must contain strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<std::vector<std::string>> string_matrix(const json& v, const char* key) {
  if (!v.is_array()) config_error(std::string("\"") + key + "\" must be a matrix of strings");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : v) out.push_back(string_list(row, key));
  return out;
}

BoundarySpec boundary(const json& v, const char* key) {
  BoundarySpec b;
  if (v.is_string()) {
    b.preset = v.get<std::string>();
    if (b.preset != "dirichlet" && b.preset != "neumann")
      config_error(std::string("\"") + key + "\": unknown preset \"" + b.preset + "\"");
    return b;
  }
  if (!v.is_array()) config_error(std::string("\"") + key + "\" must be a preset name or a matrix");
  for (const auto& row : v) b.rows.push_back(number_list(row, key));
  return b;
}

json boundary_json(const BoundarySpec& b) {
  if (!b.preset.empty()) return b.preset;
  return b.rows;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows, const char* what) {
  if (rows.empty() || rows[0].empty()) config_error(std::string(what) + " matrix is empty");
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) config_error(std::string(what) + " matrix is ragged");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd boundary_frame(const BoundarySpec& b, ProblemKind kind, int size, const char* what) {
  if (b.preset.empty()) {
    Eigen::MatrixXd m = rows_to_matrix(b.rows, what);
    if (m.rows() != size)
      config_error(std::string(what) + " must have " + std::to_string(size) + " rows");
    return m;
  }
  if (kind != ProblemKind::SecondOrder)
    config_error(std::string(what) + ": presets are only defined for second-order problems");
  const int l = size / 2;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, l);
  if (b.preset == "dirichlet") m.bottomRows(l).setIdentity();
  else m.topRows(l).setIdentity();
  return m;
}

std::vector<Expression> parse_all(const std::vector<std::string>& src, const char* what) {
  std::vector<Expression> out;
  for (const auto& s : src) {
    try {
      out.push_back(parse_expression(s));
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.offset(), e.expected(),
                        std::string(what) + " \"" + s + "\": " + e.what());
    }
  }
  return out;
}

}  // namespace

void SpectralProblem::validate() const {
  if (field.n < 2 || !field.eval) throw Error(ErrorKind::InvalidInput, "coefficient field is not set");
  if (P.rows() != field.n || Q.rows() != field.n)
    throw Error(ErrorKind::InvalidInput, "boundary frames must have n rows");
  if (P.cols() + Q.cols() != field.n)
    throw Error(ErrorKind::InvalidInput, "dim P + dim Q must equal n");
  if (!(lambda1 < lambda2) || !std::isfinite(lambda1) || !std::isfinite(lambda2))
    throw Error(ErrorKind::InvalidInput, "need finite lambda1 < lambda2");
  if (x_steps < 1 || lambda_steps < 1) throw Error(ErrorKind::InvalidInput, "grid sizes must be positive");
}

ProblemConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  static const std::set<std::string> known = {"kind", "n", "l", "m", "alphas", "kappas", "B", "V",
                                              "W", "P", "Q", "lambda", "x_steps", "lambda_steps"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) config_error("unknown key \"" + it.key() + "\"");

  ProblemConfig c;
  const json& kind = require(j, "kind");
  if (!kind.is_string()) config_error("\"kind\" must be a string");
  std::string k = kind.get<std::string>();
  if (k == "higher-order") {
    c.kind = ProblemKind::HigherOrder;
    require(j, "n");
    c.n = positive_int(j, "n");
    c.alphas = string_list(require(j, "alphas"), "alphas");
    c.kappas = number_list(require(j, "kappas"), "kappas");
    for (const char* bad : {"l", "B", "V", "W"})
      if (j.contains(bad)) config_error(std::string("\"") + bad + "\" is not valid for higher-order problems");
  } else if (k == "second-order") {
    c.kind = ProblemKind::SecondOrder;
    require(j, "l");
    c.l = positive_int(j, "l");
    c.B = number_list(require(j, "B"), "B");
    c.V = string_matrix(require(j, "V"), "V");
    c.W = string_matrix(require(j, "W"), "W");
    for (const char* bad : {"n", "alphas", "kappas"})
      if (j.contains(bad)) config_error(std::string("\"") + bad + "\" is not valid for second-order problems");
  } else if (k == "general") {
    config_error("kind \"general\" has no file format; build it through the library API");
  } else {
    config_error("unknown kind \"" + k + "\"");
  }
  if (j.contains("m")) c.m = positive_int(j, "m");
  c.P = boundary(require(j, "P"), "P");
  c.Q = boundary(require(j, "Q"), "Q");
  std::vector<double> lam = number_list(require(j, "lambda"), "lambda");
  if (lam.size() != 2) config_error("\"lambda\" must be [lambda1, lambda2]");
  c.lambda1 = lam[0];
  c.lambda2 = lam[1];
  if (j.contains("x_steps")) c.x_steps = positive_int(j, "x_steps");
  if (j.contains("lambda_steps")) c.lambda_steps = positive_int(j, "lambda_steps");
  return c;
}

ProblemConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string config_to_json(const ProblemConfig& c) {
  json j;
  if (c.kind == ProblemKind::HigherOrder) {
    j["kind"] = "higher-order";
    j["n"] = c.n;
    j["alphas"] = c.alphas;
    j["kappas"] = c.kappas;
  } else {
    j["kind"] = "second-order";
    j["l"] = c.l;
    j["B"] = c.B;
    j["V"] = c.V;
    j["W"] = c.W;
  }
  if (c.m > 0) j["m"] = c.m;
  j["P"] = boundary_json(c.P);
  j["Q"] = boundary_json(c.Q);
  j["lambda"] = {c.lambda1, c.lambda2};
  j["x_steps"] = c.x_steps;
  j["lambda_steps"] = c.lambda_steps;
  return j.dump(2);
}

SpectralProblem load_problem(const ProblemConfig& c) {
  SpectralProblem p;
  int size = 0;
  if (c.kind == ProblemKind::HigherOrder) {
    const int n = c.n;
    if (n < 2) config_error("higher-order problems need n >= 2");
    if (static_cast<int>(c.alphas.size()) != n + 1)
      config_error("need n+1 coefficient expressions alpha_0..alpha_n");
    if (static_cast<int>(c.kappas.size()) != n - 1) config_error("need n-1 kappa values kappa_2..kappa_n");
    for (double k : c.kappas)
      if (!(k != 0.0) || !std::isfinite(k)) config_error("kappa values must be finite and nonzero");
    auto alphas = std::make_shared<std::vector<Expression>>(parse_all(c.alphas, "alpha"));
    for (int i = 0; i <= 1000; ++i) {
      double x = i / 1000.0;
      if (!((*alphas)[n].eval(x) > 0.0))
        throw Error(ErrorKind::DegenerateCoefficient, "leading coefficient alpha_n is not positive at x = " + std::to_string(x));
    }
    auto kappas = c.kappas;
    p.field.n = n;
    p.field.eval = [alphas, kappas, vals = std::vector<double>(n + 1)](
                       double x, double lambda, Eigen::MatrixXd& out) mutable {
      for (std::size_t i = 0; i < alphas->size(); ++i) vals[i] = (*alphas)[i].eval(x);
      companion_higher_order(vals, kappas, lambda, out);
    };
    p.alphas = *alphas;
    p.kappas = c.kappas;
    size = n;
  } else if (c.kind == ProblemKind::SecondOrder) {
    const int l = c.l;
    if (l < 1) config_error("second-order problems need l >= 1");
    if (static_cast<int>(c.B.size()) != l) config_error("B must have l diagonal entries");
    auto check_square = [&](const std::vector<std::vector<std::string>>& m, const char* what) {
      if (static_cast<int>(m.size()) != l) config_error(std::string(what) + " must be l x l");
      for (const auto& row : m)
        if (static_cast<int>(row.size()) != l) config_error(std::string(what) + " must be l x l");
    };
    check_square(c.V, "V");
    check_square(c.W, "W");
    Eigen::VectorXd b(l);
    for (int i = 0; i < l; ++i) {
      if (c.B[i] == 0.0) throw Error(ErrorKind::SingularMatrix, "B is singular");
      if (!(c.B[i] > 0.0)) config_error("B entries must be positive");
      b(i) = c.B[i];
    }
    struct Coeffs {
      std::vector<Expression> v, w;
    };
    auto coeffs = std::make_shared<Coeffs>();
    for (const auto& row : c.V) {
      auto r = parse_all(row, "V entry");
      coeffs->v.insert(coeffs->v.end(), r.begin(), r.end());
    }
    for (const auto& row : c.W) {
      auto r = parse_all(row, "W entry");
      coeffs->w.insert(coeffs->w.end(), r.begin(), r.end());
    }
    p.field.n = 2 * l;
    p.field.eval = [coeffs, b, l, v = Eigen::MatrixXd(l, l), w = Eigen::MatrixXd(l, l)](
                       double x, double lambda, Eigen::MatrixXd& out) mutable {
      for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
          v(i, j) = coeffs->v[i * l + j].eval(x);
          w(i, j) = coeffs->w[i * l + j].eval(x);
        }
      companion_second_order(b, v, w, lambda, out);
    };
    size = 2 * l;
  } else {
    config_error("kind \"general\" must be built with general_problem()");
  }
  // Both companion forms keep the diagonal lambda-free and put lambda in a
  // single fixed entry, so the structural assumptions hold by construction.
  p.field.structure_b = true;
  p.field.affine_in_lambda = true;

  Eigen::MatrixXd pm = boundary_frame(c.P, c.kind, size, "P");
  Eigen::MatrixXd qm = boundary_frame(c.Q, c.kind, size, "Q");
  if (c.m > 0 && pm.cols() != c.m) config_error("P has " + std::to_string(pm.cols()) + " columns but m = " + std::to_string(c.m));
  if (pm.cols() + qm.cols() != size) config_error("dim P + dim Q must equal the system size");
  p.P = Frame(pm);
  p.Q = Frame(qm);
  p.lambda1 = c.lambda1;
  p.lambda2 = c.lambda2;
  p.x_steps = c.x_steps;
  p.lambda_steps = c.lambda_steps;
  if (!(c.lambda1 < c.lambda2)) config_error("need lambda1 < lambda2");
  p.validate();
  return p;
}

bool check_structure_b(const CoefficientField& field, double lambda1, double lambda2, int samples) {
  Eigen::MatrixXd a1(field.n, field.n), a2(field.n, field.n);
  Eigen::MatrixXd diff0;
  for (int i = 0; i < samples; ++i) {
    double x = samples > 1 ? static_cast<double>(i) / (samples - 1) : 0.0;
    field.eval(x, lambda1, a1);
    field.eval(x, lambda2, a2);
    Eigen::MatrixXd diff = a2 - a1;
    double scale = 1.0 + a1.cwiseAbs().maxCoeff() + a2.cwiseAbs().maxCoeff();
    if (diff.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale) return false;
    if (i == 0) diff0 = diff;
    else if ((diff - diff0).cwiseAbs().maxCoeff() > 1e-12 * scale) return false;
  }
  return true;
}

SpectralProblem general_problem(CoefficientField field, const Eigen::MatrixXd& P,
                                const Eigen::MatrixXd& Q, double lambda1, double lambda2,
                                int x_steps, int lambda_steps) {
  SpectralProblem p;
  p.field = std::move(field);
  p.P = Frame(P);
  p.Q = Frame(Q);
  p.lambda1 = lambda1;
  p.lambda2 = lambda2;
  p.x_steps = x_steps;
  p.lambda_steps = lambda_steps;
  p.validate();
  p.field.structure_b = check_structure_b(p.field, lambda1, lambda2);
  return p;
}

std::vector<std::string> catalog_names() {
  return {"example1", "example2", "example3", "harmonic-dirichlet", "harmonic-neumann"};
}

ProblemConfig builtin_catalog(const std::string& name) {
  ProblemConfig c;
  if (name == "example1") {
    c.kind = ProblemKind::HigherOrder;
    c.n = 3;
    c.m = 1;
    c.alphas = {".2*cos(10*x) - .5*cos(x/10)", "2*sin(5*x)", "10", "60"};
    c.kappas = {10, 60};
    c.P.rows = {{1}, {0}, {0}};
    c.Q.rows = {{1, 0}, {0, 1}, {0, 0}};
    c.lambda1 = -1;
    c.lambda2 = 0;
    return c;
  }
  if (name == "example2" || name == "example3") {
    c.kind = ProblemKind::SecondOrder;
    c.l = 2;
    c.B = {1, 1};
    c.V = {{"10*sin(10*x)*cos(10*x)", "25*sin(10*x)"}, {"x*(1-x)", "10*cos(10*x)"}};
    if (name == "example2")
      c.W = {{"5*x*(1-x)", "0"}, {"0", "5*x*(1-x)"}};
    else
      c.W = {{"5*x*(1-x)", "10*sin(10*x)"}, {"10*cos(10*x)", "5*x*(1-x)"}};
    c.P.preset = "neumann";
    c.Q.preset = "neumann";
    c.lambda1 = -5;
    c.lambda2 = 1;
    return c;
  }
  if (name == "harmonic-dirichlet" || name == "harmonic-neumann") {
    c.kind = ProblemKind::SecondOrder;
    c.l = 1;
    c.B = {1};
    c.V = {{"0"}};
    c.W = {{"0"}};
    bool dir = name == "harmonic-dirichlet";
    c.P.preset = dir ? "dirichlet" : "neumann";
    c.Q.preset = c.P.preset;
    c.lambda1 = dir ? 0 : -1;
    c.lambda2 = 50;
    c.x_steps = 2000;
    return c;
  }
  throw Error(ErrorKind::UnknownName, "unknown catalog problem \"" + name + "\"");
}

}  // namespace maslov
