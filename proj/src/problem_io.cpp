#include "linmvn/problem_io.hpp"

#include "linmvn/error.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace linmvn {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::InvalidProblem, what);
}

double number_at(const json& v, const std::string& field) {
  if (!v.is_number()) malformed("field '" + field + "' must contain only numbers");
  return v.get<double>();
}

Vector read_vector(const json& doc, const std::string& field) {
  const json& v = doc.at(field);
  if (!v.is_array()) malformed("field '" + field + "' must be an array");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = number_at(v[i], field);
  return out;
}

Matrix read_matrix(const json& doc, const std::string& field, Eigen::Index cols) {
  const json& v = doc.at(field);
  if (!v.is_array()) malformed("field '" + field + "' must be an array of rows");
  Matrix out(static_cast<Eigen::Index>(v.size()), cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& row = v[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      malformed("row " + std::to_string(i + 1) + " of '" + field + "' must have " +
                std::to_string(cols) + " entries");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = number_at(row[j], field);
    }
  }
  return out;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

void read_block(const json& doc, const char* mat, const char* vec, Eigen::Index n, Matrix& m,
                Vector& v) {
  const bool has_m = doc.contains(mat);
  const bool has_v = doc.contains(vec);
  if (has_m != has_v) {
    malformed(std::string("'") + mat + "' and '" + vec + "' must be given together");
  }
  if (!has_m) {
    m = Matrix(0, n);
    v = Vector(0);
    return;
  }
  m = read_matrix(doc, mat, n);
  v = read_vector(doc, vec);
  if (v.size() != m.rows()) {
    malformed(std::string("'") + vec + "' has length " + std::to_string(v.size()) + " but '" +
              mat + "' has " + std::to_string(m.rows()) + " rows");
  }
}

}  // namespace

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) malformed("problem document must be a JSON object");
  for (const char* required : {"n", "mu", "sigma"}) {
    if (!doc.contains(required)) malformed(std::string("missing field '") + required + "'");
  }
  if (!doc.at("n").is_number_integer() || doc.at("n").get<long long>() < 1) {
    malformed("field 'n' must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(doc.at("n").get<long long>());

  ProblemFile out;
  ProblemSpec& spec = out.spec;
  spec.mean = read_vector(doc, "mu");
  if (spec.mean.size() != n) malformed("'mu' must have n = " + std::to_string(n) + " entries");
  spec.covariance = read_matrix(doc, "sigma", n);
  if (spec.covariance.rows() != n) malformed("'sigma' must have n rows");
  read_block(doc, "A", "b", n, spec.ineq_matrix, spec.ineq_offset);
  read_block(doc, "C", "d", n, spec.eq_matrix, spec.eq_offset);

  if (doc.contains("validation_transform")) {
    const json& vt = doc.at("validation_transform");
    if (!vt.is_object() || !vt.contains("T") || !vt.contains("offset")) {
      malformed("'validation_transform' needs 'T' and 'offset'");
    }
    ValidationTransform t{read_matrix(vt, "T", n), read_vector(vt, "offset")};
    if (t.t.rows() != n || t.offset.size() != n) {
      malformed("'validation_transform' must be n x n with an offset of length n");
    }
    out.validation = std::move(t);
  }

  validate(spec);
  return out;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open problem file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    malformed("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_problem(doc);
}

json problem_to_json(const ProblemFile& problem) {
  const ProblemSpec& spec = problem.spec;
  json doc;
  doc["n"] = spec.dimension();
  doc["mu"] = vector_json(spec.mean);
  doc["sigma"] = matrix_json(spec.covariance);
  if (spec.num_inequalities() > 0) {
    doc["A"] = matrix_json(spec.ineq_matrix);
    doc["b"] = vector_json(spec.ineq_offset);
  }
  if (spec.num_equalities() > 0) {
    doc["C"] = matrix_json(spec.eq_matrix);
    doc["d"] = vector_json(spec.eq_offset);
  }
  if (problem.validation) {
    doc["validation_transform"] = {{"T", matrix_json(problem.validation->t)},
                                   {"offset", vector_json(problem.validation->offset)}};
  }
  return doc;
}

void save_problem(const ProblemFile& problem, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) malformed("cannot write '" + path.string() + "'");
  out << problem_to_json(problem).dump(2) << "\n";
}

void write_samples_csv(std::ostream& os, const std::vector<Vector>& samples, Eigen::Index dim) {
  for (Eigen::Index j = 0; j < dim; ++j) os << (j ? ",x" : "x") << j + 1;
  os << "\n";
  char buf[32];
  std::string line;
  for (const auto& s : samples) {
    line.clear();
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", s[j]);
      if (j) line += ',';
      line += buf;
    }
    line += '\n';
    os << line;
  }
}

}  // namespace linmvn
