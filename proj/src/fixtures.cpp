#include "linmvn/fixtures.hpp"

namespace linmvn::fixtures {

namespace {

Vector mean() {
  Vector mu(4);
  mu << 0.284, 0.964, 0.940, 0.664;
  return mu;
}

Matrix covariance() {
  Matrix s(4, 4);
  s << 0.960, 1.407, 0.754, -1.360,
       1.407, 8.250, 1.105, -1.993,
       0.754, 1.105, 14.79, -7.116,
       -1.360, -1.993, -7.116, 5.350;
  return s;
}

Matrix ineq_matrix() {
  Matrix a(5, 4);
  a << 128.61, 935.51, -425.89, -472.28,
       -15.34, -223.32, 27.84, 196.12,
       103.19, -107.39, 23.58, 19.79,
       -923.53, -5030.49, 2283.68, 2670.02,
       83.29, 466.44, -204.57, -254.19;
  return a;
}

Vector ineq_offset() {
  Vector b(5);
  b << -183.90, 72.14, 102.45, 1010.98, -83.47;
  return b;
}

Matrix eq_matrix() {
  Matrix c(2, 4);
  c << 13.04, 60.57, -26.93, -33.82,
       0.36, -9.15, 4.00, 4.05;
  return c;
}

Vector eq_offset() {
  Vector d(2);
  d << -11.31, 2.08;
  return d;
}

}  // namespace

std::string_view case_name(PentagonCase which) {
  switch (which) {
    case PentagonCase::InequalityOnly: return "pentagon_inequality";
    case PentagonCase::EqualityOnly: return "pentagon_equality";
    case PentagonCase::Combined: return "pentagon_combined";
  }
  return "pentagon";
}

ProblemSpec pentagon(PentagonCase which) {
  ProblemSpec spec = ProblemSpec::unconstrained(mean(), covariance());
  if (which != PentagonCase::EqualityOnly) {
    spec.ineq_matrix = ineq_matrix();
    spec.ineq_offset = ineq_offset();
  }
  if (which != PentagonCase::InequalityOnly) {
    spec.eq_matrix = eq_matrix();
    spec.eq_offset = eq_offset();
  }
  return spec;
}

ValidationTransform pentagon_transform() {
  ValidationTransform vt;
  vt.t.resize(4, 4);
  vt.t << -2.25, -10.68, 6.24, 4.21,
          -8.57, -33.44, 14.64, 21.10,
          13.04, 60.57, -26.93, -33.82,
          0.36, -9.15, 4.00, 4.05;
  vt.offset.resize(4);
  vt.offset << 3.28, 4.49, -11.31, 2.08;
  return vt;
}

}  // namespace linmvn::fixtures
