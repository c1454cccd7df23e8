#include "linmvn/liness.hpp"

#include "linmvn/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace linmvn {

namespace {

constexpr double kPi = std::numbers::pi;

// Absolute slack tolerance for row i, relaxed for badly scaled rows so that
// rounding in h.y + k never reads as a violation.
double slack_tolerance(double hy_abs, double k) {
  return kFeasibilityTol * std::max(1.0, hy_abs + std::abs(k));
}

struct Event {
  double angle;
  int delta;
};

void add_arc(double lo, double hi, std::vector<Event>& events) {
  auto push = [&](double a, double b) {
    events.push_back({a, +1});
    events.push_back({b, -1});
  };
  if (lo < -kPi) {
    push(lo + 2.0 * kPi, kPi);
    push(-kPi, hi);
  } else if (hi > kPi) {
    push(lo, kPi);
    push(-kPi, hi - 2.0 * kPi);
  } else {
    push(lo, hi);
  }
}

void check_feasible(const Vector& y, const Matrix& h, const Vector& k, const char* what) {
  const Vector slack = h * y + k;
  const Vector magnitude = (h.cwiseAbs() * y.cwiseAbs());
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    if (slack[i] < -slack_tolerance(magnitude[i], k[i])) {
      throw std::logic_error(std::string(what) + ": inequality " + std::to_string(i + 1) +
                             " violated by " + std::to_string(-slack[i]));
    }
  }
}

}  // namespace

double ArcSet::measure() const {
  double total = 0.0;
  for (const auto& iv : intervals) total += iv.length();
  return total;
}

bool ArcSet::contains(double theta) const {
  return std::any_of(intervals.begin(), intervals.end(),
                     [theta](const AngleInterval& iv) { return iv.contains(theta); });
}

double ArcSet::at_measure(double u) const {
  for (const auto& iv : intervals) {
    if (u < iv.length()) return iv.lo + u;
    u -= iv.length();
  }
  return intervals.back().hi;
}

ArcSet active_arcs(const Vector& y, const Vector& nu, const Matrix& h, const Vector& k) {
  const Vector hy = h * y;
  const Vector hnu = h * nu;
  const Vector magnitude = h.cwiseAbs() * y.cwiseAbs();

  std::vector<Event> events;
  int active = 0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    // Constraint i along the ellipse: r cos(theta - phi) + k >= 0.
    const double r = std::hypot(hy[i], hnu[i]);
    if (r <= k[i]) continue;
    if (k[i] < -r) {
      throw Error(ErrorCode::EmptyArcSet,
                  "inequality " + std::to_string(i + 1) + " excludes the whole ellipse");
    }
    const double phi = std::atan2(hnu[i], hy[i]);
    double half_width = std::acos(std::clamp(-k[i] / r, -1.0, 1.0));
    if (hy[i] + k[i] >= -slack_tolerance(magnitude[i], k[i])) {
      half_width = std::max(half_width, std::abs(phi));
    }
    if (half_width >= kPi) continue;
    add_arc(phi - half_width, phi + half_width, events);
    ++active;
  }

  ArcSet out;
  if (active == 0) {
    out.intervals.push_back({-kPi, kPi});
    return out;
  }

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.angle < b.angle || (a.angle == b.angle && a.delta > b.delta);
  });
  int depth = 0;
  double start = 0.0;
  for (const Event& e : events) {
    if (e.delta > 0) {
      if (++depth == active) start = e.angle;
    } else {
      if (depth-- == active && e.angle > start) out.intervals.push_back({start, e.angle});
    }
  }

  if (out.intervals.empty() || !(out.measure() > 0.0)) {
    throw Error(ErrorCode::EmptyArcSet, "feasible arcs have zero measure");
  }
  return out;
}

void liness_step(ChainState& state, const TransformedProblem& t, const CovarianceFactor& factor) {
  const Vector nu = sample_mvn_zero(factor, state.rng);
  const ArcSet arcs = active_arcs(state.y, nu, t.ineq_matrix, t.ineq_offset);
  const double theta = arcs.at_measure(state.rng.uniform() * arcs.measure());
  state.y = state.y * std::cos(theta) + nu * std::sin(theta);
  ++state.step_count;
  check_feasible(state.y, t.ineq_matrix, t.ineq_offset, "elliptical slice step left the domain");
}

std::vector<Vector> run_chain(const TransformedProblem& t, const CovarianceFactor& factor,
                              const Vector& y0, std::size_t n, RandomSource& rng,
                              const ChainOptions& options) {
  if (y0.size() != t.dimension()) {
    throw Error(ErrorCode::InvalidProblem, "start point has wrong dimension");
  }
  const Vector slack = t.ineq_matrix * y0 + t.ineq_offset;
  if (slack.size() > 0 && slack.minCoeff() < -kFeasibilityTol) {
    throw Error(ErrorCode::InvalidProblem,
                "start point violates an inequality by " + std::to_string(-slack.minCoeff()));
  }
  const std::size_t thin = std::max<std::size_t>(options.thin, 1);

  ChainState state{y0, rng, 0};
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < options.burn_in; ++i) liness_step(state, t, factor);
  while (out.size() < n) {
    for (std::size_t i = 0; i < thin; ++i) liness_step(state, t, factor);
    out.push_back(state.y);
  }
  rng = state.rng;
  return out;
}

}  // namespace linmvn
