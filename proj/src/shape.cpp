#include "lbs/shape.hpp"

#include <cmath>
#include <stdexcept>

#include "lbs/distribution.hpp"

namespace lbs {

std::array<double, 4> cubic_coefficients(const LbsParams& p) {
  const double a2m1 = p.alpha * p.alpha - 1.0;
  return {1.0, -p.theta * a2m1, p.theta * p.theta * a2m1,
          -p.theta * p.theta * p.theta};
}

ModeReport classify_modes(const LbsParams& p) {
  const double a = p.alpha;
  const double th = p.theta;
  const double th2 = th * th;
  const double disc = th2 * th2 * th2 * a * a * std::pow(a - 2.0, 3) * std::pow(a + 2.0, 3);
  ModeReport report{};
  report.discriminant = disc;
  if (a <= 2.0) {
    report.kind = ModeKind::Unimodal;
    report.mode = th;
    return report;
  }
  const double half_sum = (a * a - 2.0) / 2.0;
  const double half_gap = a * std::sqrt((a - 2.0) * (a + 2.0)) / 2.0;
  report.kind = ModeKind::Bimodal;
  report.upper_mode = th * (half_sum + half_gap);
  report.lower_mode = th2 / report.upper_mode;  // root product is theta^2
  report.antimode = th;
  report.mode = report.upper_mode;
  return report;
}

double a_derivative(const LbsParams& p, double t, int order) {
  if (!(t > 0.0)) {
    throw std::domain_error("a_derivative: t must be positive");
  }
  const double up = std::sqrt(t / p.theta);
  const double down = std::sqrt(p.theta / t);
  switch (order) {
    case 0:
      return (up - down) / p.alpha;
    case 1:
      return (up + down) / (2.0 * p.alpha * t);
    case 2:
      return -(up + 3.0 * down) / (4.0 * p.alpha * t * t);
    case 3:
      return 3.0 * (up + 5.0 * down) / (8.0 * p.alpha * t * t * t);
    default:
      throw std::domain_error("a_derivative: order must be in {0,1,2,3}");
  }
}

namespace {

// Sign of the hazard derivative by central differences with step 1e-5 t.
int hazard_slope_sign(const LbsParams& p, double t) {
  const double h = 1e-5 * t;
  const double d = hazard(p, t + h) - hazard(p, t - h);
  if (d > 0.0) return 1;
  if (d < 0.0) return -1;
  return 0;
}

double refine_turning_point(const LbsParams& p, double lo, double hi, int sign_lo) {
  for (int i = 0; i < 200 && (hi - lo) > 1e-8 * lo; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (hazard_slope_sign(p, mid) == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace

HazardShapeReport hazard_shape(const LbsParams& p, double lo, double hi, int grid_size) {
  if (!(lo > 0.0) || !(hi > lo) || grid_size < 16) {
    throw std::domain_error("hazard_shape: need 0 < lo < hi and grid_size >= 16");
  }
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (grid_size - 1);

  HazardShapeReport report;
  double seg_start = lo;
  double prev = lo;
  int seg_sign = hazard_slope_sign(p, lo);
  for (int i = 1; i < grid_size; ++i) {
    const double t = std::exp(log_lo + i * step);
    const int sign = hazard_slope_sign(p, t);
    if (sign != seg_sign && sign != 0) {
      const double turn = refine_turning_point(p, prev, t, seg_sign);
      report.turning_points.push_back(turn);
      auto& side = (seg_sign >= 0) ? report.increasing : report.decreasing;
      side.emplace_back(seg_start, turn);
      seg_start = turn;
      seg_sign = sign;
    }
    prev = t;
  }
  auto& side = (seg_sign >= 0) ? report.increasing : report.decreasing;
  side.emplace_back(seg_start, hi);
  return report;
}

}  // namespace lbs
