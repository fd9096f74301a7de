#pragma once

// Mode structure and hazard monotonicity of the LBS density.
//
// Critical points of the density solve the cubic
//   p3(t) = t^3 - theta (alpha^2-1) t^2 + theta^2 (alpha^2-1) t - theta^3
//         = (t - theta) [ t^2 - theta (alpha^2-2) t + theta^2 ],
// so the density is unimodal with mode theta for alpha <= 2 and bimodal for
// alpha > 2 with modes t+- = (theta/2)[(alpha^2-2) +- alpha sqrt(alpha^2-4)]
// and antimode theta.

#include <array>
#include <utility>
#include <vector>

#include "lbs/params.hpp"

namespace lbs {

enum class ModeKind { Unimodal, Bimodal };

struct ModeReport {
  ModeKind kind;
  double mode;          // the single mode when unimodal
  double lower_mode;    // t- (bimodal only)
  double antimode;      // t0 = theta (bimodal only)
  double upper_mode;    // t+ (bimodal only)
  double discriminant;  // theta^6 alpha^2 (alpha-2)^3 (alpha+2)^3
};

/// Coefficients (c3, c2, c1, c0) of p3, with c3 = 1.
std::array<double, 4> cubic_coefficients(const LbsParams& p);

ModeReport classify_modes(const LbsParams& p);

/// a(t) and its first three derivatives; order in {0,1,2,3}.
double a_derivative(const LbsParams& p, double t, int order);

struct HazardShapeReport {
  std::vector<std::pair<double, double>> increasing;
  std::vector<std::pair<double, double>> decreasing;
  std::vector<double> turning_points;
};

/// Scans the hazard derivative sign on a log-spaced grid over [lo, hi]
/// (grid_size >= 16) and refines each sign change by bisection.
HazardShapeReport hazard_shape(const LbsParams& p, double lo, double hi, int grid_size);

}  // namespace lbs
