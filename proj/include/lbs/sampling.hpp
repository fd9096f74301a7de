#pragma once

// Random sampling from LBS(alpha, theta).
//
// Draw U from the gamma mixture followed by the standardized transform
// (property of the U residual), solve t^2 - s theta t + theta^2 = 0 with
// s = alpha^2 U + 2 for the two Birnbaum-Saunders roots t+- = theta
// (s +- sqrt(s^2-4))/2, and pick the upper root with probability
// t+/(t+ + t-) = t+/(s theta): length biasing reweights the two roots, which
// are equiprobable under the base distribution, proportionally to t.

#include <Eigen/Core>

#include "lbs/params.hpp"
#include "lbs/rng.hpp"

namespace lbs {

double sample_one(const LbsParams& p, RngStream& rng);

Eigen::ArrayXd sample(const LbsParams& p, Eigen::Index n, RngStream& rng);

}  // namespace lbs
