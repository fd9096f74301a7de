#pragma once

// Link functions connecting positive distribution parameters to linear
// predictors.  Log is the default for both model components; SquareRoot and
// Identity are the other supported choices.

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lbs {

enum class LinkKind { Log, SquareRoot, Identity };

struct LinkFunction {
  LinkKind kind = LinkKind::Log;

  double forward(double value) const {
    switch (kind) {
      case LinkKind::Log:
        return std::log(value);
      case LinkKind::SquareRoot:
        return std::sqrt(value);
      case LinkKind::Identity:
        return value;
    }
    return 0.0;
  }

  double inverse(double eta) const {
    switch (kind) {
      case LinkKind::Log:
        return std::exp(eta);
      case LinkKind::SquareRoot:
        return eta * eta;
      case LinkKind::Identity:
        return eta;
    }
    return 0.0;
  }

  double deriv(double value) const {
    switch (kind) {
      case LinkKind::Log:
        return 1.0 / value;
      case LinkKind::SquareRoot:
        return 0.5 / std::sqrt(value);
      case LinkKind::Identity:
        return 1.0;
    }
    return 0.0;
  }

  double second_deriv(double value) const {
    switch (kind) {
      case LinkKind::Log:
        return -1.0 / (value * value);
      case LinkKind::SquareRoot:
        return -0.25 / (value * std::sqrt(value));
      case LinkKind::Identity:
        return 0.0;
    }
    return 0.0;
  }

  const char* name() const {
    switch (kind) {
      case LinkKind::Log:
        return "log";
      case LinkKind::SquareRoot:
        return "sqrt";
      case LinkKind::Identity:
        return "identity";
    }
    return "?";
  }

  static LinkFunction log_link() { return {LinkKind::Log}; }
  static LinkFunction sqrt_link() { return {LinkKind::SquareRoot}; }
  static LinkFunction identity_link() { return {LinkKind::Identity}; }

  static LinkFunction from_name(std::string_view name) {
    if (name == "log") return log_link();
    if (name == "sqrt" || name == "square-root") return sqrt_link();
    if (name == "identity") return identity_link();
    throw std::domain_error("unknown link function: " + std::string(name));
  }
};

}  // namespace lbs
