#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

// Gander & Gautschi adaptive Lobatto kernel with a fixed absolute tolerance
// anchored to a coarse global magnitude estimate.
double lobatto_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fb, double abs_tol, int depth) {
  const double h = (b - a) / 2.0;
  const double m = (a + b) / 2.0;
  const double alpha = std::sqrt(2.0 / 3.0);
  const double beta = 1.0 / std::sqrt(5.0);
  const double mll = m - alpha * h;
  const double ml = m - beta * h;
  const double mr = m + beta * h;
  const double mrr = m + alpha * h;
  const double fmll = f(mll), fml = f(ml), fm = f(m), fmr = f(mr), fmrr = f(mrr);
  const double i2 = (h / 6.0) * (fa + fb + 5.0 * (fml + fmr));
  const double i1 = (h / 1470.0) *
                    (77.0 * (fa + fb) + 432.0 * (fmll + fmrr) + 625.0 * (fml + fmr) +
                     672.0 * fm);
  if (depth <= 0 || std::fabs(i1 - i2) <= abs_tol) {
    return i1;
  }
  return lobatto_step(f, a, mll, fa, fmll, abs_tol, depth - 1) +
         lobatto_step(f, mll, ml, fmll, fml, abs_tol, depth - 1) +
         lobatto_step(f, ml, m, fml, fm, abs_tol, depth - 1) +
         lobatto_step(f, m, mr, fm, fmr, abs_tol, depth - 1) +
         lobatto_step(f, mr, mrr, fmr, fmrr, abs_tol, depth - 1) +
         lobatto_step(f, mrr, b, fmrr, fb, abs_tol, depth - 1);
}

double magnitude_scan(const std::function<double(double)>& f, double lo, double hi) {
  double peak = 0.0;
  const int points = 64;
  for (int k = 0; k <= points; ++k) {
    const double x = lo + (hi - lo) * k / points;
    peak = std::max(peak, std::fabs(f(x)));
  }
  return peak * (hi - lo);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double scale = std::max(magnitude_scan(f, lo, hi), 1e-300);
  return lobatto_step(f, lo, hi, f(lo), f(hi), tol * scale, 28);
}

double integrate_positive_axis(const std::function<double(double)>& f, double scale,
                               double tol) {
  const double center = std::log(scale);
  const auto g = [&](double x) {
    const double t = std::exp(x);
    return f(t) * t;
  };
  const double lo = center - 50.0;
  const double hi = center + 50.0;
  const double anchor = std::max(magnitude_scan(g, lo, hi), 1e-300);
  // Piecewise so the coarse opening estimates cannot miss the peak.
  double total = 0.0;
  const double breaks[] = {lo, center - 8.0, center - 2.0, center + 2.0, center + 8.0, hi};
  for (std::size_t i = 0; i + 1 < std::size(breaks); ++i) {
    total += lobatto_step(g, breaks[i], breaks[i + 1], g(breaks[i]), g(breaks[i + 1]),
                          tol * anchor, 28);
  }
  return total;
}

double integrate_zero_to(const std::function<double(double)>& f, double upper, double tol) {
  const auto g = [&](double x) {
    const double t = std::exp(x);
    return f(t) * t;
  };
  const double hi = std::log(upper);
  const double lo = hi - 80.0;
  const double anchor = std::max(magnitude_scan(g, lo, hi), 1e-300);
  double total = 0.0;
  const double breaks[] = {lo, hi - 12.0, hi - 4.0, hi - 1.0, hi};
  for (std::size_t i = 0; i + 1 < std::size(breaks); ++i) {
    total += lobatto_step(g, breaks[i], breaks[i + 1], g(breaks[i]), g(breaks[i + 1]),
                          tol * anchor, 28);
  }
  return total;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double c = cdf(sample[i]);
    d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - c));
  }
  return d;
}

double ks_statistic_two(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

namespace {
double ks_c(double level) {
  // sqrt(-log(level/2)/2); level is the rejection probability.
  return std::sqrt(-0.5 * std::log(level / 2.0));
}
}  // namespace

double ks_critical_one(double level, std::size_t n) {
  return ks_c(level) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two(double level, std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return ks_c(level) * std::sqrt((nn + mm) / (nn * mm));
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double step = h * (1.0 + std::fabs(x[j]));
    Eigen::VectorXd up = x, down = x;
    up[j] += step;
    down[j] -= step;
    g[j] = (f(up) - f(down)) / (2.0 * step);
  }
  return g;
}

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double step = h * (1.0 + std::fabs(x[j]));
    Eigen::VectorXd up = x, down = x;
    up[j] += step;
    down[j] -= step;
    jac.col(j) = (f(up) - f(down)) / (2.0 * step);
  }
  return jac;
}

Eigen::VectorXd nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& f,
                                Eigen::VectorXd start, double scale, int max_iter,
                                double ftol) {
  const auto neg = [&](const Eigen::VectorXd& x) { return -f(x); };
  const Eigen::Index n = start.size();
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n) + 1, start);
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  for (Eigen::Index j = 0; j < n; ++j) simplex[static_cast<std::size_t>(j) + 1][j] += scale;
  for (std::size_t k = 0; k < simplex.size(); ++k) values[k] = neg(simplex[k]);

  const auto order = [&] {
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = a + 1; b < values.size(); ++b) {
        if (values[b] < values[a]) {
          std::swap(values[a], values[b]);
          std::swap(simplex[a], simplex[b]);
        }
      }
    }
  };

  order();
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::fabs(values.back() - values.front()) <
        ftol * (1.0 + std::fabs(values.front()))) {
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k + 1 < simplex.size(); ++k) centroid += simplex[k];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex.back());
    const double fr = neg(reflected);
    if (fr < values.front()) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex.back());
      const double fe = neg(expanded);
      simplex.back() = fe < fr ? expanded : reflected;
      values.back() = std::min(fe, fr);
    } else if (fr < values[values.size() - 2]) {
      simplex.back() = reflected;
      values.back() = fr;
    } else {
      const Eigen::VectorXd contracted = centroid + 0.5 * (simplex.back() - centroid);
      const double fc = neg(contracted);
      if (fc < values.back()) {
        simplex.back() = contracted;
        values.back() = fc;
      } else {
        for (std::size_t k = 1; k < simplex.size(); ++k) {
          simplex[k] = simplex.front() + 0.5 * (simplex[k] - simplex.front());
          values[k] = neg(simplex[k]);
        }
      }
    }
    order();
  }
  return simplex.front();
}

}  // namespace oracles
