#include "epq/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "epq/error.hpp"

namespace epq::optimizer {
namespace {

struct Vertex {
  Point x;
  double f;
};

Point affine(const Point& a, const Point& b, double weight) {
  // a + weight * (b - a)
  return {a[0] + weight * (b[0] - a[0]), a[1] + weight * (b[1] - a[1])};
}

double spread(const std::array<Vertex, 3>& simplex) {
  double d = 0.0;
  for (int i = 1; i < 3; ++i) {
    for (int k = 0; k < 2; ++k) d = std::max(d, std::abs(simplex[i].x[k] - simplex[0].x[k]));
  }
  return d;
}

}  // namespace

MinimizeReport minimize_2d(const Objective2d& objective, Point seed,
                           const MinimizeOptions& options) {
  if (!(options.tol > 0.0)) {
    throw Error(ErrorCode::kDomain, fmt::format("minimize_2d: tol must be > 0 (got {})", options.tol));
  }
  MinimizeReport report;
  auto eval = [&](const Point& x) {
    ++report.probe_count;
    return objective(x[0], x[1]);
  };

  std::array<Vertex, 3> simplex;
  simplex[0] = {seed, eval(seed)};
  for (int k = 0; k < 2; ++k) {
    Point x = seed;
    x[k] = seed[k] != 0.0 ? seed[k] * (1.0 + options.initial_step) : 2.5e-4;
    simplex[k + 1] = {x, eval(x)};
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

  while (true) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    const Point& best = simplex[0].x;
    const double scale = 1.0 + std::max(std::abs(best[0]), std::abs(best[1]));
    if (spread(simplex) < options.tol * scale) {
      report.converged = true;
      break;
    }
    if (report.probe_count >= options.max_evaluations) break;
    ++report.iterations;

    const Point centroid = affine(simplex[0].x, simplex[1].x, 0.5);
    Vertex& worst = simplex[2];
    const Point reflected = affine(centroid, worst.x, -1.0);
    const double f_reflected = eval(reflected);

    if (f_reflected < simplex[0].f) {
      const Point expanded = affine(centroid, worst.x, -2.0);
      const double f_expanded = eval(expanded);
      worst = f_expanded < f_reflected ? Vertex{expanded, f_expanded} : Vertex{reflected, f_reflected};
      continue;
    }
    if (f_reflected < simplex[1].f) {
      worst = {reflected, f_reflected};
      continue;
    }
    // Contract towards the better of the worst vertex and its reflection.
    const bool outside = f_reflected < worst.f;
    const Point contracted = affine(centroid, outside ? reflected : worst.x, 0.5);
    const double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, worst.f)) {
      worst = {contracted, f_contracted};
      continue;
    }
    for (int i = 1; i < 3; ++i) {
      simplex[i].x = affine(simplex[0].x, simplex[i].x, 0.5);
      simplex[i].f = eval(simplex[i].x);
    }
  }

  report.point = simplex[0].x;
  report.value = simplex[0].f;
  return report;
}

RootReport bracket_root(const Function1d& f, double lo, double hi, const RootOptions& options) {
  if (lo > hi) std::swap(lo, hi);
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0};
  if (!(f_lo * f_hi < 0.0)) {
    throw Error(ErrorCode::kNoSignChange,
                fmt::format("bracket_root: no sign change on [{}, {}] (f = {}, {})", lo, hi, f_lo, f_hi));
  }
  RootReport report;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    const bool resolved = mid <= lo || mid >= hi;  // bracket at machine resolution
    if (std::abs(f_mid) <= options.f_tol || hi - lo <= options.x_tol || resolved) {
      report.root = mid;
      report.residual = f_mid;
      return report;
    }
    ++report.iterations;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
}

Point gradient_check(const Objective2d& objective, Point point, double h) {
  return gradient_check(objective, point, Point{h, h});
}

Point gradient_check(const Objective2d& objective, Point point, Point h) {
  const double g0 =
      (objective(point[0] + h[0], point[1]) - objective(point[0] - h[0], point[1])) / (2.0 * h[0]);
  const double g1 =
      (objective(point[0], point[1] + h[1]) - objective(point[0], point[1] - h[1])) / (2.0 * h[1]);
  return {g0, g1};
}

}  // namespace epq::optimizer
