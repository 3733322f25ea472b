#ifndef EPQ_OPTIMIZER_HPP
#define EPQ_OPTIMIZER_HPP

#include <array>
#include <functional>

namespace epq::optimizer {

using Point = std::array<double, 2>;
using Objective2d = std::function<double(double, double)>;
using Function1d = std::function<double(double)>;

/// Domain tolerance for the polynomial reduced objectives.
inline constexpr double kPolynomialTol = 1e-10;
/// Domain tolerance when each evaluation hides a nested root-find.
inline constexpr double kNestedTol = 1e-8;

struct MinimizeOptions {
  double tol = kPolynomialTol;
  int max_evaluations = 100000;
  // Initial simplex offset, as a fraction of each seed coordinate.
  double initial_step = 0.05;
};

struct MinimizeReport {
  Point point{};
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  int probe_count = 0;
};

/// Derivative-free simplex descent (Nelder-Mead). Converges when every vertex
/// lies within tol * (1 + |best|_inf) of the best vertex. The objective must
/// return finite values everywhere; callers encode infeasibility as a penalty.
MinimizeReport minimize_2d(const Objective2d& objective, Point seed,
                           const MinimizeOptions& options = {});

struct RootOptions {
  double x_tol = 1e-14;  // absolute bracket width
  double f_tol = 0.0;    // early exit once |f| <= f_tol
};

struct RootReport {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Bisection on [lo, hi]. Throws Error(kNoSignChange) unless f(lo)*f(hi) <= 0.
RootReport bracket_root(const Function1d& f, double lo, double hi, const RootOptions& options = {});

/// Central-difference gradient with step h in each coordinate.
Point gradient_check(const Objective2d& objective, Point point, double h);
/// Same, with a separate step per coordinate (e.g. cbrt(eps) * |x_i|).
Point gradient_check(const Objective2d& objective, Point point, Point h);

}  // namespace epq::optimizer

#endif  // EPQ_OPTIMIZER_HPP
