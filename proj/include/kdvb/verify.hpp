#pragma once

// Independent checks of the closed forms: residuals under the reduced ODEs
// and the PDE (analytic derivatives or central differences), RK4 oracles
// for the first-order factor flows, and the first-integral identity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kdvb/errors.hpp"
#include "kdvb/factorizer.hpp"
#include "kdvb/grid.hpp"
#include "kdvb/params.hpp"
#include "kdvb/rk4.hpp"
#include "kdvb/solutions.hpp"
#include "kdvb/taylor.hpp"

namespace kdvb {

enum class Equation {
  PdeKdvb,        // u_t = s u_xxx - mu u_xx - alpha u u_x
  PdeCompound,    // ... - beta u^2 u_x
  ReducedOde,     // w''' - w'' + (p - 2w - 3q w^2) w' = 0
  FirstIntegral,  // w'' - w' + p w - w^2 - q w^3 = k
  Bernoulli,      // U' = +-sqrt(2/3) U^(3/2) + (2/5) U
  Riccati,        // U' = A U^2 + B U + C
};

constexpr std::string_view equation_name(Equation eq) {
  switch (eq) {
    case Equation::PdeKdvb: return "pde-kdvb";
    case Equation::PdeCompound: return "pde-compound";
    case Equation::ReducedOde: return "reduced-ode";
    case Equation::FirstIntegral: return "first-integral";
    case Equation::Bernoulli: return "bernoulli";
    case Equation::Riccati: return "riccati";
  }
  return "?";
}

/// Statistics of |residual| over the evaluable points of a grid. For PDE
/// grids worst_point encodes (x, t) as x + i t.
struct ResidualReport {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::complex<double> worst_point{};
  std::size_t n_samples = 0;
  std::size_t n_poles = 0;
  Equation equation = Equation::FirstIntegral;
  std::string warning;
};

namespace detail {

class ResidualStats {
 public:
  void add(double r, std::complex<double> at) {
    if (!std::isfinite(r)) r = std::numeric_limits<double>::infinity();
    if (n_ == 0 || r > max_) {
      max_ = r;
      worst_ = at;
    }
    sum_ += r;
    ++n_;
  }
  void pole() { ++poles_; }

  ResidualReport finish(Equation eq) const {
    if (n_ == 0) throw DomainError("residual grid has no evaluable points");
    ResidualReport rep;
    rep.max_abs = max_;
    rep.mean_abs = std::min(max_, sum_ / static_cast<double>(n_));
    rep.worst_point = worst_;
    rep.n_samples = n_;
    rep.n_poles = poles_;
    rep.equation = eq;
    return rep;
  }

 private:
  double max_ = 0.0;
  double sum_ = 0.0;
  std::complex<double> worst_{};
  std::size_t n_ = 0;
  std::size_t poles_ = 0;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Reduced-variable residuals (analytic derivatives)

/// `jet(theta)` returns a Jet of w; PoleError marks a skipped point.
template <class JetFn>
ResidualReport first_integral_residual(JetFn&& jet, double p, double q, double k,
                                       std::span<const double> grid) {
  detail::ResidualStats stats;
  for (const double th : grid) {
    try {
      const Jet j = jet(th);
      const auto w = j.value;
      const auto r = j.d2 - j.d1 + p * w - w * w - q * w * w * w - k;
      stats.add(std::abs(r), th);
    } catch (const PoleError&) {
      stats.pole();
    }
  }
  return stats.finish(Equation::FirstIntegral);
}

inline ResidualReport residual_first_integral(const WaveSolution& solution,
                                              std::span<const double> grid) {
  return first_integral_residual([&](double th) { return solution.jet(th); },
                                 solution.reduced.p, solution.reduced.q, solution.reduced.k,
                                 grid);
}

inline std::complex<double> reduced_ode_operator(const Jet& j, double p, double q) {
  const auto w = j.value;
  return j.d3 - j.d2 + (p - 2.0 * w - 3.0 * q * w * w) * j.d1;
}

inline ResidualReport residual_reduced_ode(const WaveSolution& solution,
                                           std::span<const double> grid) {
  detail::ResidualStats stats;
  for (const double th : grid) {
    try {
      stats.add(std::abs(reduced_ode_operator(solution.jet(th), solution.reduced.p,
                                              solution.reduced.q)),
                th);
    } catch (const PoleError&) {
      stats.pole();
    }
  }
  return stats.finish(Equation::ReducedOde);
}

/// Result of differentiating the first integral and comparing with the
/// third-order equation. The two agree for any smooth w, solution or not;
/// each vanishes only for solutions.
struct ConsistencyReport {
  ResidualReport agreement;
  double max_abs_derivative = 0.0;
  double max_abs_operator = 0.0;
};

/// d/dtheta of the first integral is propagated through Taylor-series
/// arithmetic (products by the Leibniz rule) and compared with the
/// hand-expanded third-order operator.
inline ConsistencyReport check_first_integral_consistency(const WaveSolution& solution,
                                                          std::span<const double> grid) {
  using Series = Taylor<std::complex<double>, 2>;
  const double p = solution.reduced.p;
  const double q = solution.reduced.q;
  ConsistencyReport out;
  detail::ResidualStats stats;
  for (const double th : grid) {
    try {
      const Jet j = solution.jet(th);
      const auto w0 = Series::from_derivatives({j.value, j.d1});
      const auto w1 = Series::from_derivatives({j.d1, j.d2});
      const auto w2 = Series::from_derivatives({j.d2, j.d3});
      const auto first_integral = w2 - w1 + p * w0 - w0 * w0 - q * (w0 * w0 * w0);
      const auto derivative = first_integral.derivative(1);
      const auto op = reduced_ode_operator(j, p, q);
      out.max_abs_derivative = std::max(out.max_abs_derivative, std::abs(derivative));
      out.max_abs_operator = std::max(out.max_abs_operator, std::abs(op));
      stats.add(std::abs(derivative - op), th);
    } catch (const PoleError&) {
      stats.pole();
    }
  }
  out.agreement = stats.finish(Equation::ReducedOde);
  return out;
}

// ---------------------------------------------------------------------------
// PDE residuals

struct XtPoint {
  double x = 0.0;
  double t = 0.0;
};

inline std::vector<XtPoint> xt_grid(double x_lo, double x_hi, std::size_t nx, double t_lo,
                                    double t_hi, std::size_t nt) {
  std::vector<XtPoint> out;
  out.reserve(nx * nt);
  for (const double t : linspace(t_lo, t_hi, nt))
    for (const double x : linspace(x_lo, x_hi, nx)) out.push_back({x, t});
  return out;
}

/// u_t - s u_xxx + mu u_xx + alpha u u_x + beta u^2 u_x.
inline std::complex<double> pde_residual(const PhysicalParams& params, const PhysicalJet& j) {
  return j.u_t - params.s * j.u_xxx + params.mu * j.u_xx + params.alpha * j.u * j.u_x +
         params.beta * j.u * j.u * j.u_x;
}

/// Second-order central differences: 3-point u_t, u_x, u_xx and the
/// 5-point u_xxx stencil (-u[-2] + 2u[-1] - 2u[+1] + u[+2]) / (2h^3).
template <class Field>
PhysicalJet central_differences(Field&& u, double x, double t, double h) {
  const auto um2 = u(x - 2 * h, t);
  const auto um1 = u(x - h, t);
  const auto u0 = u(x, t);
  const auto up1 = u(x + h, t);
  const auto up2 = u(x + 2 * h, t);
  PhysicalJet j;
  j.u = u0;
  j.u_t = (u(x, t + h) - u(x, t - h)) / (2 * h);
  j.u_x = (up1 - um1) / (2 * h);
  j.u_xx = (up1 - 2.0 * u0 + um1) / (h * h);
  j.u_xxx = (-um2 + 2.0 * um1 - 2.0 * up1 + up2) / (2 * h * h * h);
  return j;
}

enum class Differencing { Analytic, FiniteDifference };

struct PdeOptions {
  Differencing mode = Differencing::FiniteDifference;
  double step = 1e-3;
  /// Warn when step * (kink rate in x) exceeds this.
  double max_step_fraction = 0.1;
};

namespace detail {

inline Equation pde_equation(const PhysicalParams& params) {
  return params.beta == 0.0 ? Equation::PdeKdvb : Equation::PdeCompound;
}

inline std::string coarse_mesh_warning(double h, double rate_x, double limit) {
  if (!(h * rate_x > limit)) return {};
  return "mesh step " + shortest(h) + " is coarse against kink width " + shortest(1.0 / rate_x);
}

}  // namespace detail

/// Finite-difference residual of an arbitrary field u(x, t) under the PDE
/// with the given coefficients. rate_x is the kink's decay rate in x, used
/// only for the coarse-mesh warning (0 disables it).
template <class Field>
ResidualReport pde_residual_fd(Field&& u, std::span<const XtPoint> grid,
                               const PhysicalParams& params, double h, double rate_x = 0.0,
                               double max_step_fraction = 0.1) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  detail::ResidualStats stats;
  for (const auto& pt : grid) {
    try {
      const auto j = central_differences(u, pt.x, pt.t, h);
      stats.add(std::abs(pde_residual(params, j)), {pt.x, pt.t});
    } catch (const PoleError&) {
      stats.pole();
    }
  }
  auto rep = stats.finish(detail::pde_equation(params));
  rep.warning = detail::coarse_mesh_warning(h, rate_x, max_step_fraction);
  return rep;
}

/// Analytic residual from a field returning its own PhysicalJet.
template <class JetField>
ResidualReport pde_residual_analytic(JetField&& jet, std::span<const XtPoint> grid,
                                     const PhysicalParams& params) {
  detail::ResidualStats stats;
  for (const auto& pt : grid) {
    try {
      stats.add(std::abs(pde_residual(params, jet(pt.x, pt.t))), {pt.x, pt.t});
    } catch (const PoleError&) {
      stats.pole();
    }
  }
  return stats.finish(detail::pde_equation(params));
}

/// PDE residual of a solution with physical parameters attached; `params`
/// supplies the equation's coefficients.
inline ResidualReport residual_pde(const WaveSolution& solution, std::span<const XtPoint> grid,
                                   const PhysicalParams& params, PdeOptions options = {}) {
  validate(params);
  const auto& own = solution.physical_params();
  if (options.mode == Differencing::Analytic)
    return pde_residual_analytic(
        [&](double x, double t) { return solution.physical_jet(x, t); }, grid, params);
  const double rate_x = solution.kink_rate() * std::abs(coordinate_scale(own));
  return pde_residual_fd([&](double x, double t) { return solution.value_physical(x, t); }, grid,
                         params, options.step, rate_x, options.max_step_fraction);
}

// ---------------------------------------------------------------------------
// RK4 oracles for the first-order factor flows

inline double bernoulli_rhs(Sign sign, double U) {
  return sign_value(sign) * std::sqrt(2.0 / 3.0) * U * std::sqrt(U) + 0.4 * U;
}

/// U' = +-sqrt(2/3) U^(3/2) + (2/5) U with real U0 > 0.
inline Trajectory<double> oracle_integrate_bernoulli(Sign sign, double U0, double begin,
                                                     double end, double step) {
  if (!(U0 > 0.0)) throw DomainError("Bernoulli oracle needs U0 > 0");
  return integrate_rk4([sign](double U) { return bernoulli_rhs(sign, U); }, U0, begin, end,
                       step);
}

/// U' = A U^2 + B U + C for the given factorization.
inline Trajectory<std::complex<double>> oracle_integrate_riccati(const CompoundFactorization& f,
                                                                 std::complex<double> U0,
                                                                 double begin, double end,
                                                                 double step) {
  return integrate_rk4([&f](std::complex<double> U) { return f.flow(U); }, U0, begin, end, step);
}

/// |trajectory - exact| along the trajectory.
template <class State, class Exact>
ResidualReport compare_trajectory(const Trajectory<State>& traj, Exact&& exact, Equation eq) {
  detail::ResidualStats stats;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    try {
      stats.add(std::abs(std::complex<double>(traj.state[i]) - std::complex<double>(exact(traj.theta[i]))),
                traj.theta[i]);
    } catch (const PoleError&) {
      stats.pole();
    }
  }
  auto rep = stats.finish(eq);
  if (traj.blew_up) rep.warning = "trajectory blew up before the end of the span";
  return rep;
}

}  // namespace kdvb
