#pragma once

// Residual audit of the physical-variable rational solution. The closed form
// commonly quoted for it, its epsilon rewrite and the velocity attached to
// the epsilon rewrite are each substituted into the PDE and classified as
// exact or inconsistent, next to the corrected form used by the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "kdvb/errors.hpp"
#include "kdvb/params.hpp"
#include "kdvb/solutions.hpp"
#include "kdvb/verify.hpp"

namespace kdvb {

/// u(x, t) = c0 + a / (b0 + b1 (x - v t - xi0)).
struct RationalWave {
  double c0 = 0.0;
  double a = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;
  double v = 0.0;
  double xi0 = 0.0;

  PhysicalJet jet(double x, double t) const {
    const double xi = x - v * t - xi0;
    const double d = b0 + b1 * xi;
    if (std::abs(d) <= 1e-9 * (std::abs(b0) + std::abs(b1 * xi)))
      throw PoleError("pole of rational wave at x = " + detail::shortest(x), x);
    PhysicalJet j;
    j.u = c0 + a / d;
    j.u_x = -a * b1 / (d * d);
    j.u_xx = 2.0 * a * b1 * b1 / (d * d * d);
    j.u_xxx = -6.0 * a * b1 * b1 * b1 / (d * d * d * d);
    j.u_t = -v * j.u_x;
    return j;
  }
};

enum class Verdict { Exact, Inconsistent, Ambiguous };

constexpr const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Exact: return "exact";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::Ambiguous: return "ambiguous";
  }
  return "?";
}

struct AuditTolerances {
  double exact = 1e-10;         // relative residual at or below: exact
  double inconsistent = 1e-4;   // at or above: inconsistent
};

struct AuditRow {
  std::string label;       // parameter set
  std::string form;        // which closed form
  std::string velocity;    // which velocity formula
  double v = 0.0;
  double max_abs = 0.0;
  double relative = 0.0;   // pointwise residual over the summed term sizes
  Verdict verdict = Verdict::Ambiguous;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  /// Largest pointwise gap between the quoted closed form and its epsilon
  /// rewrite, over every parameter set; they are the same function.
  double forms_gap = 0.0;

  bool definitive() const {
    return std::none_of(rows.begin(), rows.end(),
                        [](const AuditRow& r) { return r.verdict == Verdict::Ambiguous; });
  }
  const AuditRow* find(const std::string& label, const std::string& form,
                       const std::string& velocity) const {
    for (const auto& r : rows)
      if (r.label == label && r.form == form && r.velocity == velocity) return &r;
    return nullptr;
  }
};

/// v = (alpha/(2 beta))^2 (eps^2 - 1), the velocity quoted with the epsilon form.
inline double epsilon_form_velocity(const PhysicalParams& params) {
  const double eps = rational_epsilon(params);
  const double h = params.alpha / (2.0 * params.beta);
  return h * h * (eps * eps - 1.0);
}

/// Quoted closed form: the denominator carries x - v t - xi0 without the
/// mu/s factor of the reduced coordinate.
inline RationalWave quoted_rational(Sign branch, const PhysicalParams& params, double k0,
                                    double v) {
  const double sg = sign_value(branch);
  const double a = params.alpha, b = params.beta, m = params.mu, s = params.s;
  const double e = std::sqrt(2.0 * b * m * m / (3.0 * s * a * a));
  return {-a / (2.0 * b) * (1.0 + sg * e), -6.0 * a * m * k0, 2.0 * b * m,
          sg * k0 * std::sqrt(6.0 * s * b * a * a), v, params.xi0.real()};
}

inline RationalWave quoted_rational_epsilon(Sign branch, const PhysicalParams& params, double k0,
                                            double v) {
  const double sg = sign_value(branch);
  const double eps = rational_epsilon(params);
  const double pre = -params.alpha / (2.0 * params.beta);
  return {pre * (1.0 + sg * eps), pre * 6.0 * eps * k0, eps, sg * k0, v, params.xi0.real()};
}

/// The form evaluated by eval_rational_physical.
inline RationalWave corrected_rational(Sign branch, const PhysicalParams& params, double k0,
                                       double v) {
  auto w = quoted_rational(branch, params, k0, v);
  w.b1 *= std::abs(params.mu) / params.s;
  return w;
}

namespace detail {

/// Largest pointwise ratio |residual| / sum of |PDE terms|.
inline double relative_pde_residual(const RationalWave& w, const PhysicalParams& params,
                                    std::span<const XtPoint> grid) {
  double out = 0.0;
  for (const auto& pt : grid) {
    try {
      const auto j = w.jet(pt.x, pt.t);
      double scale = 0.0;
      for (const auto term : {j.u_t, params.s * j.u_xxx, params.mu * j.u_xx,
                              params.alpha * j.u * j.u_x, params.beta * j.u * j.u * j.u_x})
        scale += std::abs(term);
      if (scale > 0.0) out = std::max(out, std::abs(pde_residual(params, j)) / scale);
    } catch (const PoleError&) {
    }
  }
  return out;
}

}  // namespace detail

/// Audits one parameter set (beta > 0, s > 0, mu > 0, real xi0). Both
/// branches are checked at k0 in {1, -2}; each row keeps the worst case.
inline void audit_rational_set(AuditReport& report, const std::string& label,
                               PhysicalParams params, std::span<const XtPoint> grid,
                               AuditTolerances tol = {}) {
  validate(params);
  if (!(params.beta > 0.0 && params.s > 0.0 && params.mu > 0.0))
    throw DomainError("rational audit needs beta > 0, s > 0 and mu > 0");
  const double v_delta0 = rational_velocity(params);
  const double v_eps = epsilon_form_velocity(params);

  using Builder = RationalWave (*)(Sign, const PhysicalParams&, double, double);
  struct Case {
    const char* form;
    Builder build;
    const char* velocity;
    double v;
  };
  const Case cases[] = {
      {"quoted", &quoted_rational, "delta-zero", v_delta0},
      {"quoted-epsilon", &quoted_rational_epsilon, "epsilon", v_eps},
      {"quoted-epsilon", &quoted_rational_epsilon, "delta-zero", v_delta0},
      {"corrected", &corrected_rational, "delta-zero", v_delta0},
      {"corrected", &corrected_rational, "epsilon", v_eps},
  };

  for (const auto& c : cases) {
    AuditRow row{label, c.form, c.velocity, c.v};
    params.v = c.v;
    for (const Sign branch : {Sign::Plus, Sign::Minus}) {
      for (const double k0 : {1.0, -2.0}) {
        const auto wave = c.build(branch, params, k0, c.v);
        const auto rep = pde_residual_analytic(
            [&](double x, double t) { return wave.jet(x, t); }, grid, params);
        row.max_abs = std::max(row.max_abs, rep.max_abs);
        row.relative = std::max(row.relative, detail::relative_pde_residual(wave, params, grid));
      }
    }
    row.verdict = row.relative <= tol.exact          ? Verdict::Exact
                  : row.relative >= tol.inconsistent ? Verdict::Inconsistent
                                                     : Verdict::Ambiguous;
    report.rows.push_back(row);
  }

  for (const Sign branch : {Sign::Plus, Sign::Minus}) {
    const auto a = quoted_rational(branch, params, 1.0, v_delta0);
    const auto b = quoted_rational_epsilon(branch, params, 1.0, v_delta0);
    for (const auto& pt : grid) {
      try {
        const auto ua = a.jet(pt.x, pt.t).u;
        const auto gap = std::abs(ua - b.jet(pt.x, pt.t).u) / std::max(1.0, std::abs(ua));
        report.forms_gap = std::max(report.forms_gap, gap);
      } catch (const PoleError&) {
      }
    }
  }
}

/// Parameter sets audited by default: the compound figure's coefficients and
/// a control with mu = s = 1, beta = 1, where every variant coincides.
inline AuditReport audit_rational(AuditTolerances tol = {}) {
  AuditReport report;
  const auto grid = xt_grid(-10.0, 10.0, 41, 0.0, 1.0, 3);
  audit_rational_set(report, "figure-7", PhysicalParams{2.0, 1.0, 3.0, 2.0, 0.0, {}}, grid, tol);
  audit_rational_set(report, "control", PhysicalParams{1.0, 1.0, 2.0, 1.0, 0.0, {}}, grid, tol);
  return report;
}

}  // namespace kdvb
