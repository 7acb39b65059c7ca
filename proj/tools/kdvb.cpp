// kdvb: factorizations, closed-form travelling waves and their verification
// for the KdV-Burgers and compound KdV-Burgers equations.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdvb/kdvb.hpp"

#ifndef KDVB_MANIFEST_PATH
#define KDVB_MANIFEST_PATH "data/figures.ini"
#endif

namespace {

using kdvb::DomainError;
using kdvb::Family;
using kdvb::Sign;
using Json = nlohmann::ordered_json;

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;

/// Raised for flag combinations that parse but make no sense.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Sign parse_sign(const std::string& s) {
  if (s == "plus" || s == "+") return Sign::Plus;
  if (s == "minus" || s == "-") return Sign::Minus;
  throw UsageError("sign must be plus or minus, got '" + s + "'");
}

Family require_family(const std::string& name) {
  const auto f = kdvb::parse_family(name);
  if (!f) throw UsageError("unknown family '" + name + "'");
  return *f;
}

std::string num(double x) { return kdvb::detail::shortest(x); }

// Physical coefficients shared by several subcommands.
struct PhysicalFlags {
  std::optional<double> s, mu, alpha;
  double beta = 0.0;
  double v = 0.0;
  double xi0_re = 0.0;
  double xi0_im = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--s", s, "dispersion coefficient");
    app->add_option("--mu", mu, "dissipation coefficient");
    app->add_option("--alpha", alpha, "quadratic nonlinearity");
    app->add_option("--beta", beta, "cubic nonlinearity (0: standard equation)");
    app->add_option("--v", v, "wave velocity");
    app->add_option("--xi0-re", xi0_re, "phase, real part");
    app->add_option("--xi0-im", xi0_im, "phase, imaginary part");
  }
  bool given() const { return s || mu || alpha; }
  kdvb::PhysicalParams params() const {
    if (!(s && mu && alpha)) throw UsageError("physical mode needs --s, --mu and --alpha");
    return {*s, *mu, *alpha, beta, v, {xi0_re, xi0_im}};
  }
};

void emit(const kdvb::SampleTable& table, const std::string& out, kdvb::Format format) {
  if (table.size() == 0) throw UsageError("empty grid requested");
  if (out.empty() || out == "-") {
    kdvb::write_table(std::cout, table, format);
  } else {
    kdvb::write_table_file(out, table, format);
  }
}

// ---------------------------------------------------------------------------
// factorize

struct FactorizeOpts {
  std::string eq = "kdvb";
  std::string sign = "plus";
  double delta = 0.0;
  double p = 0.0;
  double q = 0.0;
  PhysicalFlags phys;
  std::string format = "text";
};

Json constraint(const std::string& name, double residual) {
  return Json{{"constraint", name}, {"residual", residual}};
}

int run_factorize(const FactorizeOpts& o) {
  const Sign sign = parse_sign(o.sign);
  Json report;
  report["equation"] = o.eq;
  report["sign"] = std::string(kdvb::sign_name(sign));

  if (o.eq == "kdvb") {
    double delta = o.delta;
    if (o.phys.given()) {
      const auto params = o.phys.params();
      if (params.beta != 0.0) throw UsageError("--eq kdvb needs --beta 0");
      delta = (kdvb::reduce(params).p - 6.0 / 25.0) / 2.0;
    }
    const auto f = kdvb::factorize_kdvb(delta, sign);
    const std::vector<std::complex<double>> samples = {0.1, 0.5, 1.0, 2.0, 5.0};
    const auto r = kdvb::verify_factorization(f, samples);
    report["A"] = f.A;
    report["B"] = f.B;
    report["delta"] = f.delta;
    report["p"] = f.p;
    report["k"] = f.k;
    report["f1"] = "A sqrt(U) + B";
    report["f2"] = "(1 - B) - (3/2) A sqrt(U)";
    report["constraints"] = Json::array({
        constraint("A^2 = 2/3", std::abs(f.A * f.A - 2.0 / 3.0)),
        constraint("B = 2/5", std::abs(f.B - 0.4)),
        constraint("p = 2 delta + 6/25", std::abs(f.p - (2.0 * f.delta + 6.0 / 25.0))),
        constraint("k = p delta - delta^2", std::abs(f.k - (f.p * f.delta - f.delta * f.delta))),
        constraint("f1 f2 = F(U)/U", r.product),
        constraint("f2 + d(f1 U)/dU = 1", r.derivative),
    });
  } else if (o.eq == "compound") {
    kdvb::ReducedParams reduced{o.p, o.q, 0.0, 0.0, {}};
    if (o.phys.given()) reduced = kdvb::reduce(o.phys.params());
    const auto f = kdvb::factorize_compound(reduced, sign);
    const std::vector<std::complex<double>> samples = {{0.1, 0.0}, {1.0, 1.0}, {-2.0, 0.5}};
    const auto r = kdvb::verify_factorization(f, samples);
    const double A = f.A;
    const double C_expected =
        ((2.0 - 9.0 * f.p) / A + 1.0 / (A * A) - 1.0 / (A * A * A)) / 18.0;
    report["A"] = f.A;
    report["B"] = f.B;
    report["C"] = f.C;
    report["p"] = f.p;
    report["q"] = f.q;
    report["k"] = f.k;
    report["f1 U"] = "A U^2 + B U + C";
    report["f2"] = "-2 A U + (1 - B)";
    report["constraints"] = Json::array({
        constraint("A^2 = q/2", std::abs(A * A - f.q / 2.0)),
        constraint("B = (A + 1)/(3A)", std::abs(f.B - (A + 1.0) / (3.0 * A))),
        constraint("C = [(2 - 9p)/A + 1/A^2 - 1/A^3]/18", std::abs(f.C - C_expected)),
        constraint("k = C (1 - 2A)/(3A)", std::abs(f.k - f.C * (1.0 - 2.0 * A) / (3.0 * A))),
        constraint("f1 f2 = F(U)/U", r.product),
        constraint("f2 + d(f1 U)/dU = 1", r.derivative),
    });
  } else {
    throw UsageError("--eq must be kdvb or compound");
  }

  if (o.format == "json") {
    std::cout << report.dump(2) << '\n';
    return 0;
  }
  if (o.format != "text") throw UsageError("--format must be text or json");
  for (const auto& [key, value] : report.items()) {
    if (key == "constraints") continue;
    std::cout << std::left << std::setw(10) << key << ' '
              << (value.is_number() ? num(value.get<double>()) : value.get<std::string>()) << '\n';
  }
  for (const auto& c : report["constraints"])
    std::cout << "residual  " << std::left << std::setw(40) << c["constraint"].get<std::string>()
              << ' ' << num(c["residual"].get<double>()) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
  std::string family = "kdvb-regular";
  double theta_min = -60.0, theta_max = 60.0;
  std::size_t points = 601;
  double theta0_re = 0.0, theta0_im = 0.0;
  double delta = 0.0;
  double p = 0.0, q = 0.0;
  double k0 = 0.0;
  std::string branch = "plus";
  PhysicalFlags phys;
  double t = 0.0;
  double x_min = -20.0, x_max = 20.0;
  std::string out;
  std::string format = "csv";
};

int run_evaluate(const EvaluateOpts& o) {
  const Family family = require_family(o.family);
  const auto format = kdvb::parse_format(o.format);
  if (o.points == 0) throw UsageError("empty grid requested (--points 0)");
  const Sign branch = parse_sign(o.branch);

  if (o.phys.given()) {
    const auto params = o.phys.params();
    const auto x = kdvb::linspace(o.x_min, o.x_max, o.points);
    const auto values = kdvb::sample_physical_direct(family, x, o.t, params, o.k0, branch);
    emit(kdvb::physical_table(x, o.t, values), o.out, format);
    return 0;
  }

  const std::complex<double> theta0{o.theta0_re, o.theta0_im};
  kdvb::WaveSolution sol;
  if (kdvb::is_kdvb(family)) {
    sol = kdvb::make_kdvb(family, o.delta, theta0);
  } else if (kdvb::is_compound_tanh(family)) {
    sol = kdvb::make_compound(family, o.p, o.q, theta0);
  } else if (kdvb::is_rational(family)) {
    sol = kdvb::make_rational(family, o.q, o.k0, theta0);
  } else {
    sol = kdvb::make_constant(branch, o.q);
  }
  const auto theta = kdvb::linspace(o.theta_min, o.theta_max, o.points);
  emit(kdvb::reduced_table(theta, kdvb::sample_reduced(sol, theta)), o.out, format);
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  std::string family = "kdvb-regular";
  double a_min = -5.0, a_max = 0.0;
  std::size_t a_steps = 51;
  double theta_min = -40.0, theta_max = 40.0;
  std::size_t points = 401;
  std::string out;
  std::string format = "csv";
};

int run_sweep(const SweepOpts& o) {
  const Family family = require_family(o.family);
  const auto format = kdvb::parse_format(o.format);
  if (o.points == 0) throw UsageError("empty theta grid requested (--points 0)");
  const auto theta = kdvb::linspace(o.theta_min, o.theta_max, o.points);
  const auto surface = kdvb::phase_sweep_surface(family, {o.a_min, o.a_max, o.a_steps}, theta);
  emit(kdvb::sweep_table(surface), o.out, format);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  std::string scope = "all";
  std::optional<double> tol;
  std::optional<double> tol_analytic, tol_fd, tol_oracle, tol_factorization;
  double perturb = 0.0;
  std::string format = "text";
};

std::string bound_text(const kdvb::CheckResult& c) {
  switch (c.bound) {
    case kdvb::Bound::AtMost: return "<= " + num(c.hi);
    case kdvb::Bound::AtLeast: return ">= " + num(c.lo);
    case kdvb::Bound::Within: return "in [" + num(c.lo) + ", " + num(c.hi) + "]";
    case kdvb::Bound::Holds: return "holds";
  }
  return "";
}

int run_verify(const VerifyOpts& o) {
  kdvb::Tolerances tol;
  if (o.tol) tol = {*o.tol, *o.tol, *o.tol, *o.tol};
  if (o.tol_analytic) tol.analytic = *o.tol_analytic;
  if (o.tol_fd) tol.finite_difference = *o.tol_fd;
  if (o.tol_oracle) tol.oracle = *o.tol_oracle;
  if (o.tol_factorization) tol.factorization = *o.tol_factorization;
  if (!kdvb::is_suite_scope(o.scope)) throw UsageError("unknown scope '" + o.scope + "'");
  if (o.format != "text" && o.format != "json") throw UsageError("--format must be text or json");

  const auto report = kdvb::run_suite(o.scope, tol, o.perturb);

  if (o.format == "json") {
    Json j;
    j["scope"] = o.scope;
    j["passed"] = report.passed();
    j["failures"] = report.failures();
    auto checks = Json::array();
    for (const auto& c : report.checks)
      checks.push_back({{"scope", c.scope},
                        {"name", c.name},
                        {"measured", c.measured},
                        {"bound", bound_text(c)},
                        {"passed", c.passed},
                        {"note", c.note}});
    j["checks"] = std::move(checks);
    j["findings"] = report.findings;
    if (report.audit) {
      auto rows = Json::array();
      for (const auto& r : report.audit->rows)
        rows.push_back({{"parameters", r.label},
                        {"form", r.form},
                        {"velocity", r.velocity},
                        {"v", r.v},
                        {"max_abs", r.max_abs},
                        {"relative", r.relative},
                        {"verdict", kdvb::verdict_name(r.verdict)}});
      j["audit"] = {{"definitive", report.audit->definitive()}, {"rows", std::move(rows)}};
    }
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& c : report.checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(18) << c.scope << ' '
                << c.name << "  measured " << num(c.measured) << ' ' << bound_text(c);
      if (!c.note.empty()) std::cout << "  (" << c.note << ')';
      std::cout << '\n';
    }
    if (report.audit) {
      std::cout << "\nrational-form audit (relative PDE residual; exact <= 1e-10, inconsistent"
                   " >= 1e-4)\n";
      for (const auto& r : report.audit->rows)
        std::cout << "  " << std::left << std::setw(10) << r.label << std::setw(16) << r.form
                  << std::setw(12) << r.velocity << "v = " << std::setw(22) << num(r.v)
                  << std::setw(24) << num(r.relative) << kdvb::verdict_name(r.verdict) << '\n';
      std::cout << "  verdict: " << (report.audit->definitive() ? "definitive" : "ambiguous")
                << '\n';
    }
    for (const auto& f : report.findings) std::cout << "FINDING " << f << '\n';
    std::cout << "\n"
              << report.checks.size() - report.failures() << '/' << report.checks.size()
              << " checks passed" << (o.perturb != 0.0 ? " (perturbed by " + num(o.perturb) + ")" : "")
              << '\n';
  }
  return report.passed() ? 0 : kExitVerify;
}

// ---------------------------------------------------------------------------
// figure

struct FigureOpts {
  int id = 0;
  std::string manifest = KDVB_MANIFEST_PATH;
  std::string out_dir = ".";
  std::string format = "csv";
};

int run_figure(const FigureOpts& o) {
  const auto format = kdvb::parse_format(o.format);
  const auto manifest = kdvb::load_manifest(o.manifest);
  const auto it = manifest.find(o.id);
  if (it == manifest.end())
    throw UsageError("figure " + std::to_string(o.id) + " not in manifest " + o.manifest);
  const auto violations = kdvb::figure_invariant_violations(it->second);
  if (!violations.empty()) throw UsageError(violations.front());
  std::filesystem::create_directories(o.out_dir);
  for (const auto& file : kdvb::render_figure(it->second, format)) {
    const auto path = (std::filesystem::path(o.out_dir) / file.name).string();
    kdvb::write_table_file(path, file.table, format);
    std::cout << path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Travelling waves of the KdV-Burgers equations by factorization"};
  app.require_subcommand(1);

  FactorizeOpts fo;
  auto* fac = app.add_subcommand("factorize", "factorization coefficients and constraint residuals");
  fac->add_option("--eq", fo.eq, "kdvb or compound")->check(CLI::IsMember({"kdvb", "compound"}));
  fac->add_option("--sign", fo.sign, "branch: plus or minus");
  fac->add_option("--delta", fo.delta, "displacement (kdvb)");
  fac->add_option("--p", fo.p, "rescaled velocity (compound)");
  fac->add_option("--q", fo.q, "rescaled cubic coefficient (compound)");
  fo.phys.attach(fac);
  fac->add_option("--format", fo.format, "text or json");

  EvaluateOpts eo;
  auto* ev = app.add_subcommand("evaluate", "sample a solution family on a grid");
  ev->add_option("--family", eo.family, "kdvb-regular, kdvb-singular, compound-tanh-plus, ...");
  ev->add_option("--theta-min", eo.theta_min);
  ev->add_option("--theta-max", eo.theta_max);
  ev->add_option("--points", eo.points, "grid size");
  ev->add_option("--theta0-re", eo.theta0_re);
  ev->add_option("--theta0-im", eo.theta0_im);
  ev->add_option("--delta", eo.delta, "displacement (standard families)");
  ev->add_option("--p", eo.p, "rescaled velocity (compound tanh)");
  ev->add_option("--q", eo.q, "rescaled cubic coefficient (compound families)");
  ev->add_option("--k0", eo.k0, "integration constant (rational families)");
  ev->add_option("--branch", eo.branch, "constant family branch: plus or minus");
  eo.phys.attach(ev);
  ev->add_option("--t", eo.t, "time (physical mode)");
  ev->add_option("--x-min", eo.x_min);
  ev->add_option("--x-max", eo.x_max);
  ev->add_option("--out", eo.out, "output file (default stdout)");
  ev->add_option("--format", eo.format, "csv or json");

  SweepOpts so;
  auto* sw = app.add_subcommand("sweep", "imaginary-phase sweep theta0 = i a pi");
  sw->add_option("--family", so.family);
  sw->add_option("--a-min", so.a_min);
  sw->add_option("--a-max", so.a_max);
  sw->add_option("--a-steps", so.a_steps);
  sw->add_option("--theta-min", so.theta_min);
  sw->add_option("--theta-max", so.theta_max);
  sw->add_option("--points", so.points);
  sw->add_option("--out", so.out, "output file (default stdout)");
  sw->add_option("--format", so.format, "csv or json");

  VerifyOpts vo;
  auto* ve = app.add_subcommand("verify", "run the verification suite");
  ve->add_option("--scope", vo.scope,
                 "all, factorization, kdvb-regular, kdvb-singular, compound-tanh, "
                 "compound-rational, constant, oracles, phase");
  ve->add_option("--tol", vo.tol, "override every tolerance");
  ve->add_option("--tol-analytic", vo.tol_analytic);
  ve->add_option("--tol-fd", vo.tol_fd);
  ve->add_option("--tol-oracle", vo.tol_oracle);
  ve->add_option("--tol-factorization", vo.tol_factorization);
  ve->add_option("--perturb", vo.perturb, "amplitude perturbation for a negative control");
  ve->add_option("--format", vo.format, "text or json");

  FigureOpts go;
  auto* fi = app.add_subcommand("figure", "write the data behind a figure");
  fi->add_option("id", go.id, "figure number 1-7")->required();
  fi->add_option("--manifest", go.manifest, "figure manifest");
  fi->add_option("--out-dir", go.out_dir, "output directory");
  fi->add_option("--format", go.format, "csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "kdvb: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*fac) return run_factorize(fo);
    if (*ev) return run_evaluate(eo);
    if (*sw) return run_sweep(so);
    if (*ve) return run_verify(vo);
    if (*fi) return run_figure(go);
  } catch (const DomainError& e) {
    std::cerr << "kdvb: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "kdvb: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kdvb: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
