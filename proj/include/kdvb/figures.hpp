#pragma once

// Figure parameter sets, read from a versioned INI manifest so that figure
// data never depends on command-line defaults.

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "kdvb/errors.hpp"
#include "kdvb/grid.hpp"
#include "kdvb/io.hpp"
#include "kdvb/params.hpp"
#include "kdvb/solutions.hpp"

namespace kdvb {

/// Parses a real written as a decimal or as a fraction "n/d"; the result is
/// the correctly rounded quotient of the two parts.
inline double parse_real(std::string_view text) {
  const auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  const auto number = [&](std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
      throw DomainError("not a number: '" + std::string(text) + "'");
    return out;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return number(text);
  const double den = number(text.substr(slash + 1));
  if (den == 0.0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  return number(text.substr(0, slash)) / den;
}

inline std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (in >> item) {
    if (!item.empty() && item.back() == ',') item.pop_back();
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

enum class FigureKind { Curve, Sweep, Physical };

struct FigureDef {
  int id = 0;
  FigureKind kind = FigureKind::Curve;
  std::string title;
  std::string output;  // file stem
  Family family = Family::KdvbRegular;

  // Curve: reduced variable theta.
  std::complex<double> theta0{};
  double delta = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  std::size_t points = 0;

  // Sweep: theta0 = i a pi.
  PhaseSweep sweep{};

  // Physical: one curve per velocity, at fixed t.
  PhysicalParams params{};
  double t = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  std::vector<double> velocities;
  std::vector<std::string> labels;
};

using Manifest = std::map<int, FigureDef>;

namespace detail {

inline std::string require_key(const boost::property_tree::ptree& sec, const std::string& section,
                               const std::string& key) {
  const auto v = sec.get_optional<std::string>(key);
  if (!v) throw DomainError("manifest section [" + section + "] lacks key '" + key + "'");
  return *v;
}

inline FigureDef parse_figure(int id, const std::string& name,
                               const boost::property_tree::ptree& sec) {
  const auto real = [&](const std::string& key) {
    return parse_real(require_key(sec, name, key));
  };
  const auto real_or = [&](const std::string& key, double fallback) {
    const auto v = sec.get_optional<std::string>(key);
    return v ? parse_real(*v) : fallback;
  };
  const auto count = [&](const std::string& key) {
    const double n = real(key);
    if (!(n >= 0.0) || n != std::floor(n))
      throw DomainError("manifest [" + name + "] " + key + " must be a non-negative integer");
    return static_cast<std::size_t>(n);
  };

  FigureDef f;
  f.id = id;
  f.title = sec.get<std::string>("title", "");
  f.output = require_key(sec, name, "output");
  const auto family = parse_family(require_key(sec, name, "family"));
  if (!family) throw DomainError("manifest [" + name + "] has an unknown family");
  f.family = *family;

  const auto kind = require_key(sec, name, "kind");
  if (kind == "curve") {
    f.kind = FigureKind::Curve;
    f.theta0 = {real_or("theta0_re", 0.0), real_or("theta0_im_pi", 0.0) * std::numbers::pi};
    f.delta = real_or("delta", 0.0);
    f.theta_min = real("theta_min");
    f.theta_max = real("theta_max");
    f.points = count("points");
  } else if (kind == "sweep") {
    f.kind = FigureKind::Sweep;
    f.sweep = {real("a_min"), real("a_max"), count("a_steps")};
    f.theta_min = real("theta_min");
    f.theta_max = real("theta_max");
    f.points = count("points");
  } else if (kind == "physical") {
    f.kind = FigureKind::Physical;
    f.params = {real("s"), real("mu"), real("alpha"), real("beta"), 0.0, {real_or("xi0", 0.0), 0.0}};
    f.t = real_or("t", 0.0);
    f.x_min = real("x_min");
    f.x_max = real("x_max");
    f.points = count("points");
    for (const auto& v : split_list(require_key(sec, name, "velocities")))
      f.velocities.push_back(parse_real(v));
    f.labels = split_list(sec.get<std::string>("labels", ""));
    if (f.labels.empty())
      for (const double v : f.velocities) f.labels.push_back(shortest(v));
    if (f.labels.size() != f.velocities.size())
      throw DomainError("manifest [" + name + "] needs one label per velocity");
  } else {
    throw DomainError("manifest [" + name + "] has unknown kind '" + kind + "'");
  }
  if (f.points == 0) throw DomainError("manifest [" + name + "] requests an empty grid");
  return f;
}

}  // namespace detail

/// Sections are named [figure-N].
inline Manifest load_manifest(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw DomainError("cannot read figure manifest: " + std::string(e.what()));
  }
  Manifest out;
  for (const auto& [name, sec] : tree) {
    constexpr std::string_view prefix = "figure-";
    if (name.rfind(prefix, 0) != 0) continue;
    int id = 0;
    const auto digits = std::string_view(name).substr(prefix.size());
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size())
      throw DomainError("bad manifest section name [" + name + "]");
    out.emplace(id, detail::parse_figure(id, name, sec));
  }
  return out;
}

/// Departures from the figures' stated parameters; empty when the entry is
/// faithful.
inline std::vector<std::string> figure_invariant_violations(const FigureDef& f) {
  std::vector<std::string> out;
  const auto expect = [&](bool ok, const std::string& what) {
    if (!ok) out.push_back("figure " + std::to_string(f.id) + ": " + what);
  };
  const double pi = std::numbers::pi;
  switch (f.id) {
    case 1:
    case 2:
      expect(f.kind == FigureKind::Curve, "must be a theta curve");
      expect(f.family == (f.id == 1 ? Family::KdvbRegular : Family::KdvbSingular),
             "wrong family");
      expect(f.theta0 == std::complex<double>{}, "theta0 must be 0");
      break;
    case 3:
    case 4:
      expect(f.kind == FigureKind::Curve && f.family == Family::KdvbRegular,
             "must be a regular-kink theta curve");
      expect(std::abs(f.theta0 - std::complex<double>{0.0, -2.5 * pi}) <= 1e-15 * pi,
             "theta0 must be -5i pi/2");
      break;
    case 5:
    case 6:
      expect(f.kind == FigureKind::Sweep && f.family == Family::KdvbRegular,
             "must be a regular-kink phase sweep");
      expect(f.sweep.a_min == -5.0 && f.sweep.a_max == 0.0, "a must span [-5, 0]");
      break;
    case 7:
      expect(f.kind == FigureKind::Physical && f.family == Family::CompoundTanhPlus,
             "must be physical compound-tanh-plus curves");
      expect(f.params.alpha == 3.0 && f.params.beta == 2.0 && f.params.mu == 1.0 &&
                 f.params.s == 2.0 && f.params.xi0 == std::complex<double>{},
             "coefficients must be alpha=3, beta=2, mu=1, s=2, xi0=0");
      expect(f.velocities.size() == 6, "six velocities expected");
      break;
    default:
      out.push_back("figure " + std::to_string(f.id) + " is not a known figure");
  }
  return out;
}

/// Direct physical-variable formula for each family. The compound label is
/// the physical one; rational and constant families take k0 and the branch.
inline std::complex<double> eval_physical(Family family, double x, double t,
                                          const PhysicalParams& params, double k0 = 0.0,
                                          Sign constant_branch = Sign::Plus) {
  if (is_kdvb(family)) return eval_kdvb_physical(family, x, t, params);
  if (is_compound_tanh(family)) return eval_compound_physical(family, x, t, params);
  if (is_rational(family)) return eval_rational_physical(family, x, t, params, k0);
  return make_constant(constant_branch, params).value_physical(x, t);
}

inline std::vector<Sampled> sample_physical_direct(Family family, std::span<const double> x,
                                                   double t, const PhysicalParams& params,
                                                   double k0 = 0.0,
                                                   Sign constant_branch = Sign::Plus) {
  std::vector<Sampled> out;
  out.reserve(x.size());
  for (const double xv : x) {
    try {
      out.emplace_back(eval_physical(family, xv, t, params, k0, constant_branch));
    } catch (const PoleError&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

struct FigureFile {
  std::string name;  // file name without directory
  SampleTable table;
};

inline std::vector<FigureFile> render_figure(const FigureDef& f, Format format) {
  const std::string ext{format_extension(format)};
  std::vector<FigureFile> out;
  switch (f.kind) {
    case FigureKind::Curve: {
      const auto theta = linspace(f.theta_min, f.theta_max, f.points);
      const auto sol = make_kdvb(f.family, f.delta, f.theta0);
      out.push_back({f.output + ext, reduced_table(theta, sample_reduced(sol, theta))});
      break;
    }
    case FigureKind::Sweep: {
      const auto theta = linspace(f.theta_min, f.theta_max, f.points);
      out.push_back({f.output + ext, sweep_table(phase_sweep_surface(f.family, f.sweep, theta))});
      break;
    }
    case FigureKind::Physical: {
      const auto x = linspace(f.x_min, f.x_max, f.points);
      for (std::size_t i = 0; i < f.velocities.size(); ++i) {
        auto params = f.params;
        params.v = f.velocities[i];
        out.push_back({f.output + "_v" + f.labels[i] + ext,
                       physical_table(x, f.t, sample_physical_direct(f.family, x, f.t, params))});
      }
      break;
    }
  }
  return out;
}

}  // namespace kdvb
