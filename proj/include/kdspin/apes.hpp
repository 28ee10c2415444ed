#pragma once

/// Quadratic E⊗e adiabatic potential energy surface: conversion between the
/// trivial-point description (E_JT, delta_JT, homega) and the vibronic
/// coupling constants (F, G), surface evaluation and trivial-point search.
///
/// Conventions. Dimensionless coordinates q = (a + a†)/√2, so the harmonic
/// term is (ħω/2)(qx²+qy²) and F, G carry energy units. The 2×2 potential is
///
///   V = (ħω/2)(qx²+qy²)·1 + [F qx − G(qx²−qy²)]σz + [F qy + 2G qx qy]σx,
///
/// whose sheets are (ħω/2)ρ² ∓ ρ√(F² + G²ρ² − 2FGρ cos3φ): three minima on
/// the cos(3φ) = −sign(G) branch and three saddles in between. The exact
/// trivial-point relations of this surface,
///
///   E_JT = F²/(2(ħω − 2G)),   delta_JT = 4 E_JT G/(ħω + 2G),
///
/// are inverted in closed form by coupling_from_apes, so trivial-point
/// extraction and coupling extraction are mutually exact inverses.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kdspin/catalog.hpp"

namespace kdspin {

struct UnboundedSurfaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Vibronic coupling constants of the quadratic E⊗e Hamiltonian, meV.
struct JTCoupling {
  double f = 0.0;       // linear coupling
  double g = 0.0;       // quadratic coupling
  double homega = 0.0;  // effective e-mode phonon energy

  void validate() const {
    if (!(homega > 0.0)) throw ValidationError("homega must be > 0");
    if (f < 0.0) throw ValidationError("f must be >= 0");
    if (g < 0.0) throw ValidationError("g must be >= 0");
    if (!(g < 0.5 * homega))
      throw UnboundedSurfaceError("quadratic coupling g = " + detail::format_exact(g) +
                                  " >= homega/2 = " + detail::format_exact(0.5 * homega) +
                                  ": surface unbounded from below");
  }
};

/// Exact inversion of the trivial-point relations. Requires delta_jt < e_jt;
/// at delta_jt = e_jt the implied g reaches homega/2 and the surface loses
/// its lower bound.
inline JTCoupling coupling_from_apes(double e_jt, double delta_jt, double homega) {
  if (!(e_jt > 0.0)) throw ValidationError("e_jt must be > 0");
  if (!(homega > 0.0)) throw ValidationError("homega must be > 0");
  if (delta_jt < 0.0) throw ValidationError("delta_jt must be >= 0");
  if (delta_jt >= e_jt)
    throw UnboundedSurfaceError(
        "delta_jt = " + detail::format_exact(delta_jt) + " >= e_jt = " +
        detail::format_exact(e_jt) + " implies g >= homega/2: surface unbounded from below");
  JTCoupling c;
  c.homega = homega;
  c.g = delta_jt * homega / (2.0 * (2.0 * e_jt - delta_jt));
  c.f = std::sqrt(2.0 * e_jt * (homega - 2.0 * c.g));
  c.validate();
  return c;
}

inline JTCoupling coupling_from_apes(const DefectParams& p) {
  p.validate();
  return coupling_from_apes(p.e_jt, p.delta_jt, p.homega);
}

/// Both adiabatic sheets at (qx, qy); lower sheet first, meV. The two sheets
/// touch only at the origin (conical intersection) for f > 0.
inline std::pair<double, double> apes_energy(const JTCoupling& c, double qx, double qy) {
  const double a = c.f * qx - c.g * (qx * qx - qy * qy);
  const double b = c.f * qy + 2.0 * c.g * qx * qy;
  const double h0 = 0.5 * c.homega * (qx * qx + qy * qy);
  const double r = std::hypot(a, b);
  return {h0 - r, h0 + r};
}

/// Gradient of the lower sheet; used to certify stationary points.
inline std::pair<double, double> apes_lower_gradient(const JTCoupling& c, double qx, double qy) {
  const double a = c.f * qx - c.g * (qx * qx - qy * qy);
  const double b = c.f * qy + 2.0 * c.g * qx * qy;
  const double r = std::hypot(a, b);
  if (r == 0.0) return {c.homega * qx, c.homega * qy};  // subgradient at the cone
  const double dax = c.f - 2.0 * c.g * qx, day = 2.0 * c.g * qy;
  const double dbx = 2.0 * c.g * qy, dby = c.f + 2.0 * c.g * qx;
  return {c.homega * qx - (a * dax + b * dbx) / r, c.homega * qy - (a * day + b * dby) / r};
}

struct StationaryPoint {
  double qx = 0.0, qy = 0.0;
  double energy = 0.0;  // lower sheet, meV
};

struct TrivialPoints {
  std::array<StationaryPoint, 3> minima{};
  std::array<StationaryPoint, 3> barriers{};
  StationaryPoint symmetric_point{};  // conical intersection at the origin
  double e_jt = 0.0;                  // E(C3v) − E(min)
  double delta_jt = 0.0;              // E(barrier) − E(min)
  bool trough = false;                // g = 0: minima form a continuous trough
  double trough_radius = 0.0;
};

namespace detail {

inline double apes_lower_polar(const JTCoupling& c, double rho, double phi) {
  const double w2 = c.f * c.f * rho * rho + c.g * c.g * std::pow(rho, 4) -
                    2.0 * c.f * c.g * std::pow(rho, 3) * std::cos(3.0 * phi);
  return 0.5 * c.homega * rho * rho - std::sqrt(std::max(w2, 0.0));
}

/// d/drho of the lower sheet at fixed angle.
inline double apes_lower_drho(const JTCoupling& c, double rho, double phi) {
  const double c3 = std::cos(3.0 * phi);
  const double w2 = c.f * c.f * rho * rho + c.g * c.g * std::pow(rho, 4) -
                    2.0 * c.f * c.g * std::pow(rho, 3) * c3;
  const double w = std::sqrt(std::max(w2, 1e-300));
  const double dw2 = 2.0 * c.f * c.f * rho + 4.0 * c.g * c.g * std::pow(rho, 3) -
                     6.0 * c.f * c.g * rho * rho * c3;
  return c.homega * rho - 0.5 * dw2 / w;
}

/// d/dphi of the lower sheet at fixed radius; by the envelope theorem this is
/// also the total derivative of the radially minimized profile.
inline double apes_lower_dphi(const JTCoupling& c, double rho, double phi) {
  const double w2 = c.f * c.f * rho * rho + c.g * c.g * std::pow(rho, 4) -
                    2.0 * c.f * c.g * std::pow(rho, 3) * std::cos(3.0 * phi);
  const double w = std::sqrt(std::max(w2, 1e-300));
  return -3.0 * c.f * c.g * std::pow(rho, 3) * std::sin(3.0 * phi) / w;
}

/// Golden-section bracket then Newton polish on the radial coordinate.
inline double radial_minimum(const JTCoupling& c, double phi, double rho_hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 1e-9, b = rho_hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = apes_lower_polar(c, x1, phi), f2 = apes_lower_polar(c, x2, phi);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * rho_hi; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = apes_lower_polar(c, x1, phi);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = apes_lower_polar(c, x2, phi);
    }
  }
  double rho = 0.5 * (a + b);
  for (int it = 0; it < 60; ++it) {
    const double d1 = apes_lower_drho(c, rho, phi);
    const double h = std::max(1e-7, 1e-7 * rho);
    const double d2 = (apes_lower_drho(c, rho + h, phi) - apes_lower_drho(c, rho - h, phi)) /
                      (2.0 * h);
    if (!(d2 > 0.0)) break;
    const double step = d1 / d2;
    rho -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, rho)) break;
  }
  return rho;
}

}  // namespace detail

/// Locates the three minima, three barriers and the high-symmetry point of
/// the lower sheet by radial-angular reduction: the radial problem is solved
/// at fixed angle, the resulting profile is scanned over phi in [0, 2pi) and
/// each extremum is Newton-polished to gradient norm below 1e-10 meV.
inline TrivialPoints trivial_points(const JTCoupling& c) {
  c.validate();
  TrivialPoints out;
  out.symmetric_point = {0.0, 0.0, 0.0};

  const double denom = c.homega - 2.0 * c.g;
  const double rho_hi = (c.f > 0.0 ? 2.0 * c.f / denom : 1.0) + 1.0;

  if (c.f == 0.0 && c.g == 0.0) {
    out.trough = true;
    out.trough_radius = 0.0;
    for (int i = 0; i < 3; ++i) {
      out.minima[i] = {0.0, 0.0, 0.0};
      out.barriers[i] = {0.0, 0.0, 0.0};
    }
    return out;
  }

  if (c.g < 1e-12 * c.homega) {
    // Linear limit: a continuous trough of minima at rho = f/homega.
    out.trough = true;
    out.trough_radius = c.f / c.homega;
    const double e_min = -0.5 * c.f * c.f / c.homega;
    for (int i = 0; i < 3; ++i) {
      const double phi_min = M_PI / 3.0 + i * 2.0 * M_PI / 3.0;
      const double phi_bar = i * 2.0 * M_PI / 3.0;
      out.minima[i] = {out.trough_radius * std::cos(phi_min),
                       out.trough_radius * std::sin(phi_min), e_min};
      out.barriers[i] = {out.trough_radius * std::cos(phi_bar),
                         out.trough_radius * std::sin(phi_bar), e_min};
    }
    out.e_jt = -e_min;
    out.delta_jt = 0.0;
    return out;
  }

  // Angular profile of the radially minimized energy.
  auto profile = [&](double phi) {
    const double rho = detail::radial_minimum(c, phi, rho_hi);
    return detail::apes_lower_polar(c, rho, phi);
  };

  const int n_scan = 720;
  std::vector<double> e(n_scan);
  for (int i = 0; i < n_scan; ++i) e[i] = profile(2.0 * M_PI * i / n_scan);

  auto refine = [&](int i0, bool minimum) {
    const double step = 2.0 * M_PI / n_scan;
    double a = step * (i0 - 1), b = step * (i0 + 1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    auto val = [&](double phi) { return minimum ? profile(phi) : -profile(phi); };
    double f1 = val(x1), f2 = val(x2);
    for (int it = 0; it < 60 && (b - a) > 1e-8; ++it) {
      if (f1 < f2) {
        b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = val(x1);
      } else {
        a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = val(x2);
      }
    }
    // Newton on the angle with the analytic envelope derivative; the
    // golden-section landing is noise-limited near the flat extremum.
    double phi = 0.5 * (a + b);
    double rho = detail::radial_minimum(c, phi, rho_hi);
    for (int it = 0; it < 50; ++it) {
      const double d1 = detail::apes_lower_dphi(c, rho, phi);
      const double hh = 1e-6;
      const double d2 = (detail::apes_lower_dphi(c, detail::radial_minimum(c, phi + hh, rho_hi),
                                                 phi + hh) -
                         detail::apes_lower_dphi(c, detail::radial_minimum(c, phi - hh, rho_hi),
                                                 phi - hh)) /
                        (2.0 * hh);
      if (d2 == 0.0) break;
      const double delta = d1 / d2;
      phi -= delta;
      rho = detail::radial_minimum(c, phi, rho_hi);
      if (std::abs(delta) < 1e-14) break;
    }
    StationaryPoint p;
    p.qx = rho * std::cos(phi);
    p.qy = rho * std::sin(phi);
    p.energy = detail::apes_lower_polar(c, rho, phi);
    return p;
  };

  std::vector<StationaryPoint> minima, barriers;
  for (int i = 0; i < n_scan; ++i) {
    const int prev = (i + n_scan - 1) % n_scan, next = (i + 1) % n_scan;
    if (e[i] < e[prev] && e[i] <= e[next]) minima.push_back(refine(i, true));
    if (e[i] > e[prev] && e[i] >= e[next]) barriers.push_back(refine(i, false));
  }
  if (minima.size() != 3 || barriers.size() != 3)
    throw std::runtime_error("trivial_points: expected 3 minima and 3 barriers, found " +
                             std::to_string(minima.size()) + "/" +
                             std::to_string(barriers.size()));

  auto by_angle = [](const StationaryPoint& a, const StationaryPoint& b) {
    auto ang = [](const StationaryPoint& p) {
      double t = std::atan2(p.qy, p.qx);
      return t < -1e-12 ? t + 2.0 * M_PI : t;
    };
    return ang(a) < ang(b);
  };
  std::sort(minima.begin(), minima.end(), by_angle);
  std::sort(barriers.begin(), barriers.end(), by_angle);
  for (int i = 0; i < 3; ++i) {
    out.minima[i] = minima[i];
    out.barriers[i] = barriers[i];
  }

  auto certify = [&](const StationaryPoint& p, const char* kind) {
    auto [gx, gy] = apes_lower_gradient(c, p.qx, p.qy);
    if (std::hypot(gx, gy) > 1e-10)
      throw std::runtime_error(std::string("trivial_points: ") + kind +
                               " failed the gradient tolerance");
  };
  for (const auto& p : out.minima) certify(p, "minimum");
  for (const auto& p : out.barriers) certify(p, "barrier");

  out.e_jt = -out.minima[0].energy;
  out.delta_jt = out.barriers[0].energy - out.minima[0].energy;
  return out;
}

}  // namespace kdspin
