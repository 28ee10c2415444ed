#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kdspin/apes.hpp"

using namespace kdspin;
using Catch::Approx;

namespace {

// Test-local minimizer for the lower sheet along a fixed angle: golden
// section over the radius, independent of the library's trivial_points path.
double lower_sheet_radial_min(const JTCoupling& c, double phi, double* rho_out = nullptr) {
  auto energy = [&](double rho) {
    return apes_energy(c, rho * std::cos(phi), rho * std::sin(phi)).first;
  };
  double a = 1e-9, b = 6.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = energy(x1), f2 = energy(x2);
  for (int it = 0; it < 300 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = energy(x1);
    } else {
      a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = energy(x2);
    }
  }
  if (rho_out) *rho_out = 0.5 * (a + b);
  return energy(0.5 * (a + b));
}

// Global minimum of the lower sheet by a dense angular scan (2-D oracle).
double lower_sheet_global_min(const JTCoupling& c) {
  double best = 0.0;
  for (int i = 0; i < 3600; ++i) best = std::min(best, lower_sheet_radial_min(c, 2.0 * M_PI * i / 3600));
  return best;
}

}  // namespace

TEST_CASE("coupling_from_apes inverts the surface trivial points") {
  SECTION("reference row 4H:h") {
    const JTCoupling c = coupling_from_apes(9.4, 5.6, 60.19);
    // frozen from the closed-form inversion g = d*hw/(2(2E-d)), f = sqrt(2E(hw-2g))
    CHECK(c.f == Approx(25.524716482561594).epsilon(1e-12));
    CHECK(c.g == Approx(12.767575757575756).epsilon(1e-12));
    // forward relations of the quadratic surface close exactly
    CHECK(c.f * c.f / (2.0 * (c.homega - 2.0 * c.g)) == Approx(9.4).epsilon(1e-12));
    CHECK(4.0 * 9.4 * c.g / (c.homega + 2.0 * c.g) == Approx(5.6).epsilon(1e-12));
  }
  SECTION("reference row 4H:k") {
    const JTCoupling c = coupling_from_apes(13.1, 7.1, 49.81);
    CHECK(c.f == Approx(28.6340550734199).epsilon(1e-12));
    CHECK(c.g == Approx(9.257879581151832).epsilon(1e-12));
  }
  SECTION("linear limit delta = 0") {
    const JTCoupling c = coupling_from_apes(10.0, 0.0, 50.0);
    CHECK(c.g == 0.0);
    CHECK(c.f == Approx(std::sqrt(2.0 * 10.0 * 50.0)).epsilon(1e-14));
  }
  SECTION("unbounded surface rejected") {
    CHECK_THROWS_AS(coupling_from_apes(10.0, 30.0, 50.0), UnboundedSurfaceError);
    CHECK_THROWS_AS(coupling_from_apes(10.0, 10.0, 50.0), UnboundedSurfaceError);
    JTCoupling c{10.0, 26.0, 50.0};
    CHECK_THROWS_AS(c.validate(), UnboundedSurfaceError);
  }
  SECTION("bad inputs") {
    CHECK_THROWS_AS(coupling_from_apes(-1.0, 0.0, 50.0), ValidationError);
    CHECK_THROWS_AS(coupling_from_apes(10.0, -0.1, 50.0), ValidationError);
    CHECK_THROWS_AS(coupling_from_apes(10.0, 0.0, 0.0), ValidationError);
  }
}

TEST_CASE("apes_energy basics") {
  const JTCoupling c = coupling_from_apes(9.4, 5.6, 60.19);

  SECTION("conical intersection at the origin") {
    const auto [lo, hi] = apes_energy(c, 0.0, 0.0);
    CHECK(lo == 0.0);
    CHECK(hi == 0.0);
  }
  SECTION("sheets degenerate only at the origin when f > 0") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
      const double qx = u(rng), qy = u(rng);
      if (std::hypot(qx, qy) < 1e-3) continue;
      const auto [lo, hi] = apes_energy(c, qx, qy);
      CHECK(hi > lo);
    }
  }
  SECTION("three-fold rotational symmetry of both sheets") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double ct = std::cos(2.0 * M_PI / 3.0), st = std::sin(2.0 * M_PI / 3.0);
    for (int i = 0; i < 200; ++i) {
      const double qx = u(rng), qy = u(rng);
      const auto [lo1, hi1] = apes_energy(c, qx, qy);
      const auto [lo2, hi2] = apes_energy(c, ct * qx - st * qy, st * qx + ct * qy);
      CHECK(lo2 == Approx(lo1).epsilon(1e-12).margin(1e-12));
      CHECK(hi2 == Approx(hi1).epsilon(1e-12).margin(1e-12));
    }
  }
}

TEST_CASE("surface minimum and barrier match the inputs") {
  for (const auto& d : built_in_catalog()) {
    CAPTURE(d.key());
    const JTCoupling c = coupling_from_apes(d);
    // 2-D numerical minimization oracle
    CHECK(lower_sheet_global_min(c) == Approx(-d.e_jt).margin(1e-6));
    // saddle via the angular profile: minima on cos3phi = -1, saddles on +1
    const double e_min = lower_sheet_radial_min(c, M_PI / 3.0);
    const double e_sad = lower_sheet_radial_min(c, 0.0);
    CHECK(e_min == Approx(-d.e_jt).margin(1e-6));
    CHECK(e_sad - e_min == Approx(d.delta_jt).margin(1e-6));
  }
}

TEST_CASE("trivial_points recovers the surface description") {
  SECTION("catalog rows round trip to 1e-6 meV") {
    for (const auto& d : built_in_catalog()) {
      CAPTURE(d.key());
      const auto tp = trivial_points(coupling_from_apes(d));
      CHECK_FALSE(tp.trough);
      CHECK(tp.e_jt == Approx(d.e_jt).margin(1e-6));
      CHECK(tp.delta_jt == Approx(d.delta_jt).margin(1e-6));
      CHECK(tp.symmetric_point.energy == 0.0);
    }
  }
  SECTION("50 random parameter sets round trip to 1e-6 meV") {
    std::mt19937 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
      const double e_jt = 2.0 + 28.0 * u(rng);
      const double delta = (0.05 + 0.90 * u(rng)) * e_jt;
      const double homega = 20.0 + 80.0 * u(rng);
      CAPTURE(e_jt, delta, homega);
      const auto tp = trivial_points(coupling_from_apes(e_jt, delta, homega));
      CHECK(tp.e_jt == Approx(e_jt).margin(1e-6));
      CHECK(tp.delta_jt == Approx(delta).margin(1e-6));
    }
  }
  SECTION("minima angles differ pairwise by 120 degrees") {
    const auto tp = trivial_points(coupling_from_apes(9.4, 5.6, 60.19));
    auto angle = [](const StationaryPoint& p) {
      const double t = std::atan2(p.qy, p.qx);
      return t < -1e-9 ? t + 2.0 * M_PI : t;
    };
    const double a0 = angle(tp.minima[0]), a1 = angle(tp.minima[1]), a2 = angle(tp.minima[2]);
    CHECK(a1 - a0 == Approx(2.0 * M_PI / 3.0).margin(1e-9));
    CHECK(a2 - a1 == Approx(2.0 * M_PI / 3.0).margin(1e-9));
    // g > 0 places the minima on the cos(3phi) = -1 branch
    CHECK(a0 == Approx(M_PI / 3.0).margin(1e-9));
    // stationarity certified against the analytic gradient
    for (const auto& p : tp.minima) {
      auto [gx, gy] = apes_lower_gradient(coupling_from_apes(9.4, 5.6, 60.19), p.qx, p.qy);
      CHECK(std::hypot(gx, gy) < 1e-10);
    }
  }
  SECTION("barrier points sit between minima with the barrier energy") {
    const auto tp = trivial_points(coupling_from_apes(13.1, 7.1, 49.81));
    for (const auto& b : tp.barriers)
      CHECK(b.energy - tp.minima[0].energy == Approx(7.1).margin(1e-6));
  }
  SECTION("linear limit flags a trough") {
    const JTCoupling c = coupling_from_apes(10.0, 0.0, 50.0);
    const auto tp = trivial_points(c);
    CHECK(tp.trough);
    CHECK(tp.delta_jt == 0.0);
    CHECK(tp.trough_radius == Approx(c.f / c.homega).epsilon(1e-12));
    CHECK(tp.e_jt == Approx(10.0).margin(1e-9));
  }
}

TEST_CASE("coupling extraction and trivial points are mutually inverse") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double homega = 20.0 + 80.0 * u(rng);
    JTCoupling c{(0.2 + 1.0 * u(rng)) * homega, (0.05 + 0.40 * u(rng)) * homega * 0.5, homega};
    c.validate();
    const auto tp = trivial_points(c);
    const JTCoupling c2 = coupling_from_apes(tp.e_jt, tp.delta_jt, homega);
    CHECK(c2.f == Approx(c.f).margin(1e-6));
    CHECK(c2.g == Approx(c.g).margin(1e-6));
  }
}
