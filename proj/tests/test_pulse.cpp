#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "spsim/pulse.hpp"
#include "support/oracles.hpp"

using namespace spsim;
using Catch::Approx;

TEST_CASE("gaussian envelope") {
  const auto p = GaussianPulse::make(M_PI, 1.0);
  CHECK(p.center == 3.0);
  CHECK(p.amplitude(p.center) == Approx(M_PI / std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(p.amplitude(p.center) == Approx(1.7724538509055159).epsilon(1e-12));
  CHECK(p.amplitude(p.center + 10.0) < 1e-40 * p.amplitude(p.center));
  CHECK(p.amplitude(p.center - 10.0) < 1e-40 * p.amplitude(p.center));

  // envelope is non-negative with a single interior maximum
  double prev = p.amplitude(-2.0);
  bool rising = true;
  int direction_changes = 0;
  for (double t = -2.0 + 0.01; t < 8.0; t += 0.01) {
    const double v = p.amplitude(t);
    CHECK(v >= 0.0);
    if (rising && v < prev) { rising = false; ++direction_changes; }
    prev = v;
  }
  CHECK(direction_changes == 1);

  // numeric area over [c - 8 tau_p, c + 8 tau_p] equals Theta
  const double area = oracles::simpson([&](double t) { return p.amplitude(t); },
                                       p.center - 8.0, p.center + 8.0, 4000);
  CHECK(area == Approx(M_PI).epsilon(1e-9));

  // FWHM = 2 sqrt(ln 2) tau_p, from samples via bisection
  const double half = 0.5 * p.amplitude(p.center);
  double lo = p.center, hi = p.center + 4.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (p.amplitude(mid) > half ? lo : hi) = mid;
  }
  CHECK(2.0 * (lo - p.center) == Approx(2.0 * std::sqrt(std::log(2.0))).epsilon(1e-9));
}

TEST_CASE("renormalized envelope") {
  const double b = 0.9;
  const auto p = GaussianPulse::make(M_PI / b, 2.0, b);
  CHECK(p.renormalized_amplitude(p.center) == Approx(b * p.amplitude(p.center)).epsilon(1e-14));
  const auto unit = GaussianPulse::make(M_PI, 1.0, 1.0);
  CHECK(unit.renormalized_amplitude(1.7) == unit.amplitude(1.7));

  // a renormalized pi-pulse has unit inversion area: int Omega'(t) dt = pi
  const double area = oracles::simpson([&](double t) { return p.renormalized_amplitude(t); },
                                       p.center - 16.0, p.center + 16.0, 8000);
  CHECK(area == Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("phase integral closed form") {
  const double b = 0.93;
  const auto p = GaussianPulse::make(M_PI / b, 1.3, b);

  CHECK(p.phase_integral(2.0, 0.0) == 0.0);
  CHECK_THROWS_AS(p.phase_integral(2.0, -0.5), std::domain_error);

  // covering the whole pulse: R -> -pi/2 for a renormalized pi-pulse
  const double t_late = p.center + 60.0 * p.tau_p;
  CHECK(p.phase_integral(t_late, 120.0 * p.tau_p) == Approx(-M_PI / 2).epsilon(1e-12));
  CHECK(p.saturated_phase(t_late) == Approx(-M_PI / 2).epsilon(1e-12));

  // erf closed form vs direct quadrature of Omega' on a 50 x 50 grid
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double t = -1.0 + 10.0 * i / 49.0;
      const double tau = 8.0 * j / 49.0;
      const double direct = -0.5 * oracles::simpson(
          [&](double s) { return p.renormalized_amplitude(s); }, t - tau, t, 600);
      CHECK(p.phase_integral(t, tau) == Approx(direct).margin(1e-10));
    }
  }
}
