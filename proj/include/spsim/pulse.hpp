#pragma once

// Gaussian drive envelope Omega(t) = Theta / (sqrt(pi) tau_p) exp(-(t-c)^2/tau_p^2)
// with pulse area Theta and default center c = 3 tau_p, plus the accumulated
// phase integral R(t,tau) = (1/2) int_t^{t-tau} Omega'(t') dt' in closed form.
// R appears inside every tau-integrand of every time-dependent rate, so the
// erf form matters for performance as much as accuracy.

#include <cmath>
#include <optional>

#include "spsim/errors.hpp"

namespace spsim {

struct GaussianPulse {
  double area = M_PI;   // Theta, rad (bare; the renormalized area is b_avg * area)
  double tau_p = 1.0;   // ps
  double center = 3.0;  // ps
  double b_avg = 1.0;   // coherent displacement <B> for renormalization

  static GaussianPulse make(double area, double tau_p, double b_avg = 1.0,
                            std::optional<double> center = std::nullopt) {
    if (tau_p <= 0.0) throw ConfigError("pulse tau_p must be > 0");
    if (b_avg <= 0.0 || b_avg > 1.0) throw ConfigError("pulse b_avg must be in (0, 1]");
    GaussianPulse p;
    p.area = area;
    p.tau_p = tau_p;
    p.b_avg = b_avg;
    p.center = center.value_or(3.0 * tau_p);
    return p;
  }

  double amplitude(double t) const {
    const double u = (t - center) / tau_p;
    return area / (std::sqrt(M_PI) * tau_p) * std::exp(-u * u);
  }

  double renormalized_amplitude(double t) const { return b_avg * amplitude(t); }

  // int_a^b Omega(t') dt' (bare envelope)
  double area_integral(double a, double b) const {
    return 0.5 * area * (std::erf((b - center) / tau_p) - std::erf((a - center) / tau_p));
  }

  // R(t,tau) = -(Theta <B>/4) [erf((t-c)/tau_p) - erf((t-tau-c)/tau_p)], tau >= 0
  double phase_integral(double t, double tau) const {
    if (tau < 0.0) throw std::domain_error("phase_integral: tau must be >= 0");
    return -0.25 * area * b_avg *
           (std::erf((t - center) / tau_p) - std::erf((t - tau - center) / tau_p));
  }

  // R(t, tau -> inf): the trailing erf saturates at -1.
  double saturated_phase(double t) const {
    return -0.25 * area * b_avg * (std::erf((t - center) / tau_p) + 1.0);
  }

  // Beyond center +/- support_radius the envelope is below ~1e-28 of the peak.
  double support_radius() const { return 8.0 * tau_p; }
  double support_end() const { return center + support_radius(); }
};

}  // namespace spsim
