#pragma once

// Embedded Dormand-Prince 5(4) stepper for dense complex-matrix ODEs with
// the classic fourth-order continuous extension. The dense output is what
// makes two-time correlator grids affordable: the stepper takes error-sized
// steps and grid values are read off the interpolant instead of forcing a
// stop at every grid node.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "spsim/errors.hpp"
#include "spsim/hilbert.hpp"

namespace spsim {

using Rhs = std::function<void(double, const Mat&, Mat&)>;

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double h_init = 0.0;  // 0 = automatic
  double h_max = 0.0;   // 0 = span
  double h_min = 0.0;   // 0 = 1e-12 * span; stepping below this raises NumericalError
};

namespace dp5 {
// Butcher tableau
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b(5th) - b(4th)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;
}  // namespace dp5

// Continuous extension over one accepted step [t0, t0+h].
class DenseStep {
 public:
  double t0 = 0.0, h = 0.0;

  void build(double t0_, double h_, const Mat& y0, const Mat& y1,
             const std::array<Mat, 7>& k) {
    t0 = t0_;
    h = h_;
    rc_[0] = y0;
    rc_[1] = y1 - y0;
    rc_[2] = h * k[0] - rc_[1];
    rc_[3] = rc_[1] - h * k[6] - rc_[2];
    rc_[4] = h * (dp5::d1 * k[0] + dp5::d3 * k[2] + dp5::d4 * k[3] + dp5::d5 * k[4] +
                  dp5::d6 * k[5] + dp5::d7 * k[6]);
  }

  double t_end() const { return t0 + h; }

  void eval(double t, Mat& out) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    out = rc_[0] + th * (rc_[1] + th1 * (rc_[2] + th * (rc_[3] + th1 * rc_[4])));
  }

  // tr(B y(t)) reduced to a 5-scalar polynomial; used in correlator sweeps.
  std::array<cxd, 5> project(const Mat& b) const {
    std::array<cxd, 5> c;
    for (int i = 0; i < 5; ++i) c[i] = (b * rc_[i]).trace();
    return c;
  }
  static cxd eval_projected(const std::array<cxd, 5>& c, double theta) {
    const double th1 = 1.0 - theta;
    return c[0] + theta * (c[1] + th1 * (c[2] + theta * (c[3] + th1 * c[4])));
  }

 private:
  std::array<Mat, 5> rc_;
};

namespace detail {

inline double error_norm(const Mat& err, const Mat& y0, const Mat& y1, double atol, double rtol) {
  double acc = 0.0;
  const auto n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double r = std::abs(err(i)) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace detail

// Integrate y' = rhs(t, y) from t0 to t1; after each accepted step the sink
// is called with the step's dense output. Sink: void(const DenseStep&).
template <class Sink>
inline void integrate_adaptive(const Rhs& rhs, double t0, double t1, const Mat& y0,
                               const OdeOptions& opt, Sink&& sink) {
  using namespace dp5;
  if (t1 < t0) throw ConfigError("integrate_adaptive: t1 must be >= t0");
  if (t1 == t0) return;
  const double span = t1 - t0;
  const double h_max = opt.h_max > 0 ? opt.h_max : span;
  const double h_min = opt.h_min > 0 ? opt.h_min : 1e-12 * span;

  Mat y = y0;
  Mat ynew = y0;
  std::array<Mat, 7> k;
  for (auto& m : k) m.resizeLike(y);
  Mat ytmp(y.rows(), y.cols());
  Mat errm(y.rows(), y.cols());
  DenseStep dense;

  double t = t0;
  double h = opt.h_init > 0 ? opt.h_init : std::min(h_max, 1e-3 * span);
  rhs(t, y, k[0]);  // k[0] always holds f(t, y): FSAL on accept, untouched on reject

  while (t < t1) {
    h = std::min(h, t1 - t);

    ytmp = y + h * (a21 * k[0]);
    rhs(t + c2 * h, ytmp, k[1]);
    ytmp = y + h * (a31 * k[0] + a32 * k[1]);
    rhs(t + c3 * h, ytmp, k[2]);
    ytmp = y + h * (a41 * k[0] + a42 * k[1] + a43 * k[2]);
    rhs(t + c4 * h, ytmp, k[3]);
    ytmp = y + h * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]);
    rhs(t + c5 * h, ytmp, k[4]);
    ytmp = y + h * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]);
    rhs(t + h, ytmp, k[5]);
    ynew = y + h * (b1 * k[0] + b3 * k[2] + b4 * k[3] + b5 * k[4] + b6 * k[5]);
    rhs(t + h, ynew, k[6]);

    errm = h * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);
    double err = detail::error_norm(errm, y, ynew, opt.abs_tol, opt.rel_tol);
    if (!std::isfinite(err)) err = 1e6;

    if (err <= 1.0) {
      dense.build(t, h, y, ynew, k);
      t += h;
      y.swap(ynew);
      k[0].swap(k[6]);  // FSAL
      sink(static_cast<const DenseStep&>(dense));
      const double fac = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(h * fac, h_max);
    } else {
      const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
      h *= fac;
      if (h < h_min) {
        std::ostringstream msg;
        msg << "ODE step size underflow (h = " << h << ") at t = " << t
            << "; system appears stiff or the right-hand side is singular";
        throw NumericalError(msg.str());
      }
    }
  }
}

struct DensityChecks {
  bool enabled = false;
  double trace_tol = 1e-8;
  double herm_tol = 1e-10;
  double eig_warn = -1e-6;   // smallest eigenvalue below this flags a warning
  double eig_abort = -1e-4;  // below this the run aborts with diagnostics
  int eig_stride = 1;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> states;
  bool positivity_warning = false;
  double min_eigenvalue = 0.0;
};

// Propagate and materialize the state on out_times (must be increasing and
// start at the initial time). Density-matrix invariants are verified on the
// materialized nodes when checks.enabled.
inline Trajectory propagate(const Rhs& rhs, const Mat& rho0, const std::vector<double>& out_times,
                            const OdeOptions& opt = {}, const DensityChecks& checks = {}) {
  if (out_times.size() < 2) throw ConfigError("propagate: need at least two output times");
  Trajectory traj;
  traj.times = out_times;
  traj.states.resize(out_times.size());
  traj.states[0] = rho0;
  traj.min_eigenvalue = 0.0;

  std::size_t next = 1;
  auto emit = [&](const DenseStep& step) {
    while (next < out_times.size() && out_times[next] <= step.t_end() + 1e-12 * step.h) {
      step.eval(std::min(out_times[next], step.t_end()), traj.states[next]);
      ++next;
    }
  };
  integrate_adaptive(rhs, out_times.front(), out_times.back(), rho0, opt, emit);
  if (next < out_times.size())
    throw NumericalError("propagate: integration ended before the last output time");

  if (checks.enabled) {
    Eigen::SelfAdjointEigenSolver<Mat> es;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      const Mat& rho = traj.states[i];
      const double tr_dev = std::abs(rho.trace() - cxd(1.0, 0.0));
      if (tr_dev > checks.trace_tol) {
        std::ostringstream msg;
        msg << "trace deviation " << tr_dev << " exceeds " << checks.trace_tol << " at t = "
            << traj.times[i];
        throw NumericalError(msg.str());
      }
      const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
      if (herm > checks.herm_tol) {
        std::ostringstream msg;
        msg << "hermiticity deviation " << herm << " exceeds " << checks.herm_tol << " at t = "
            << traj.times[i];
        throw NumericalError(msg.str());
      }
      if (checks.eig_stride > 0 && i % static_cast<std::size_t>(checks.eig_stride) == 0) {
        es.compute(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        const double mineig = es.eigenvalues().minCoeff();
        traj.min_eigenvalue = std::min(traj.min_eigenvalue, mineig);
        if (mineig < checks.eig_abort) {
          std::ostringstream msg;
          msg << "density matrix lost positivity (min eigenvalue " << mineig << ") at t = "
              << traj.times[i];
          throw NumericalError(msg.str());
        }
        if (mineig < checks.eig_warn) traj.positivity_warning = true;
      }
    }
  }
  return traj;
}

inline std::vector<double> uniform_grid(double t0, double t1, double dt) {
  if (dt <= 0.0 || t1 <= t0) throw ConfigError("uniform_grid: bad bounds or spacing");
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
  std::vector<double> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g[i] = t0 + dt * static_cast<double>(i);
  g.back() = t1;
  return g;
}

}  // namespace spsim
