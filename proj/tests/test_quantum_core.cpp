#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "spsim/hilbert.hpp"
#include "spsim/integrator.hpp"
#include "spsim/pulse.hpp"
#include "support/oracles.hpp"

using namespace spsim;
using Catch::Approx;

TEST_CASE("kron basics") {
  CHECK(kron(ops::identity(2), ops::identity(3)).isApprox(ops::identity(6)));

  Mat sz = Mat::Zero(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  const int fock = 3;
  const Mat szI = kron(sz, ops::identity(fock + 1));
  Eigen::SelfAdjointEigenSolver<Mat> es(szI);
  int plus = 0, minus = 0;
  for (int i = 0; i < szI.rows(); ++i) {
    if (es.eigenvalues()(i) > 0) ++plus;
    else --minus;
  }
  CHECK(plus == fock + 1);
  CHECK(-minus == fock + 1);

  const Mat num = ops::destroy(3).adjoint() * ops::destroy(3);  // cutoff 2
  CHECK(kron(num, ops::identity(2)).trace().real() == Approx(6.0));

  Mat rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(kron(rect, ops::identity(2)), ConfigError);
}

TEST_CASE("lindblad dissipator") {
  const HilbertSpace hs{2, 0};
  const auto o = QdOps::build(hs);
  Mat excited = Mat::Zero(2, 2);
  excited(1, 1) = 1.0;

  // L[sigma-] |e><e| = 2|g><g| - 2|e><e|
  Mat expected = Mat::Zero(2, 2);
  expected(0, 0) = 2.0;
  expected(1, 1) = -2.0;
  CHECK(lindblad_dissipator(o.sigma_minus, excited).isApprox(expected, 1e-14));

  // pure dephasing annihilates diagonal states
  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  CHECK(lindblad_dissipator(o.sigma_plus * o.sigma_minus, diag).cwiseAbs().maxCoeff() < 1e-15);

  // trace-annihilating on random unit-trace Hermitian inputs
  std::mt19937 rng(71);
  const HilbertSpace big{2, 3};
  const auto ob = QdOps::build(big);
  for (int rep = 0; rep < 25; ++rep) {
    const Mat rho = oracles::random_hermitian_unit_trace(big.dim(), rng);
    CHECK(std::abs(lindblad_dissipator(ob.a, rho).trace()) < 1e-12);
  }

  CHECK_THROWS_AS(lindblad_dissipator(o.sigma_minus, Mat::Zero(3, 3)), ConfigError);
}

TEST_CASE("propagate: free evolution and analytic decay") {
  const HilbertSpace hs{2, 0};
  const auto o = QdOps::build(hs);

  Mat rho0 = Mat::Zero(2, 2);
  rho0(1, 1) = 1.0;

  SECTION("H = 0, no dissipators") {
    Rhs rhs = [](double, const Mat& rho, Mat& out) { out.setZero(rho.rows(), rho.cols()); };
    const auto traj = propagate(rhs, rho0, uniform_grid(0.0, 5.0, 0.5));
    for (const auto& s : traj.states) CHECK((s - rho0).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("pure decay at rate gamma") {
    const double gamma = 0.37;
    const Mat c = std::sqrt(gamma) * o.sigma_minus;
    Rhs rhs = [&](double, const Mat& rho, Mat& out) { out = 0.5 * lindblad_dissipator(c, rho); };
    DensityChecks checks;
    checks.enabled = true;
    const auto traj = propagate(rhs, rho0, uniform_grid(0.0, 10.0, 0.25), {}, checks);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double pop = expectation(o.sigma_plus * o.sigma_minus, traj.states[i]).real();
      CHECK(pop == Approx(std::exp(-gamma * traj.times[i])).margin(1e-8));
    }
  }

  SECTION("resonant pi pulse inverts the system") {
    const auto pulse = GaussianPulse::make(M_PI, 1.0);
    Mat ground = Mat::Zero(2, 2);
    ground(0, 0) = 1.0;
    Rhs rhs = [&](double t, const Mat& rho, Mat& out) {
      const Mat h = 0.5 * pulse.amplitude(t) * o.sigma_x;
      out = cxd(0, -1) * (h * rho - rho * h);
    };
    const auto traj = propagate(rhs, ground, uniform_grid(0.0, 9.0, 0.5));
    const double inv = expectation(o.sigma_plus * o.sigma_minus, traj.states.back()).real();
    CHECK(inv == Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("dense output accuracy against analytic Rabi rotation") {
  const HilbertSpace hs{2, 0};
  const auto o = QdOps::build(hs);
  const double w = 1.7;  // constant Rabi rate
  Rhs rhs = [&](double, const Mat& rho, Mat& out) {
    const Mat h = 0.5 * w * o.sigma_x;
    out = cxd(0, -1) * (h * rho - rho * h);
  };
  Mat rho0 = Mat::Zero(2, 2);
  rho0(0, 0) = 1.0;

  OdeOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-13;
  double max_err = 0.0;
  integrate_adaptive(rhs, 0.0, 12.0, rho0, opt, [&](const DenseStep& step) {
    for (double frac : {0.25, 0.5, 0.75}) {
      const double t = step.t0 + frac * step.h;
      Mat y(2, 2);
      step.eval(t, y);
      const double pop = y(1, 1).real();
      max_err = std::max(max_err, std::abs(pop - std::pow(std::sin(0.5 * w * t), 2)));
      // projected form agrees with full evaluation
      const auto c = step.project(o.sigma_plus * o.sigma_minus);
      const auto proj = DenseStep::eval_projected(c, frac);
      max_err = std::max(max_err, std::abs(proj.real() - pop));
    }
  });
  CHECK(max_err < 1e-8);
}

TEST_CASE("stiffness guard raises a numerical error with a time stamp") {
  Rhs rhs = [](double t, const Mat& rho, Mat& out) { out = rho / (1.0 - t); };
  Mat y0 = Mat::Ones(1, 1);
  CHECK_THROWS_AS(propagate(rhs, y0, uniform_grid(0.0, 2.0, 0.1)), NumericalError);
  try {
    propagate(rhs, y0, uniform_grid(0.0, 2.0, 0.1));
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("t = ") != std::string::npos);
  }
}

TEST_CASE("liouvillian linearity on random inputs") {
  // any rhs built from commutators/dissipators must be linear; the regression
  // engine relies on this
  const HilbertSpace hs{2, 2};
  const auto o = QdOps::build(hs);
  const Mat c1 = 0.4 * o.sigma_minus, c2 = 0.9 * o.a;
  Rhs rhs = [&](double, const Mat& rho, Mat& out) {
    const Mat h = 0.3 * o.sigma_x + 0.2 * (o.adag * o.sigma_minus + o.a * o.sigma_plus);
    out = cxd(0, -1) * (h * rho - rho * h) + 0.5 * lindblad_dissipator(c1, rho) +
          0.5 * lindblad_dissipator(c2, rho);
  };
  std::mt19937 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Mat x = oracles::random_matrix(hs.dim(), rng);
    const Mat y = oracles::random_matrix(hs.dim(), rng);
    const cxd al(0.7, -0.2), be(-1.1, 0.4);
    Mat lx(hs.dim(), hs.dim()), ly(hs.dim(), hs.dim()), lc(hs.dim(), hs.dim());
    rhs(0.0, x, lx);
    rhs(0.0, y, ly);
    rhs(0.0, (al * x + be * y).eval(), lc);
    CHECK((lc - al * lx - be * ly).cwiseAbs().maxCoeff() < 1e-12);
  }
}
