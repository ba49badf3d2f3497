#pragma once

// Composed QD (x) cavity Hilbert space and dense operator algebra.
//
// Basis ordering is fixed: QD index major, Fock index minor, i.e. the basis
// state |s, n> maps to index s * (N+1) + n where N is the Fock cutoff.
// QD level indices: 0 = g, 1 = x, 2 = y, 3 = xx (two-level systems keep g, x).
// fock_cutoff = 0 means the cavity mode is not part of the system.

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "spsim/errors.hpp"

namespace spsim {

using Mat = Eigen::MatrixXcd;
using cxd = std::complex<double>;

struct HilbertSpace {
  int qd_levels = 2;    // 2 or 4
  int fock_cutoff = 0;  // 0 = no cavity mode at the system level

  bool has_cavity() const { return fock_cutoff > 0; }
  int fock_dim() const { return has_cavity() ? fock_cutoff + 1 : 1; }
  int dim() const { return qd_levels * fock_dim(); }

  void validate() const {
    if (qd_levels != 2 && qd_levels != 4) throw ConfigError("qd_levels must be 2 or 4");
    if (fock_cutoff < 0) throw ConfigError("fock_cutoff must be >= 0");
    if (dim() < 2) throw ConfigError("Hilbert space dimension must be >= 2");
  }
};

inline Mat kron(const Mat& a, const Mat& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw ConfigError("kron: operands must be square");
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// L[O] rho = 2 O rho O^dag - O^dag O rho - rho O^dag O. Callers apply the
// 1/2 rate prefactor. Trace-annihilating on any input.
inline Mat lindblad_dissipator(const Mat& op, const Mat& rho) {
  if (op.rows() != rho.rows() || op.cols() != rho.cols())
    throw ConfigError("lindblad_dissipator: shape mismatch");
  const Mat od = op.adjoint();
  const Mat odo = od * op;
  return 2.0 * op * rho * od - odo * rho - rho * odo;
}

namespace ops {

inline Mat identity(int n) { return Mat::Identity(n, n); }

inline Mat ket_bra(int dim, int ket, int bra) {
  Mat m = Mat::Zero(dim, dim);
  m(ket, bra) = 1.0;
  return m;
}

inline Mat destroy(int fock_dim) {
  Mat a = Mat::Zero(fock_dim, fock_dim);
  for (int n = 1; n < fock_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace ops

// All elementary operators embedded on the composed space.
struct QdOps {
  HilbertSpace space;
  Mat sigma_minus, sigma_plus, sigma_x, sigma_y;  // g-x pseudospin
  Mat proj_x, proj_y, proj_xx;
  Mat xx_from_x, x_from_xx;  // |xx><x|, |x><xx|
  Mat x_from_y_decay, y_from_xx, g_from_y;
  Mat a, adag, n_photon, n2_photon;  // n2 = a^dag a^dag a a

  static QdOps build(const HilbertSpace& hs) {
    hs.validate();
    QdOps o;
    o.space = hs;
    const int q = hs.qd_levels;
    const int f = hs.fock_dim();
    const Mat iq = ops::identity(q);
    const Mat fi = ops::identity(f);

    auto embed_qd = [&](const Mat& local) { return kron(local, fi); };
    o.sigma_minus = embed_qd(ops::ket_bra(q, 0, 1));
    o.sigma_plus = embed_qd(ops::ket_bra(q, 1, 0));
    o.sigma_x = o.sigma_plus + o.sigma_minus;
    o.sigma_y = cxd(0, 1) * (o.sigma_minus - o.sigma_plus);
    o.proj_x = embed_qd(ops::ket_bra(q, 1, 1));
    if (q == 4) {
      o.proj_y = embed_qd(ops::ket_bra(q, 2, 2));
      o.proj_xx = embed_qd(ops::ket_bra(q, 3, 3));
      o.xx_from_x = embed_qd(ops::ket_bra(q, 3, 1));
      o.x_from_xx = embed_qd(ops::ket_bra(q, 1, 3));
      o.y_from_xx = embed_qd(ops::ket_bra(q, 2, 3));
      o.g_from_y = embed_qd(ops::ket_bra(q, 0, 2));
    } else {
      o.proj_y = o.proj_xx = o.xx_from_x = o.x_from_xx = o.y_from_xx = o.g_from_y =
          Mat::Zero(hs.dim(), hs.dim());
    }
    if (hs.has_cavity()) {
      const Mat al = ops::destroy(f);
      o.a = kron(iq, al);
      o.adag = o.a.adjoint();
      o.n_photon = o.adag * o.a;
      o.n2_photon = o.adag * o.adag * o.a * o.a;
    } else {
      o.a = o.adag = o.n_photon = o.n2_photon = Mat::Zero(hs.dim(), hs.dim());
    }
    return o;
  }
};

inline cxd expectation(const Mat& observable, const Mat& rho) {
  return (observable * rho).trace();
}

}  // namespace spsim
