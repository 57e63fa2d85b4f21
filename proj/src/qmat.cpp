#include "cqsim/qmat.hpp"

#include <algorithm>
#include <cmath>

namespace cqsim {

namespace {

double herm_scale(const ComplexMat2& m) { return std::max(1.0, m.max_abs()); }

// Eigenvalue midpoint and half-spread of the Hermitian part.  Off-diagonal
// taken as the Hermitian average so nearly-Hermitian input is handled
// gracefully after the defect check.
struct EigSplit {
  double mid;
  double half;
};

EigSplit eig_split(const ComplexMat2& m) {
  const double a = m.m00.real();
  const double d = m.m11.real();
  const cplx c = 0.5 * (m.m01 + std::conj(m.m10));
  return {0.5 * (a + d), std::hypot(0.5 * (a - d), std::abs(c))};
}

void require_hermitian(const ComplexMat2& m, const char* who) {
  if (!m.is_hermitian()) {
    throw InternalError(std::string(who) + ": matrix is not Hermitian within tolerance");
  }
}

}  // namespace

ComplexMat2 ComplexMat2::adjoint() const {
  return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
}

ComplexMat2 ComplexMat2::hermitian_part() const {
  const ComplexMat2 a = adjoint();
  return {0.5 * (m00 + a.m00), 0.5 * (m01 + a.m01), 0.5 * (m10 + a.m10), 0.5 * (m11 + a.m11)};
}

double ComplexMat2::max_abs() const {
  return std::max(std::max(std::abs(m00), std::abs(m01)), std::max(std::abs(m10), std::abs(m11)));
}

double ComplexMat2::hermiticity_defect() const {
  const ComplexMat2 a = adjoint();
  return std::max(std::max(std::abs(m00 - a.m00), std::abs(m01 - a.m01)),
                  std::max(std::abs(m10 - a.m10), std::abs(m11 - a.m11)));
}

bool ComplexMat2::is_hermitian() const {
  return hermiticity_defect() <= tol::hermiticity * herm_scale(*this);
}

ComplexMat2 operator+(const ComplexMat2& x, const ComplexMat2& y) {
  return {x.m00 + y.m00, x.m01 + y.m01, x.m10 + y.m10, x.m11 + y.m11};
}

ComplexMat2 operator-(const ComplexMat2& x, const ComplexMat2& y) {
  return {x.m00 - y.m00, x.m01 - y.m01, x.m10 - y.m10, x.m11 - y.m11};
}

ComplexMat2 operator*(const ComplexMat2& x, const ComplexMat2& y) {
  return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
          x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
}

ComplexMat2 operator*(cplx s, const ComplexMat2& x) {
  return {s * x.m00, s * x.m01, s * x.m10, s * x.m11};
}

ComplexMat2 operator*(double s, const ComplexMat2& x) { return cplx(s, 0.0) * x; }

ComplexMat2& operator+=(ComplexMat2& x, const ComplexMat2& y) { return x = x + y; }

ComplexMat2& operator-=(ComplexMat2& x, const ComplexMat2& y) { return x = x - y; }

ComplexMat2 commutator(const ComplexMat2& x, const ComplexMat2& y) { return x * y - y * x; }

ComplexMat2 anticommutator(const ComplexMat2& x, const ComplexMat2& y) { return x * y + y * x; }

double min_eigenvalue(const ComplexMat2& m) {
  require_hermitian(m, "min_eigenvalue");
  const EigSplit s = eig_split(m);
  return s.mid - s.half;
}

double max_eigenvalue(const ComplexMat2& m) {
  require_hermitian(m, "max_eigenvalue");
  const EigSplit s = eig_split(m);
  return s.mid + s.half;
}

Observable Observable::from_matrix(const ComplexMat2& m) {
  const double scale = herm_scale(m);
  if (m.hermiticity_defect() > tol::hermiticity * scale) {
    throw ConfigError("observable matrix is not Hermitian within tolerance");
  }
  const ComplexMat2 h = m.hermitian_part();
  Observable obs;
  obs.matrix_ = h;
  if (std::abs(h.m01) <= tol::hermiticity * scale) {
    // Diagonal (including degenerate): keep storage order, identity basis.
    obs.a0_ = h.m00.real();
    obs.a1_ = h.m11.real();
    obs.basis_ = ComplexMat2::identity();
    obs.diagonal_ = true;
  } else {
    const double alpha = h.m00.real();
    const double beta = h.m11.real();
    const cplx c = h.m01;
    const EigSplit s = eig_split(h);
    obs.a0_ = s.mid + s.half;
    obs.a1_ = s.mid - s.half;
    obs.diagonal_ = false;
    // Eigenvector of the larger eigenvalue; the branch keeps the dominant
    // component away from catastrophic cancellation.
    cplx v0, v1;
    if (beta >= alpha) {
      v0 = c;
      v1 = cplx(obs.a0_ - alpha, 0.0);
    } else {
      v0 = cplx(obs.a0_ - beta, 0.0);
      v1 = std::conj(c);
    }
    const double norm = std::hypot(std::abs(v0), std::abs(v1));
    v0 /= norm;
    v1 /= norm;
    // Second column: the orthonormal complement (automatically the other
    // eigenvector for a Hermitian matrix).
    obs.basis_ = {v0, -std::conj(v1), v1, std::conj(v0)};
  }
  // Reconstruction check guards the decomposition itself.
  const ComplexMat2 d = ComplexMat2::diag(obs.a0_, obs.a1_);
  const ComplexMat2 rebuilt = obs.basis_ * d * obs.basis_.adjoint();
  if ((rebuilt - h).max_abs() > 1e-10 * scale) {
    throw InternalError("observable eigendecomposition failed its reconstruction check");
  }
  return obs;
}

Observable Observable::sigma_x() { return from_matrix(ComplexMat2::pauli_x()); }

QubitDensity QubitDensity::from_matrix(const ComplexMat2& m) {
  if (m.hermiticity_defect() > tol::hermiticity * herm_scale(m)) {
    throw ConfigError("density matrix is not Hermitian within tolerance");
  }
  const ComplexMat2 h = m.hermitian_part();
  if (std::abs(h.trace() - cplx(1.0)) > tol::unit_trace) {
    throw ConfigError("density matrix trace differs from 1 beyond tolerance");
  }
  if (min_eigenvalue(h) < -tol::psd_slack) {
    throw ConfigError("density matrix has a negative eigenvalue beyond tolerance");
  }
  return QubitDensity(h);
}

QubitDensity QubitDensity::from_bloch(double bx, double by, double bz) {
  const double len = std::sqrt(bx * bx + by * by + bz * bz);
  if (len > 1.0 + 2.0 * tol::psd_slack) {
    throw ConfigError("Bloch vector longer than 1: not a physical qubit state");
  }
  const ComplexMat2 m = {cplx(0.5 * (1.0 + bz), 0.0), cplx(0.5 * bx, -0.5 * by),
                         cplx(0.5 * bx, 0.5 * by), cplx(0.5 * (1.0 - bz), 0.0)};
  return QubitDensity(m);
}

QubitDensity QubitDensity::basis_state(int k) {
  if (k != 0 && k != 1) throw ConfigError("basis_state index must be 0 or 1");
  return QubitDensity(k == 0 ? ComplexMat2::diag(1.0, 0.0) : ComplexMat2::diag(0.0, 1.0));
}

double expectation(const ComplexMat2& a, const ComplexMat2& rho) {
  if (a.hermiticity_defect() > tol::hermiticity * herm_scale(a)) {
    throw InternalError("expectation: observable is not Hermitian within tolerance");
  }
  const cplx tr = (a * rho).trace();
  const double scale = std::max(1.0, a.max_abs() * rho.max_abs());
  if (std::abs(tr.imag()) > 1e-12 * scale) {
    throw InternalError("expectation: imaginary residue beyond tolerance");
  }
  return tr.real();
}

double expectation(const Observable& a, const QubitDensity& rho) {
  return expectation(a.matrix(), rho.matrix());
}

double purity(const ComplexMat2& rho) { return (rho * rho).trace().real(); }

double purity(const QubitDensity& rho) { return purity(rho.matrix()); }

double trace_distance(const ComplexMat2& r1, const ComplexMat2& r2) {
  const ComplexMat2 d = (r1 - r2).hermitian_part();
  const EigSplit s = eig_split(d);
  return 0.5 * (std::abs(s.mid + s.half) + std::abs(s.mid - s.half));
}

double trace_distance(const QubitDensity& r1, const QubitDensity& r2) {
  return trace_distance(r1.matrix(), r2.matrix());
}

}  // namespace cqsim
