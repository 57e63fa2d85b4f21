#pragma once

#include <complex>

#include "cqsim/errors.hpp"

namespace cqsim {

using cplx = std::complex<double>;

// Shared numeric tolerances.  Every structural check in the library reads
// from this table so there is a single point of tuning.
namespace tol {
inline constexpr double hermiticity = 1e-12;      // Hermiticity defect, relative to matrix scale
inline constexpr double unit_trace = 1e-10;       // |tr(rho) - 1| for density matrices
inline constexpr double psd_slack = 1e-9;         // eigenvalue slack in positivity checks
inline constexpr double field_norm = 1e-8;        // field normalization defect
inline constexpr double exact_positivity = 1e-6;  // positivity monitor on the exact open solver
}  // namespace tol

// Dense 2x2 complex matrix with value semantics, row-major:
//   [ m00  m01 ]
//   [ m10  m11 ]
struct ComplexMat2 {
  cplx m00{}, m01{}, m10{}, m11{};

  static ComplexMat2 zero() { return {}; }
  static ComplexMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static ComplexMat2 diag(cplx a, cplx d) { return {a, 0.0, 0.0, d}; }
  static ComplexMat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
  static ComplexMat2 pauli_y() { return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
  static ComplexMat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

  cplx trace() const { return m00 + m11; }
  cplx det() const { return m00 * m11 - m01 * m10; }
  ComplexMat2 adjoint() const;
  ComplexMat2 hermitian_part() const;  // (M + M^dag)/2
  double max_abs() const;              // largest entry magnitude
  double hermiticity_defect() const;   // largest entry magnitude of M - M^dag
  // Defect below tol::hermiticity relative to max(1, scale of the matrix).
  bool is_hermitian() const;
};

ComplexMat2 operator+(const ComplexMat2& x, const ComplexMat2& y);
ComplexMat2 operator-(const ComplexMat2& x, const ComplexMat2& y);
ComplexMat2 operator*(const ComplexMat2& x, const ComplexMat2& y);
ComplexMat2 operator*(cplx s, const ComplexMat2& x);
ComplexMat2 operator*(double s, const ComplexMat2& x);
ComplexMat2& operator+=(ComplexMat2& x, const ComplexMat2& y);
ComplexMat2& operator-=(ComplexMat2& x, const ComplexMat2& y);

ComplexMat2 commutator(const ComplexMat2& x, const ComplexMat2& y);      // XY - YX
ComplexMat2 anticommutator(const ComplexMat2& x, const ComplexMat2& y);  // XY + YX

// Eigenvalues of a Hermitian matrix from the closed-form 2x2 characteristic
// polynomial, evaluated in the numerically stable hypot form.  Throws
// InternalError when the input is not Hermitian within tolerance.
double min_eigenvalue(const ComplexMat2& m);
double max_eigenvalue(const ComplexMat2& m);

// Hermitian observable with its spectral decomposition computed once, in
// closed form, at construction:
//   matrix = eigenbasis * diag(a0, a1) * eigenbasis^dag
// For a (possibly degenerate) diagonal matrix the eigenbasis is the identity
// and a0, a1 keep the storage order; otherwise eigenvalues are ordered
// a0 >= a1 and the eigenbasis columns are the corresponding unit vectors.
class Observable {
 public:
  static Observable from_matrix(const ComplexMat2& m);  // ConfigError if not Hermitian
  static Observable sigma_z() { return {}; }
  static Observable sigma_x();

  const ComplexMat2& matrix() const { return matrix_; }
  double a0() const { return a0_; }
  double a1() const { return a1_; }
  const ComplexMat2& eigenbasis() const { return basis_; }
  bool diagonal() const { return diagonal_; }
  double eig_max() const { return a0_ > a1_ ? a0_ : a1_; }
  double eig_min() const { return a0_ > a1_ ? a1_ : a0_; }
  double gap() const { return eig_max() - eig_min(); }

 private:
  Observable() = default;
  ComplexMat2 matrix_ = ComplexMat2::pauli_z();
  ComplexMat2 basis_ = ComplexMat2::identity();
  double a0_ = 1.0;
  double a1_ = -1.0;
  bool diagonal_ = true;
};

// Validated qubit density matrix: Hermitian within tolerance, unit trace,
// positive semidefinite within the shared slack.
class QubitDensity {
 public:
  static QubitDensity from_matrix(const ComplexMat2& m);  // ConfigError on violation
  static QubitDensity from_bloch(double bx, double by, double bz);
  static QubitDensity maximally_mixed() { return QubitDensity(0.5 * ComplexMat2::identity()); }
  static QubitDensity plus_state() { return from_bloch(1.0, 0.0, 0.0); }
  static QubitDensity basis_state(int k);  // k = 0 or 1

  const ComplexMat2& matrix() const { return m_; }
  double bloch_x() const { return 2.0 * m_.m01.real(); }
  double bloch_y() const { return -2.0 * m_.m01.imag(); }
  double bloch_z() const { return (m_.m00 - m_.m11).real(); }

 private:
  explicit QubitDensity(const ComplexMat2& m) : m_(m) {}
  ComplexMat2 m_;
};

// Re tr(a * rho) for Hermitian a; the imaginary residue is asserted below
// tolerance and discarded.
double expectation(const ComplexMat2& a, const ComplexMat2& rho);
double expectation(const Observable& a, const QubitDensity& rho);

// tr(rho^2), real part.
double purity(const ComplexMat2& rho);
double purity(const QubitDensity& rho);

// Half the sum of |eigenvalues| of the (Hermitian) difference r1 - r2.
double trace_distance(const ComplexMat2& r1, const ComplexMat2& r2);
double trace_distance(const QubitDensity& r1, const QubitDensity& r2);

}  // namespace cqsim
