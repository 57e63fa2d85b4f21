#pragma once

#include <string>
#include <vector>

#include "cqsim/qmat.hpp"

namespace cqsim {

// Uniform periodic momentum grid: p_j = p_min + j*dp for j in [0, n), with
// dp = (p_max - p_min)/n.  The right endpoint is excluded (it aliases p_min
// under periodicity).  Histogram cells are centered on the grid points:
// cell j covers [p_j - dp/2, p_j + dp/2).
struct MomentumGrid {
  double p_min = -20.0;
  double p_max = 20.0;
  int n = 1024;

  // Validates: p_min < p_max, n a power of two, n >= 64.
  static MomentumGrid make(double p_min, double p_max, int n);

  double length() const { return p_max - p_min; }
  double dp() const { return length() / n; }
  double p(int j) const { return p_min + j * dp(); }
  // Spectral wavenumber of transform bin k, standard periodic ordering:
  // k < n/2 maps to 2*pi*k/L, the rest to the negative branch.
  double wavenumber(int k) const;
  // Index of the centered cell containing p, or -1 if p falls outside
  // [p_min - dp/2, p_max - dp/2).
  int bin_index(double p) const;
  bool operator==(const MomentumGrid&) const = default;
};

// Physical parameters of the qubit/heavy-particle model at frozen position q.
// The qubit couples through the 'coupling' observable with strength lambda;
// gamma_c is classical momentum diffusion, gamma_q is qubit dephasing.
struct ModelParams {
  double lambda = 1.0;  // drift per unit of the coupling expectation
  double hbar = 1.0;
  double gamma_c = 0.0;  // momentum diffusion rate (momentum^2 per time)
  double gamma_q = 0.0;  // dephasing rate in the coupling eigenbasis (per time)
  double q = 0.0;        // frozen classical position
  Observable coupling = Observable::sigma_z();

  void validate() const;  // ConfigError on hbar <= 0 or negative rates
};

enum class MomentumDist { gaussian, delta };

struct InitialCondition {
  QubitDensity rho0 = QubitDensity::plus_state();
  MomentumDist p_dist = MomentumDist::gaussian;
  double p0 = 0.0;
  double sigma_p = 1.0;

  void validate() const;  // ConfigError on sigma_p <= 0 for the gaussian variant
};

// One sample of the coupled dynamics: classical momentum plus conditional
// qubit state.  rho is stored as a raw matrix because the stochastic scheme
// is allowed to push it slightly outside the validated density class; that
// excursion is a monitored diagnostic, not a programming error.
struct TrajectoryState {
  double t = 0.0;
  double p = 0.0;
  ComplexMat2 rho = QubitDensity::plus_state().matrix();
};

// Operator-valued momentum distribution at frozen position q: one 2x2 matrix
// per grid point.  Physical fields are pointwise Hermitian and integrate to
// unit trace; pointwise positivity is monitored, not enforced (the closed
// dynamics deliberately violates it).
struct WignerField {
  MomentumGrid grid;
  double q = 0.0;
  std::vector<ComplexMat2> values;

  static WignerField zero(const MomentumGrid& g, double q);
};

// rho0 (x) f(p) product field.  The gaussian profile is sampled pointwise and
// then normalized exactly on the grid; the delta profile puts all mass in the
// single cell containing p0 (trace 1/dp there).  PreconditionError when the
// gaussian leaves more than 1e-12 mass outside the grid or the delta center
// falls outside it.
WignerField product_field(const InitialCondition& init, const MomentumGrid& grid, double q);

// Same, but suitable for the spectral solvers: a delta distribution is
// widened to a narrow gaussian (sigma_p = 4*dp) the periodic spectral basis
// can represent without ringing.
WignerField pde_initial_field(const InitialCondition& init, const MomentumGrid& grid, double q);

// Integral of tr(values) over the grid (1 for a normalized field).
double field_normalization(const WignerField& f);

// Integral of the field over momentum, validated as a density matrix.
// PreconditionError when the field is not normalized within tolerance.
QubitDensity qubit_marginal(const WignerField& f);

// Same integral without the density validation; for diagnostics on fields
// that are allowed to carry statistical noise.
ComplexMat2 qubit_marginal_raw(const WignerField& f);

// tr(values[j]) per grid point; PreconditionError when the field is not
// normalized, InternalError when a trace has an imaginary residue.
std::vector<double> momentum_marginal(const WignerField& f);

struct FieldMinEig {
  double value = 0.0;
  int index = 0;
  double p = 0.0;
};

// Minimum over grid points of the pointwise minimum eigenvalue, with its
// location; ties break toward the smallest p.
FieldMinEig field_min_eigenvalue(const WignerField& f);

// Integral of the pointwise trace norm of the difference; the natural L1
// metric between operator-valued distributions.
double field_l1_distance(const WignerField& a, const WignerField& b);

// Block-average onto a grid with n/factor points.  Blocks are centered on the
// coarse grid points (cell-aligned with bin_index), wrapping periodically at
// the ends.  factor must divide n; the coarse point count must still be a
// valid grid size.
WignerField coarse_grain(const WignerField& f, int factor);

// Pointwise frame change: each value v becomes u^dag * v * u.
WignerField conjugate_field(const WignerField& f, const ComplexMat2& u);

// Replace each value by its Hermitian part.
void hermitize_field(WignerField& f);

struct MarginalMoments {
  double mean = 0.0;
  double variance = 0.0;
};

MarginalMoments marginal_moments(const WignerField& f);

// Boundary guard for the periodic spectral solvers: the drifted packet
// (mean shift |lambda|*max|eig|*t) plus a six-sigma spread (current marginal
// variance plus extra_variance) must stay inside the grid.  Throws
// PreconditionError naming the violation.
void check_propagation_window(const WignerField& f, const ModelParams& params, double t,
                              double extra_variance);

// Deterministic shortest-round-trip decimal rendering shared by all writers.
std::string format_double(double v);

// CSV serialization: comment header (t, q, parameter echo, grid), then one
// row per grid point with columns
//   p,re00,im00,re01,im01,re10,im10,re11,im11
void write_field_csv(const WignerField& f, const ModelParams& params, double t,
                     const std::string& path);

}  // namespace cqsim
