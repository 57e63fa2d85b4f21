#include "cqsim/model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "cqsim/errors.hpp"

namespace cqsim {

namespace {

bool is_pow2_int(int n) { return n > 0 && (n & (n - 1)) == 0; }

double gaussian_tail_outside(double p0, double sigma, double lo, double hi) {
  const double inv = 1.0 / (sigma * std::numbers::sqrt2);
  return 0.5 * std::erfc((p0 - lo) * inv) + 0.5 * std::erfc((hi - p0) * inv);
}

}  // namespace

MomentumGrid MomentumGrid::make(double p_min, double p_max, int n) {
  if (!(p_min < p_max)) throw ConfigError("momentum grid requires p_min < p_max");
  if (!is_pow2_int(n) || n < 64) {
    throw ConfigError("momentum grid point count must be a power of two and at least 64");
  }
  return {p_min, p_max, n};
}

double MomentumGrid::wavenumber(int k) const {
  const int folded = (k < n / 2) ? k : k - n;
  return 2.0 * std::numbers::pi * folded / length();
}

int MomentumGrid::bin_index(double pv) const {
  const double x = (pv - p_min) / dp() + 0.5;
  if (x < 0.0 || x >= static_cast<double>(n)) return -1;
  const int j = static_cast<int>(x);
  return (j >= 0 && j < n) ? j : -1;
}

void ModelParams::validate() const {
  if (!(hbar > 0.0)) throw ConfigError("hbar must be positive");
  if (gamma_c < 0.0) throw ConfigError("gamma_c must be nonnegative");
  if (gamma_q < 0.0) throw ConfigError("gamma_q must be nonnegative");
  if (!std::isfinite(lambda) || !std::isfinite(q)) {
    throw ConfigError("lambda and q must be finite");
  }
}

void InitialCondition::validate() const {
  if (p_dist == MomentumDist::gaussian && !(sigma_p > 0.0)) {
    throw ConfigError("gaussian momentum distribution requires sigma_p > 0");
  }
  if (!std::isfinite(p0)) throw ConfigError("p0 must be finite");
}

WignerField WignerField::zero(const MomentumGrid& g, double q) {
  WignerField f;
  f.grid = g;
  f.q = q;
  f.values.assign(static_cast<std::size_t>(g.n), ComplexMat2::zero());
  return f;
}

WignerField product_field(const InitialCondition& init, const MomentumGrid& grid, double q) {
  init.validate();
  WignerField f = WignerField::zero(grid, q);
  const double dp = grid.dp();
  if (init.p_dist == MomentumDist::delta) {
    const int j = grid.bin_index(init.p0);
    if (j < 0) throw PreconditionError("delta momentum distribution centered outside the grid");
    f.values[static_cast<std::size_t>(j)] = (1.0 / dp) * init.rho0.matrix();
    return f;
  }
  const double tail = gaussian_tail_outside(init.p0, init.sigma_p, grid.p_min, grid.p_max);
  if (tail > 1e-12) {
    throw PreconditionError(
        "gaussian momentum distribution leaves more than 1e-12 mass outside the grid "
        "(boundary-mass guard)");
  }
  const double norm = 1.0 / (init.sigma_p * std::sqrt(2.0 * std::numbers::pi));
  double sum = 0.0;
  std::vector<double> g(static_cast<std::size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    const double z = (grid.p(j) - init.p0) / init.sigma_p;
    g[static_cast<std::size_t>(j)] = norm * std::exp(-0.5 * z * z);
    sum += g[static_cast<std::size_t>(j)];
  }
  // Exact grid normalization: the quadrature defect is far below the guard
  // already, renormalizing makes downstream conservation checks exact.
  const double scale = 1.0 / (sum * dp);
  for (int j = 0; j < grid.n; ++j) {
    f.values[static_cast<std::size_t>(j)] = (g[static_cast<std::size_t>(j)] * scale) *
                                            init.rho0.matrix();
  }
  return f;
}

WignerField pde_initial_field(const InitialCondition& init, const MomentumGrid& grid, double q) {
  if (init.p_dist == MomentumDist::delta) {
    InitialCondition widened = init;
    widened.p_dist = MomentumDist::gaussian;
    widened.sigma_p = 4.0 * grid.dp();
    return product_field(widened, grid, q);
  }
  return product_field(init, grid, q);
}

double field_normalization(const WignerField& f) {
  double s = 0.0;
  for (const ComplexMat2& v : f.values) s += v.trace().real();
  return s * f.grid.dp();
}

static void require_normalized(const WignerField& f, const char* who) {
  const double norm = field_normalization(f);
  if (std::abs(norm - 1.0) > tol::field_norm) {
    throw PreconditionError(std::string(who) + ": field is not normalized (integral " +
                            format_double(norm) + ")");
  }
}

ComplexMat2 qubit_marginal_raw(const WignerField& f) {
  ComplexMat2 sum;
  for (const ComplexMat2& v : f.values) sum += v;
  return f.grid.dp() * sum;
}

QubitDensity qubit_marginal(const WignerField& f) {
  require_normalized(f, "qubit_marginal");
  ComplexMat2 m = qubit_marginal_raw(f);
  m = (1.0 / m.trace().real()) * m;  // exact unit trace after the tolerance check
  return QubitDensity::from_matrix(m);
}

std::vector<double> momentum_marginal(const WignerField& f) {
  require_normalized(f, "momentum_marginal");
  std::vector<double> w(f.values.size());
  double scale = 0.0;
  for (const ComplexMat2& v : f.values) scale = std::max(scale, v.max_abs());
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    const cplx tr = f.values[j].trace();
    if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, scale)) {
      throw InternalError("momentum_marginal: trace has an imaginary residue beyond tolerance");
    }
    w[j] = tr.real();
  }
  return w;
}

FieldMinEig field_min_eigenvalue(const WignerField& f) {
  FieldMinEig best;
  best.value = min_eigenvalue(f.values[0].hermitian_part());
  best.index = 0;
  for (int j = 1; j < f.grid.n; ++j) {
    const double e = min_eigenvalue(f.values[static_cast<std::size_t>(j)].hermitian_part());
    if (e < best.value) {
      best.value = e;
      best.index = j;
    }
  }
  best.p = f.grid.p(best.index);
  return best;
}

double field_l1_distance(const WignerField& a, const WignerField& b) {
  if (!(a.grid == b.grid)) throw ConfigError("field_l1_distance: grids differ");
  double s = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    const ComplexMat2 d = (a.values[j] - b.values[j]).hermitian_part();
    // Trace norm of a Hermitian 2x2: |mid + half| + |mid - half|.
    const double mid = 0.5 * (d.m00.real() + d.m11.real());
    const double half = std::hypot(0.5 * (d.m00.real() - d.m11.real()), std::abs(d.m01));
    s += std::abs(mid + half) + std::abs(mid - half);
  }
  return s * a.grid.dp();
}

WignerField coarse_grain(const WignerField& f, int factor) {
  if (factor < 1 || f.grid.n % factor != 0) {
    throw ConfigError("coarse_grain: factor must divide the grid point count");
  }
  const int m = f.grid.n / factor;
  WignerField out = WignerField::zero(MomentumGrid::make(f.grid.p_min, f.grid.p_max, m), f.q);
  const int half = factor / 2;
  for (int big = 0; big < m; ++big) {
    ComplexMat2 sum;
    for (int r = 0; r < factor; ++r) {
      // Fine points in the centered coarse cell, wrapping periodically.
      const int j = (big * factor - half + r + f.grid.n) % f.grid.n;
      sum += f.values[static_cast<std::size_t>(j)];
    }
    out.values[static_cast<std::size_t>(big)] = (1.0 / factor) * sum;
  }
  return out;
}

WignerField conjugate_field(const WignerField& f, const ComplexMat2& u) {
  WignerField out = f;
  const ComplexMat2 ud = u.adjoint();
  for (ComplexMat2& v : out.values) v = ud * v * u;
  return out;
}

void hermitize_field(WignerField& f) {
  for (ComplexMat2& v : f.values) v = v.hermitian_part();
}

MarginalMoments marginal_moments(const WignerField& f) {
  double mass = 0.0, mean = 0.0;
  for (int j = 0; j < f.grid.n; ++j) {
    const double w = f.values[static_cast<std::size_t>(j)].trace().real();
    mass += w;
    mean += w * f.grid.p(j);
  }
  if (!(mass > 0.0)) throw PreconditionError("marginal_moments: field carries no mass");
  mean /= mass;
  double var = 0.0;
  for (int j = 0; j < f.grid.n; ++j) {
    const double w = f.values[static_cast<std::size_t>(j)].trace().real();
    const double d = f.grid.p(j) - mean;
    var += w * d * d;
  }
  var /= mass;
  return {mean, var};
}

void check_propagation_window(const WignerField& f, const ModelParams& params, double t,
                              double extra_variance) {
  const MarginalMoments m = marginal_moments(f);
  const double amax = std::max(std::abs(params.coupling.a0()), std::abs(params.coupling.a1()));
  const double shift = std::abs(params.lambda) * amax * t;
  const double spread = 6.0 * std::sqrt(std::max(0.0, m.variance + extra_variance));
  const double lo = m.mean - shift - spread;
  const double hi = m.mean + shift + spread;
  if (lo < f.grid.p_min || hi > f.grid.p_max - f.grid.dp()) {
    throw PreconditionError(
        "boundary guard: propagation would push the packet against the periodic grid edge "
        "(reachable span [" +
        format_double(lo) + ", " + format_double(hi) + "] vs grid [" +
        format_double(f.grid.p_min) + ", " + format_double(f.grid.p_max) + "))");
  }
}

std::string format_double(double v) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw InternalError("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

void write_field_csv(const WignerField& f, const ModelParams& params, double t,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  const ComplexMat2& a = params.coupling.matrix();
  out << "# operator-valued momentum field snapshot\n";
  out << "# t=" << format_double(t) << " q=" << format_double(f.q) << "\n";
  out << "# lambda=" << format_double(params.lambda) << " hbar=" << format_double(params.hbar)
      << " gamma_c=" << format_double(params.gamma_c)
      << " gamma_q=" << format_double(params.gamma_q) << "\n";
  out << "# coupling a00=" << format_double(a.m00.real())
      << " a11=" << format_double(a.m11.real()) << " a01_re=" << format_double(a.m01.real())
      << " a01_im=" << format_double(a.m01.imag()) << "\n";
  out << "# p_min=" << format_double(f.grid.p_min) << " p_max=" << format_double(f.grid.p_max)
      << " n=" << f.grid.n << "\n";
  out << "p,re00,im00,re01,im01,re10,im10,re11,im11\n";
  for (int j = 0; j < f.grid.n; ++j) {
    const ComplexMat2& v = f.values[static_cast<std::size_t>(j)];
    out << format_double(f.grid.p(j)) << ',' << format_double(v.m00.real()) << ','
        << format_double(v.m00.imag()) << ',' << format_double(v.m01.real()) << ','
        << format_double(v.m01.imag()) << ',' << format_double(v.m10.real()) << ','
        << format_double(v.m10.imag()) << ',' << format_double(v.m11.real()) << ','
        << format_double(v.m11.imag()) << '\n';
  }
  if (!out) throw InternalError("write_field_csv: stream failure on " + path);
}

}  // namespace cqsim
