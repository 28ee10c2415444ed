#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they check: a Cartesian-basis assembly of the Jahn-Teller Hamiltonian, a
// brute-force uncoupled-basis spin Hamiltonian, and small numeric helpers.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------------------
// Cartesian product-basis DJT Hamiltonian: electronic {X, Y} ⊗ |nx⟩|ny⟩ with
// nx+ny <= cutoff, H = ħω(nx+ny+1) + F(x σz + y σx) + G[−(x²−y²)σz + 2xy σx],
// x = (a+a†)/√2. Matrix elements written from the harmonic-oscillator rules.
// ---------------------------------------------------------------------------

struct CartesianState {
  int s;   // 0 = X, 1 = Y
  int nx;
  int ny;
};

inline std::vector<CartesianState> cartesian_basis(int cutoff) {
  std::vector<CartesianState> basis;
  for (int s = 0; s < 2; ++s)
    for (int tot = 0; tot <= cutoff; ++tot)
      for (int nx = 0; nx <= tot; ++nx) basis.push_back({s, nx, tot - nx});
  return basis;
}

inline double x_elem(int n_to, int n_from) {
  if (n_to == n_from + 1) return std::sqrt(0.5 * (n_from + 1));
  if (n_to == n_from - 1) return std::sqrt(0.5 * n_from);
  return 0.0;
}

inline double x2_elem(int n_to, int n_from) {
  if (n_to == n_from) return n_from + 0.5;
  if (n_to == n_from + 2) return 0.5 * std::sqrt(double(n_from + 1) * (n_from + 2));
  if (n_to == n_from - 2) return 0.5 * std::sqrt(double(n_from) * (n_from - 1));
  return 0.0;
}

inline Eigen::MatrixXd cartesian_hamiltonian(double f, double g, double homega, int cutoff) {
  const auto basis = cartesian_basis(cutoff);
  const int dim = static_cast<int>(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double sz[2][2] = {{1.0, 0.0}, {0.0, -1.0}};
  const double sx[2][2] = {{0.0, 1.0}, {1.0, 0.0}};
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const auto& a = basis[i];
      const auto& b = basis[j];
      double v = 0.0;
      if (i == j) v += homega * (b.nx + b.ny + 1);
      if (a.ny == b.ny) {
        v += f * x_elem(a.nx, b.nx) * sz[a.s][b.s];
        v -= g * x2_elem(a.nx, b.nx) * sz[a.s][b.s];
      }
      if (a.nx == b.nx) {
        v += f * x_elem(a.ny, b.ny) * sx[a.s][b.s];
        v += g * x2_elem(a.ny, b.ny) * sz[a.s][b.s];
      }
      v += 2.0 * g * x_elem(a.nx, b.nx) * x_elem(a.ny, b.ny) * sx[a.s][b.s];
      h(i, j) += v;
    }
  }
  return h;
}

// Electronic operator |E+⟩⟨E+| − |E−⟩⟨E−| in the real {X, Y} basis (σy).
inline Eigen::MatrixXcd cartesian_sigma_el(int cutoff) {
  const auto basis = cartesian_basis(cutoff);
  const int dim = static_cast<int>(basis.size());
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (basis[i].nx == basis[j].nx && basis[i].ny == basis[j].ny) {
        if (basis[i].s == 0 && basis[j].s == 1) op(i, j) = std::complex<double>(0.0, -1.0);
        if (basis[i].s == 1 && basis[j].s == 0) op(i, j) = std::complex<double>(0.0, 1.0);
      }
  return op;
}

// Ham factor from the Cartesian assembly: largest eigenvalue of the σ_el
// block over the two lowest eigenvectors.
inline double cartesian_ham_factor(double f, double g, double homega, int cutoff) {
  const Eigen::MatrixXd h = cartesian_hamiltonian(f, g, homega, cutoff);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXcd sel = cartesian_sigma_el(cutoff);
  Eigen::Matrix2cd block;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Eigen::VectorXcd va = es.eigenvectors().col(a).cast<std::complex<double>>();
      const Eigen::VectorXcd vb = es.eigenvectors().col(b).cast<std::complex<double>>();
      block(a, b) = va.adjoint() * sel * vb;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> bs(block);
  return bs.eigenvalues()(1);
}

// ---------------------------------------------------------------------------
// Brute-force spin Hamiltonian in the uncoupled |ms⟩⊗|mI⟩ basis built from
// the ladder identity A⊥(SxIx + SyIy) = (A⊥/2)(S+I− + S−I+), elementwise.
// Energies in GHz, A in MHz, field along z in tesla.
// ---------------------------------------------------------------------------

inline Eigen::MatrixXcd brute_force_spin_hamiltonian(double g_par, double b_tesla,
                                                     double mu_b_ghz_per_t, int twice_i,
                                                     double a_par_mhz, double a_perp_mhz) {
  const int ni = twice_i + 1;
  const int dim = 2 * ni;
  const double a_par = a_par_mhz * 1e-3;
  const double a_perp = a_perp_mhz * 1e-3;
  const double spin_i = 0.5 * twice_i;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  auto idx = [ni](int a, int b) { return a * ni + b; };  // a: 0=up; b: mI = I - b
  for (int a = 0; a < 2; ++a) {
    const double ms = a == 0 ? 0.5 : -0.5;
    for (int b = 0; b < ni; ++b) {
      const double mi = spin_i - b;
      h(idx(a, b), idx(a, b)) += g_par * mu_b_ghz_per_t * b_tesla * ms + a_par * ms * mi;
      // (A⊥/2) S+ I−: ms −1/2 → +1/2, mi → mi−1
      if (a == 1 && b + 1 < ni) {
        const double amp = 0.5 * a_perp * std::sqrt(spin_i * (spin_i + 1.0) - mi * (mi - 1.0));
        h(idx(0, b + 1), idx(1, b)) += amp;
        h(idx(1, b), idx(0, b + 1)) += amp;
      }
    }
  }
  return h;
}

// Least-squares slope of y over x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles
