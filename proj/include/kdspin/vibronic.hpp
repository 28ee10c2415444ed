#pragma once

/// Exact diagonalization of the quadratic E⊗e dynamic Jahn-Teller
/// Hamiltonian in a truncated electron⊗phonon basis, and the Ham reduction
/// factor p of the ground vibronic doublet.
///
/// The phonon modes are the circular (angular-momentum) combinations
/// a± = (a_x ∓ i a_y)/√2, so |n, m⟩ carries n quanta of a₊ and m of a₋ and
/// the electronic states E± (orbital angular momentum ±1) stay good labels.
/// In this basis the Hamiltonian
///
///   H = ħω(n̂₊ + n̂₋ + 1)
///     + F [(a₊ + a₋†)σ₊ + (a₋ + a₊†)σ₋]
///     − G [(a₋ + a₊†)²σ₊ + (a₊ + a₋†)²σ₋]
///
/// is real symmetric and conserves the vibronic angular-momentum class
/// j = n − m + σ/2 (mod 3): the linear term preserves j exactly, the
/// quadratic term shifts it by ±3. The two degenerate ground states live in
/// the conjugate classes j ≡ ±1/2 and form the E-symmetric polaronic doublet
///
///   Ψ± = Σ c_nm |E±⟩|n,m⟩ + d_nm |E∓⟩|n,m⟩,   p = Σ (c²_nm − d²_nm).

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "kdspin/apes.hpp"

namespace kdspin {

struct VibronicState {
  int sigma;  // +1 for E+, -1 for E-
  int n;      // quanta in a+
  int m;      // quanta in a-
  bool operator==(const VibronicState&) const = default;
};

/// Deterministically ordered basis with n + m <= cutoff:
/// electronic label major (E+ first), then n+m ascending, then n ascending.
class VibronicBasis {
 public:
  explicit VibronicBasis(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
    for (int sigma : {+1, -1})
      for (int tot = 0; tot <= cutoff; ++tot)
        for (int n = 0; n <= tot; ++n) states_.push_back({sigma, n, tot - n});
    for (std::size_t i = 0; i < states_.size(); ++i) {
      const auto& s = states_[i];
      index_[pack(s.sigma, s.n, s.m)] = static_cast<int>(i);
    }
  }

  int cutoff() const { return cutoff_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<VibronicState>& states() const { return states_; }
  const VibronicState& state(int i) const { return states_[static_cast<std::size_t>(i)]; }

  /// Index of |sigma, n, m>, or -1 when outside the cutoff.
  int index(int sigma, int n, int m) const {
    if (n < 0 || m < 0 || n + m > cutoff_) return -1;
    auto it = index_.find(pack(sigma, n, m));
    return it == index_.end() ? -1 : it->second;
  }

  /// Twice the vibronic angular momentum 2j = 2(n − m) + sigma; the
  /// Hamiltonian couples only states with equal 2j mod 6.
  static int twice_j(const VibronicState& s) { return 2 * (s.n - s.m) + s.sigma; }
  static int j_class(const VibronicState& s) {
    return ((twice_j(s) % 6) + 6) % 6;
  }

 private:
  static long pack(int sigma, int n, int m) {
    return (static_cast<long>(n) << 24) | (static_cast<long>(m) << 4) | (sigma > 0 ? 1 : 0);
  }
  int cutoff_;
  std::vector<VibronicState> states_;
  std::unordered_map<long, int> index_;
};

inline VibronicBasis build_basis(int cutoff) { return VibronicBasis(cutoff); }

/// Assembles the DJT Hamiltonian (meV) in the circular basis; real symmetric.
inline Eigen::MatrixXd build_hamiltonian(const JTCoupling& c, const VibronicBasis& basis) {
  const int dim = static_cast<int>(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

  auto add = [&](int sigma, int n, int m, int col, double val) {
    const int row = basis.index(sigma, n, m);
    if (row >= 0) h(row, col) += val;
  };

  for (int j = 0; j < dim; ++j) {
    const auto& s = basis.state(j);
    h(j, j) += c.homega * (s.n + s.m + 1);
    if (s.sigma == +1) {
      // F (a- + a+^dag) sigma-
      add(-1, s.n, s.m - 1, j, c.f * std::sqrt(double(s.m)));
      add(-1, s.n + 1, s.m, j, c.f * std::sqrt(double(s.n + 1)));
      // -G (a+ + a-^dag)^2 sigma-  = -(a+^2 + a-^dag^2 + 2 a-^dag a+)
      add(-1, s.n - 2, s.m, j, -c.g * std::sqrt(double(s.n) * double(s.n - 1)));
      add(-1, s.n, s.m + 2, j, -c.g * std::sqrt(double(s.m + 1) * double(s.m + 2)));
      add(-1, s.n - 1, s.m + 1, j, -2.0 * c.g * std::sqrt(double(s.n) * double(s.m + 1)));
    } else {
      // F (a+ + a-^dag) sigma+
      add(+1, s.n - 1, s.m, j, c.f * std::sqrt(double(s.n)));
      add(+1, s.n, s.m + 1, j, c.f * std::sqrt(double(s.m + 1)));
      // -G (a- + a+^dag)^2 sigma+
      add(+1, s.n, s.m - 2, j, -c.g * std::sqrt(double(s.m) * double(s.m - 1)));
      add(+1, s.n + 2, s.m, j, -c.g * std::sqrt(double(s.n + 1) * double(s.n + 2)));
      add(+1, s.n + 1, s.m - 1, j, -2.0 * c.g * std::sqrt(double(s.n + 1) * double(s.m)));
    }
  }
  return h;
}

struct VibronicSolution {
  explicit VibronicSolution(VibronicBasis b) : basis(std::move(b)) {}

  VibronicBasis basis;
  Eigen::VectorXd eigenvalues;  // ascending, meV, zero point ħω included
  double zero_point = 0.0;      // ħω
  Eigen::VectorXd psi_plus;     // ground doublet member with dominant E+ weight
  Eigen::VectorXd psi_minus;
  double p = 0.0;               // Ham reduction factor
  double tunneling_gap = 0.0;   // next vibronic level minus ground doublet, meV
  double doublet_splitting = 0.0;  // |E1 − E0|, degeneracy diagnostic

  /// c_nm of Eq.-style expansion: E+ components of psi_plus.
  double c(int n, int m) const { return coeff(+1, n, m); }
  /// d_nm: E− components of psi_plus.
  double d(int n, int m) const { return coeff(-1, n, m); }

 private:
  double coeff(int sigma, int n, int m) const {
    const int i = basis.index(sigma, n, m);
    return i < 0 ? 0.0 : psi_plus(i);
  }
};

/// Ham reduction factor from a normalized doublet member: the expectation
/// value of |E+⟩⟨E+| − |E−⟩⟨E−|, equal to Σ(c² − d²).
inline double ham_factor(const Eigen::VectorXd& member, const VibronicBasis& basis) {
  double p = 0.0;
  for (int i = 0; i < member.size(); ++i) {
    const double w = member(i) * member(i);
    p += basis.state(i).sigma > 0 ? w : -w;
  }
  return p;
}

/// Full spectrum plus the canonical ground doublet. The eigensolver returns
/// an arbitrary rotation inside the degenerate ground pair, so the 2×2 block
/// of the electronic operator σ_el = |E+⟩⟨E+| − |E−⟩⟨E−| is rediagonalized
/// there; Ψ+ is the member with the positive (dominant-E+) eigenvalue and
/// p is that eigenvalue. Coefficients are phase-fixed so the largest one is
/// positive.
inline VibronicSolution solve(const JTCoupling& c, int cutoff) {
  c.validate();
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");

  VibronicSolution sol{VibronicBasis(cutoff)};
  const Eigen::MatrixXd h = build_hamiltonian(c, sol.basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("vibronic eigensolver failed to converge");

  sol.eigenvalues = es.eigenvalues();
  sol.zero_point = c.homega;
  sol.doublet_splitting = std::abs(sol.eigenvalues(1) - sol.eigenvalues(0));
  sol.tunneling_gap = sol.eigenvalues(2) - sol.eigenvalues(0);

  const Eigen::VectorXd v0 = es.eigenvectors().col(0);
  const Eigen::VectorXd v1 = es.eigenvectors().col(1);
  Eigen::VectorXd sigma_diag(sol.basis.size());
  for (int i = 0; i < sigma_diag.size(); ++i)
    sigma_diag(i) = sol.basis.state(i).sigma > 0 ? 1.0 : -1.0;

  Eigen::Matrix2d block;
  block(0, 0) = v0.dot(sigma_diag.cwiseProduct(v0));
  block(0, 1) = v0.dot(sigma_diag.cwiseProduct(v1));
  block(1, 0) = block(0, 1);
  block(1, 1) = v1.dot(sigma_diag.cwiseProduct(v1));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> bs(block);

  sol.p = std::clamp(bs.eigenvalues()(1), 0.0, 1.0);
  sol.psi_plus = bs.eigenvectors()(0, 1) * v0 + bs.eigenvectors()(1, 1) * v1;
  sol.psi_minus = bs.eigenvectors()(0, 0) * v0 + bs.eigenvectors()(1, 0) * v1;

  auto phase_fix = [](Eigen::VectorXd& v) {
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
  };
  phase_fix(sol.psi_plus);
  phase_fix(sol.psi_minus);
  return sol;
}

struct ConvergencePoint {
  int cutoff = 0;
  double p = 0.0;
  double ground_energy = 0.0;  // meV, zero point included
  double dp_from_previous = 0.0;
};

/// Runs solve() over ascending cutoffs; ground energy is variational
/// (non-increasing) since the bases are nested.
inline std::vector<ConvergencePoint> convergence_study(const JTCoupling& c,
                                                       const std::vector<int>& cutoffs) {
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    if (cutoffs[i] <= cutoffs[i - 1])
      throw std::invalid_argument("cutoffs must be strictly ascending");
  std::vector<ConvergencePoint> out;
  for (int n : cutoffs) {
    const VibronicSolution s = solve(c, n);
    ConvergencePoint pt{n, s.p, s.eigenvalues(0), 0.0};
    if (!out.empty()) pt.dp_from_previous = std::abs(pt.p - out.back().p);
    out.push_back(pt);
  }
  return out;
}

}  // namespace kdspin
