#pragma once

/// Observable spin quantities of Kramers-doublet defects: classification of
/// d-orbital doublets under the C3v double group, Ham-reduced spin-orbit
/// splitting and angular momenta, the axial g-tensor, and the effective
/// pseudospin-1/2 Hamiltonian (spin-orbit offset + Zeeman + hyperfine)
/// versus magnetic field.
///
/// Angular momentum bookkeeping uses ħ = 1 and exact half-integer arithmetic
/// (all m values are stored doubled as integers).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kdspin/catalog.hpp"
#include "kdspin/constants.hpp"

namespace kdspin {

enum class DoubleIrrep { e_half, e_three_half };  // E_1/2 (Γ4), E_3/2 (Γ5,6)
enum class SingleGroup { e, a1 };                 // ²E, ²A1

inline std::string to_string(DoubleIrrep r) {
  return r == DoubleIrrep::e_half ? "E_1/2" : "E_3/2";
}
inline std::string to_string(SingleGroup s) { return s == SingleGroup::e ? "2E" : "2A1"; }

struct InvalidStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One |d_ml, ms⟩ component of a doublet member; d orbitals only (l = 2).
struct KdComponent {
  int m_l = 0;        // -2 .. +2
  int twice_ms = 1;   // ±1
  std::complex<double> amp{1.0, 0.0};

  int twice_mj() const { return 2 * m_l + twice_ms; }
};

/// One member of a Kramers doublet with its symmetry labels. m_j is the exact
/// value of the dominant component; the double-group class is m_j mod 3.
struct KramersDoublet {
  std::vector<KdComponent> composition;
  int twice_mj = 0;
  DoubleIrrep irrep = DoubleIrrep::e_half;
  SingleGroup single_group = SingleGroup::e;

  double mj() const { return 0.5 * twice_mj; }
};

/// Validates and labels a composition. All components must belong to one
/// double-group m_j class (equal m_j mod 3); amplitudes must be normalized.
inline KramersDoublet classify_kd(std::vector<KdComponent> composition) {
  if (composition.empty()) throw InvalidStateError("empty composition");
  double norm = 0.0;
  for (const auto& comp : composition) {
    if (comp.m_l < -2 || comp.m_l > 2) throw InvalidStateError("m_l out of d-orbital range");
    if (comp.twice_ms != 1 && comp.twice_ms != -1)
      throw InvalidStateError("spin projection must be ±1/2");
    norm += std::norm(comp.amp);
  }
  if (std::abs(norm - 1.0) > 1e-12)
    throw InvalidStateError("amplitudes not normalized: |psi|^2 = " + std::to_string(norm));

  auto mod6 = [](int twice) { return ((twice % 6) + 6) % 6; };
  const int cls = mod6(composition.front().twice_mj());
  for (const auto& comp : composition)
    if (mod6(comp.twice_mj()) != cls)
      throw InvalidStateError("components mix different m_j classes");

  const auto dominant = std::max_element(
      composition.begin(), composition.end(),
      [](const KdComponent& a, const KdComponent& b) { return std::norm(a.amp) < std::norm(b.amp); });

  KramersDoublet kd;
  kd.twice_mj = dominant->twice_mj();
  kd.irrep = (cls == 3) ? DoubleIrrep::e_three_half : DoubleIrrep::e_half;
  kd.single_group = (dominant->m_l == 0) ? SingleGroup::a1 : SingleGroup::e;
  kd.composition = std::move(composition);
  return kd;
}

/// Time-reversal partner: conjugated amplitudes, flipped spins and orbital
/// projections (phase convention: no extra sign).
inline KramersDoublet time_reversal_partner(const KramersDoublet& kd) {
  std::vector<KdComponent> comps;
  comps.reserve(kd.composition.size());
  for (const auto& comp : kd.composition)
    comps.push_back({-comp.m_l, -comp.twice_ms, std::conj(comp.amp)});
  return classify_kd(std::move(comps));
}

/// The atomic Kramers doublets Ψ1..Ψ5 (first-listed member):
/// Ψ1 = |d+2,+1/2⟩, Ψ2 = |d+2,−1/2⟩, Ψ3 = |d+1,+1/2⟩, Ψ4 = |d+1,−1/2⟩,
/// Ψ5 = |d0,+1/2⟩.
inline KramersDoublet table_doublet(int index) {
  switch (index) {
    case 1: return classify_kd({{+2, +1, 1.0}});
    case 2: return classify_kd({{+2, -1, 1.0}});
    case 3: return classify_kd({{+1, +1, 1.0}});
    case 4: return classify_kd({{+1, -1, 1.0}});
    case 5: return classify_kd({{0, +1, 1.0}});
    default: throw std::invalid_argument("table_doublet index must be 1..5");
  }
}

/// E_1/2 ground doublet member: the spin-up combination of the E+ orbital,
/// alpha|d+2,+1/2⟩ + beta|d−1,+1/2⟩ (m_j ∈ {5/2, −1/2}, one class).
inline KramersDoublet e_half_ground_doublet(std::complex<double> alpha,
                                            std::complex<double> beta) {
  return classify_kd({{+2, +1, alpha}, {-1, +1, beta}});
}

/// E_3/2 ground doublet member: alpha|d+2,−1/2⟩ + beta|d+1,+1/2⟩ (both m_j = 3/2).
inline KramersDoublet e_three_half_ground_doublet(std::complex<double> alpha,
                                                  std::complex<double> beta) {
  return classify_kd({{+2, -1, alpha}, {+1, +1, beta}});
}

/// Reduced spin-orbit splitting p·ΔE_SOC, GHz.
inline double reduced_soc(double p, double de_soc_ghz) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("Ham factor p must lie in [0, 1]");
  return p * de_soc_ghz;
}

/// Doubly reduced angular momentum p·L_z^o.
inline double effective_lz(double p, double lz_o) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("Ham factor p must lie in [0, 1]");
  return p * lz_o;
}

/// Parallel g factor 2(g0·Sz + Lz_eff); the reference convention is Sz = +1/2.
inline double g_parallel(double g0, double lz_eff, double s_z = 0.5) {
  return 2.0 * (g0 * s_z + lz_eff);
}

namespace detail {

/// ⟨m_l'|L±|m_l⟩ for l = 2: √(6 − m(m±1)) on the shifted element.
inline double d_orbital_ladder(int m_to, int m_from, int dir) {
  if (m_to != m_from + dir) return 0.0;
  const double v = 6.0 - double(m_from) * double(m_from + dir);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

/// ⟨comp_bra|μ±|comp_ket⟩ in units of −μ_B: lz_scale·L± + g0·S±. The operator
/// shifts m_l xor m_s by exactly one; anything else is structurally zero.
inline double mu_ladder_element(const KdComponent& bra, const KdComponent& ket, int dir,
                                double lz_scale, double g0) {
  double v = 0.0;
  if (bra.twice_ms == ket.twice_ms)
    v += lz_scale * d_orbital_ladder(bra.m_l, ket.m_l, dir);
  if (bra.m_l == ket.m_l && bra.twice_ms == ket.twice_ms + 2 * dir) v += g0;  // S± on spin 1/2
  return v;
}

}  // namespace detail

/// Transverse g factor |μ₊ + μ₋ + i(μ₋ − μ₊)|/μ_B from the ladder dipole
/// matrix elements ⟨kd|μ±|partner⟩ evaluated over the d⊗spinor composition.
/// The accumulation is structural: when no component pair is connected by a
/// single ladder step the result is exactly 0.0, with no float cancellation
/// involved — which is the case for every doublet built within one row of
/// the atomic table (Ψ1/Ψ4 or Ψ2/Ψ3 mixtures).
inline double g_perp(const KramersDoublet& kd, const KramersDoublet& partner,
                     double lz_scale = 1.0, double g0 = constants::default_g0) {
  std::complex<double> mu_plus{0.0, 0.0}, mu_minus{0.0, 0.0};
  bool any = false;
  for (const auto& bra : kd.composition) {
    for (const auto& ket : partner.composition) {
      const double ep = detail::mu_ladder_element(bra, ket, +1, lz_scale, g0);
      const double em = detail::mu_ladder_element(bra, ket, -1, lz_scale, g0);
      const std::complex<double> w = std::conj(bra.amp) * ket.amp;
      if (ep != 0.0) {
        mu_plus += w * (-ep);  // μ = −μ_B(...), expressed in μ_B units
        any = true;
      }
      if (em != 0.0) {
        mu_minus += w * (-em);
        any = true;
      }
    }
  }
  if (!any) return 0.0;
  const std::complex<double> i{0.0, 1.0};
  return std::abs(mu_plus + mu_minus + i * (mu_minus - mu_plus));
}

/// Axial g-tensor of one pseudospin-1/2 manifold.
struct GTensor {
  double g_par = 0.0;
  double g_perp = 0.0;
};

/// Parameters of the effective pseudospin-1/2 Hamiltonian for one manifold.
/// Hyperfine constants are optional; they require a nonzero nuclear spin.
struct SpinModel {
  GTensor g;
  int twice_nuclear_spin = 0;
  std::optional<double> a_par_mhz;
  std::optional<double> a_perp_mhz;
  double offset_ghz = 0.0;  // manifold offset (e.g. reduced SO splitting for GS2)
};

struct Transition {
  int lower = 0, upper = 0;
  double frequency_ghz = 0.0;
  double intensity = 0.0;  // |⟨upper|S̃x|lower⟩|², B1 ⊥ c convention
};

struct SpinSpectrum {
  double field_tesla = 0.0;
  double theta_rad = 0.0;  // polar angle of B from the c axis
  std::vector<double> levels_ghz;
  std::vector<Transition> transitions;
};

namespace detail {

/// Angular momentum matrices for dimension 2j+1, m descending (j..-j).
inline void angular_momentum_matrices(int twice_j, Eigen::MatrixXcd& jx, Eigen::MatrixXcd& jy,
                                      Eigen::MatrixXcd& jz) {
  const int dim = twice_j + 1;
  const double j = 0.5 * twice_j;
  jx = Eigen::MatrixXcd::Zero(dim, dim);
  jy = Eigen::MatrixXcd::Zero(dim, dim);
  jz = Eigen::MatrixXcd::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const double m = j - a;
    jz(a, a) = m;
    if (a + 1 < dim) {  // J+ |m-1⟩ -> |m⟩
      const double mm = m - 1.0;
      const double f = std::sqrt(j * (j + 1.0) - mm * (mm + 1.0));
      jx(a, a + 1) += 0.5 * f;
      jx(a + 1, a) += 0.5 * f;
      jy(a, a + 1) += std::complex<double>(0.0, -0.5) * f;
      jy(a + 1, a) += std::complex<double>(0.0, 0.5) * f;
    }
  }
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace detail

/// Diagonalizes the pseudospin⊗nuclear Hamiltonian
///   H = offset + μ_B/h · B (g∥ cosθ S̃z + g⊥ sinθ S̃x) + A∥ S̃z Iz + A⊥(S̃x Ix + S̃y Iy)
/// in GHz and returns sorted levels plus the magnetic-dipole transition list.
inline SpinSpectrum spin_spectrum(const SpinModel& model, double field_tesla, double theta_rad) {
  if (field_tesla < 0.0) throw std::invalid_argument("field magnitude must be >= 0");
  if (theta_rad < 0.0 || theta_rad > M_PI + 1e-12)
    throw std::invalid_argument("field angle must lie in [0, pi]");
  if ((model.a_par_mhz || model.a_perp_mhz) && model.twice_nuclear_spin == 0)
    throw std::invalid_argument("hyperfine constants given but nuclear spin is absent");
  if (model.twice_nuclear_spin < 0) throw std::invalid_argument("nuclear spin must be >= 0");

  Eigen::MatrixXcd sx, sy, sz;
  detail::angular_momentum_matrices(1, sx, sy, sz);
  const int nuc_dim = model.twice_nuclear_spin + 1;
  const Eigen::MatrixXcd eye_n = Eigen::MatrixXcd::Identity(nuc_dim, nuc_dim);

  const double bz = field_tesla * std::cos(theta_rad);
  const double bx = field_tesla * std::sin(theta_rad);
  const double mu_b = constants::bohr_magneton_ghz_per_tesla;

  Eigen::MatrixXcd h = detail::kron(
      mu_b * (model.g.g_par * bz * sz + model.g.g_perp * bx * sx) +
          model.offset_ghz * Eigen::MatrixXcd::Identity(2, 2),
      eye_n);

  if (model.twice_nuclear_spin > 0 && (model.a_par_mhz || model.a_perp_mhz)) {
    Eigen::MatrixXcd ix, iy, iz;
    detail::angular_momentum_matrices(model.twice_nuclear_spin, ix, iy, iz);
    const double a_par = constants::mhz_to_ghz(model.a_par_mhz.value_or(0.0));
    const double a_perp = constants::mhz_to_ghz(model.a_perp_mhz.value_or(0.0));
    h += a_par * detail::kron(sz, iz) +
         a_perp * (detail::kron(sx, ix) + detail::kron(sy, iy));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("spin eigensolver failed");

  SpinSpectrum out;
  out.field_tesla = field_tesla;
  out.theta_rad = theta_rad;
  out.levels_ghz.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());

  const Eigen::MatrixXcd sx_full = detail::kron(sx, eye_n);
  const int dim = static_cast<int>(out.levels_ghz.size());
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const std::complex<double> me =
          es.eigenvectors().col(j).adjoint() * sx_full * es.eigenvectors().col(i);
      const double intensity = std::norm(me);
      if (intensity > 1e-12)
        out.transitions.push_back({i, j, out.levels_ghz[j] - out.levels_ghz[i], intensity});
    }
  }
  return out;
}

/// GS1/GS2 spin models for a catalog row, given the Ham factor p computed for
/// it: each sublevel is an independent pseudospin-1/2 with g∥ from its
/// effective angular momentum, g⊥ = 0, and GS2 offset by the reduced SO
/// splitting.
inline std::pair<SpinModel, SpinModel> defect_spin_models(const DefectParams& d, double p,
                                                          bool with_hyperfine) {
  SpinModel gs1, gs2;
  gs1.g = {g_parallel(d.g0, effective_lz(p, d.lz_o_gs1)), 0.0};
  gs2.g = {g_parallel(d.g0, effective_lz(p, d.lz_o_gs2)), 0.0};
  gs2.offset_ghz = reduced_soc(p, d.de_soc);
  if (with_hyperfine) {
    gs1.twice_nuclear_spin = gs2.twice_nuclear_spin = d.twice_nuclear_spin;
    gs1.a_par_mhz = gs2.a_par_mhz = d.a_par;
    gs1.a_perp_mhz = gs2.a_perp_mhz = d.a_perp;
  }
  return {gs1, gs2};
}

struct SocLzEntry {
  std::string key;
  double de_soc_red_ghz = 0.0;
  double d_lz_eff = 0.0;
  double ratio = 0.0;   // GHz per unit angular momentum
  bool included = false;
};

struct SocLzReport {
  std::vector<SocLzEntry> entries;
  int n_included = 0;
  double ratio_mean = 0.0;
  double ratio_spread = 0.0;  // max − min over included rows
};

/// Consistency diagnostic for the proportionality between the reduced SO
/// splitting and the effective angular momentum difference. Rows with
/// |ΔLz_eff| < 0.01 are excluded (small-denominator guard).
inline SocLzReport soc_lz_proportionality(const std::vector<SocLzEntry>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("need at least 2 rows");
  SocLzReport rep;
  double lo = 0.0, hi = 0.0, sum = 0.0;
  for (SocLzEntry e : rows) {
    e.included = std::abs(e.d_lz_eff) >= 0.01;
    e.ratio = e.included ? e.de_soc_red_ghz / e.d_lz_eff : 0.0;
    if (e.included) {
      if (rep.n_included == 0) {
        lo = hi = e.ratio;
      } else {
        lo = std::min(lo, e.ratio);
        hi = std::max(hi, e.ratio);
      }
      sum += e.ratio;
      ++rep.n_included;
    }
    rep.entries.push_back(e);
  }
  if (rep.n_included > 0) {
    rep.ratio_mean = sum / rep.n_included;
    rep.ratio_spread = hi - lo;
  }
  return rep;
}

}  // namespace kdspin
