#pragma once

/// Reference values for the built-in vanadium catalog: computed reference
/// columns (Ham factor, reduced SO splitting, effective angular momenta,
/// parallel g factors) and experimental columns. Used for report generation
/// and golden reproduction checks, never as computation inputs.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdspin {

struct PaperReference {
  std::string key;  // "4H:h" etc.

  double p_ref = 0.0;
  double de_soc_red_ref_ghz = 0.0;
  double lz_eff_gs1_ref = 0.0;
  double lz_eff_gs2_ref = 0.0;
  double d_lz_eff_ref = 0.0;

  double g_par_theory_gs1 = 0.0;
  double g_par_theory_gs2 = 0.0;
  // g_perp theory is exactly 0 for every row.

  std::optional<double> de_soc_exp_ghz;
  std::string g_gs1_exp;   // "g_par,g_perp" as quoted in the experimental literature
  std::string g_gs2_exp;
};

inline const std::vector<PaperReference>& reference_table() {
  static const std::vector<PaperReference> table = {
      {"4H:h", 0.63, 6.29, -0.014, -0.009, 0.005, 1.975, 1.987, 43.0, "1.870,<1", "2.035,<1"},
      {"4H:k", 0.60, 490.37, -0.069, 0.059, 0.128, 1.866, 2.106, 529.0, "1.748,0", "2.160,0"},
      {"6H:h", 0.57, 13.78, -0.007, -0.010, 0.003, 1.989, 1.983, 16.0, "1.933,<1", "1.972,<1"},
      {"6H:k1", 0.55, 45.62, -0.008, -0.009, 0.001, 1.987, 1.985, 25.0, "1.95,-", "2.00,-"},
      {"6H:k2", 0.61, 493.23, -0.071, 0.052, 0.123, 1.860, 2.108, 524.0, "1.749,0", "-,-"},
  };
  return table;
}

inline const PaperReference& find_reference(const std::string& key) {
  for (const auto& r : reference_table())
    if (r.key == key) return r;
  throw std::invalid_argument("no reference row for defect " + key);
}

}  // namespace kdspin
