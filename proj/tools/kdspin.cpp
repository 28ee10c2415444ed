// kdspin command-line front end: catalog access, golden-table reproduction,
// DJT solving, APES grids and Zeeman sweeps.
//
// Exit codes: 0 = success / all checks pass, 1 = computation ran but a
// tolerance failed or a domain error occurred, 2 = usage error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdspin/apes.hpp"
#include "kdspin/catalog.hpp"
#include "kdspin/pseudospin.hpp"
#include "kdspin/reference.hpp"
#include "kdspin/reproduce.hpp"
#include "kdspin/vibronic.hpp"

namespace {

using nlohmann::json;

constexpr const char* kParamsEnvVar = "KDSPIN_PARAMS";

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// Built-in catalog, or the file named by KDSPIN_PARAMS when set.
std::vector<kdspin::DefectParams> active_catalog() {
  const char* path = std::getenv(kParamsEnvVar);
  if (!path || !*path) return kdspin::built_in_catalog();
  std::ifstream in(path);
  if (!in) throw std::runtime_error(std::string("cannot open parameter file ") + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return kdspin::load_catalog(ss.str());
}

std::string valid_keys(const std::vector<kdspin::DefectParams>& cat) {
  std::string out;
  for (const auto& d : cat) {
    if (!out.empty()) out += ", ";
    out += d.key();
  }
  return out;
}

json defect_to_json(const kdspin::DefectParams& d) {
  json j;
  j["polytype"] = kdspin::to_string(d.polytype);
  j["site"] = kdspin::to_string(d.site);
  if (d.pl_center) j["pl_center"] = kdspin::to_string(*d.pl_center);
  j["e_jt"] = d.e_jt;
  j["delta_jt"] = d.delta_jt;
  j["homega"] = d.homega;
  j["de_soc"] = d.de_soc;
  j["lz_o_gs1"] = d.lz_o_gs1;
  j["lz_o_gs2"] = d.lz_o_gs2;
  j["nuclear_spin"] = d.nuclear_spin();
  if (d.a_par) j["a_par"] = *d.a_par;
  if (d.a_perp) j["a_perp"] = *d.a_perp;
  j["g0"] = d.g0;
  return j;
}

int cmd_catalog_dump(const std::string& format) {
  const auto cat = active_catalog();
  if (format == "text") {
    std::cout << kdspin::serialize_catalog(cat);
  } else if (format == "json") {
    json arr = json::array();
    for (const auto& d : cat) arr.push_back(defect_to_json(d));
    std::cout << arr.dump(2) << "\n";
  } else {
    std::cout << "key,polytype,site,pl_center,e_jt,delta_jt,homega,de_soc,"
                 "lz_o_gs1,lz_o_gs2,nuclear_spin,a_par,a_perp,g0\n";
    for (const auto& d : cat) {
      std::cout << d.key() << "," << kdspin::to_string(d.polytype) << ","
                << kdspin::to_string(d.site) << ","
                << (d.pl_center ? kdspin::to_string(*d.pl_center) : "") << "," << fmt6(d.e_jt)
                << "," << fmt6(d.delta_jt) << "," << fmt6(d.homega) << "," << fmt6(d.de_soc)
                << "," << fmt6(d.lz_o_gs1) << "," << fmt6(d.lz_o_gs2) << ","
                << fmt6(d.nuclear_spin()) << "," << (d.a_par ? fmt6(*d.a_par) : "") << ","
                << (d.a_perp ? fmt6(*d.a_perp) : "") << "," << fmt6(d.g0) << "\n";
    }
  }
  return 0;
}

json jt_report_to_json(const kdspin::JtReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"key", r.key},
                    {"cutoff", r.cutoff},
                    {"inputs",
                     {{"e_jt", r.e_jt}, {"delta_jt", r.delta_jt}, {"homega", r.homega},
                      {"de_soc", r.de_soc}}},
                    {"p_calc", r.p_calc},
                    {"p_ref", r.p_ref},
                    {"p_dev", r.p_dev},
                    {"p_pass", r.p_pass},
                    {"de_soc_red_calc", r.red_calc},
                    {"de_soc_red_ref", r.red_ref},
                    {"red_implied_p_dev", r.red_implied_p_dev},
                    {"red_pass", r.red_pass},
                    {"table_implied_p", r.table_implied_p},
                    {"table_consistent", r.table_consistent},
                    {"de_soc_exp", r.de_soc_exp ? json(*r.de_soc_exp) : json()},
                    {"pass", r.pass}});
  }
  return json{{"cutoff", rep.cutoff}, {"rows", rows}, {"pass", rep.pass}};
}

json g_report_to_json(const kdspin::GReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"key", r.key},
                    {"sublevel", r.sublevel},
                    {"lz_eff_ref", r.lz_eff_ref},
                    {"g_par_calc", r.g_par_calc},
                    {"g_par_ref", r.g_par_ref},
                    {"g_par_dev", r.g_par_dev},
                    {"g_par_tol", r.g_par_tol},
                    {"g_par_pass", r.g_par_pass},
                    {"g_perp_calc", r.g_perp_calc},
                    {"g_perp_pass", r.g_perp_pass},
                    {"experimental", r.exp},
                    {"pass", r.pass}});
  }
  return json{{"rows", rows}, {"pass", rep.pass}};
}

int cmd_reproduce(const std::string& table, int cutoff, const std::string& format) {
  const auto cat = active_catalog();
  if (table == "jt") {
    const auto rep = kdspin::reproduce_jt(cat, cutoff);
    if (format == "csv")
      std::cout << kdspin::to_csv(rep);
    else if (format == "json")
      std::cout << jt_report_to_json(rep).dump(2) << "\n";
    else
      std::cout << kdspin::to_text(rep);
    return rep.pass ? 0 : 1;
  }
  const auto rep = kdspin::reproduce_g(cat);
  if (format == "csv")
    std::cout << kdspin::to_csv(rep);
  else if (format == "json")
    std::cout << g_report_to_json(rep).dump(2) << "\n";
  else
    std::cout << kdspin::to_text(rep);
  return rep.pass ? 0 : 1;
}

int cmd_solve_djt(double ejt, double delta, double homega, int cutoff,
                  const std::string& format) {
  const auto coupling = kdspin::coupling_from_apes(ejt, delta, homega);
  const auto sol = kdspin::solve(coupling, cutoff);

  struct Coeff {
    int sigma, n, m;
    double value;
  };
  std::vector<Coeff> coeffs;
  for (int i = 0; i < sol.psi_plus.size(); ++i) {
    const auto& s = sol.basis.state(i);
    coeffs.push_back({s.sigma, s.n, s.m, sol.psi_plus(i)});
  }
  std::stable_sort(coeffs.begin(), coeffs.end(), [](const Coeff& a, const Coeff& b) {
    return a.value * a.value > b.value * b.value;
  });
  if (coeffs.size() > 10) coeffs.resize(10);

  if (format == "csv") {
    std::cout << "field,value\n";
    std::cout << "f," << fmt6(coupling.f) << "\n";
    std::cout << "g," << fmt6(coupling.g) << "\n";
    std::cout << "homega," << fmt6(coupling.homega) << "\n";
    std::cout << "p," << fmt6(sol.p) << "\n";
    std::cout << "tunneling_gap," << fmt6(sol.tunneling_gap) << "\n";
    std::cout << "zero_point," << fmt6(sol.zero_point) << "\n";
    std::cout << "index,eigenvalue_mev\n";
    for (int i = 0; i < sol.eigenvalues.size(); ++i)
      std::cout << i << "," << fmt6(sol.eigenvalues(i)) << "\n";
  } else {
    json j;
    j["coupling"] = {{"f", coupling.f}, {"g", coupling.g}, {"homega", coupling.homega}};
    j["cutoff"] = cutoff;
    j["eigenvalues"] = std::vector<double>(sol.eigenvalues.data(),
                                           sol.eigenvalues.data() + sol.eigenvalues.size());
    j["zero_point"] = sol.zero_point;
    j["p"] = sol.p;
    j["tunneling_gap"] = sol.tunneling_gap;
    json cj = json::array();
    for (const auto& c : coeffs)
      cj.push_back({{"electronic", c.sigma > 0 ? "E+" : "E-"},
                    {"n", c.n},
                    {"m", c.m},
                    {"value", c.value}});
    j["coefficients"] = cj;
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_apes(double ejt, double delta, double homega, double qmax, int steps,
             const std::string& format) {
  const auto coupling = kdspin::coupling_from_apes(ejt, delta, homega);
  if (format == "json") {
    json rows = json::array();
    for (int i = 0; i < steps; ++i) {
      for (int k = 0; k < steps; ++k) {
        const double qx = -qmax + 2.0 * qmax * i / (steps - 1);
        const double qy = -qmax + 2.0 * qmax * k / (steps - 1);
        const auto [lo, hi] = kdspin::apes_energy(coupling, qx, qy);
        rows.push_back({{"qx", qx}, {"qy", qy}, {"e_lower", lo}, {"e_upper", hi}});
      }
    }
    std::cout << rows.dump(2) << "\n";
  } else {
    std::cout << "qx,qy,E_lower,E_upper\n";
    for (int i = 0; i < steps; ++i) {
      for (int k = 0; k < steps; ++k) {
        const double qx = -qmax + 2.0 * qmax * i / (steps - 1);
        const double qy = -qmax + 2.0 * qmax * k / (steps - 1);
        const auto [lo, hi] = kdspin::apes_energy(coupling, qx, qy);
        std::cout << fmt6(qx) << "," << fmt6(qy) << "," << fmt6(lo) << "," << fmt6(hi) << "\n";
      }
    }
  }
  return 0;
}

int cmd_gtensor(const std::string& key, int cutoff, const std::string& format) {
  const auto cat = active_catalog();
  const kdspin::DefectParams* d = kdspin::find_defect(cat, key);
  if (!d) {
    std::cerr << "unknown defect '" << key << "'; valid keys: " << valid_keys(cat) << "\n";
    return 2;
  }
  const auto sol = kdspin::solve(kdspin::coupling_from_apes(*d), cutoff);
  const double g1 = kdspin::g_parallel(d->g0, kdspin::effective_lz(sol.p, d->lz_o_gs1));
  const double g2 = kdspin::g_parallel(d->g0, kdspin::effective_lz(sol.p, d->lz_o_gs2));

  // Transverse component: exact selection-rule zero for both doublet types.
  const double s = 1.0 / std::sqrt(2.0);
  const auto e12 = kdspin::e_half_ground_doublet(s, s);
  const auto e32 = kdspin::e_three_half_ground_doublet(s, s);
  const double gp = std::max(kdspin::g_perp(e12, kdspin::time_reversal_partner(e12)),
                             kdspin::g_perp(e32, kdspin::time_reversal_partner(e32)));

  const kdspin::PaperReference& ref = kdspin::find_reference(key);
  if (format == "json") {
    json j;
    j["defect"] = key;
    j["cutoff"] = cutoff;
    j["p"] = sol.p;
    j["gs1"] = {{"g_par", g1}, {"g_perp", gp}, {"experimental", ref.g_gs1_exp}};
    j["gs2"] = {{"g_par", g2}, {"g_perp", gp}, {"experimental", ref.g_gs2_exp}};
    std::cout << j.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "defect,sublevel,g_par,g_perp,experimental\n";
    std::cout << key << ",GS1," << fmt6(g1) << "," << fmt6(gp) << ",\"" << ref.g_gs1_exp
              << "\"\n";
    std::cout << key << ",GS2," << fmt6(g2) << "," << fmt6(gp) << ",\"" << ref.g_gs2_exp
              << "\"\n";
  } else {
    std::printf("defect %s (p = %.4f at cutoff %d)\n", key.c_str(), sol.p, cutoff);
    std::printf("level  g_par   g_perp  experiment (g_par,g_perp)\n");
    std::printf("GS1    %.3f   %.1f     %s\n", g1, gp, ref.g_gs1_exp.c_str());
    std::printf("GS2    %.3f   %.1f     %s\n", g2, gp, ref.g_gs2_exp.c_str());
  }
  return 0;
}

int cmd_zeeman_sweep(const std::string& key, double gpar_flag, double gperp_flag, bool has_g,
                     double bmin, double bmax, int steps, double theta_deg, bool hyperfine,
                     double apar_flag, double aperp_flag, bool has_a, double nuclear_spin_flag,
                     int cutoff, const std::string& format) {
  std::vector<kdspin::SpinModel> manifolds;
  std::vector<std::string> names;

  if (!key.empty()) {
    const auto cat = active_catalog();
    const kdspin::DefectParams* d = kdspin::find_defect(cat, key);
    if (!d) {
      std::cerr << "unknown defect '" << key << "'; valid keys: " << valid_keys(cat) << "\n";
      return 2;
    }
    const auto sol = kdspin::solve(kdspin::coupling_from_apes(*d), cutoff);
    auto [gs1, gs2] = kdspin::defect_spin_models(*d, sol.p, hyperfine);
    if (hyperfine) {
      if (has_a) {
        gs1.a_par_mhz = gs2.a_par_mhz = apar_flag;
        gs1.a_perp_mhz = gs2.a_perp_mhz = aperp_flag;
      } else if (!d->a_par && !d->a_perp) {
        std::cerr << "defect " << key
                  << " has no hyperfine constants; pass --apar/--aperp\n";
        return 2;
      }
    }
    manifolds = {gs1, gs2};
    names = {"GS1", "GS2"};
  } else if (has_g) {
    kdspin::SpinModel m;
    m.g = {gpar_flag, gperp_flag};
    if (hyperfine) {
      if (!has_a) {
        std::cerr << "--hyperfine with explicit g needs --apar/--aperp and --nuclear-spin\n";
        return 2;
      }
      m.twice_nuclear_spin = static_cast<int>(std::lround(2.0 * nuclear_spin_flag));
      m.a_par_mhz = apar_flag;
      m.a_perp_mhz = aperp_flag;
    }
    manifolds = {m};
    names = {"S"};
  } else {
    std::cerr << "either --defect or --gpar is required\n";
    return 2;
  }

  const double theta = theta_deg * M_PI / 180.0;
  std::vector<std::string> header{"B_tesla"};
  std::vector<std::vector<double>> table;
  for (int i = 0; i < steps; ++i) {
    const double b = steps == 1 ? bmin : bmin + (bmax - bmin) * i / (steps - 1);
    std::vector<double> row{b};
    for (const auto& m : manifolds) {
      const auto spec = kdspin::spin_spectrum(m, b, theta);
      for (double level : spec.levels_ghz) row.push_back(level);
    }
    table.push_back(row);
  }
  {
    int manifold_idx = 0;
    for (const auto& m : manifolds) {
      const auto spec = kdspin::spin_spectrum(m, bmin, theta);
      for (std::size_t l = 0; l < spec.levels_ghz.size(); ++l)
        header.push_back(names[manifold_idx] + "_level_" + std::to_string(l + 1) + "_ghz");
      ++manifold_idx;
    }
  }

  if (format == "json") {
    json j;
    j["theta_deg"] = theta_deg;
    j["columns"] = header;
    j["rows"] = table;
    std::cout << j.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < header.size(); ++i)
      std::cout << header[i] << (i + 1 == header.size() ? "\n" : ",");
    for (const auto& row : table) {
      for (std::size_t i = 0; i < row.size(); ++i)
        std::cout << fmt6(row[i]) << (i + 1 == row.size() ? "\n" : ",");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "kdspin: effective pseudospin of Kramers-doublet point defects from exact\n"
      "diagonalization of the quadratic E⊗e dynamic Jahn-Teller Hamiltonian.\n"
      "Set " +
      std::string(kParamsEnvVar) +
      " to a parameter file to override the built-in catalog.\n"
      "Formats: text = human-readable, csv = 6 significant digits, json = full precision."};
  app.require_subcommand(1);

  // catalog dump
  auto* catalog_cmd = app.add_subcommand("catalog", "catalog access");
  catalog_cmd->require_subcommand(1);
  auto* dump_cmd = catalog_cmd->add_subcommand("dump", "print the active catalog");
  std::string dump_format = "text";
  dump_cmd->add_option("--format", dump_format, "text|csv|json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  // reproduce
  auto* rep_cmd = app.add_subcommand("reproduce", "golden reproduction of the reference tables");
  std::string rep_table;
  int rep_cutoff = kdspin::tolerance::default_cutoff;
  std::string rep_format = "text";
  rep_cmd->add_option("table", rep_table, "jt | g")->required()->check(CLI::IsMember({"jt", "g"}));
  rep_cmd->add_option("--cutoff", rep_cutoff, "phonon basis cutoff (jt table)")
      ->check(CLI::Range(1, 40));
  rep_cmd->add_option("--format", rep_format, "text|csv|json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  // solve-djt
  auto* solve_cmd = app.add_subcommand("solve-djt", "diagonalize the DJT Hamiltonian");
  double s_ejt = 0.0, s_delta = 0.0, s_homega = 0.0;
  int s_cutoff = kdspin::tolerance::default_cutoff;
  std::string s_format = "json";
  solve_cmd->add_option("--ejt", s_ejt, "JT stabilization energy, meV")->required();
  solve_cmd->add_option("--delta", s_delta, "barrier energy, meV")->required();
  solve_cmd->add_option("--homega", s_homega, "effective phonon energy, meV")->required();
  solve_cmd->add_option("--cutoff", s_cutoff, "phonon basis cutoff n+m <= N")
      ->check(CLI::Range(1, 40));
  solve_cmd->add_option("--format", s_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  // apes
  auto* apes_cmd = app.add_subcommand("apes", "emit both APES sheets on a grid");
  double a_ejt = 0.0, a_delta = 0.0, a_homega = 0.0, a_qmax = 1.5;
  int a_steps = 41;
  std::string a_defect, a_format = "csv";
  apes_cmd->add_option("--ejt", a_ejt, "JT stabilization energy, meV");
  apes_cmd->add_option("--delta", a_delta, "barrier energy, meV");
  apes_cmd->add_option("--homega", a_homega, "effective phonon energy, meV");
  apes_cmd->add_option("--defect", a_defect, "catalog key such as 4H:h (overrides --ejt et al.)");
  apes_cmd->add_option("--qmax", a_qmax, "grid half-width in dimensionless q");
  apes_cmd->add_option("--steps", a_steps, "grid points per axis")->check(CLI::Range(2, 2001));
  apes_cmd->add_option("--format", a_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  // gtensor
  auto* gt_cmd = app.add_subcommand("gtensor", "g-tensor of one defect via the full pipeline");
  std::string gt_defect, gt_format = "text";
  int gt_cutoff = kdspin::tolerance::default_cutoff;
  gt_cmd->add_option("--defect", gt_defect, "catalog key such as 4H:h")->required();
  gt_cmd->add_option("--cutoff", gt_cutoff, "phonon basis cutoff")->check(CLI::Range(1, 40));
  gt_cmd->add_option("--format", gt_format, "text|csv|json")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  // zeeman-sweep
  auto* zs_cmd = app.add_subcommand("zeeman-sweep", "spin levels versus magnetic field");
  std::string zs_defect, zs_format = "csv";
  double zs_gpar = 0.0, zs_gperp = 0.0, zs_bmin = 0.0, zs_bmax = 1.0, zs_theta = 0.0;
  double zs_apar = 0.0, zs_aperp = 0.0, zs_nspin = 0.0;
  int zs_steps = 11, zs_cutoff = kdspin::tolerance::default_cutoff;
  bool zs_hyperfine = false;
  zs_cmd->add_option("--defect", zs_defect, "catalog key such as 4H:h");
  auto* zs_gpar_opt = zs_cmd->add_option("--gpar", zs_gpar, "explicit parallel g factor");
  zs_cmd->add_option("--gperp", zs_gperp, "explicit transverse g factor");
  zs_cmd->add_option("--bmin", zs_bmin, "first field value, tesla");
  zs_cmd->add_option("--bmax", zs_bmax, "last field value, tesla");
  zs_cmd->add_option("--steps", zs_steps, "number of field points")->check(CLI::Range(1, 100000));
  zs_cmd->add_option("--theta", zs_theta, "polar angle of B from the c axis, degrees")
      ->check(CLI::Range(0.0, 180.0));
  zs_cmd->add_flag("--hyperfine", zs_hyperfine, "include the hyperfine interaction");
  auto* zs_apar_opt = zs_cmd->add_option("--apar", zs_apar, "A_par, MHz");
  zs_cmd->add_option("--aperp", zs_aperp, "A_perp, MHz");
  zs_cmd->add_option("--nuclear-spin", zs_nspin, "nuclear spin I (with explicit g)");
  zs_cmd->add_option("--cutoff", zs_cutoff, "phonon basis cutoff (defect mode)")
      ->check(CLI::Range(1, 40));
  zs_cmd->add_option("--format", zs_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors are exit 2; --help is success
  }

  try {
    if (dump_cmd->parsed()) return cmd_catalog_dump(dump_format);
    if (rep_cmd->parsed()) return cmd_reproduce(rep_table, rep_cutoff, rep_format);
    if (solve_cmd->parsed()) return cmd_solve_djt(s_ejt, s_delta, s_homega, s_cutoff, s_format);
    if (apes_cmd->parsed()) {
      if (!a_defect.empty()) {
        const auto cat = active_catalog();
        const kdspin::DefectParams* d = kdspin::find_defect(cat, a_defect);
        if (!d) {
          std::cerr << "unknown defect '" << a_defect << "'; valid keys: " << valid_keys(cat)
                    << "\n";
          return 2;
        }
        a_ejt = d->e_jt;
        a_delta = d->delta_jt;
        a_homega = d->homega;
      } else if (a_ejt == 0.0 && a_homega == 0.0) {
        std::cerr << "either --defect or --ejt/--delta/--homega is required\n";
        return 2;
      }
      return cmd_apes(a_ejt, a_delta, a_homega, a_qmax, a_steps, a_format);
    }
    if (gt_cmd->parsed()) return cmd_gtensor(gt_defect, gt_cutoff, gt_format);
    if (zs_cmd->parsed())
      return cmd_zeeman_sweep(zs_defect, zs_gpar, zs_gperp, !zs_gpar_opt->empty(), zs_bmin,
                              zs_bmax, zs_steps, zs_theta, zs_hyperfine, zs_apar, zs_aperp,
                              !zs_apar_opt->empty(), zs_nspin, zs_cutoff, zs_format);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
