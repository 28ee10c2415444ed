#pragma once

/// Per-defect scalar parameters (Jahn-Teller surface, spin-orbit splitting,
/// orbital angular momenta, hyperfine constants) with validation, a built-in
/// vanadium-in-SiC table and a flat key=value parameter-file format.

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kdspin/constants.hpp"

namespace kdspin {

enum class Polytype { four_h, six_h };
enum class Site { h, k, k1, k2 };
enum class PlCenter { alpha, beta, gamma };

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string to_string(Polytype p) { return p == Polytype::four_h ? "4H" : "6H"; }

inline std::string to_string(Site s) {
  switch (s) {
    case Site::h: return "h";
    case Site::k: return "k";
    case Site::k1: return "k1";
    default: return "k2";
  }
}

inline std::string to_string(PlCenter c) {
  switch (c) {
    case PlCenter::alpha: return "alpha";
    case PlCenter::beta: return "beta";
    default: return "gamma";
  }
}

/// One catalog record. Energies in meV, frequencies in GHz, hyperfine in MHz.
struct DefectParams {
  Polytype polytype = Polytype::four_h;
  Site site = Site::h;
  std::optional<PlCenter> pl_center;

  double e_jt = 0.0;      // JT stabilization energy, meV
  double delta_jt = 0.0;  // barrier energy, meV
  double homega = 0.0;    // effective e-mode phonon energy, meV
  double de_soc = 0.0;    // intrinsic SO splitting GS2-GS1, GHz

  double lz_o_gs1 = 0.0;  // orbitally reduced angular momentum, GS1
  double lz_o_gs2 = 0.0;  // orbitally reduced angular momentum, GS2

  int twice_nuclear_spin = 0;       // nuclear spin I stored as 2I
  std::optional<double> a_par;      // axial hyperfine A_par, MHz
  std::optional<double> a_perp;     // axial hyperfine A_perp, MHz

  double g0 = constants::default_g0;

  double nuclear_spin() const { return 0.5 * twice_nuclear_spin; }

  std::string key() const { return to_string(polytype) + ":" + to_string(site); }

  /// Throws ValidationError naming the offending field.
  void validate() const {
    if (!(e_jt > 0.0)) throw ValidationError("e_jt must be > 0 (" + key() + ")");
    if (!(homega > 0.0)) throw ValidationError("homega must be > 0 (" + key() + ")");
    if (delta_jt < 0.0) throw ValidationError("delta_jt must be >= 0 (" + key() + ")");
    if (!(delta_jt < 2.0 * e_jt))
      throw ValidationError("delta_jt must be < 2*e_jt for a meaningful quadratic surface (" +
                            key() + ")");
    const bool site_ok = (polytype == Polytype::four_h)
                             ? (site == Site::h || site == Site::k)
                             : (site == Site::h || site == Site::k1 || site == Site::k2);
    if (!site_ok) throw ValidationError("site " + to_string(site) + " is not a " +
                                        to_string(polytype) + " site");
    if (twice_nuclear_spin < 0) throw ValidationError("nuclear_spin must be >= 0 (" + key() + ")");
    if ((a_par || a_perp) && twice_nuclear_spin == 0)
      throw ValidationError("a_par/a_perp given but nuclear_spin is 0 (" + key() + ")");
    if (!std::isfinite(de_soc)) throw ValidationError("de_soc must be finite (" + key() + ")");
  }
};

/// The five vanadium rows of the built-in reference table.
inline std::vector<DefectParams> built_in_catalog() {
  std::vector<DefectParams> rows;
  auto add = [&rows](Polytype p, Site s, PlCenter c, double ejt, double djt, double hw,
                     double soc, double lz1, double lz2) {
    DefectParams d;
    d.polytype = p;
    d.site = s;
    d.pl_center = c;
    d.e_jt = ejt;
    d.delta_jt = djt;
    d.homega = hw;
    d.de_soc = soc;
    d.lz_o_gs1 = lz1;
    d.lz_o_gs2 = lz2;
    d.twice_nuclear_spin = 7;  // 51V, I = 7/2
    rows.push_back(d);
  };
  add(Polytype::four_h, Site::h, PlCenter::beta, 9.4, 5.6, 60.19, 9.91, -0.022, -0.013);
  add(Polytype::four_h, Site::k, PlCenter::alpha, 13.1, 7.1, 49.81, 819.21, -0.125, 0.094);
  add(Polytype::six_h, Site::h, PlCenter::gamma, 9.3, 5.8, 47.19, 24.18, -0.012, -0.018);
  add(Polytype::six_h, Site::k1, PlCenter::beta, 11.4, 5.8, 49.43, 82.94, -0.015, -0.016);
  add(Polytype::six_h, Site::k2, PlCenter::alpha, 11.9, 6.1, 65.91, 808.58, -0.117, 0.086);
  for (const auto& r : rows) r.validate();
  return rows;
}

namespace detail {

inline std::string trim(std::string_view sv) {
  size_t b = sv.find_first_not_of(" \t\r");
  size_t e = sv.find_last_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(sv.substr(b, e - b + 1));
}

inline double parse_number(const std::string& value, const std::string& kkey, int line) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": key '" + kkey +
                     "': not a number: '" + value + "'");
  }
  if (pos != value.size())
    throw ParseError("line " + std::to_string(line) + ": key '" + kkey +
                     "': trailing characters in '" + value + "'");
  return v;
}

/// Shortest representation (at least 6 significant digits tried first) that
/// round-trips a double exactly.
inline std::string format_exact(double v) {
  char buf[64];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) return buf;
  }
  return buf;
}

}  // namespace detail

/// Parses the flat parameter-file format: records introduced by a [defect]
/// line, one lower_snake_case key = value per line, '#' comments.
/// Units are fixed by the schema: meV (e_jt, delta_jt, homega), GHz (de_soc),
/// MHz (a_par, a_perp).
inline std::vector<DefectParams> load_catalog(const std::string& source) {
  std::vector<DefectParams> rows;
  DefectParams cur;
  bool in_record = false;
  int line_no = 0;

  auto finish = [&rows, &cur, &in_record]() {
    if (!in_record) return;
    cur.validate();
    rows.push_back(cur);
    cur = DefectParams{};
    in_record = false;
  };

  std::istringstream in(source);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line == "[defect]") {
      finish();
      in_record = true;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected key = value, got '" +
                       line + "'");
    if (!in_record)
      throw ParseError("line " + std::to_string(line_no) + ": key outside a [defect] record");

    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (value.empty())
      throw ParseError("line " + std::to_string(line_no) + ": key '" + key + "': empty value");

    if (key == "polytype") {
      if (value == "4H")
        cur.polytype = Polytype::four_h;
      else if (value == "6H")
        cur.polytype = Polytype::six_h;
      else
        throw ParseError("line " + std::to_string(line_no) + ": polytype must be 4H or 6H");
    } else if (key == "site") {
      if (value == "h")
        cur.site = Site::h;
      else if (value == "k")
        cur.site = Site::k;
      else if (value == "k1")
        cur.site = Site::k1;
      else if (value == "k2")
        cur.site = Site::k2;
      else
        throw ParseError("line " + std::to_string(line_no) + ": unknown site '" + value + "'");
    } else if (key == "pl_center") {
      if (value == "alpha")
        cur.pl_center = PlCenter::alpha;
      else if (value == "beta")
        cur.pl_center = PlCenter::beta;
      else if (value == "gamma")
        cur.pl_center = PlCenter::gamma;
      else
        throw ParseError("line " + std::to_string(line_no) + ": unknown pl_center '" + value +
                         "'");
    } else if (key == "e_jt") {
      cur.e_jt = detail::parse_number(value, key, line_no);
    } else if (key == "delta_jt") {
      cur.delta_jt = detail::parse_number(value, key, line_no);
    } else if (key == "homega") {
      cur.homega = detail::parse_number(value, key, line_no);
    } else if (key == "de_soc") {
      cur.de_soc = detail::parse_number(value, key, line_no);
    } else if (key == "lz_o_gs1") {
      cur.lz_o_gs1 = detail::parse_number(value, key, line_no);
    } else if (key == "lz_o_gs2") {
      cur.lz_o_gs2 = detail::parse_number(value, key, line_no);
    } else if (key == "nuclear_spin") {
      const double spin = detail::parse_number(value, key, line_no);
      const double twice = 2.0 * spin;
      if (spin < 0.0 || std::abs(twice - std::round(twice)) > 1e-9)
        throw ParseError("line " + std::to_string(line_no) +
                         ": nuclear_spin must be a non-negative multiple of 1/2");
      cur.twice_nuclear_spin = static_cast<int>(std::lround(twice));
    } else if (key == "a_par") {
      cur.a_par = detail::parse_number(value, key, line_no);
    } else if (key == "a_perp") {
      cur.a_perp = detail::parse_number(value, key, line_no);
    } else if (key == "g0") {
      cur.g0 = detail::parse_number(value, key, line_no);
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  finish();
  return rows;
}

/// Inverse of load_catalog; numeric fields survive the round trip bit-for-bit.
inline std::string serialize_catalog(const std::vector<DefectParams>& rows) {
  std::ostringstream out;
  for (const auto& d : rows) {
    out << "[defect]\n";
    out << "polytype = " << to_string(d.polytype) << "\n";
    out << "site = " << to_string(d.site) << "\n";
    if (d.pl_center) out << "pl_center = " << to_string(*d.pl_center) << "\n";
    out << "e_jt = " << detail::format_exact(d.e_jt) << "\n";
    out << "delta_jt = " << detail::format_exact(d.delta_jt) << "\n";
    out << "homega = " << detail::format_exact(d.homega) << "\n";
    out << "de_soc = " << detail::format_exact(d.de_soc) << "\n";
    out << "lz_o_gs1 = " << detail::format_exact(d.lz_o_gs1) << "\n";
    out << "lz_o_gs2 = " << detail::format_exact(d.lz_o_gs2) << "\n";
    out << "nuclear_spin = " << detail::format_exact(d.nuclear_spin()) << "\n";
    if (d.a_par) out << "a_par = " << detail::format_exact(*d.a_par) << "\n";
    if (d.a_perp) out << "a_perp = " << detail::format_exact(*d.a_perp) << "\n";
    out << "g0 = " << detail::format_exact(d.g0) << "\n";
    out << "\n";
  }
  return out.str();
}

/// Finds a row by "4H:h"-style key.
inline const DefectParams* find_defect(const std::vector<DefectParams>& rows,
                                       const std::string& key) {
  for (const auto& r : rows)
    if (r.key() == key) return &r;
  return nullptr;
}

}  // namespace kdspin
