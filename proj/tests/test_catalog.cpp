#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kdspin/catalog.hpp"
#include "kdspin/constants.hpp"

using namespace kdspin;
using Catch::Approx;

TEST_CASE("unit constants match CODATA arithmetic") {
  CHECK(constants::mev_to_ghz == Approx(241.799).margin(0.001));
  CHECK(constants::bohr_magneton_ghz_per_tesla == Approx(13.9962).margin(0.0005));
}

TEST_CASE("to_ghz conversion") {
  CHECK(constants::to_ghz(0.0) == 0.0);
  CHECK(constants::to_ghz(1.0) == Approx(241.799).margin(0.001));
  // 60.19 meV * 241.798924 GHz/meV
  CHECK(constants::to_ghz(60.19) == Approx(60.19 * 241.798924).margin(1e-3));
  CHECK(constants::to_ghz(60.19) == Approx(14553.877).margin(0.01));
}

TEST_CASE("built-in catalog reproduces the reference table verbatim") {
  const auto cat = built_in_catalog();
  REQUIRE(cat.size() == 5);

  struct Row {
    const char* key;
    double e_jt, delta_jt, homega, de_soc, lz1, lz2;
  };
  const Row expected[5] = {
      {"4H:h", 9.4, 5.6, 60.19, 9.91, -0.022, -0.013},
      {"4H:k", 13.1, 7.1, 49.81, 819.21, -0.125, 0.094},
      {"6H:h", 9.3, 5.8, 47.19, 24.18, -0.012, -0.018},
      {"6H:k1", 11.4, 5.8, 49.43, 82.94, -0.015, -0.016},
      {"6H:k2", 11.9, 6.1, 65.91, 808.58, -0.117, 0.086},
  };
  for (int i = 0; i < 5; ++i) {
    CAPTURE(i);
    CHECK(cat[i].key() == expected[i].key);
    CHECK(cat[i].e_jt == expected[i].e_jt);
    CHECK(cat[i].delta_jt == expected[i].delta_jt);
    CHECK(cat[i].homega == expected[i].homega);
    CHECK(cat[i].de_soc == expected[i].de_soc);
    CHECK(cat[i].lz_o_gs1 == expected[i].lz1);
    CHECK(cat[i].lz_o_gs2 == expected[i].lz2);
    CHECK(cat[i].twice_nuclear_spin == 7);
    CHECK(cat[i].g0 == 2.003);
    CHECK_FALSE(cat[i].a_par.has_value());
  }
  CHECK(cat[0].pl_center == PlCenter::beta);
  CHECK(cat[1].pl_center == PlCenter::alpha);
  CHECK(cat[2].pl_center == PlCenter::gamma);
}

TEST_CASE("validation rejects bad records") {
  DefectParams d = built_in_catalog()[0];

  SECTION("negative e_jt") {
    d.e_jt = -1.0;
    CHECK_THROWS_MATCHES(d.validate(), ValidationError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("e_jt")));
  }
  SECTION("zero homega") {
    d.homega = 0.0;
    CHECK_THROWS_AS(d.validate(), ValidationError);
  }
  SECTION("barrier too large") {
    d.delta_jt = 2.0 * d.e_jt;
    CHECK_THROWS_MATCHES(d.validate(), ValidationError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("delta_jt")));
  }
  SECTION("site/polytype mismatch") {
    d.site = Site::k1;  // 4H has h and k only
    CHECK_THROWS_AS(d.validate(), ValidationError);
    d.polytype = Polytype::six_h;
    CHECK_NOTHROW(d.validate());
    d.site = Site::k;  // 6H has h, k1, k2
    CHECK_THROWS_AS(d.validate(), ValidationError);
  }
  SECTION("hyperfine without nuclear spin") {
    d.twice_nuclear_spin = 0;
    d.a_par = 200.0;
    CHECK_THROWS_AS(d.validate(), ValidationError);
  }
}

TEST_CASE("parameter file round trip is bit exact") {
  auto cat = built_in_catalog();
  cat[0].a_par = 200.0;
  cat[0].a_perp = 0.1 + 0.2;           // not representable nicely
  cat[1].lz_o_gs1 = -1.0 / 3.0;
  cat[1].de_soc = 1e-17;

  const std::string text = serialize_catalog(cat);
  const auto reparsed = load_catalog(text);
  REQUIRE(reparsed.size() == cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CAPTURE(i);
    CHECK(reparsed[i].e_jt == cat[i].e_jt);
    CHECK(reparsed[i].delta_jt == cat[i].delta_jt);
    CHECK(reparsed[i].homega == cat[i].homega);
    CHECK(reparsed[i].de_soc == cat[i].de_soc);
    CHECK(reparsed[i].lz_o_gs1 == cat[i].lz_o_gs1);
    CHECK(reparsed[i].lz_o_gs2 == cat[i].lz_o_gs2);
    CHECK(reparsed[i].twice_nuclear_spin == cat[i].twice_nuclear_spin);
    CHECK(reparsed[i].a_par == cat[i].a_par);
    CHECK(reparsed[i].a_perp == cat[i].a_perp);
    CHECK(reparsed[i].g0 == cat[i].g0);
    CHECK(reparsed[i].pl_center == cat[i].pl_center);
  }
  // serialize again: identical bytes
  CHECK(serialize_catalog(reparsed) == text);
}

TEST_CASE("format_exact round-trips random doubles") {
  std::mt19937 rng(987);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-12, 12);
  for (int i = 0; i < 500; ++i) {
    const double v = mant(rng) * std::pow(10.0, expo(rng));
    CHECK(std::stod(detail::format_exact(v)) == v);
  }
}

TEST_CASE("parser reports schema violations with line numbers") {
  SECTION("unknown key") {
    const std::string bad = "[defect]\npolytype = 4H\nsite = h\nbogus_key = 1\n";
    CHECK_THROWS_MATCHES(load_catalog(bad), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("line 4") &&
                             Catch::Matchers::ContainsSubstring("bogus_key")));
  }
  SECTION("key outside record") {
    CHECK_THROWS_MATCHES(load_catalog("e_jt = 9.4\n"), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("outside")));
  }
  SECTION("bad number") {
    CHECK_THROWS_AS(load_catalog("[defect]\ne_jt = fish\n"), ParseError);
  }
  SECTION("missing equals") {
    CHECK_THROWS_AS(load_catalog("[defect]\npolytype 4H\n"), ParseError);
  }
  SECTION("bad nuclear spin") {
    CHECK_THROWS_AS(load_catalog("[defect]\nnuclear_spin = 0.3\n"), ParseError);
  }
  SECTION("invariant violation on load") {
    const std::string bad =
        "[defect]\npolytype = 4H\nsite = h\ne_jt = -1\ndelta_jt = 0\nhomega = 60\n";
    CHECK_THROWS_AS(load_catalog(bad), ValidationError);
  }
}

TEST_CASE("parser accepts comments and blank lines") {
  const std::string text =
      "# a comment\n"
      "\n"
      "[defect]\n"
      "polytype = 6H   # trailing comment\n"
      "site = k2\n"
      "e_jt = 11.9\n"
      "delta_jt = 6.1\n"
      "homega = 65.91\n"
      "de_soc = 808.58\n"
      "lz_o_gs1 = -0.117\n"
      "lz_o_gs2 = 0.086\n"
      "nuclear_spin = 3.5\n";
  const auto rows = load_catalog(text);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].key() == "6H:k2");
  CHECK(rows[0].lz_o_gs1 == -0.117);
  CHECK(rows[0].nuclear_spin() == 3.5);
}

TEST_CASE("find_defect") {
  const auto cat = built_in_catalog();
  REQUIRE(find_defect(cat, "6H:k1") != nullptr);
  CHECK(find_defect(cat, "6H:k1")->homega == 49.43);
  CHECK(find_defect(cat, "3C:h") == nullptr);
}
