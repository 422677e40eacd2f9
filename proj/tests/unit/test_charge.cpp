#include <doctest.h>

#include "charge.hpp"
#include "errors.hpp"
#include "support.hpp"

using namespace chargeaudit;
using testsupport::engine;

TEST_CASE("parse first-degree murder") {
  ChargeCode c = parse_charge_code("187(A) PC F 1");
  CHECK(c.statute == "187");
  CHECK(c.subdivisions == std::vector<std::string>{"A"});
  CHECK(c.body == CodeBody::PC);
  CHECK(c.charge_class == ChargeClass::Felony);
  CHECK(c.degree == 1);
  CHECK(c.derivative == Derivative::None);
}

TEST_CASE("parse attempted form") {
  ChargeCode c = parse_charge_code("664/288 (A) PC F");
  CHECK(c.statute == "288");
  CHECK(c.subdivisions == std::vector<std::string>{"A"});
  CHECK(c.body == CodeBody::PC);
  CHECK(c.charge_class == ChargeClass::Felony);
  CHECK(c.derivative == Derivative::Attempt);
  CHECK(c.prefix == "664");
}

TEST_CASE("empty and non-statute text is rejected") {
  CHECK_THROWS_AS(parse_charge_code(""), ParseError);
  CHECK_THROWS_AS(parse_charge_code("   "), ParseError);
  CHECK_THROWS_AS(parse_charge_code("PC F"), ParseError);
}

TEST_CASE("normalization") {
  CHECK(normalize_charge_text("  273.5 (a)   pc m ") == "273.5(A) PC M");
  CHECK(normalize_charge_text("664 / 187(a) PC F") == "664/187(A) PC F");
}

TEST_CASE("canonical text round trips") {
  for (const auto& text : testsupport::charge_pool()) {
    ChargeCode c = engine().catalog.parse(text);
    CHECK(engine().catalog.parse(c.canonical()) == c);
  }
}

TEST_CASE("charge lists") {
  CHECK(split_charge_list("187(A) PC F; ;240 PC M;") ==
        std::vector<std::string>{"187(A) PC F", "240 PC M"});
  CHECK(split_charge_list("").empty());
}

TEST_CASE("violent list membership") {
  const auto& cat = engine().catalog;
  CHECK(cat.is_violent(cat.parse("211 PC F 1")));
  CHECK(cat.is_violent(cat.parse("240 PC M")));
  CHECK_FALSE(cat.is_violent(cat.parse("9999 PC M")));
}

TEST_CASE("exclusion list membership") {
  const auto& cat = engine().catalog;
  CHECK(cat.is_exclusion_charge(cat.parse("187(A) PC F")));
  CHECK(cat.is_exclusion_charge(cat.parse("664/187(A) PC F")));
  CHECK(cat.is_exclusion_charge(cat.parse("653F(B) PC F")));
  CHECK_FALSE(cat.is_exclusion_charge(cat.parse("240 PC M")));
  CHECK_FALSE(cat.is_exclusion_charge(cat.parse("9999 PC M")));
}

TEST_CASE("bump-up list membership") {
  const auto& cat = engine().catalog;
  CHECK(cat.is_bumpup_charge(cat.parse("273.5(A) PC M")));
  CHECK_FALSE(cat.is_bumpup_charge(cat.parse("9999 PC M")));
}

TEST_CASE("imitation firearm follows the ambiguity policy") {
  ChargeCatalog cat = engine().catalog;
  const ChargeCode c = cat.parse("417.4 PC M");
  CHECK_FALSE(cat.is_bumpup_charge(c));
  CatalogOptions on = cat.options();
  on.ambiguous_override = true;
  cat.set_options(on);
  CHECK(cat.is_bumpup_charge(c));
}

TEST_CASE("derivative violence is a policy") {
  ChargeCatalog cat = engine().catalog;
  const ChargeCode attempted = cat.parse("664/240 PC M");
  CHECK_FALSE(cat.is_violent(attempted));
  CatalogOptions o = cat.options();
  o.violent_includes_derivatives = true;
  cat.set_options(o);
  CHECK(cat.is_violent(attempted));
}
