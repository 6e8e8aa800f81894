#include "spacefn/multiply.hpp"

#include "spacefn/adding.hpp"
#include "spacefn/project.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace spacefn;

namespace {

}  // namespace

TEST_CASE("mirror multiplication structure") {
  SMachine z = build_adding({"a", "b"});
  size_t K = z.block_count();

  SECTION("odd copy counts are rejected") {
    CHECK_THROWS_WITH(multiply(z, 3), Catch::Matchers::ContainsSubstring("even"));
    CHECK_THROWS(multiply(z, 0));
  }
  SECTION("the accept word has (K+1)L state letters") {
    for (int L : {2, 4}) {
      SMachine zl = multiply(z, L);
      CHECK(zl.block_count() == (K + 1) * static_cast<size_t>(L));
      CHECK(norm(flatten(zl, accept_word(zl))) == (K + 1) * static_cast<size_t>(L));
      CHECK(zl.rules.size() == z.rules.size());
    }
  }
  SECTION("input words carry L/2 copies and L/2 mirror copies") {
    SMachine zl = multiply(z, 4);
    AdmissibleWord w = make_input(zl, {"a", "b"});
    int plain = 0, mirrored = 0;
    for (const auto& slot : zl.input_slots) {
      const GroupWord& sec = w.sectors[slot.sector];
      REQUIRE(sec.size() == 2);
      std::string first = zl.alphabet->name(decode(sec.letters()[0]).sym);
      if (first.rfind("a#", 0) == 0) ++plain;
      if (first.rfind("b#", 0) == 0) ++mirrored;
    }
    CHECK(plain == 2);
    CHECK(mirrored == 2);
  }
  SECTION("a rule acts on the mirror copy in mirror image") {
    SMachine zl = multiply(z, 2);
    AdmissibleWord w = make_input(zl, {"a", "b"});
    AdmissibleWord w2 = s_apply(zl, w, zl.rule("mark(b)"));
    // locate the two input sectors
    const auto& s1 = w2.sectors[zl.input_slots[0].sector];
    const auto& s2 = w2.sectors[zl.input_slots[1].sector];
    REQUIRE(s1.size() == s2.size());
    for (size_t i = 0; i < s1.size(); ++i) {
      Letter l1 = decode(s1.letters()[i]);
      Letter l2 = decode(s2.letters()[s2.size() - 1 - i]);
      CHECK(l1.sign == l2.sign);
      CHECK(split_copy_tag(zl.alphabet->name(l1.sym)).first ==
            split_copy_tag(zl.alphabet->name(l2.sym)).first);
    }
  }
  SECTION("separator letters are fixed by every rule") {
    SMachine zl = multiply(z, 2);
    for (const auto& r : zl.rules)
      for (size_t b = 0; b < zl.block_count(); ++b)
        if (zl.alphabet->kind(zl.blocks[b][0]) == SymbolKind::Separator) {
          CHECK(r.parts[b].lhs_state == r.parts[b].rhs_state);
          CHECK(r.parts[b].lhs_left.empty());
          CHECK(r.parts[b].rhs_left.empty());
          CHECK(r.parts[b].lhs_right.empty());
          CHECK(r.parts[b].rhs_right.empty());
        }
  }
}

TEST_CASE("multiplied runs replay the single-machine history") {
  SMachine z = build_adding({"a"});
  GroupWord u(z.alphabet, {encode(Letter{z.alphabet->id("a"), +1})});
  SComputation c = canonical_z_run(z, u);
  for (int L : {2, 4}) {
    SMachine zl = multiply(z, L);
    SComputation cl = multiply_computation(zl, z, c, {"a"});
    CHECK(cl.length() == c.length());
    CHECK(zl.accept_template.matches(cl.words.back()));
    CHECK(cl.space() == static_cast<size_t>(L) * c.space());
  }
}

TEST_CASE("hat variant") {
  TMachine m5 = testing::pipeline_tm();
  SMachine s = compose(m5);
  SMachine sl = multiply(s, 2);
  SMachine hl = hat_variant(s, 2);

  SECTION("the first copy carries no tape letters") {
    for (const auto& slot : hl.input_slots) CHECK(slot.copy != 1);
    // every sector alphabet of copy 1 is empty: the hat input word is
    // shorter than the plain one by exactly one copy of u
    AdmissibleWord plain = make_input(sl, {"a.l", "a.l"});
    AdmissibleWord hat = make_input(hl, {"a.l", "a.l"});
    CHECK(norm(flatten(hl, hat)) == norm(flatten(sl, plain)) - 2);
  }
  SECTION("rules of the first copy have no tape letters") {
    // blocks of copy 1 are those before k2
    size_t k2 = 0;
    for (size_t b = 0; b < hl.block_count(); ++b)
      if (hl.alphabet->name(hl.blocks[b][0]) == "k2") k2 = b;
    for (const auto& r : hl.rules)
      for (size_t b = 0; b < k2; ++b) {
        CHECK(r.parts[b].lhs_left.empty());
        CHECK(r.parts[b].lhs_right.empty());
        CHECK(r.parts[b].rhs_left.empty());
        CHECK(r.parts[b].rhs_right.empty());
      }
  }
  SECTION("languages agree on small inputs") {
    for (int n = 0; n <= 3; ++n) {
      std::vector<std::string> base(n, "a.l");
      auto rs = s_space_search(sl, make_input(sl, base), 2 * n, 4000000);
      auto rh = s_space_search(hl, make_input(hl, base), 2 * n, 4000000);
      bool expect = n % 2 == 0;
      INFO("n=" << n);
      CHECK((rs.status == SSearchStatus::Found) == expect);
      CHECK((rh.status == SSearchStatus::Found) == expect);
    }
  }
}

TEST_CASE("multiplied machine serialization round trip") {
  SMachine zl = multiply(build_adding({"a"}), 2);
  Json j = smachine_to_json(zl);
  CHECK(smachine_to_json(smachine_from_json(j)) == j);
}
