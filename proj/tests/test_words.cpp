#include "spacefn/word.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace spacefn;

namespace {

AlphabetPtr small_alphabet() {
  auto a = std::make_shared<Alphabet>();
  a->add("a", SymbolKind::Tape, 0);
  a->add("b", SymbolKind::Tape, 0);
  a->add("q", SymbolKind::State, 0);
  a->add("t", SymbolKind::Command, 0);
  a->add("k", SymbolKind::Separator, 0);
  return a;
}

GroupWord w(const AlphabetPtr& a, std::initializer_list<std::pair<const char*, int>> ls) {
  std::vector<LetterCode> v;
  for (auto& [n, s] : ls) v.push_back(encode(Letter{a->id(n), s}));
  return GroupWord(a, std::move(v));
}

}  // namespace

TEST_CASE("free reduction") {
  auto a = small_alphabet();
  CHECK(free_reduce(w(a, {{"a", 1}, {"a", -1}, {"b", 1}})) == w(a, {{"b", 1}}));
  CHECK(free_reduce(GroupWord(a)) == GroupWord(a));
  CHECK(free_reduce(w(a, {{"a", 1}, {"b", 1}, {"b", -1}, {"a", -1}})) == GroupWord(a));
  GroupWord r = free_reduce(w(a, {{"a", 1}, {"b", 1}, {"b", -1}, {"a", 1}}));
  CHECK(r.reduced());
  CHECK(r == w(a, {{"a", 1}, {"a", 1}}));
}

TEST_CASE("free reduction properties") {
  auto a = small_alphabet();
  std::mt19937_64 rng(12345);
  std::vector<SymbolId> tape = {a->id("a"), a->id("b")};
  for (int i = 0; i < 1000; ++i) {
    size_t len = static_cast<size_t>(rng() % 31);
    GroupWord x = testing::random_reduced_word(a, tape, len, rng);
    // idempotence
    CHECK(free_reduce(free_reduce(x)) == free_reduce(x));
    // w . w^-1 vanishes
    CHECK(free_reduce(concat(x, invert(x))).empty());
  }
}

TEST_CASE("cyclic shift") {
  auto a = small_alphabet();
  GroupWord x = w(a, {{"a", 1}, {"b", 1}, {"a", -1}});
  CHECK(cyclic_shift(x, 1) == w(a, {{"b", 1}, {"a", -1}, {"a", 1}}));
  CHECK(cyclic_shift(x, x.size()) == x);
  CHECK(cyclic_shift(GroupWord(a), 3) == GroupWord(a));
}

TEST_CASE("projection") {
  auto a = std::make_shared<Alphabet>();
  a->add("a1", SymbolKind::Tape, 0);
  a->add("a2", SymbolKind::Tape, 0);
  a->add("q", SymbolKind::State, 0);
  auto b = std::make_shared<Alphabet>();
  b->add("a", SymbolKind::Tape, 0);
  AlphabetPtr ap = a, bp = b;

  SymbolMap m(ap, bp);
  m.map("a1", "a");
  m.map("a2", "a");
  m.erase("q");
  GroupWord x = w(ap, {{"a1", 1}, {"q", 1}, {"a2", 1}});
  GroupWord img = project(x, m);
  CHECK(img == w(bp, {{"a", 1}, {"a", 1}}));

  SECTION("identity mapping") {
    auto id = SymbolMap::identity(ap);
    CHECK(project(x, id) == x);
  }
  SECTION("all images empty") {
    SymbolMap e(ap, bp);
    e.erase("a1");
    e.erase("a2");
    e.erase("q");
    CHECK(project(x, e).empty());
  }
  SECTION("unmapped symbol") {
    SymbolMap u(ap, bp);
    u.map("a1", "a");
    CHECK_THROWS_WITH(project(x, u), Catch::Matchers::ContainsSubstring("q"));
  }
  SECTION("signs preserved, no auto-reduction") {
    SymbolMap mm(ap, bp);
    mm.map("a1", "a");
    mm.map("a2", "a");
    mm.erase("q");
    GroupWord y = w(ap, {{"a1", 1}, {"q", 1}, {"a2", -1}});
    GroupWord im = project(y, mm);
    CHECK(im == w(bp, {{"a", 1}, {"a", -1}}));
    CHECK_FALSE(im.reduced());
  }
}

TEST_CASE("modified length") {
  auto a = small_alphabet();
  Rat delta(1, 10);
  // one command letter followed by one tape letter
  CHECK(modified_length(w(a, {{"t", 1}, {"a", 1}}), delta) == Rat(1));
  // q a a q
  CHECK(modified_length(w(a, {{"q", 1}, {"a", 1}, {"a", 1}, {"q", 1}}), delta) ==
        Rat(2) + Rat(2) * delta);
  CHECK(modified_length(GroupWord(a), delta) == Rat(0));
  // separator letters weigh like state letters
  CHECK(modified_length(w(a, {{"k", 1}, {"a", 1}}), delta) == Rat(1) + delta);
}

TEST_CASE("two-sided length bound") {
  auto a = small_alphabet();
  Rat delta(1, 13);
  std::mt19937_64 rng(777);
  std::vector<SymbolId> all = {a->id("a"), a->id("b"), a->id("q"), a->id("t"), a->id("k")};
  for (int i = 0; i < 500; ++i) {
    GroupWord x = testing::random_reduced_word(a, all, rng() % 25, rng);
    Rat m = modified_length(x, delta);
    Rat n(static_cast<long long>(norm(x)));
    CHECK(m <= n);
    CHECK(delta * n <= m);
  }
}

TEST_CASE("tuples and norms") {
  auto a = small_alphabet();
  WordTuple t({w(a, {{"a", 1}, {"b", 1}}), w(a, {{"q", 1}})});
  CHECK(norm(t) == 3);
  CHECK(a_length(w(a, {{"a", 1}, {"q", 1}, {"t", 1}})) == 1);
  CHECK(w(a, {{"a", 1}, {"b", 1}}).positive());
  CHECK_FALSE(w(a, {{"a", -1}}).positive());
}

TEST_CASE("canonical rotation and cyclic reduction") {
  auto a = small_alphabet();
  GroupWord x = w(a, {{"b", 1}, {"a", 1}});
  CHECK(canonical_rotation(x) == canonical_rotation(cyclic_shift(x, 1)));
  GroupWord y = w(a, {{"a", 1}, {"b", 1}, {"a", -1}});
  CHECK(cyclic_reduce(y) == w(a, {{"b", 1}}));
}

TEST_CASE("serialization round trips") {
  auto a = small_alphabet();
  Json alpha_json = a->to_json();
  auto a2 = Alphabet::from_json(alpha_json);
  CHECK(a2->to_json() == alpha_json);

  GroupWord x = w(a, {{"a", 1}, {"b", -1}});
  Json xj = word_to_json(x);
  CHECK(xj == Json::parse(R"(["a","-b"])"));
  CHECK(word_from_json(a, xj) == x);

  WordTuple t({x, GroupWord(a)});
  CHECK(tuple_from_json(a, tuple_to_json(t)) == t);
}
