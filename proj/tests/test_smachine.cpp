#include "spacefn/adding.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace spacefn;

namespace {

AdmissibleWord z_word(const SMachine& z, const std::string& p, const std::string& u,
                      const std::string& v) {
  auto parse = [&](const std::string& s) {
    std::vector<LetterCode> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
      int sign = +1;
      if (tok[0] == '-') {
        sign = -1;
        tok = tok.substr(1);
      }
      out.push_back(encode(Letter{z.alphabet->id(tok), sign}));
    }
    return GroupWord(z.alphabet, out);
  };
  AdmissibleWord w;
  w.states = {z.alphabet->id("L"), z.alphabet->id(p), z.alphabet->id("R")};
  w.sectors = {parse(u), parse(v)};
  return w;
}

GroupWord a_word(const SMachine& z, int n) {
  std::vector<LetterCode> v(n, encode(Letter{z.alphabet->id("a"), +1}));
  return GroupWord(z.alphabet, std::move(v));
}

}  // namespace

TEST_CASE("adding machine construction") {
  SMachine z = build_adding({"a"});
  CHECK(z.positive_rule_count() == 6);  // 4 per-letter families + 2 fixed
  CHECK(z.rules.size() == 12);
  CHECK_NOTHROW(validate_smachine(z));
  SMachine z2 = build_adding({"a", "b"});
  CHECK(z2.positive_rule_count() == 10);
}

TEST_CASE("rule application semantics") {
  SMachine z = build_adding({"a"});
  SECTION("pure state change on the empty word") {
    AdmissibleWord w = z_word(z, "p1", "", "");
    AdmissibleWord w2 = s_apply(z, w, z.rule("finish"));
    CHECK(w2 == z_word(z, "p3", "", ""));
  }
  SECTION("the inserted inverse cancels a marked copy") {
    AdmissibleWord w = z_word(z, "p1", "a.1", "");
    AdmissibleWord w2 = s_apply(z, w, z.rule("seek(a)"));
    CHECK(w2 == z_word(z, "p1", "", "a.2"));
  }
  SECTION("blind application creates non-positive words") {
    AdmissibleWord w = z_word(z, "p1", "a", "");
    AdmissibleWord w2 = s_apply(z, w, z.rule("seek(a)"));
    CHECK(w2 == z_word(z, "p1", "a -a.1", "a.2"));
    CHECK_FALSE(positive(w2));
  }
  SECTION("locked sector reports a domain violation") {
    AdmissibleWord w = z_word(z, "p1", "a", "");
    CHECK_THROWS_WITH(s_apply(z, w, z.rule("finish")),
                      Catch::Matchers::ContainsSubstring("sector 1"));
  }
  SECTION("restricted domain rejects marked copies") {
    AdmissibleWord w = z_word(z, "p3", "a.1", "a.2");
    CHECK_THROWS_WITH(s_apply(z, w, z.rule("restore(a)")),
                      Catch::Matchers::ContainsSubstring("domain violation at sector 1"));
  }
}

TEST_CASE("apply then undo is the identity") {
  SMachine z = build_adding({"a"});
  std::mt19937_64 rng(42);
  auto tape = testing::all_tape_letters(z);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    AdmissibleWord w;
    w.states = {z.alphabet->id("L"),
                z.blocks[1][rng() % 3],
                z.alphabet->id("R")};
    w.sectors = {testing::random_reduced_word(z.alphabet, {tape[0], tape[1]}, rng() % 4, rng),
                 testing::random_reduced_word(z.alphabet, {tape[2]}, rng() % 3, rng)};
    for (const auto& r : z.rules) {
      auto nxt = s_try_apply(z, w, r);
      if (!nxt) continue;
      auto back = s_try_apply(z, *nxt, z.rule(r.inverse_name));
      if (!back) continue;  // domain may have been left
      CHECK(*back == w);
      // admissible word shape is preserved
      for (const auto& s : nxt->sectors) CHECK(s.reduced());
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("canonical adding runs") {
  SMachine z = build_adding({"a"});
  SECTION("empty input accepts in one step") {
    auto c = canonical_z_run(z, a_word(z, 0));
    CHECK(c.length() == 1);
    CHECK(c.history == std::vector<std::string>{"finish"});
  }
  SECTION("single letter: the five-step cycle") {
    auto c = canonical_z_run(z, a_word(z, 1));
    CHECK(c.history == std::vector<std::string>{"mark(a)", "cycle", "seek(a)", "finish",
                                                "restore(a)"});
    for (const auto& w : c.words) CHECK(norm(w) == norm(c.words[0]));
  }
  SECTION("all words keep the same length, and the run is positive-history") {
    for (int n = 0; n <= 6; ++n) {
      auto c = canonical_z_run(z, a_word(z, n));
      for (const auto& w : c.words) CHECK(norm(w) == norm(c.words[0]));
      for (const auto& h : c.history) CHECK(z.rule(h).sign > 0);
      CHECK(c.length() >= (size_t{1} << n));
    }
  }
  SECTION("rejects non-positive input") {
    GroupWord bad(z.alphabet, {encode(Letter{z.alphabet->id("a"), -1})});
    CHECK_THROWS(canonical_z_run(z, bad));
  }
}

TEST_CASE("minimal accepting time is exponential") {
  SMachine z = build_adding({"a"});
  for (int n = 0; n <= 4; ++n) {
    AdmissibleWord w;
    w.states = z.start_template.states;
    w.sectors = {a_word(z, n), GroupWord(z.alphabet)};
    auto r = s_time_bfs(z, w, n, 4000000);
    REQUIRE(r.status == SSearchStatus::Found);
    CHECK(r.time >= (size_t{1} << n));
    auto c = canonical_z_run(z, a_word(z, n));
    CHECK(r.time <= c.length());
  }
}

TEST_CASE("projection invariance along computations") {
  SMachine z = build_adding({"a"});
  auto project_content = [&](const AdmissibleWord& w) {
    std::vector<LetterCode> v;
    for (const auto& sec : w.sectors)
      for (auto c : sec.letters()) {
        Letter l = decode(c);
        v.push_back(encode(Letter{z.alphabet->id(copy_base(z.alphabet->name(l.sym))), l.sign}));
      }
    return free_reduce(GroupWord(z.alphabet, std::move(v)));
  };
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    AdmissibleWord w;
    w.states = {z.alphabet->id("L"), z.blocks[1][rng() % 3], z.alphabet->id("R")};
    auto tape = testing::all_tape_letters(z);
    w.sectors = {testing::random_reduced_word(z.alphabet, {tape[0], tape[1]}, rng() % 4, rng),
                 testing::random_reduced_word(z.alphabet, {tape[2]}, rng() % 3, rng)};
    auto c = testing::random_reduced_computation(z, w, 20, 5, rng);
    GroupWord p0 = project_content(c.words.front());
    for (const auto& wd : c.words) CHECK(project_content(wd) == p0);
  }
}

TEST_CASE("length monotonicity laws on sampled reduced computations") {
  SMachine z = build_adding({"a"});
  std::mt19937_64 rng(7);
  auto tape = testing::all_tape_letters(z);
  for (int i = 0; i < 1000; ++i) {
    AdmissibleWord w;
    w.states = {z.alphabet->id("L"), z.blocks[1][rng() % 3], z.alphabet->id("R")};
    w.sectors = {testing::random_reduced_word(z.alphabet, {tape[0], tape[1]}, rng() % 4, rng),
                 testing::random_reduced_word(z.alphabet, {tape[2]}, rng() % 3, rng)};
    auto c = testing::random_reduced_computation(z, w, 24, 5, rng);
    REQUIRE(reduced_history(z, c.history));
    // after a strict increase, lengths never decrease again
    bool increased = false;
    for (size_t t = 0; t + 1 < c.words.size(); ++t) {
      size_t a = norm(c.words[t]), b = norm(c.words[t + 1]);
      if (increased) CHECK(a <= b);
      if (a < b) increased = true;
    }
    // interior words never exceed both ends
    size_t cap = std::max(norm(c.words.front()), norm(c.words.back()));
    for (const auto& wd : c.words) CHECK(norm(wd) <= cap);
  }
}

TEST_CASE("no reduced loop between counter-boundary words") {
  SMachine z = build_adding({"a"});
  // Exhaustive at footprint <= 2: no reduced computation of length >= 1
  // joins two words that both read p1 next to R (or both p3 next to R) with
  // all tape letters unmarked.
  auto boundary = [&](const AdmissibleWord& w, const char* p) {
    if (w.states[1] != z.alphabet->id(p)) return false;
    if (!w.sectors[1].empty()) return false;
    for (auto c : w.sectors[0].letters())
      if (copy_class(z.alphabet->name(decode(c).sym)) != 0) return false;
    return true;
  };
  for (const char* phase : {"p1", "p3"}) {
    for (const auto& w0 : enumerate_words(z, 2)) {
      if (!boundary(w0, phase)) continue;
      // BFS over (word, last rule) pairs with reduced histories
      std::deque<std::pair<AdmissibleWord, std::string>> frontier;
      std::set<std::string> seen;
      frontier.push_back({w0, ""});
      while (!frontier.empty()) {
        auto [cur, last] = frontier.front();
        frontier.pop_front();
        for (const auto& r : z.rules) {
          if (!last.empty() && z.rule(last).inverse_name == r.name) continue;
          auto nxt = s_try_apply(z, cur, r);
          if (!nxt || a_length(*nxt) > 2) continue;
          CHECK_FALSE(boundary(*nxt, phase));
          std::string key = word_key(*nxt) + "!" + r.name;
          if (seen.insert(key).second) frontier.push_back({*nxt, r.name});
        }
      }
    }
  }
}

TEST_CASE("machine serialization round trip") {
  SMachine z = build_adding({"a", "b"});
  Json j = smachine_to_json(z);
  SMachine back = smachine_from_json(j);
  CHECK(smachine_to_json(back) == j);
}
