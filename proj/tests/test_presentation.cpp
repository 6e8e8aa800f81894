#include "spacefn/presentation.hpp"

#include "spacefn/adding.hpp"
#include "spacefn/multiply.hpp"
#include "spacefn/project.hpp"
#include "spacefn/witness.hpp"

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace spacefn;

namespace {

}  // namespace

TEST_CASE("compilation counts and shapes") {
  SMachine tiny = testing::tiny_machine();
  SMachine tl = multiply(tiny, 2);
  GroupPresentation p = compile(tl);

  SECTION("N=(K+1)L and the hub length") {
    CHECK(p.N == 6);
    CHECK(p.K == 2);
    CHECK(p.L == 2);
    CHECK(p.hub().word.size() == 6);
    CHECK(p.delta == Rat(1, 19));
  }
  SECTION("relator census matches the closed form") {
    CHECK(p.relators.size() == expected_relator_count(tl));
    // one positive rule, N q-relations, one commutator per copy letter
    CHECK(p.relators.size() == 6 + 2 + 1);
  }
  SECTION("theta-q relators carry exactly two command letters at adjacent indices") {
    for (const auto& r : p.relators) {
      if (r.cls != "theta_q") continue;
      std::vector<int> idx;
      int qcount = 0;
      for (auto c : r.word.letters()) {
        const auto& info = p.gens->info(decode(c).sym);
        if (info.kind == SymbolKind::Command) idx.push_back(info.block);
        else if (info.kind != SymbolKind::Tape) ++qcount;
      }
      REQUIRE(idx.size() == 2);
      CHECK(qcount >= 1);
      int lo = std::min(idx[0], idx[1]), hi = std::max(idx[0], idx[1]);
      CHECK((hi == lo + 1 || (lo == 1 && hi == p.N)));
    }
  }
  SECTION("theta-a relators are q-free commutators") {
    for (const auto& r : p.relators) {
      if (r.cls != "theta_a") continue;
      CHECK(r.word.size() == 4);
      int thetas = 0, as = 0;
      for (auto c : r.word.letters()) {
        SymbolKind k = p.gens->kind(decode(c).sym);
        if (k == SymbolKind::Command) ++thetas;
        if (k == SymbolKind::Tape) ++as;
      }
      CHECK(thetas == 2);
      CHECK(as == 2);
    }
  }
  SECTION("every relator is cyclically reduced and canonically rotated") {
    for (const auto& r : p.relators) {
      CHECK(r.word == canonical_rotation(cyclic_reduce(r.word)));
    }
  }
  SECTION("locked rules contribute no commutators") {
    SMachine z = build_adding({"a"});
    SMachine zl = multiply(z, 2);
    GroupPresentation zp = compile(zl);
    // the cycle rule locks its right sector; commutators only for the left
    for (const auto& [key, idx] : zp.arel) CHECK(std::get<0>(key) != "bogus");
    size_t cycle_comms = 0;
    for (const auto& r : zp.relators)
      if (r.cls == "theta_a" && r.rule == "cycle") ++cycle_comms;
    // cycle frees sector 1 of each copy (two letters each), locks sector 2
    CHECK(cycle_comms == 4);
  }
  SECTION("compile demands a multiplied machine") {
    CHECK_THROWS_WITH(compile(tiny), Catch::Matchers::ContainsSubstring("unmultiplied"));
  }
}

TEST_CASE("relator counts for several machine instances") {
  std::vector<SMachine> machines;
  machines.push_back(multiply(testing::tiny_machine(), 2));
  machines.push_back(multiply(testing::tiny_machine(), 4));
  machines.push_back(multiply(build_adding({"a"}), 2));
  machines.push_back(multiply(build_adding({"a", "b"}), 2));
  machines.push_back(multiply(compose(testing::pipeline_tm()), 2));
  for (const auto& m : machines) {
    GroupPresentation p = compile(m);
    CHECK(p.relators.size() == expected_relator_count(m));
    CHECK(p.N == static_cast<int>(m.block_count()));
  }
}

TEST_CASE("sigma and hub words") {
  SMachine z = build_adding({"a", "b"});
  SMachine zl = multiply(z, 4);
  GroupPresentation p = compile(zl);
  SECTION("empty input gives the bare start word") {
    GroupWord s = sigma_word(p, zl, {});
    CHECK(s.size() == static_cast<size_t>(p.N));
  }
  SECTION("hub length is N") { CHECK(hub_word(p, zl).size() == static_cast<size_t>(p.N)); }
  SECTION("sigma(ab, 4) holds two copies and two mirror copies") {
    GroupWord s = sigma_word(p, zl, {"a", "b"});
    CHECK(s.size() == static_cast<size_t>(p.N) + 8);
    std::string flat;
    for (auto c : s.letters()) flat += p.gens->name(decode(c).sym) + " ";
    // copies read a b, mirror copies read b a
    CHECK(flat.find("a#1 b#1") != std::string::npos);
    CHECK(flat.find("b#2 a#2") != std::string::npos);
    CHECK(flat.find("a#3 b#3") != std::string::npos);
    CHECK(flat.find("b#4 a#4") != std::string::npos);
  }
}

TEST_CASE("one-step conjugation identity via the witness builder") {
  SMachine z = build_adding({"a"});
  SMachine zl = multiply(z, 2);
  GroupPresentation p = compile(zl);
  std::mt19937_64 rng(31337);
  auto tape = testing::all_tape_letters(z);
  int checked = 0;
  while (checked < 100) {
    AdmissibleWord w;
    w.states = {z.alphabet->id("L"), z.blocks[1][rng() % 3], z.alphabet->id("R")};
    w.sectors = {testing::random_reduced_word(z.alphabet, {tape[0], tape[1]}, rng() % 3, rng),
                 testing::random_reduced_word(z.alphabet, {tape[2]}, rng() % 3, rng)};
    for (const auto& r : z.rules) {
      if (r.sign < 0) continue;
      if (!s_try_apply(z, w, r)) continue;
      // lift both the word and the step to the multiplied machine
      SComputation c;
      c.start = w;
      c.words.push_back(w);
      c.history.push_back(r.name);
      c.words.push_back(s_apply(z, w, r));
      SComputation cl = [&] {
        std::vector<AdmissibleWord> words;
        AdmissibleWord start = multiply_word(zl, z, w);
        SComputation out = s_replay(zl, start, {r.name});
        return out;
      }();
      WordTuple cur(gens_word(p, zl, cl.words[0]));
      std::vector<Move> mv;
      detail::StepBuilder sb(p, zl, mv, cur, 0);
      REQUIRE_NOTHROW(sb.expand_forward(zl.rule(r.name), cl.words[0], cl.words[1]));
      CHECK(cur.words[0] == gens_word(p, zl, cl.words[1]));
      ++checked;
    }
  }
}

TEST_CASE("presentation serialization round trip") {
  GroupPresentation p = compile(multiply(build_adding({"a"}), 2));
  Json j = presentation_to_json(p);
  GroupPresentation back = presentation_from_json(j);
  CHECK(presentation_to_json(back) == j);
  CHECK(back.N == p.N);
  CHECK(back.relators.size() == p.relators.size());
}

TEST_CASE("embedding presentation") {
  TMachine m5 = testing::pipeline_tm();
  SMachine s = compose(m5);
  SMachine sl = multiply(s, 2);
  SMachine hl = hat_variant(s, 2);
  GroupPresentation pe = compile_embedding(sl, hl);

  SECTION("shared generators are the k-letters, start/accept copies and inputs") {
    std::set<std::string> sl_names, hl_names;
    for (size_t b = 0; b < sl.block_count(); ++b)
      for (SymbolId q : sl.blocks[b]) sl_names.insert(sl.alphabet->name(q));
    for (size_t b = 0; b < hl.block_count(); ++b)
      for (SymbolId q : hl.blocks[b]) hl_names.insert(hl.alphabet->name(q));
    std::set<std::string> shared;
    for (const auto& n : sl_names)
      if (hl_names.count(n)) shared.insert(n);
    std::set<std::string> expected;
    for (int c = 1; c <= 2; ++c) expected.insert("k" + std::to_string(c));
    for (const auto& t : {sl.start_template.states, sl.accept_template.states})
      for (SymbolId q : t) {
        std::string n = sl.alphabet->name(q);
        if (n[0] != 'k') expected.insert(n);
      }
    CHECK(shared == expected);
  }
  SECTION("command letter families are disjoint") {
    std::set<std::string> sl_rules, hl_rules;
    for (const auto& r : sl.rules) sl_rules.insert(r.name);
    for (const auto& r : hl.rules) {
      CHECK_FALSE(sl_rules.count(r.name));
    }
  }
  SECTION("the hub is shared and the census adds up") {
    CHECK(pe.relators.size() ==
          expected_relator_count(sl) + expected_relator_count(hl) - 1);
  }
}

TEST_CASE("an accepted input word vanishes over the embedding presentation") {
  // Sigma(u,L) = A u B and the hat word is A B with the same A and B, so
  // u = A^-1 Sigma(u,L) hat^-1 A. The derivation wraps u accordingly, splits
  // into the two input configurations, and erases each by its own witness.
  TMachine m5 = testing::pipeline_tm();
  SMachine s = compose(m5);
  SMachine sl = multiply(s, 2);
  SMachine hl = hat_variant(s, 2);
  GroupPresentation pe = compile_embedding(sl, hl);

  std::vector<std::string> base = {"a.l", "a.l"};
  GroupWord sigma = gens_word(pe, sl, make_input(sl, base));
  GroupWord sigma_hat = gens_word(pe, hl, make_input(hl, base));
  REQUIRE(sigma.size() == sigma_hat.size() + 2);

  // locate u inside sigma: common prefix A, common suffix B
  size_t a_len = 0;
  while (a_len < sigma_hat.size() && sigma.letters()[a_len] == sigma_hat.letters()[a_len])
    ++a_len;
  a_len = std::min<size_t>(a_len, 2);
  GroupWord u(pe.gens, std::vector<LetterCode>(sigma.letters().begin() + a_len,
                                               sigma.letters().begin() + a_len + 2));

  Derivation d;
  d.start = WordTuple(u);
  WordTuple cur = d.start;
  auto emit = [&](Move m) {
    apply_move(pe, cur, m, d.moves.size());
    d.moves.push_back(m);
  };
  // wrap: u -> A u A^-1
  for (size_t i = a_len; i-- > 0;) {
    LetterCode c = sigma.letters()[i];
    int len = static_cast<int>(cur.words[0].size());
    emit({Move::InsertPair, 0, len, -c, -1, false, -1});
    emit({Move::CyclicShift, 0, len + 1, 0, -1, false, -1});
  }
  // pad B B^-1 after u
  GroupWord B(pe.gens, std::vector<LetterCode>(sigma.letters().begin() + a_len + 2,
                                               sigma.letters().end()));
  for (size_t t = 0; t < B.size(); ++t)
    emit({Move::InsertPair, 0, static_cast<int>(a_len + 2 + t), B.letters()[t], -1, false, -1});
  // now the word reads Sigma . hat^-1
  GroupWord expect = concat(sigma, invert(sigma_hat));
  REQUIRE(cur.words[0] == expect);
  emit({Move::Split, 0, static_cast<int>(sigma.size()), 0, -1, false, -1});
  REQUIRE(cur.words[0] == sigma);
  REQUIRE(cur.words[1] == invert(sigma_hat));

  // erase the first component by its witness
  SComputation run = canonical_s_run(s, m5, [&] {
    std::vector<LetterCode> v(2, encode(Letter{m5.alphabet->id("a"), +1}));
    return GroupWord(m5.alphabet, v);
  }(), 8, 1000000);
  Derivation ds = witness_derivation(pe, sl, multiply_computation(sl, s, run, base));
  for (const auto& m : ds.moves) emit(m);
  REQUIRE(cur.words.size() == 1);

  // erase the inverted hat component by the inverted hat witness
  Derivation dh =
      witness_derivation(pe, hl, multiply_computation(hl, s, run, base));
  Derivation dhi = invert_derivation(pe, dh);
  REQUIRE(dhi.start.words[0] == cur.words[0]);
  for (const auto& m : dhi.moves) emit(m);
  CHECK(cur.words.empty());

  auto v = verify(pe, d);
  CHECK(v.ok);
}
