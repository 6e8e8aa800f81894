#pragma once

#include "spacefn/compose.hpp"
#include "spacefn/smachine.hpp"
#include "spacefn/surgery.hpp"
#include "spacefn/word.hpp"

#include <random>

namespace spacefn::testing {

// The full machine pipeline over the shipped toy acceptor.
inline TMachine pipeline_tm() {
  return normalize_s10(split_single_letter(symmetrize(pad_machine(toy_machine()))));
}

// Minimal two-block machine: one erasing rule over a one-letter sector.
// Multiplied by 2 it has state letters k1 q r k2 r q, so N = 6.
inline SMachine tiny_machine() {
  SMachine m;
  auto alpha = std::make_shared<Alphabet>();
  SymbolId q = alpha->add("q", SymbolKind::State, 0);
  SymbolId r = alpha->add("r", SymbolKind::State, 1);
  SymbolId a = alpha->add("a", SymbolKind::Tape, 0);
  m.alphabet = alpha;
  m.blocks = {{q}, {r}};
  m.sector_alphabets = {{a}};
  GroupWord eps(m.alphabet);
  SRule del;
  del.name = "erase";
  del.parts.resize(2);
  del.parts[0] = {eps, eps, eps, eps, q, q};
  del.parts[1] = {eps, eps, GroupWord(m.alphabet, {encode(Letter{a, -1})}), eps, r, r};
  del.domains = {SectorDomain::all()};
  add_rule_pair(m, std::move(del));
  m.start_template = {{q, r}, {false}};
  m.accept_template = {{q, r}, {true}};
  m.input_base_names = {"a"};
  m.input_slots = {InputSlot{0, 1, false}};
  validate_smachine(m);
  return m;
}

inline GroupWord random_reduced_word(const AlphabetPtr& a, const std::vector<SymbolId>& letters,
                                     size_t len, std::mt19937_64& rng) {
  std::vector<LetterCode> v;
  std::uniform_int_distribution<size_t> pick(0, letters.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  while (v.size() < len) {
    LetterCode c = encode(Letter{letters[pick(rng)], coin(rng) ? +1 : -1});
    if (!v.empty() && v.back() == -c) continue;
    v.push_back(c);
  }
  return GroupWord(a, std::move(v));
}

inline std::vector<SymbolId> all_tape_letters(const SMachine& m) {
  std::vector<SymbolId> out;
  for (const auto& s : m.sector_alphabets) out.insert(out.end(), s.begin(), s.end());
  return out;
}

// Random reduced computation: applies random applicable rules, never the
// inverse of the previous one, staying under the tape-letter cap.
inline SComputation random_reduced_computation(const SMachine& m, const AdmissibleWord& start,
                                               size_t max_len, size_t a_cap,
                                               std::mt19937_64& rng) {
  SRuleIndex index(m);
  SComputation c;
  c.start = start;
  c.words.push_back(start);
  AdmissibleWord cur = start;
  std::string last;
  for (size_t step = 0; step < max_len; ++step) {
    std::vector<std::pair<std::string, AdmissibleWord>> options;
    for (size_t ri : index.candidates(cur)) {
      const SRule& r = m.rules[ri];
      if (!last.empty() && m.rule(last).inverse_name == r.name) continue;
      auto nxt = s_try_apply(m, cur, r);
      if (nxt && a_length(*nxt) <= a_cap) options.push_back({r.name, *nxt});
    }
    if (options.empty()) break;
    auto& [name, nxt] = options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
    cur = nxt;
    last = name;
    c.history.push_back(name);
    c.words.push_back(cur);
  }
  return c;
}

}  // namespace spacefn::testing
