#pragma once

#include "spacefn/smachine.hpp"

namespace spacefn {

// Letter copies follow a fixed naming convention: "x" is the working letter,
// "x.1" its marked copy (lives left of the p-head), "x.2" the carried copy
// (lives right of it). Multiplied machines append a "#<copy>" tag, which
// classification looks through.
inline std::pair<std::string, std::string> split_copy_tag(const std::string& name) {
  auto pos = name.rfind('#');
  if (pos == std::string::npos) return {name, ""};
  return {name.substr(0, pos), name.substr(pos)};
}

inline int copy_class(const std::string& name) {
  const std::string stem = split_copy_tag(name).first;
  if (stem.size() >= 2 && stem[stem.size() - 2] == '.') {
    if (stem.back() == '1') return 1;
    if (stem.back() == '2') return 2;
  }
  return 0;
}

inline std::string copy_base(const std::string& name) {
  auto [stem, tag] = split_copy_tag(name);
  if (copy_class(name) != 0) stem = stem.substr(0, stem.size() - 2);
  return stem + tag;
}

// The adding machine over alphabet A: a three-head rewriting system
// L u p v R that behaves like a binary counter over the letters of u. Its
// job downstream is to certify positive sector contents while preserving
// word length; its accepting runs take exponentially many steps.
//
// Positive rules, for each letter a of A:
//   seek(a):    p1 -> a.1^-1 p1 a.2      p1 walks left over marked letters
//   mark(a):    p1 -> a^-1 a.1 p2        first unmarked letter gets marked
//   back(a):    p2 -> a p2 a.2^-1        p2 returns to R, unloading carries
//   cycle:      p2 -> p1  (right sector locked)
//   finish:     p1 -> p3  (left sector locked: p must reach L)
//   restore(a): p3 -> a p3 a.2^-1  (left sector restricted to unmarked letters)
inline SMachine build_adding(const std::vector<std::string>& base_letters) {
  if (base_letters.empty()) {
    // Degenerate counter over the empty alphabet: only cycle/finish survive.
  }
  SMachine m;
  auto alpha = std::make_shared<Alphabet>();
  SymbolId L = alpha->add("L", SymbolKind::State, 0);
  SymbolId p1 = alpha->add("p1", SymbolKind::State, 1);
  SymbolId p2 = alpha->add("p2", SymbolKind::State, 1);
  SymbolId p3 = alpha->add("p3", SymbolKind::State, 1);
  SymbolId R = alpha->add("R", SymbolKind::State, 2);
  std::vector<SymbolId> y1, y2, originals;
  for (const auto& b : base_letters) {
    originals.push_back(alpha->add(b, SymbolKind::Tape, 0));
    y1.push_back(originals.back());
  }
  for (const auto& b : base_letters) y1.push_back(alpha->add(b + ".1", SymbolKind::Tape, 0));
  for (const auto& b : base_letters) y2.push_back(alpha->add(b + ".2", SymbolKind::Tape, 1));
  m.alphabet = alpha;
  m.blocks = {{L}, {p1, p2, p3}, {R}};
  m.sector_alphabets = {y1, y2};

  auto w = [&](std::initializer_list<std::pair<std::string, int>> ls) {
    std::vector<LetterCode> v;
    for (auto& [n, sgn] : ls) v.push_back(encode(Letter{alpha->id(n), sgn}));
    return GroupWord(m.alphabet, std::move(v));
  };
  GroupWord eps(m.alphabet);
  // Rules are written in substitution form: the p-part's lhs flanks are
  // empty and the rhs carries the inserted words (rl left, rr right).
  auto rule = [&](std::string name, SymbolId pf, SymbolId pt, GroupWord rl, GroupWord rr,
                  SectorDomain d1, SectorDomain d2) {
    SRule r;
    r.name = std::move(name);
    r.parts.resize(3);
    r.parts[0] = {eps, eps, eps, eps, L, L};
    r.parts[1] = {eps, eps, std::move(rl), std::move(rr), pf, pt};
    r.parts[2] = {eps, eps, eps, eps, R, R};
    r.domains = {std::move(d1), std::move(d2)};
    add_rule_pair(m, std::move(r));
  };

  for (const auto& b : base_letters) {
    rule("seek(" + b + ")", p1, p1, w({{b + ".1", -1}}), w({{b + ".2", +1}}), SectorDomain::all(),
         SectorDomain::all());
    rule("mark(" + b + ")", p1, p2, w({{b, -1}, {b + ".1", +1}}), GroupWord(m.alphabet),
         SectorDomain::all(), SectorDomain::all());
    rule("back(" + b + ")", p2, p2, w({{b, +1}}), w({{b + ".2", -1}}), SectorDomain::all(),
         SectorDomain::all());
  }
  rule("cycle", p2, p1, GroupWord(m.alphabet), GroupWord(m.alphabet), SectorDomain::all(),
       SectorDomain::empty());
  rule("finish", p1, p3, GroupWord(m.alphabet), GroupWord(m.alphabet), SectorDomain::empty(),
       SectorDomain::all());
  for (const auto& b : base_letters)
    rule("restore(" + b + ")", p3, p3, w({{b, +1}}), w({{b + ".2", -1}}),
         SectorDomain::subset(originals), SectorDomain::all());

  m.start_template = {{L, p1, R}, {false, true}};
  m.accept_template = {{L, p3, R}, {false, true}};
  m.input_base_names = base_letters;
  m.input_slots = {InputSlot{0, 1, false}};
  validate_smachine(m);
  return m;
}

// One step of the recommended rule order, decided from what sits next to the
// p-head. Returns the rule base and the base letter it is instantiated with,
// or nothing when the run is complete.
struct ZStep {
  std::string base;    // seek | mark | back | cycle | finish | restore
  std::string letter;  // base letter name, empty for cycle/finish
};

inline std::optional<ZStep> canonical_z_step(int phase, const AlphabetPtr& a,
                                             const GroupWord& sec1, const GroupWord& sec2) {
  auto name_of = [&](const GroupWord& w, size_t idx) {
    Letter l = decode(w.letters()[idx]);
    if (l.sign < 0) throw std::runtime_error("canonical run hit a negative letter");
    return a->name(l.sym);
  };
  if (phase == 1) {
    if (sec1.empty()) return ZStep{"finish", ""};
    std::string n = name_of(sec1, sec1.size() - 1);
    int cls = copy_class(n);
    if (cls == 1) return ZStep{"seek", copy_base(n)};
    if (cls == 0) return ZStep{"mark", n};
    throw std::runtime_error("carried copy found left of the head");
  }
  if (phase == 2) {
    if (sec2.empty()) return ZStep{"cycle", ""};
    return ZStep{"back", copy_base(name_of(sec2, 0))};
  }
  // phase 3
  if (sec2.empty()) return std::nullopt;
  return ZStep{"restore", copy_base(name_of(sec2, 0))};
}

// Accepting run of the adding machine on a positive input word, following
// the recommended rule order. Every word along the run has the same
// combinatorial length as the start word.
inline SComputation canonical_z_run(const SMachine& z, const GroupWord& u) {
  for (auto c : u.letters()) {
    Letter l = decode(c);
    if (l.sign < 0 || copy_class(z.alphabet->name(l.sym)) != 0)
      throw std::invalid_argument("canonical run needs a positive word over the base alphabet");
  }
  AdmissibleWord w;
  w.states = z.start_template.states;
  w.sectors = {u, GroupWord(z.alphabet)};
  std::vector<std::string> history;
  SymbolId p1 = z.alphabet->id("p1"), p2 = z.alphabet->id("p2");
  AdmissibleWord cur = w;
  size_t start_norm = norm(cur);
  while (true) {
    int phase = cur.states[1] == p1 ? 1 : cur.states[1] == p2 ? 2 : 3;
    auto step = canonical_z_step(phase, z.alphabet, cur.sectors[0], cur.sectors[1]);
    if (!step) break;
    std::string rn = step->letter.empty() ? step->base : step->base + "(" + step->letter + ")";
    cur = s_apply(z, cur, z.rule(rn));
    if (norm(cur) != start_norm)
      throw std::logic_error("canonical run changed the word length at " + rn);
    history.push_back(std::move(rn));
  }
  if (!z.accept_template.matches(cur)) throw std::logic_error("canonical run did not accept");
  return s_replay(z, w, history);
}

}  // namespace spacefn
