#pragma once

#include "spacefn/smachine.hpp"

#include <map>
#include <tuple>

namespace spacefn {

struct Relator {
  GroupWord word;   // cyclically reduced, canonical (lexicographically least) rotation
  std::string cls;  // "theta_q" | "theta_a" | "hub"
  // provenance, kept in memory only
  std::string rule;
  int index = 0;       // q-relator position, or the theta index of a commutator
  std::string letter;  // commutator letter name
};

// Generators: the q-letters and a-letters of the machine plus N command
// letters per positive rule; relators encode one conjugation step per rule
// and position, commutators let command letters slide over free sector
// content, and the single hub relator kills the accept word.
struct GroupPresentation {
  AlphabetPtr gens;
  std::vector<Relator> relators;
  int N = 0, L = 0, K = 0;
  Rat delta{1, 4};

  std::map<std::pair<std::string, int>, size_t> qrel;                   // (rule, i) -> relator
  std::map<std::tuple<std::string, int, std::string>, size_t> arel;     // (rule, theta idx, letter)
  size_t hub_index = 0;

  SymbolId theta(const std::string& rule, int i) const {
    return gens->id(rule + "@" + std::to_string(i));
  }
  const Relator& q_relator(const std::string& rule, int i) const {
    return relators.at(qrel.at({rule, i}));
  }
  const Relator& a_relator(const std::string& rule, int theta_idx, const std::string& letter) const {
    return relators.at(arel.at({rule, theta_idx, letter}));
  }
  const Relator& hub() const { return relators.at(hub_index); }
};

namespace detail {

inline GroupWord map_to_gens(const GroupPresentation& p, const AlphabetPtr& src,
                             const GroupWord& w) {
  std::vector<LetterCode> v;
  for (auto c : w.letters()) {
    Letter l = decode(c);
    v.push_back(encode(Letter{p.gens->id(src->name(l.sym)), l.sign}));
  }
  return GroupWord(p.gens, std::move(v));
}

inline void compile_machine_into(GroupPresentation& p, const SMachine& m) {
  int N = static_cast<int>(m.block_count());
  GroupWord eps(p.gens);
  auto lw = [&](SymbolId s, int sign) {
    return GroupWord(p.gens, {encode(Letter{p.gens->id(m.alphabet->name(s)), sign})});
  };
  for (const auto& r : m.rules) {
    if (r.sign < 0) continue;
    for (int i = 1; i <= N; ++i) {
      const SRulePart& part = r.parts[i - 1];
      GroupWord U = concat(concat(detail::map_to_gens(p, m.alphabet, part.lhs_left),
                                  lw(part.lhs_state, +1)),
                           detail::map_to_gens(p, m.alphabet, part.lhs_right));
      GroupWord V = concat(concat(detail::map_to_gens(p, m.alphabet, part.rhs_left),
                                  lw(part.rhs_state, +1)),
                           detail::map_to_gens(p, m.alphabet, part.rhs_right));
      int next = i == N ? 1 : i + 1;
      GroupWord ti(p.gens, {encode(Letter{p.theta(r.name, i), +1})});
      GroupWord tn(p.gens, {encode(Letter{p.theta(r.name, next), +1})});
      GroupWord rel = concat(concat(U, tn), concat(invert(V), invert(ti)));
      Relator rr;
      rr.word = canonical_rotation(cyclic_reduce(rel));
      rr.cls = "theta_q";
      rr.rule = r.name;
      rr.index = i;
      p.qrel[{r.name, i}] = p.relators.size();
      p.relators.push_back(std::move(rr));
    }
    for (int s = 0; s + 1 < N; ++s) {
      const SectorDomain& d = r.domains[s];
      if (d.kind == SectorDomain::Empty) continue;
      const std::vector<SymbolId>& letters =
          d.kind == SectorDomain::All ? m.sector_alphabets[s] : d.letters;
      int theta_idx = s + 2;  // the command letter that crosses sector s
      for (SymbolId a : letters) {
        GroupWord t(p.gens, {encode(Letter{p.theta(r.name, theta_idx), +1})});
        GroupWord aw = lw(a, +1);
        GroupWord rel = concat(concat(t, aw), concat(invert(t), invert(aw)));
        Relator rr;
        rr.word = canonical_rotation(cyclic_reduce(rel));
        rr.cls = "theta_a";
        rr.rule = r.name;
        rr.index = theta_idx;
        rr.letter = m.alphabet->name(a);
        p.arel[{r.name, theta_idx, rr.letter}] = p.relators.size();
        p.relators.push_back(std::move(rr));
      }
    }
  }
}

inline void add_generators(const std::shared_ptr<Alphabet>& gens, const SMachine& m) {
  int N = static_cast<int>(m.block_count());
  for (size_t b = 0; b < m.block_count(); ++b)
    for (SymbolId q : m.blocks[b])
      gens->add(m.alphabet->name(q), m.alphabet->kind(q), static_cast<int>(b));
  for (size_t s = 0; s < m.sector_count(); ++s)
    for (SymbolId y : m.sector_alphabets[s])
      gens->add(m.alphabet->name(y), SymbolKind::Tape, static_cast<int>(s));
  for (const auto& r : m.rules) {
    if (r.sign < 0) continue;
    for (int i = 1; i <= N; ++i)
      gens->add(r.name + "@" + std::to_string(i), SymbolKind::Command, i);
  }
}

}  // namespace detail

inline GroupWord hub_word(const GroupPresentation& p, const SMachine& m) {
  return detail::map_to_gens(p, m.alphabet, flatten(m, accept_word(m)));
}

inline GroupWord sigma_word(const GroupPresentation& p, const SMachine& m,
                            const std::vector<std::string>& input_base_letters) {
  return detail::map_to_gens(p, m.alphabet, flatten(m, make_input(m, input_base_letters)));
}

inline GroupPresentation compile(const SMachine& m) {
  if (m.copies < 2)
    throw std::invalid_argument("compile: machine is unmultiplied (no sector copies)");
  GroupPresentation p;
  p.N = static_cast<int>(m.block_count());
  p.L = m.copies;
  p.K = p.N / p.L - 1;
  p.delta = Rat(1, 3 * p.N + 1);
  auto gens = std::make_shared<Alphabet>();
  detail::add_generators(gens, m);
  p.gens = gens;
  detail::compile_machine_into(p, m);
  Relator hub;
  hub.word = canonical_rotation(cyclic_reduce(hub_word(p, m)));
  hub.cls = "hub";
  p.hub_index = p.relators.size();
  p.relators.push_back(std::move(hub));
  return p;
}

// Relators of the machine and its hat companion over merged generators
// (the k-letters, the start/accept state copies and the input letters are
// shared by name), plus the common hub.
inline GroupPresentation compile_embedding(const SMachine& m, const SMachine& hat) {
  if (m.copies < 2 || hat.copies != m.copies)
    throw std::invalid_argument("compile_embedding: machines must be multiplied alike");
  GroupPresentation p;
  p.N = static_cast<int>(m.block_count());
  p.L = m.copies;
  p.K = p.N / p.L - 1;
  p.delta = Rat(1, 3 * p.N + 1);
  auto gens = std::make_shared<Alphabet>();
  detail::add_generators(gens, m);
  // shared symbols re-register with identical kind/block; private ones are new
  detail::add_generators(gens, hat);
  p.gens = gens;
  detail::compile_machine_into(p, m);
  detail::compile_machine_into(p, hat);
  GroupWord h1 = hub_word(p, m), h2 = hub_word(p, hat);
  if (!(h1 == h2))
    throw std::logic_error("compile_embedding: the two accept words disagree");
  Relator hub;
  hub.word = canonical_rotation(cyclic_reduce(h1));
  hub.cls = "hub";
  p.hub_index = p.relators.size();
  p.relators.push_back(std::move(hub));
  return p;
}

// Expected relator count: per positive rule, N q-relations plus one
// commutator per letter of each unlocked sector domain, plus the hub.
inline size_t expected_relator_count(const SMachine& m) {
  size_t n = 0;
  for (const auto& r : m.rules) {
    if (r.sign < 0) continue;
    n += m.block_count();
    for (size_t s = 0; s + 1 < m.block_count(); ++s) {
      const SectorDomain& d = r.domains[s];
      if (d.kind == SectorDomain::All)
        n += m.sector_alphabets[s].size();
      else if (d.kind == SectorDomain::Subset)
        n += d.letters.size();
    }
  }
  return n + 1;
}

// ---- serialization ----------------------------------------------------------

inline Json presentation_to_json(const GroupPresentation& p) {
  Json gens = Json::array();
  for (SymbolId i = 0; i < p.gens->size(); ++i) {
    const auto& info = p.gens->info(i);
    std::string kind = info.kind == SymbolKind::Command
                           ? "theta"
                           : (info.kind == SymbolKind::Tape ? "a" : "q");
    gens.push_back(Json{{"name", info.name}, {"kind", kind}, {"sector", info.block}});
  }
  Json rels = Json::array();
  for (const auto& r : p.relators)
    rels.push_back(Json{{"class", r.cls}, {"word", word_to_json(r.word)}});
  return Json{{"generators", gens},
              {"relators", rels},
              {"meta", Json{{"N", p.N}, {"L", p.L}, {"K", p.K}, {"delta", format_rational(p.delta)}}}};
}

inline GroupPresentation presentation_from_json(const Json& j) {
  GroupPresentation p;
  auto gens = std::make_shared<Alphabet>();
  for (const auto& g : j.at("generators")) {
    std::string kind = g.at("kind").get<std::string>();
    SymbolKind k = kind == "theta" ? SymbolKind::Command
                                   : (kind == "a" ? SymbolKind::Tape : SymbolKind::State);
    gens->add(g.at("name").get<std::string>(), k, g.at("sector").get<int>());
  }
  p.gens = gens;
  for (const auto& r : j.at("relators")) {
    Relator rr;
    rr.cls = r.at("class").get<std::string>();
    rr.word = word_from_json(p.gens, r.at("word"));
    if (rr.cls == "hub") p.hub_index = p.relators.size();
    p.relators.push_back(std::move(rr));
  }
  p.N = j.at("meta").at("N").get<int>();
  p.L = j.at("meta").at("L").get<int>();
  p.K = j.at("meta").at("K").get<int>();
  p.delta = parse_rational(j.at("meta").at("delta").get<std::string>());
  return p;
}

}  // namespace spacefn
