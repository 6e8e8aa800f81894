#pragma once

#include "spacefn/word.hpp"

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace spacefn {

// Per-sector rule domain Y_s(theta): the whole sector alphabet, a subset of
// it, or empty (the locked case: the flanking state letters must meet).
struct SectorDomain {
  enum Kind { All, Empty, Subset } kind = All;
  std::vector<SymbolId> letters;  // for Subset, sorted

  static SectorDomain all() { return {All, {}}; }
  static SectorDomain empty() { return {Empty, {}}; }
  static SectorDomain subset(std::vector<SymbolId> ls) {
    std::sort(ls.begin(), ls.end());
    return {Subset, std::move(ls)};
  }
  bool operator==(const SectorDomain&) const = default;
};

// One block's slice of a rule: v_{i-1} q_i u_i -> v'_{i-1} q'_i u'_i.
// The left flanks are words over the sector left of the block, the right
// flanks over the sector right of it.
struct SRulePart {
  GroupWord lhs_left, lhs_right;
  GroupWord rhs_left, rhs_right;
  SymbolId lhs_state = 0, rhs_state = 0;
};

struct SRule {
  std::string name;
  int sign = +1;
  std::string inverse_name;
  std::string tag;  // "basic", "z", "shift" for composed machines; "" otherwise
  std::vector<SRulePart> parts;       // one per block
  std::vector<SectorDomain> domains;  // one per sector
};

inline SRule inverse_rule(const SRule& r) {
  SRule inv = r;
  inv.name = r.inverse_name.empty() ? r.name + "^-1" : r.inverse_name;
  inv.inverse_name = r.name;
  inv.sign = -r.sign;
  for (auto& p : inv.parts) {
    std::swap(p.lhs_left, p.rhs_left);
    std::swap(p.lhs_right, p.rhs_right);
    std::swap(p.lhs_state, p.rhs_state);
  }
  return inv;
}

// q_1 u_1 q_2 ... u_{n-1} q_n with one state letter per block, in block
// order, and every sector word freely reduced.
struct AdmissibleWord {
  std::vector<SymbolId> states;
  std::vector<GroupWord> sectors;

  bool operator==(const AdmissibleWord&) const = default;
};

inline size_t a_length(const AdmissibleWord& w) {
  size_t n = 0;
  for (const auto& s : w.sectors) n += s.size();
  return n;
}

inline size_t norm(const AdmissibleWord& w) { return w.states.size() + a_length(w); }

inline bool positive(const AdmissibleWord& w) {
  return std::all_of(w.sectors.begin(), w.sectors.end(),
                     [](const GroupWord& s) { return s.positive(); });
}

inline std::string word_key(const AdmissibleWord& w) {
  std::string k;
  for (auto s : w.states) k += std::to_string(s) + ".";
  for (const auto& sec : w.sectors) {
    k += "|";
    for (auto c : sec.letters()) k += std::to_string(c) + ",";
  }
  return k;
}

// Acceptance and start shapes: fixed state letters plus a per-sector
// emptiness requirement. Machines whose accept word is a single fixed word
// have every sector marked empty.
struct WordTemplate {
  std::vector<SymbolId> states;
  std::vector<bool> sector_empty;

  bool matches(const AdmissibleWord& w) const {
    if (w.states != states) return false;
    for (size_t s = 0; s < sector_empty.size(); ++s)
      if (sector_empty[s] && !w.sectors[s].empty()) return false;
    return true;
  }
};

// Where input words are written: sector index, copy tag, and whether the
// content goes in mirror-image order.
struct InputSlot {
  int sector;
  int copy = 1;
  bool mirrored = false;
};

struct SMachine {
  AlphabetPtr alphabet;
  std::vector<std::vector<SymbolId>> blocks;
  std::vector<std::vector<SymbolId>> sector_alphabets;
  std::vector<SRule> rules;
  WordTemplate start_template, accept_template;
  std::vector<std::string> input_base_names;  // input letters by base name
  std::vector<InputSlot> input_slots;
  std::vector<int> p_blocks;  // blocks added by composition, if any
  int copies = 1;             // L for multiplied machines

  size_t block_count() const { return blocks.size(); }
  size_t sector_count() const { return blocks.size() - 1; }

  const SRule& rule(const std::string& name) const {
    for (const auto& r : rules)
      if (r.name == name) return r;
    throw std::out_of_range("no rule named " + name);
  }

  size_t positive_rule_count() const {
    size_t n = 0;
    for (const auto& r : rules) n += r.sign > 0;
    return n;
  }
};

inline GroupWord flatten(const SMachine& m, const AdmissibleWord& w) {
  std::vector<LetterCode> v;
  for (size_t i = 0; i < w.states.size(); ++i) {
    v.push_back(encode(Letter{w.states[i], +1}));
    if (i < w.sectors.size())
      for (auto c : w.sectors[i].letters()) v.push_back(c);
  }
  return GroupWord(m.alphabet, std::move(v));
}

inline AdmissibleWord unflatten(const SMachine& m, const GroupWord& w) {
  AdmissibleWord out;
  std::vector<LetterCode> cur;
  for (auto c : w.letters()) {
    Letter l = decode(c);
    SymbolKind k = m.alphabet->kind(l.sym);
    if (k == SymbolKind::State || k == SymbolKind::Separator) {
      if (!out.states.empty()) out.sectors.emplace_back(m.alphabet, std::move(cur));
      cur.clear();
      out.states.push_back(l.sym);
    } else {
      cur.push_back(c);
    }
  }
  if (out.states.size() != m.block_count() || !cur.empty())
    throw std::invalid_argument("word is not admissible for this machine");
  return out;
}

// ---- rule application ---------------------------------------------------

struct ApplyFailure {
  enum Kind { StateMismatch, DomainViolation } kind;
  int index;  // block for StateMismatch, sector for DomainViolation
};

inline bool in_domain(const GroupWord& w, const SectorDomain& d) {
  switch (d.kind) {
    case SectorDomain::All: return true;
    case SectorDomain::Empty: return w.empty();
    case SectorDomain::Subset:
      for (auto c : w.letters())
        if (!std::binary_search(d.letters.begin(), d.letters.end(), decode(c).sym)) return false;
      return true;
  }
  return false;
}

// Heads are blind: applicability checks only the state letters and that each
// sector is a word over Y_s(theta). The rule then acts by the substitution
// q_i -> v_{i-1}^-1 v'_{i-1} q'_i u'_i u_i^-1 with automatic free reduction
// of each sector. State letters separate sectors, so no cross-sector
// cancellation can occur.
inline std::optional<AdmissibleWord> s_try_apply(const SMachine& m, const AdmissibleWord& w,
                                                 const SRule& r,
                                                 ApplyFailure* failure = nullptr) {
  auto fail = [&](ApplyFailure::Kind k, int idx) -> std::optional<AdmissibleWord> {
    if (failure) *failure = {k, idx};
    return std::nullopt;
  };
  for (size_t i = 0; i < m.block_count(); ++i)
    if (w.states[i] != r.parts[i].lhs_state)
      return fail(ApplyFailure::StateMismatch, static_cast<int>(i));
  for (size_t s = 0; s + 1 < m.block_count(); ++s)
    if (!in_domain(w.sectors[s], r.domains[s]))
      return fail(ApplyFailure::DomainViolation, static_cast<int>(s));

  AdmissibleWord out;
  out.states.resize(m.block_count());
  for (size_t i = 0; i < m.block_count(); ++i) out.states[i] = r.parts[i].rhs_state;
  for (size_t s = 0; s + 1 < m.block_count(); ++s) {
    // u'_s u_s^-1 . content . v_s^-1 v'_s
    GroupWord repl = concat(r.parts[s].rhs_right, invert(r.parts[s].lhs_right));
    repl = concat(repl, w.sectors[s]);
    repl = concat(repl, invert(r.parts[s + 1].lhs_left));
    repl = concat(repl, r.parts[s + 1].rhs_left);
    out.sectors.push_back(free_reduce(repl));
  }
  return out;
}

inline AdmissibleWord s_apply(const SMachine& m, const AdmissibleWord& w, const SRule& r) {
  ApplyFailure f{ApplyFailure::StateMismatch, -1};
  auto out = s_try_apply(m, w, r, &f);
  if (out) return *out;
  if (f.kind == ApplyFailure::StateMismatch)
    throw std::runtime_error("rule " + r.name + ": state mismatch at block " +
                             std::to_string(f.index + 1));
  throw std::runtime_error("rule " + r.name + ": domain violation at sector " +
                           std::to_string(f.index + 1));
}

// ---- computations ---------------------------------------------------------

struct SComputation {
  AdmissibleWord start;
  std::vector<std::string> history;
  std::vector<AdmissibleWord> words;  // includes start

  size_t space() const {
    size_t s = 0;
    for (const auto& w : words) s = std::max(s, a_length(w));
    return s;
  }
  size_t length() const { return history.size(); }
};

inline SComputation s_replay(const SMachine& m, const AdmissibleWord& start,
                             const std::vector<std::string>& history) {
  SComputation c;
  c.start = start;
  c.words.push_back(start);
  AdmissibleWord cur = start;
  for (const auto& name : history) {
    cur = s_apply(m, cur, m.rule(name));
    c.history.push_back(name);
    c.words.push_back(cur);
  }
  return c;
}

inline bool reduced_history(const SMachine& m, const std::vector<std::string>& history) {
  for (size_t i = 0; i + 1 < history.size(); ++i)
    if (m.rule(history[i]).inverse_name == history[i + 1]) return false;
  return true;
}

class SRuleIndex {
 public:
  explicit SRuleIndex(const SMachine& m) {
    for (size_t ri = 0; ri < m.rules.size(); ++ri) {
      std::string k;
      for (const auto& p : m.rules[ri].parts) k += std::to_string(p.lhs_state) + ",";
      buckets_[k].push_back(ri);
    }
  }
  const std::vector<size_t>& candidates(const AdmissibleWord& w) const {
    std::string k;
    for (auto s : w.states) k += std::to_string(s) + ",";
    auto it = buckets_.find(k);
    return it == buckets_.end() ? empty_ : it->second;
  }

 private:
  std::unordered_map<std::string, std::vector<size_t>> buckets_;
  std::vector<size_t> empty_;
};

// ---- searches ------------------------------------------------------------

enum class SSearchStatus { Found, Unreachable, Exhausted };

struct SSearchResult {
  SSearchStatus status;
  size_t space = 0;
  size_t time = 0;  // history length of the witness
  std::optional<SComputation> witness;
  size_t explored = 0;
};

// Minimal accepting space from w over admissible words with |.|_a bounded by
// space_cap; bottleneck-first, schedule independent, cap-relative.
inline SSearchResult s_space_search(const SMachine& m, const AdmissibleWord& start,
                                    size_t space_cap, size_t time_cap) {
  SSearchResult res{SSearchStatus::Unreachable, 0, 0, std::nullopt, 0};
  if (a_length(start) > space_cap) return res;
  SRuleIndex index(m);

  struct Node {
    size_t bottleneck;
    std::string key;
    bool operator>(const Node& o) const {
      return bottleneck != o.bottleneck ? bottleneck > o.bottleneck : key > o.key;
    }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
  std::unordered_map<std::string, size_t> best;
  std::unordered_map<std::string, AdmissibleWord> words;
  std::unordered_map<std::string, std::pair<std::string, std::string>> parent;

  std::string skey = word_key(start);
  best[skey] = a_length(start);
  words[skey] = start;
  pq.push({a_length(start), skey});

  while (!pq.empty()) {
    auto [b, key] = pq.top();
    pq.pop();
    if (b > best.at(key)) continue;
    const AdmissibleWord cur = words.at(key);
    if (++res.explored > time_cap) {
      res.status = SSearchStatus::Exhausted;
      return res;
    }
    if (m.accept_template.matches(cur)) {
      res.status = SSearchStatus::Found;
      res.space = b;
      std::vector<std::string> cmds;
      std::string k = key;
      while (k != skey) {
        auto& [pk, rn] = parent.at(k);
        cmds.push_back(rn);
        k = pk;
      }
      std::reverse(cmds.begin(), cmds.end());
      res.witness = s_replay(m, start, cmds);
      res.time = cmds.size();
      return res;
    }
    for (size_t ri : index.candidates(cur)) {
      auto nxt = s_try_apply(m, cur, m.rules[ri]);
      if (!nxt) continue;
      size_t nb = std::max(b, a_length(*nxt));
      if (nb > space_cap) continue;
      std::string nkey = word_key(*nxt);
      auto it = best.find(nkey);
      if (it != best.end() && it->second <= nb) continue;
      best[nkey] = nb;
      words[nkey] = *nxt;
      parent[nkey] = {key, m.rules[ri].name};
      pq.push({nb, nkey});
    }
  }
  return res;
}

// Minimal accepting time (number of rule applications) within a space cap.
inline SSearchResult s_time_bfs(const SMachine& m, const AdmissibleWord& start, size_t space_cap,
                                size_t time_cap) {
  SSearchResult res{SSearchStatus::Unreachable, 0, 0, std::nullopt, 0};
  if (a_length(start) > space_cap) return res;
  SRuleIndex index(m);
  std::unordered_map<std::string, std::pair<std::string, std::string>> parent;
  std::unordered_map<std::string, AdmissibleWord> words;
  std::set<std::string> seen;
  std::deque<std::pair<std::string, size_t>> frontier;

  std::string skey = word_key(start);
  seen.insert(skey);
  words[skey] = start;
  frontier.push_back({skey, 0});
  while (!frontier.empty()) {
    auto [key, depth] = frontier.front();
    frontier.pop_front();
    const AdmissibleWord cur = words.at(key);
    if (++res.explored > time_cap) {
      res.status = SSearchStatus::Exhausted;
      return res;
    }
    if (m.accept_template.matches(cur)) {
      res.status = SSearchStatus::Found;
      res.time = depth;
      std::vector<std::string> cmds;
      std::string k = key;
      while (k != skey) {
        auto& [pk, rn] = parent.at(k);
        cmds.push_back(rn);
        k = pk;
      }
      std::reverse(cmds.begin(), cmds.end());
      res.witness = s_replay(m, start, cmds);
      res.space = res.witness->space();
      return res;
    }
    for (size_t ri : index.candidates(cur)) {
      auto nxt = s_try_apply(m, cur, m.rules[ri]);
      if (!nxt || a_length(*nxt) > space_cap) continue;
      std::string nkey = word_key(*nxt);
      if (!seen.insert(nkey).second) continue;
      words[nkey] = *nxt;
      parent[nkey] = {key, m.rules[ri].name};
      frontier.push_back({nkey, depth + 1});
    }
  }
  return res;
}

// ---- construction helpers --------------------------------------------------

inline void add_rule_pair(SMachine& m, SRule r) {
  r.sign = +1;
  if (r.inverse_name.empty()) r.inverse_name = r.name + "^-1";
  SRule inv = inverse_rule(r);
  m.rules.push_back(std::move(r));
  m.rules.push_back(std::move(inv));
}

inline AdmissibleWord make_input(const SMachine& m, const std::vector<std::string>& base_letters) {
  for (const auto& b : base_letters)
    if (std::find(m.input_base_names.begin(), m.input_base_names.end(), b) ==
        m.input_base_names.end())
      throw std::invalid_argument("not an input letter: " + b);
  AdmissibleWord w;
  w.states = m.start_template.states;
  for (size_t s = 0; s + 1 < m.block_count(); ++s) w.sectors.emplace_back(m.alphabet);
  for (const auto& slot : m.input_slots) {
    std::vector<LetterCode> v;
    for (const auto& b : base_letters) {
      std::string name = m.copies > 1 ? b + "#" + std::to_string(slot.copy) : b;
      v.push_back(encode(Letter{m.alphabet->id(name), +1}));
    }
    if (slot.mirrored) std::reverse(v.begin(), v.end());
    w.sectors[slot.sector] = GroupWord(m.alphabet, std::move(v));
  }
  return w;
}

inline AdmissibleWord accept_word(const SMachine& m) {
  AdmissibleWord w;
  w.states = m.accept_template.states;
  for (size_t s = 0; s + 1 < m.block_count(); ++s) w.sectors.emplace_back(m.alphabet);
  return w;
}

// ---- validation -------------------------------------------------------------

inline void validate_smachine(const SMachine& m) {
  size_t n = m.block_count();
  if (m.sector_alphabets.size() != n - 1)
    throw std::invalid_argument("smachine: sector count must be block count - 1");
  auto in_set = [](const std::vector<SymbolId>& v, SymbolId s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  std::unordered_map<std::string, const SRule*> by_name;
  for (const auto& r : m.rules) by_name[r.name] = &r;
  for (const auto& r : m.rules) {
    if (r.parts.size() != n || r.domains.size() != n - 1)
      throw std::invalid_argument("rule " + r.name + ": wrong part/domain count");
    for (size_t i = 0; i < n; ++i) {
      if (!in_set(m.blocks[i], r.parts[i].lhs_state) || !in_set(m.blocks[i], r.parts[i].rhs_state))
        throw std::invalid_argument("rule " + r.name + ": state outside block " +
                                    std::to_string(i + 1));
      auto check_flank = [&](const GroupWord& w, int sector) {
        if (sector < 0 || sector >= static_cast<int>(n - 1)) {
          if (!w.empty())
            throw std::invalid_argument("rule " + r.name + ": flank outside sectors");
          return;
        }
        for (auto c : w.letters())
          if (!in_set(m.sector_alphabets[sector], decode(c).sym))
            throw std::invalid_argument("rule " + r.name + ": flank letter outside sector " +
                                        std::to_string(sector + 1));
        if (!in_domain(w, r.domains[sector]))
          throw std::invalid_argument("rule " + r.name + ": flank outside domain of sector " +
                                      std::to_string(sector + 1));
      };
      check_flank(r.parts[i].lhs_left, static_cast<int>(i) - 1);
      check_flank(r.parts[i].rhs_left, static_cast<int>(i) - 1);
      check_flank(r.parts[i].lhs_right, static_cast<int>(i));
      check_flank(r.parts[i].rhs_right, static_cast<int>(i));
    }
    auto it = by_name.find(r.inverse_name);
    if (it == by_name.end())
      throw std::invalid_argument("rule " + r.name + ": inverse rule missing");
    if (it->second->sign != -r.sign)
      throw std::invalid_argument("rule " + r.name + ": inverse rule has same sign class");
  }
}

// ---- serialization ----------------------------------------------------------

inline Json domain_to_json(const SMachine& m, const SectorDomain& d) {
  switch (d.kind) {
    case SectorDomain::All: return Json("all");
    case SectorDomain::Empty: return Json("empty");
    case SectorDomain::Subset: {
      Json arr = Json::array();
      for (auto s : d.letters) arr.push_back(m.alphabet->name(s));
      return arr;
    }
  }
  return Json();
}

inline Json srule_side(const SMachine& m, const SRulePart& p, bool lhs) {
  Json arr = Json::array();
  const GroupWord& l = lhs ? p.lhs_left : p.rhs_left;
  const GroupWord& r = lhs ? p.lhs_right : p.rhs_right;
  SymbolId q = lhs ? p.lhs_state : p.rhs_state;
  for (const auto& tok : word_to_json(l)) arr.push_back(tok);
  arr.push_back(m.alphabet->name(q));
  for (const auto& tok : word_to_json(r)) arr.push_back(tok);
  return arr;
}

inline Json smachine_to_json(const SMachine& m) {
  auto names = [&](const std::vector<SymbolId>& v) {
    Json arr = Json::array();
    for (auto s : v) arr.push_back(m.alphabet->name(s));
    return arr;
  };
  Json blocks = Json::array(), sectors = Json::array();
  for (const auto& b : m.blocks) blocks.push_back(names(b));
  for (const auto& s : m.sector_alphabets) sectors.push_back(names(s));
  Json rules = Json::array();
  for (const auto& r : m.rules) {
    Json parts = Json::array();
    for (const auto& p : r.parts)
      parts.push_back(Json{{"lhs", srule_side(m, p, true)}, {"rhs", srule_side(m, p, false)}});
    Json domains = Json::array();
    for (const auto& d : r.domains) domains.push_back(domain_to_json(m, d));
    Json rj{{"name", r.name}, {"sign", r.sign}, {"inverse", r.inverse_name},
            {"parts", parts}, {"domains", domains}};
    if (!r.tag.empty()) rj["tag"] = r.tag;
    rules.push_back(rj);
  }
  auto template_json = [&](const WordTemplate& t) {
    Json sect = Json::array();
    for (bool e : t.sector_empty) sect.push_back(e ? "empty" : "any");
    return Json{{"states", names(t.states)}, {"sectors", sect}};
  };
  Json slots = Json::array();
  for (const auto& s : m.input_slots)
    slots.push_back(Json{{"sector", s.sector}, {"copy", s.copy}, {"mirrored", s.mirrored}});
  return Json{{"blocks", blocks},
              {"sector_alphabets", sectors},
              {"rules", rules},
              {"start", template_json(m.start_template)},
              {"accept", template_json(m.accept_template)},
              {"input_letters", m.input_base_names},
              {"input_slots", slots},
              {"p_blocks", m.p_blocks},
              {"copies", m.copies}};
}

inline SMachine smachine_from_json(const Json& j) {
  SMachine m;
  auto alpha = std::make_shared<Alphabet>();
  const Json& blocks = j.at("blocks");
  const Json& sectors = j.at("sector_alphabets");
  for (size_t i = 0; i < blocks.size(); ++i) {
    std::vector<SymbolId> b;
    for (const auto& s : blocks[i])
      b.push_back(alpha->add(s.get<std::string>(), SymbolKind::State, static_cast<int>(i)));
    m.blocks.push_back(std::move(b));
  }
  for (size_t i = 0; i < sectors.size(); ++i) {
    std::vector<SymbolId> sa;
    for (const auto& s : sectors[i])
      sa.push_back(alpha->add(s.get<std::string>(), SymbolKind::Tape, static_cast<int>(i)));
    m.sector_alphabets.push_back(std::move(sa));
  }
  m.alphabet = alpha;
  auto parse_domain = [&](const Json& d) {
    if (d.is_string()) {
      if (d.get<std::string>() == "all") return SectorDomain::all();
      if (d.get<std::string>() == "empty") return SectorDomain::empty();
      throw std::invalid_argument("bad domain string");
    }
    std::vector<SymbolId> ls;
    for (const auto& s : d) ls.push_back(alpha->id(s.get<std::string>()));
    return SectorDomain::subset(std::move(ls));
  };
  for (const auto& rj : j.at("rules")) {
    SRule r;
    r.name = rj.at("name").get<std::string>();
    r.sign = rj.at("sign").get<int>();
    r.inverse_name = rj.at("inverse").get<std::string>();
    if (rj.contains("tag")) r.tag = rj.at("tag").get<std::string>();
    for (const auto& pj : rj.at("parts")) {
      SRulePart p;
      auto parse_side = [&](const Json& arr, GroupWord& left, SymbolId& q, GroupWord& right) {
        std::vector<LetterCode> lv, rv;
        bool seen_q = false;
        for (const auto& tok : arr) {
          std::string s = tok.get<std::string>();
          int sign = +1;
          if (!s.empty() && s[0] == '-') {
            sign = -1;
            s = s.substr(1);
          }
          SymbolId id = alpha->id(s);
          if (alpha->kind(id) == SymbolKind::State || alpha->kind(id) == SymbolKind::Separator) {
            q = id;
            seen_q = true;
          } else {
            (seen_q ? rv : lv).push_back(encode(Letter{id, sign}));
          }
        }
        left = GroupWord(m.alphabet, std::move(lv));
        right = GroupWord(m.alphabet, std::move(rv));
      };
      parse_side(pj.at("lhs"), p.lhs_left, p.lhs_state, p.lhs_right);
      parse_side(pj.at("rhs"), p.rhs_left, p.rhs_state, p.rhs_right);
      r.parts.push_back(std::move(p));
    }
    for (const auto& dj : rj.at("domains")) r.domains.push_back(parse_domain(dj));
    m.rules.push_back(std::move(r));
  }
  auto parse_template = [&](const Json& t) {
    WordTemplate w;
    for (const auto& s : t.at("states")) w.states.push_back(alpha->id(s.get<std::string>()));
    for (const auto& s : t.at("sectors")) w.sector_empty.push_back(s.get<std::string>() == "empty");
    return w;
  };
  m.start_template = parse_template(j.at("start"));
  m.accept_template = parse_template(j.at("accept"));
  for (const auto& s : j.at("input_letters")) m.input_base_names.push_back(s.get<std::string>());
  for (const auto& sj : j.at("input_slots"))
    m.input_slots.push_back(InputSlot{sj.at("sector").get<int>(), sj.at("copy").get<int>(),
                                      sj.at("mirrored").get<bool>()});
  m.p_blocks = j.at("p_blocks").get<std::vector<int>>();
  m.copies = j.at("copies").get<int>();
  validate_smachine(m);
  return m;
}

// ---- bounded enumeration (used by exhaustive test oracles) -----------------

inline void enumerate_reduced_words(const AlphabetPtr& a, const std::vector<SymbolId>& letters,
                                    size_t max_len,
                                    const std::function<void(const GroupWord&)>& visit) {
  std::vector<LetterCode> cur;
  std::function<void()> rec = [&] {
    visit(GroupWord(a, cur));
    if (cur.size() == max_len) return;
    for (SymbolId s : letters)
      for (int sign : {+1, -1}) {
        LetterCode c = encode(Letter{s, sign});
        if (!cur.empty() && cur.back() == -c) continue;
        cur.push_back(c);
        rec();
        cur.pop_back();
      }
  };
  rec();
}

inline std::vector<AdmissibleWord> enumerate_words(const SMachine& m, size_t a_cap) {
  std::vector<AdmissibleWord> out;
  std::vector<SymbolId> states(m.block_count());
  std::vector<GroupWord> sectors(m.sector_count());
  std::function<void(size_t)> pick_state = [&](size_t i) {
    if (i == m.block_count()) {
      std::function<void(size_t, size_t)> pick_sector = [&](size_t s, size_t used) {
        if (s == m.sector_count()) {
          out.push_back(AdmissibleWord{states, sectors});
          return;
        }
        enumerate_reduced_words(m.alphabet, m.sector_alphabets[s], a_cap - used,
                                [&](const GroupWord& w) {
                                  sectors[s] = w;
                                  pick_sector(s + 1, used + w.size());
                                });
      };
      pick_sector(0, 0);
      return;
    }
    for (SymbolId q : m.blocks[i]) {
      states[i] = q;
      pick_state(i + 1);
    }
  };
  pick_state(0);
  return out;
}

}  // namespace spacefn
