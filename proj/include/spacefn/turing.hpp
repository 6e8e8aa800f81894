#pragma once

#include "spacefn/word.hpp"

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace spacefn {

// One tape's slice of a command. The four admissible shapes: an unanchored
// pair of tape configurations u q v -> u' q' v', or an anchored state change
// (alpha q -> alpha q', q omega -> q' omega, alpha q omega -> alpha q' omega)
// which carries no tape letters and asserts emptiness of the anchored sides.
struct TMCommandPart {
  bool anchor_left = false;
  bool anchor_right = false;
  GroupWord lhs_left, lhs_right;  // words flanking the state letter on the lhs
  GroupWord rhs_left, rhs_right;
  SymbolId lhs_state = 0, rhs_state = 0;
};

struct TMCommand {
  std::string name;
  int sign = 0;  // 0 = unsigned machine, otherwise +1/-1 with a paired inverse
  std::string inverse_name;
  std::vector<TMCommandPart> parts;  // one per tape
};

struct TapeCfg {
  GroupWord left;  // word to the left of the head, positive
  SymbolId state;
  GroupWord right;

  bool operator==(const TapeCfg& o) const {
    return state == o.state && left == o.left && right == o.right;
  }
};

// Full configuration alpha_1 U_1 omega_1 ... alpha_k U_k omega_k, stored by
// its per-tape decomposition.
struct TMConfig {
  std::vector<TapeCfg> tapes;

  bool operator==(const TMConfig& o) const { return tapes == o.tapes; }
};

struct TMachine {
  AlphabetPtr alphabet;
  int tape_count = 0;
  std::vector<std::vector<SymbolId>> state_blocks;    // Q_i per tape
  std::vector<std::vector<SymbolId>> tape_alphabets;  // Y_i per tape
  std::vector<SymbolId> input_alphabet;               // X, a subset of Y_1
  std::vector<SymbolId> alphas, omegas;               // separator heads
  std::vector<TMCommand> commands;
  std::vector<SymbolId> start_states, accept_states;

  bool symmetric() const {
    return !commands.empty() &&
           std::all_of(commands.begin(), commands.end(), [](const TMCommand& c) { return c.sign != 0; });
  }

  const TMCommand& command(const std::string& name) const {
    for (const auto& c : commands)
      if (c.name == name) return c;
    throw std::out_of_range("no command named " + name);
  }
};

inline size_t a_length(const TMConfig& w) {
  size_t n = 0;
  for (const auto& t : w.tapes) n += t.left.size() + t.right.size();
  return n;
}

inline GroupWord flatten(const TMachine& m, const TMConfig& w) {
  std::vector<LetterCode> v;
  for (int i = 0; i < m.tape_count; ++i) {
    const auto& t = w.tapes[i];
    v.push_back(encode(Letter{m.alphas[i], +1}));
    for (auto c : t.left.letters()) v.push_back(c);
    v.push_back(encode(Letter{t.state, +1}));
    for (auto c : t.right.letters()) v.push_back(c);
    v.push_back(encode(Letter{m.omegas[i], +1}));
  }
  return GroupWord(m.alphabet, std::move(v));
}

inline std::string config_key(const TMConfig& w) {
  std::string k;
  for (const auto& t : w.tapes) {
    for (auto c : t.left.letters()) k += std::to_string(c) + ",";
    k += "|" + std::to_string(t.state) + "|";
    for (auto c : t.right.letters()) k += std::to_string(c) + ",";
    k += ";";
  }
  return k;
}

inline void validate_config(const TMachine& m, const TMConfig& w) {
  if (static_cast<int>(w.tapes.size()) != m.tape_count)
    throw std::invalid_argument("malformed configuration: wrong tape count");
  for (int i = 0; i < m.tape_count; ++i) {
    const auto& t = w.tapes[i];
    const auto& block = m.state_blocks[i];
    if (std::find(block.begin(), block.end(), t.state) == block.end())
      throw std::invalid_argument("malformed configuration: state not in block of tape " +
                                  std::to_string(i + 1));
    for (const GroupWord* wd : {&t.left, &t.right}) {
      if (!wd->positive())
        throw std::invalid_argument("malformed configuration: non-positive tape word");
      for (auto c : wd->letters()) {
        SymbolId s = decode(c).sym;
        const auto& ys = m.tape_alphabets[i];
        if (std::find(ys.begin(), ys.end(), s) == ys.end())
          throw std::invalid_argument("malformed configuration: letter outside tape alphabet " +
                                      std::to_string(i + 1));
      }
    }
  }
}

namespace detail {
inline bool is_suffix(const GroupWord& pat, const GroupWord& w) {
  if (pat.size() > w.size()) return false;
  return std::equal(pat.letters().rbegin(), pat.letters().rend(), w.letters().rbegin());
}
inline bool is_prefix(const GroupWord& pat, const GroupWord& w) {
  if (pat.size() > w.size()) return false;
  return std::equal(pat.letters().begin(), pat.letters().end(), w.letters().begin());
}
inline GroupWord drop_suffix(const GroupWord& w, size_t n) {
  return GroupWord(w.alphabet(),
                   std::vector<LetterCode>(w.letters().begin(), w.letters().end() - n));
}
inline GroupWord drop_prefix(const GroupWord& w, size_t n) {
  return GroupWord(w.alphabet(),
                   std::vector<LetterCode>(w.letters().begin() + n, w.letters().end()));
}
}  // namespace detail

// Applicability is checked by a substring match anchored at the head: the lhs
// left word must be a suffix of the tape's left word, the lhs right word a
// prefix of its right word, and anchored sides must be empty.
inline std::optional<TMConfig> tm_try_apply(const TMachine& m, const TMConfig& w,
                                            const TMCommand& cmd, int* failed_tape = nullptr) {
  TMConfig out = w;
  for (int i = 0; i < m.tape_count; ++i) {
    const auto& p = cmd.parts[i];
    auto& t = out.tapes[i];
    auto fail = [&]() -> std::optional<TMConfig> {
      if (failed_tape) *failed_tape = i;
      return std::nullopt;
    };
    if (t.state != p.lhs_state) return fail();
    if (p.anchor_left && !t.left.empty()) return fail();
    if (p.anchor_right && !t.right.empty()) return fail();
    if (!detail::is_suffix(p.lhs_left, t.left)) return fail();
    if (!detail::is_prefix(p.lhs_right, t.right)) return fail();
    t.state = p.rhs_state;
    t.left = concat(detail::drop_suffix(t.left, p.lhs_left.size()), p.rhs_left);
    t.right = concat(p.rhs_right, detail::drop_prefix(t.right, p.lhs_right.size()));
  }
  return out;
}

inline TMConfig tm_apply(const TMachine& m, const TMConfig& w, const TMCommand& cmd) {
  validate_config(m, w);
  int failed = -1;
  auto r = tm_try_apply(m, w, cmd, &failed);
  if (!r)
    throw std::runtime_error("command " + cmd.name + " not applicable at tape " +
                             std::to_string(failed + 1));
  return *r;
}

inline TMCommand inverse_command(const TMCommand& c) {
  TMCommand inv = c;
  inv.name = c.inverse_name.empty() ? c.name + "^-1" : c.inverse_name;
  inv.inverse_name = c.name;
  inv.sign = -c.sign;
  for (auto& p : inv.parts) {
    std::swap(p.lhs_left, p.rhs_left);
    std::swap(p.lhs_right, p.rhs_right);
    std::swap(p.lhs_state, p.rhs_state);
  }
  return inv;
}

// Input configuration: u on the first tape with the head at the right end,
// all other tapes empty, states forming the start vector.
inline TMConfig input_config(const TMachine& m, const GroupWord& u) {
  for (auto c : u.letters()) {
    Letter l = decode(c);
    if (l.sign < 0 || std::find(m.input_alphabet.begin(), m.input_alphabet.end(), l.sym) ==
                          m.input_alphabet.end())
      throw std::invalid_argument("input word must be positive over the input alphabet");
  }
  TMConfig w;
  for (int i = 0; i < m.tape_count; ++i)
    w.tapes.push_back(TapeCfg{GroupWord(m.alphabet), m.start_states[i], GroupWord(m.alphabet)});
  w.tapes[0].left = u;
  return w;
}

inline TMConfig accept_config(const TMachine& m) {
  TMConfig w;
  for (int i = 0; i < m.tape_count; ++i)
    w.tapes.push_back(TapeCfg{GroupWord(m.alphabet), m.accept_states[i], GroupWord(m.alphabet)});
  return w;
}

inline bool is_accept_config(const TMachine& m, const TMConfig& w) {
  for (int i = 0; i < m.tape_count; ++i)
    if (w.tapes[i].state != m.accept_states[i] || !w.tapes[i].left.empty() ||
        !w.tapes[i].right.empty())
      return false;
  return true;
}

struct TMComputation {
  TMConfig start;
  std::vector<std::string> history;  // command names in order of application
  std::vector<TMConfig> configs;     // includes the start configuration

  size_t space() const {
    size_t s = 0;
    for (const auto& c : configs) s = std::max(s, a_length(c));
    return s;
  }
};

inline TMComputation replay(const TMachine& m, const TMConfig& start,
                            const std::vector<std::string>& history) {
  TMComputation comp;
  comp.start = start;
  comp.configs.push_back(start);
  TMConfig cur = start;
  for (const auto& name : history) {
    cur = tm_apply(m, cur, m.command(name));
    comp.history.push_back(name);
    comp.configs.push_back(cur);
  }
  return comp;
}

// Commands indexed by their full lhs state vector; every command pins every
// head, so this cuts candidate sets to a handful per configuration.
class TMCommandIndex {
 public:
  explicit TMCommandIndex(const TMachine& m) : machine_(m) {
    for (size_t ci = 0; ci < m.commands.size(); ++ci) {
      std::string k;
      for (const auto& p : m.commands[ci].parts) k += std::to_string(p.lhs_state) + ",";
      buckets_[k].push_back(ci);
    }
  }

  const std::vector<size_t>& candidates(const TMConfig& w) const {
    std::string k;
    for (const auto& t : w.tapes) k += std::to_string(t.state) + ",";
    auto it = buckets_.find(k);
    return it == buckets_.end() ? empty_ : it->second;
  }

 private:
  const TMachine& machine_;
  std::unordered_map<std::string, std::vector<size_t>> buckets_;
  std::vector<size_t> empty_;
};

enum class SearchStatus { Found, Unreachable, Exhausted };

struct TMSearchResult {
  SearchStatus status;
  size_t space = 0;                       // meaningful when Found
  std::optional<TMComputation> witness;   // minimal-space accepting computation
  size_t explored = 0;
};

// Minimal space over accepting computations from w, restricted to
// configurations with |.|_a <= space_cap. A bottleneck-first search: the
// reported minimum is schedule independent. time_cap bounds the number of
// settled configurations; hitting it is a distinguished outcome, not an
// error.
inline TMSearchResult tm_space_bfs(const TMachine& m, const TMConfig& start, size_t space_cap,
                                   size_t time_cap) {
  TMSearchResult res{SearchStatus::Unreachable, 0, std::nullopt, 0};
  if (a_length(start) > space_cap) return res;
  TMCommandIndex index(m);

  struct Node {
    size_t bottleneck;
    std::string key;
    bool operator>(const Node& o) const {
      return bottleneck != o.bottleneck ? bottleneck > o.bottleneck : key > o.key;
    }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
  std::unordered_map<std::string, size_t> best;
  std::unordered_map<std::string, TMConfig> configs;
  std::unordered_map<std::string, std::pair<std::string, std::string>> parent;  // key -> (prev key, cmd)

  std::string skey = config_key(start);
  best[skey] = a_length(start);
  configs[skey] = start;
  pq.push({a_length(start), skey});

  while (!pq.empty()) {
    auto [b, key] = pq.top();
    pq.pop();
    if (b > best.at(key)) continue;  // stale entry
    const TMConfig& cur = configs.at(key);
    if (++res.explored > time_cap) {
      res.status = SearchStatus::Exhausted;
      return res;
    }
    if (is_accept_config(m, cur)) {
      res.status = SearchStatus::Found;
      res.space = b;
      TMComputation comp;
      std::vector<std::string> rkeys, rcmds;
      std::string k = key;
      while (k != skey) {
        auto& [pk, cmd] = parent.at(k);
        rcmds.push_back(cmd);
        k = pk;
      }
      std::reverse(rcmds.begin(), rcmds.end());
      res.witness = replay(m, start, rcmds);
      return res;
    }
    for (size_t ci : index.candidates(cur)) {
      auto nxt = tm_try_apply(m, cur, m.commands[ci]);
      if (!nxt) continue;
      size_t nb = std::max(b, a_length(*nxt));
      if (nb > space_cap) continue;
      std::string nkey = config_key(*nxt);
      auto it = best.find(nkey);
      if (it != best.end() && it->second <= nb) continue;
      best[nkey] = nb;
      configs[nkey] = *nxt;
      parent[nkey] = {key, m.commands[ci].name};
      pq.push({nb, nkey});
    }
  }
  return res;
}

inline bool tm_accepts(const TMachine& m, const GroupWord& u, size_t space_cap, size_t time_cap) {
  return tm_space_bfs(m, input_config(m, u), space_cap, time_cap).status == SearchStatus::Found;
}

// ---- validation of machine structure ----------------------------------

inline void validate_machine(const TMachine& m) {
  if (static_cast<int>(m.state_blocks.size()) != m.tape_count ||
      static_cast<int>(m.tape_alphabets.size()) != m.tape_count)
    throw std::invalid_argument("machine: block counts disagree with tape count");
  for (SymbolId x : m.input_alphabet) {
    const auto& y1 = m.tape_alphabets[0];
    if (std::find(y1.begin(), y1.end(), x) == y1.end())
      throw std::invalid_argument("machine: input alphabet not contained in Y_1");
  }
  for (const auto& c : m.commands) {
    if (static_cast<int>(c.parts.size()) != m.tape_count)
      throw std::invalid_argument("command " + c.name + ": wrong part count");
    for (int i = 0; i < m.tape_count; ++i) {
      const auto& p = c.parts[i];
      bool has_letters = !p.lhs_left.empty() || !p.lhs_right.empty() || !p.rhs_left.empty() ||
                         !p.rhs_right.empty();
      if ((p.anchor_left || p.anchor_right) && has_letters)
        throw std::invalid_argument("command " + c.name + ": anchored part carries tape letters");
      for (const GroupWord* wd : {&p.lhs_left, &p.lhs_right, &p.rhs_left, &p.rhs_right})
        if (!wd->positive())
          throw std::invalid_argument("command " + c.name + ": non-positive command word");
    }
  }
}

// ---- serialization -----------------------------------------------------

inline Json tm_part_side(const TMachine& m, const TMCommandPart& p, bool lhs, int tape) {
  Json arr = Json::array();
  const GroupWord& l = lhs ? p.lhs_left : p.rhs_left;
  const GroupWord& r = lhs ? p.lhs_right : p.rhs_right;
  SymbolId q = lhs ? p.lhs_state : p.rhs_state;
  if (p.anchor_left) arr.push_back(m.alphabet->name(m.alphas[tape]));
  for (auto c : l.letters()) arr.push_back(m.alphabet->name(decode(c).sym));
  arr.push_back(m.alphabet->name(q));
  for (auto c : r.letters()) arr.push_back(m.alphabet->name(decode(c).sym));
  if (p.anchor_right) arr.push_back(m.alphabet->name(m.omegas[tape]));
  return arr;
}

inline Json tm_to_json(const TMachine& m) {
  auto names = [&](const std::vector<SymbolId>& v) {
    Json arr = Json::array();
    for (auto s : v) arr.push_back(m.alphabet->name(s));
    return arr;
  };
  Json cmds = Json::array();
  for (const auto& c : m.commands) {
    Json parts = Json::array();
    for (int i = 0; i < m.tape_count; ++i)
      parts.push_back(Json{{"lhs", tm_part_side(m, c.parts[i], true, i)},
                           {"rhs", tm_part_side(m, c.parts[i], false, i)}});
    Json cj{{"name", c.name}, {"parts", parts}};
    if (c.sign != 0) {
      cj["sign"] = c.sign;
      cj["inverse"] = c.inverse_name;
    }
    cmds.push_back(cj);
  }
  Json alphas = Json::array();
  for (const auto& v : m.tape_alphabets) alphas.push_back(names(v));
  Json blocks = Json::array();
  for (const auto& v : m.state_blocks) blocks.push_back(names(v));
  return Json{{"tapes", m.tape_count}, {"input", names(m.input_alphabet)},
              {"tape_alphabets", alphas}, {"state_blocks", blocks},
              {"commands", cmds},         {"start", names(m.start_states)},
              {"accept", names(m.accept_states)}};
}

inline TMachine tm_from_json(const Json& j) {
  TMachine m;
  m.tape_count = j.at("tapes").get<int>();
  auto alpha = std::make_shared<Alphabet>();
  m.state_blocks.resize(m.tape_count);
  m.tape_alphabets.resize(m.tape_count);
  for (int i = 0; i < m.tape_count; ++i) {
    for (const auto& s : j.at("state_blocks").at(i))
      m.state_blocks[i].push_back(alpha->add(s.get<std::string>(), SymbolKind::State, i));
    for (const auto& s : j.at("tape_alphabets").at(i))
      m.tape_alphabets[i].push_back(alpha->add(s.get<std::string>(), SymbolKind::Tape, i));
    m.alphas.push_back(alpha->add("alpha" + std::to_string(i + 1), SymbolKind::Separator, i));
    m.omegas.push_back(alpha->add("omega" + std::to_string(i + 1), SymbolKind::Separator, i));
  }
  m.alphabet = alpha;
  for (const auto& s : j.at("input")) m.input_alphabet.push_back(alpha->id(s.get<std::string>()));
  auto state_vec = [&](const Json& arr) {
    std::vector<SymbolId> v;
    for (const auto& s : arr) v.push_back(alpha->id(s.get<std::string>()));
    return v;
  };
  m.start_states = state_vec(j.at("start"));
  m.accept_states = state_vec(j.at("accept"));

  for (const auto& cj : j.at("commands")) {
    TMCommand c;
    c.name = cj.at("name").get<std::string>();
    if (cj.contains("sign")) {
      c.sign = cj.at("sign").get<int>();
      c.inverse_name = cj.at("inverse").get<std::string>();
    }
    for (int i = 0; i < m.tape_count; ++i) {
      const Json& pj = cj.at("parts").at(i);
      TMCommandPart p;
      auto parse_side = [&](const Json& arr, GroupWord& left, SymbolId& q, GroupWord& right,
                            bool& al, bool& ar) {
        std::vector<LetterCode> lv, rv;
        bool seen_q = false;
        al = ar = false;
        for (const auto& tok : arr) {
          std::string name = tok.get<std::string>();
          SymbolId s = alpha->id(name);
          SymbolKind k = alpha->kind(s);
          if (k == SymbolKind::Separator) {
            if (!seen_q) al = true; else ar = true;
          } else if (k == SymbolKind::State) {
            q = s;
            seen_q = true;
          } else {
            (seen_q ? rv : lv).push_back(encode(Letter{s, +1}));
          }
        }
        left = GroupWord(m.alphabet, std::move(lv));
        right = GroupWord(m.alphabet, std::move(rv));
      };
      bool al1, ar1, al2, ar2;
      parse_side(pj.at("lhs"), p.lhs_left, p.lhs_state, p.lhs_right, al1, ar1);
      parse_side(pj.at("rhs"), p.rhs_left, p.rhs_state, p.rhs_right, al2, ar2);
      if (al1 != al2 || ar1 != ar2)
        throw std::invalid_argument("command " + c.name + ": anchors must match on both sides");
      p.anchor_left = al1;
      p.anchor_right = ar1;
      c.parts.push_back(p);
    }
    m.commands.push_back(std::move(c));
  }
  validate_machine(m);
  return m;
}

}  // namespace spacefn
