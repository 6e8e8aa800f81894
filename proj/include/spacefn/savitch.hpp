#pragma once

#include "spacefn/surgery.hpp"

namespace spacefn {

namespace detail {

inline void enumerate_tape_words(const AlphabetPtr& a, const std::vector<SymbolId>& letters,
                                 size_t max_len,
                                 const std::function<void(const GroupWord&)>& visit) {
  std::vector<LetterCode> cur;
  std::function<void()> rec = [&] {
    visit(GroupWord(a, cur));
    if (cur.size() == max_len) return;
    for (SymbolId s : letters) {
      cur.push_back(encode(Letter{s, +1}));
      rec();
      cur.pop_back();
    }
  };
  rec();
}

// All configurations with at most `cap` tape letters.
inline std::vector<TMConfig> enumerate_configs(const TMachine& m, size_t cap) {
  std::vector<TMConfig> out;
  TMConfig cur;
  cur.tapes.resize(m.tape_count);
  std::function<void(int, size_t)> rec = [&](int tape, size_t used) {
    if (tape == m.tape_count) {
      out.push_back(cur);
      return;
    }
    enumerate_tape_words(m.alphabet, m.tape_alphabets[tape], cap - used, [&](const GroupWord& u) {
      enumerate_tape_words(m.alphabet, m.tape_alphabets[tape], cap - used - u.size(),
                           [&](const GroupWord& v) {
                             for (SymbolId q : m.state_blocks[tape]) {
                               cur.tapes[tape] = TapeCfg{u, q, v};
                               rec(tape + 1, used + u.size() + v.size());
                             }
                           });
    });
  };
  rec(0, 0);
  return out;
}

}  // namespace detail

struct SavitchResult {
  std::optional<size_t> space;
  size_t config_count = 0;
  size_t k0 = 0;  // 2^(c * f_cap) rounded up to the configuration count
  int c = 0;
};

// Minimal accepting space computed by the reach predicate's halving
// recursion: reach(w, w', k) holds when some computation of length <= k and
// space <= f_cap connects w to w', and the minimal space over such
// computations is the min over midpoints of the max of the two halves.
// The recursion starts at k0 = 2^(c * f_cap) where c is the least integer
// making that bound dominate the configuration count, and is memoized per
// halving level.
inline SavitchResult savitch_space(const TMachine& m, const GroupWord& u, size_t f_cap) {
  std::string why;
  if (!check_s10(m, &why))
    throw std::invalid_argument("savitch_space: machine not s10-normalized: " + why);
  SavitchResult out;
  std::vector<TMConfig> configs = detail::enumerate_configs(m, f_cap);
  out.config_count = configs.size();
  out.c = 1;
  while ((size_t{1} << (static_cast<size_t>(out.c) * f_cap)) < configs.size() &&
         static_cast<size_t>(out.c) * f_cap < 62)
    ++out.c;
  size_t k0 = 1;
  while (k0 < (size_t{1} << std::min<size_t>(static_cast<size_t>(out.c) * f_cap, 62)) &&
         k0 < configs.size())
    k0 <<= 1;
  out.k0 = k0;

  TMCommandIndex index(m);
  auto one_step = [&](const TMConfig& a, const TMConfig& b) {
    for (size_t ci : index.candidates(a)) {
      auto nxt = tm_try_apply(m, a, m.commands[ci]);
      if (nxt && *nxt == b) return true;
    }
    return false;
  };

  std::vector<std::string> keys(configs.size());
  std::unordered_map<std::string, size_t> idx;
  for (size_t i = 0; i < configs.size(); ++i) {
    keys[i] = config_key(configs[i]);
    idx[keys[i]] = i;
  }

  constexpr size_t kNone = static_cast<size_t>(-1);
  // reach[a][b] = minimal space of a computation a -> b of length <= k.
  std::vector<std::vector<size_t>> reach(configs.size(),
                                         std::vector<size_t>(configs.size(), kNone));
  for (size_t a = 0; a < configs.size(); ++a) {
    size_t sa = a_length(configs[a]);
    reach[a][a] = sa;
    for (size_t b = 0; b < configs.size(); ++b) {
      if (a == b) continue;
      if (one_step(configs[a], configs[b]))
        reach[a][b] = std::max(sa, a_length(configs[b]));
    }
  }
  for (size_t k = 1; k < k0; k <<= 1) {
    // doubling: reach_{2k}(a,b) = min over mid of max(reach_k(a,mid), reach_k(mid,b))
    std::vector<std::vector<size_t>> next(configs.size(),
                                          std::vector<size_t>(configs.size(), kNone));
    for (size_t a = 0; a < configs.size(); ++a)
      for (size_t mid = 0; mid < configs.size(); ++mid) {
        if (reach[a][mid] == kNone) continue;
        for (size_t b = 0; b < configs.size(); ++b) {
          if (reach[mid][b] == kNone) continue;
          size_t s = std::max(reach[a][mid], reach[mid][b]);
          if (s < next[a][b]) next[a][b] = s;
        }
      }
    reach.swap(next);
  }

  TMConfig w0 = input_config(m, u);
  TMConfig wf = accept_config(m);
  if (a_length(w0) > f_cap) return out;
  auto it0 = idx.find(config_key(w0));
  auto itf = idx.find(config_key(wf));
  if (it0 == idx.end() || itf == idx.end()) return out;
  size_t s = reach[it0->second][itf->second];
  if (s != kNone) out.space = s;
  return out;
}

}  // namespace spacefn
