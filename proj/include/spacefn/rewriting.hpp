#pragma once

#include "spacefn/presentation.hpp"
#include "spacefn/smachine.hpp"

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace spacefn {

// ---- metric ------------------------------------------------------------

struct Metric {
  bool modified = false;
  Rat delta{1, 4};

  Rat measure(const GroupWord& w) const {
    return modified ? modified_length(w, delta) : Rat(static_cast<long long>(w.size()));
  }
  Rat measure(const WordTuple& t) const {
    Rat total(0);
    for (const auto& w : t.words) total += measure(w);
    return total;
  }
  Rat step() const { return modified ? Rat(1, delta.denominator()) : Rat(1); }
};

// ---- elementary moves ----------------------------------------------------

// The elementary transformations on word tuples. The first five are the
// calculus proper; merge and insert-empty close split and drop-empty under
// inversion.
struct Move {
  enum Kind {
    CancelPair,
    InsertPair,
    RemoveRelator,
    InsertRelator,
    CyclicShift,
    Split,
    Merge,
    DropEmpty,
    InsertEmpty,
  };
  Kind kind = CancelPair;
  int word = 0;       // tuple index (insertion index for InsertEmpty)
  int pos = 0;        // position in word / split point / shift amount
  LetterCode letter = 0;  // InsertPair: inserts (letter, letter^-1)
  int relator = -1;
  bool inverted = false;  // relator used as r^-1
  int word2 = -1;         // Merge partner
};

struct Derivation {
  WordTuple start;
  std::vector<Move> moves;
};

struct ReplayError : std::runtime_error {
  size_t step;
  ReplayError(size_t s, const std::string& what)
      : std::runtime_error("step " + std::to_string(s) + ": " + what), step(s) {}
};

inline const GroupWord& relator_word(const GroupPresentation& p, int idx) {
  return p.relators.at(static_cast<size_t>(idx)).word;
}

inline void apply_move(const GroupPresentation& p, WordTuple& t, const Move& m, size_t step) {
  auto bad = [&](const std::string& s) { throw ReplayError(step, s); };
  auto word_at = [&](int i) -> GroupWord& {
    if (i < 0 || static_cast<size_t>(i) >= t.words.size()) bad("word index out of range");
    return t.words[static_cast<size_t>(i)];
  };
  switch (m.kind) {
    case Move::CancelPair: {
      GroupWord& w = word_at(m.word);
      auto ls = w.letters();
      if (m.pos < 0 || static_cast<size_t>(m.pos) + 1 >= ls.size() ||
          ls[m.pos] != -ls[m.pos + 1])
        bad("no cancellable pair at position " + std::to_string(m.pos));
      std::vector<LetterCode> v(ls);
      v.erase(v.begin() + m.pos, v.begin() + m.pos + 2);
      w = GroupWord(w.alphabet() ? w.alphabet() : p.gens, std::move(v));
      break;
    }
    case Move::InsertPair: {
      GroupWord& w = word_at(m.word);
      if (m.pos < 0 || static_cast<size_t>(m.pos) > w.size()) bad("insert position out of range");
      std::vector<LetterCode> v(w.letters());
      v.insert(v.begin() + m.pos, {m.letter, -m.letter});
      w = GroupWord(w.alphabet() ? w.alphabet() : p.gens, std::move(v));
      break;
    }
    case Move::RemoveRelator: {
      GroupWord& w = word_at(m.word);
      GroupWord r = m.inverted ? invert(relator_word(p, m.relator)) : relator_word(p, m.relator);
      if (m.pos < 0 || static_cast<size_t>(m.pos) + r.size() > w.size())
        bad("relator does not fit at position " + std::to_string(m.pos));
      for (size_t i = 0; i < r.size(); ++i)
        if (w.letters()[m.pos + i] != r.letters()[i]) bad("relator mismatch");
      std::vector<LetterCode> v(w.letters());
      v.erase(v.begin() + m.pos, v.begin() + m.pos + r.size());
      w = GroupWord(w.alphabet() ? w.alphabet() : p.gens, std::move(v));
      break;
    }
    case Move::InsertRelator: {
      GroupWord& w = word_at(m.word);
      GroupWord r = m.inverted ? invert(relator_word(p, m.relator)) : relator_word(p, m.relator);
      if (m.pos < 0 || static_cast<size_t>(m.pos) > w.size()) bad("insert position out of range");
      std::vector<LetterCode> v(w.letters());
      v.insert(v.begin() + m.pos, r.letters().begin(), r.letters().end());
      w = GroupWord(w.alphabet() ? w.alphabet() : p.gens, std::move(v));
      break;
    }
    case Move::CyclicShift: {
      GroupWord& w = word_at(m.word);
      if (!w.empty()) w = cyclic_shift(w, static_cast<size_t>(m.pos) % w.size());
      break;
    }
    case Move::Split: {
      GroupWord& w = word_at(m.word);
      if (m.pos < 0 || static_cast<size_t>(m.pos) > w.size()) bad("split point out of range");
      GroupWord a(w.alphabet() ? w.alphabet() : p.gens,
                  std::vector<LetterCode>(w.letters().begin(), w.letters().begin() + m.pos));
      GroupWord b(w.alphabet() ? w.alphabet() : p.gens,
                  std::vector<LetterCode>(w.letters().begin() + m.pos, w.letters().end()));
      w = a;
      t.words.insert(t.words.begin() + m.word + 1, b);
      break;
    }
    case Move::Merge: {
      if (m.word2 == m.word) bad("merge of a word with itself");
      GroupWord& a = word_at(m.word);
      GroupWord& b = word_at(m.word2);
      a = concat(a, b);
      t.words.erase(t.words.begin() + m.word2);
      break;
    }
    case Move::DropEmpty: {
      if (!word_at(m.word).empty()) bad("word is not empty");
      t.words.erase(t.words.begin() + m.word);
      break;
    }
    case Move::InsertEmpty: {
      if (m.word < 0 || static_cast<size_t>(m.word) > t.words.size())
        bad("insert position out of range");
      t.words.insert(t.words.begin() + m.word, GroupWord(p.gens));
      break;
    }
  }
}

struct ReplayResult {
  bool ok = false;
  size_t failed_step = 0;
  std::string error;
  WordTuple final;
  Rat space{0};
};

inline ReplayResult replay(const GroupPresentation& p, const Derivation& d,
                           const Metric& metric = {}) {
  ReplayResult r;
  WordTuple t = d.start;
  r.space = metric.measure(t);
  for (size_t i = 0; i < d.moves.size(); ++i) {
    try {
      apply_move(p, t, d.moves[i], i);
    } catch (const ReplayError& e) {
      r.failed_step = i;
      r.error = e.what();
      r.final = t;
      return r;
    }
    r.space = std::max(r.space, metric.measure(t));
  }
  r.ok = true;
  r.final = t;
  return r;
}

// A derivation is accepted when it replays cleanly and ends at the empty
// tuple.
inline ReplayResult verify(const GroupPresentation& p, const Derivation& d,
                           const Metric& metric = {}) {
  ReplayResult r = replay(p, d, metric);
  if (r.ok && !r.final.words.empty()) {
    r.ok = false;
    r.error = "derivation does not end with the empty tuple";
    r.failed_step = d.moves.size();
  }
  return r;
}

// ---- literal one-move neighbourhoods -------------------------------------

// All tuples reachable from W by one move with measure <= s_cap. This is the
// literal (non-canonicalized) neighbourhood; the space search uses a cyclic
// variant with canonical-form deduplication.
inline std::vector<WordTuple> moves(const GroupPresentation& p, const WordTuple& t,
                                    const Rat& s_cap, const Metric& metric = {}) {
  std::vector<std::pair<std::string, WordTuple>> out;
  auto push = [&](const WordTuple& nt) {
    if (metric.measure(nt) > s_cap) return;
    std::string key;
    for (const auto& w : nt.words) {
      for (auto c : w.letters()) key += std::to_string(c) + ",";
      key += "|";
    }
    out.emplace_back(std::move(key), nt);
  };
  auto try_move = [&](const Move& m) {
    WordTuple nt = t;
    try {
      apply_move(p, nt, m, 0);
    } catch (const ReplayError&) {
      return;
    }
    push(nt);
  };

  for (int i = 0; i < static_cast<int>(t.words.size()); ++i) {
    const GroupWord& w = t.words[i];
    int len = static_cast<int>(w.size());
    for (int pos = 0; pos + 1 < len; ++pos)
      if (w.letters()[pos] == -w.letters()[pos + 1])
        try_move({Move::CancelPair, i, pos, 0, -1, false, -1});
    for (int pos = 0; pos <= len; ++pos)
      for (SymbolId s = 0; s < p.gens->size(); ++s)
        for (int sign : {+1, -1})
          try_move({Move::InsertPair, i, pos, encode(Letter{s, sign}), -1, false, -1});
    for (int ri = 0; ri < static_cast<int>(p.relators.size()); ++ri)
      for (bool inv : {false, true}) {
        for (int pos = 0; pos <= len; ++pos)
          try_move({Move::InsertRelator, i, pos, 0, ri, inv, -1});
        int rl = static_cast<int>(p.relators[ri].word.size());
        for (int pos = 0; pos + rl <= len; ++pos)
          try_move({Move::RemoveRelator, i, pos, 0, ri, inv, -1});
      }
    for (int k = 1; k < len; ++k) try_move({Move::CyclicShift, i, k, 0, -1, false, -1});
    for (int pos = 0; pos <= len; ++pos) try_move({Move::Split, i, pos, 0, -1, false, -1});
    if (len == 0) try_move({Move::DropEmpty, i, 0, 0, -1, false, -1});
    for (int j = 0; j < static_cast<int>(t.words.size()); ++j)
      if (j != i) try_move({Move::Merge, i, 0, 0, -1, false, j});
  }
  for (int pos = 0; pos <= static_cast<int>(t.words.size()); ++pos)
    try_move({Move::InsertEmpty, pos, 0, 0, -1, false, -1});

  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<WordTuple> res;
  for (size_t i = 0; i < out.size(); ++i)
    if (i == 0 || out[i].first != out[i - 1].first) res.push_back(out[i].second);
  return res;
}

// ---- canonical states and the space search --------------------------------

// Tuples are deduplicated by the multiset of canonically rotated words:
// cyclic shifts are zero-cost moves and the tuple order never matters.
inline std::vector<GroupWord> canonical_state(const WordTuple& t) {
  std::vector<GroupWord> ws;
  ws.reserve(t.words.size());
  for (const auto& w : t.words) ws.push_back(canonical_rotation(w));
  std::sort(ws.begin(), ws.end());
  return ws;
}

inline std::string state_key(const std::vector<GroupWord>& ws) {
  std::string k;
  for (const auto& w : ws) {
    for (auto c : w.letters()) k += std::to_string(c) + ",";
    k += "|";
  }
  return k;
}

namespace detail {

// A transition between canonical states: a short literal recipe whose word
// indices refer to the parent's canonical order and whose positions assume
// every referenced word is in canonical rotation.
struct Recipe {
  std::vector<Move> moves;
};

// Enumerate neighbours of a canonical state; words are treated as cyclic.
// The visitor returns false to stop the enumeration early.
inline void for_each_neighbor(const GroupPresentation& p, const std::vector<GroupWord>& ws,
                              const Rat& s_cap, const Metric& metric,
                              const std::function<bool(std::vector<GroupWord>, Recipe)>& visit) {
  WordTuple t{std::vector<GroupWord>(ws)};
  Rat base = metric.measure(t);
  bool stopped = false;
  auto apply_recipe = [&](const Recipe& r) -> std::optional<WordTuple> {
    WordTuple nt = t;
    try {
      for (const auto& m : r.moves) apply_move(p, nt, m, 0);
    } catch (const ReplayError&) {
      return std::nullopt;
    }
    return nt;
  };
  auto emit = [&](Recipe r) {
    if (stopped) return;
    auto nt = apply_recipe(r);
    if (!nt || metric.measure(*nt) > s_cap) return;
    if (!visit(canonical_state(*nt), std::move(r))) stopped = true;
  };

  int nwords = static_cast<int>(ws.size());
  for (int i = 0; i < nwords; ++i) {
    const GroupWord& w = ws[i];
    int len = static_cast<int>(w.size());
    // cyclic cancellations
    for (int pos = 0; pos < len; ++pos) {
      if (len < 2) break;
      int nxt = (pos + 1) % len;
      if (w.letters()[pos] != -w.letters()[nxt]) continue;
      Recipe r;
      if (nxt != 0) {
        r.moves.push_back({Move::CancelPair, i, pos, 0, -1, false, -1});
      } else {
        r.moves.push_back({Move::CyclicShift, i, 1, 0, -1, false, -1});
        r.moves.push_back({Move::CancelPair, i, len - 2, 0, -1, false, -1});
      }
      emit(std::move(r));
    }
    // pair insertions
    if (base + Rat(2) <= s_cap || metric.modified) {
      for (int pos = 0; pos <= std::max(0, len - 1); ++pos)
        for (SymbolId s = 0; s < p.gens->size(); ++s)
          for (int sign : {+1, -1}) {
            Recipe r;
            r.moves.push_back({Move::InsertPair, i, pos, encode(Letter{s, sign}), -1, false, -1});
            emit(std::move(r));
          }
    }
    // relator insertion / removal, cyclically
    for (int ri = 0; ri < static_cast<int>(p.relators.size()); ++ri) {
      const GroupWord& rw = p.relators[ri].word;
      int rl = static_cast<int>(rw.size());
      for (bool inv : {false, true}) {
        GroupWord oriented = inv ? invert(rw) : rw;
        if (base + metric.measure(rw) <= s_cap) {
          for (int pos = 0; pos <= std::max(0, len - 1); ++pos) {
            Recipe r;
            r.moves.push_back({Move::InsertRelator, i, pos, 0, ri, inv, -1});
            emit(std::move(r));
          }
        }
        if (rl <= len) {
          for (int pos = 0; pos < len; ++pos) {
            bool match = true;
            for (int k = 0; k < rl && match; ++k)
              if (w.letters()[(pos + k) % len] != oriented.letters()[k]) match = false;
            if (!match) continue;
            Recipe r;
            if (pos + rl <= len) {
              r.moves.push_back({Move::RemoveRelator, i, pos, 0, ri, inv, -1});
            } else {
              r.moves.push_back({Move::CyclicShift, i, pos, 0, -1, false, -1});
              r.moves.push_back({Move::RemoveRelator, i, 0, 0, ri, inv, -1});
            }
            emit(std::move(r));
          }
        }
      }
    }
    // cyclic splits: two cut points
    for (int a = 0; a < len; ++a)
      for (int b = a + 1; b <= len; ++b) {
        if (a == 0 && b == len) continue;
        Recipe r;
        if (a != 0) r.moves.push_back({Move::CyclicShift, i, a, 0, -1, false, -1});
        r.moves.push_back({Move::Split, i, b - a, 0, -1, false, -1});
        emit(std::move(r));
      }
    if (len == 0) {
      Recipe r;
      r.moves.push_back({Move::DropEmpty, i, 0, 0, -1, false, -1});
      emit(std::move(r));
    }
    // merges with every other word, at every mutual rotation
    for (int j = 0; j < nwords; ++j) {
      if (j == i || ws[j].empty() || w.empty()) continue;
      int lj = static_cast<int>(ws[j].size());
      for (int a = 0; a < len; ++a)
        for (int b = 0; b < lj; ++b) {
          Recipe r;
          if (a != 0) r.moves.push_back({Move::CyclicShift, i, a, 0, -1, false, -1});
          if (b != 0) r.moves.push_back({Move::CyclicShift, j, b, 0, -1, false, -1});
          r.moves.push_back({Move::Merge, i, 0, 0, -1, false, j});
          emit(std::move(r));
        }
    }
  }
  // One live empty word is enough: filling it before inserting the next one
  // re-sequences any derivation at identical norms.
  bool has_empty = std::any_of(ws.begin(), ws.end(), [](const GroupWord& w) { return w.empty(); });
  if (!has_empty) {
    Recipe r;
    r.moves.push_back({Move::InsertEmpty, nwords, 0, 0, -1, false, -1});
    emit(std::move(r));
  }
}

}  // namespace detail

struct SpaceResult {
  enum Outcome { Proven, Unreachable, Exhausted } outcome = Unreachable;
  Rat space{0};
  Rat cap{0};
  size_t explored = 0;
  std::optional<Derivation> witness;
};

// Minimal derivation space for (w) -> ( ): iterative deepening on the space
// bound with exhaustive reachability per bound over canonical tuples. The
// returned witness replays from the literal start tuple. Budget exhaustion
// is reported apart from cap-proven unreachability.
inline SpaceResult space_search(const GroupPresentation& p, const WordTuple& start,
                                const Rat& s_cap, size_t budget, const Metric& metric = {}) {
  SpaceResult res;
  res.cap = s_cap;
  Rat s0 = metric.measure(start);
  if (s0 > s_cap) return res;

  size_t explored_total = 0;
  for (Rat s = s0; s <= s_cap; s += metric.step()) {
    std::vector<GroupWord> init = canonical_state(start);
    std::string init_key = state_key(init);
    std::unordered_map<std::string, std::pair<std::string, detail::Recipe>> came;
    std::unordered_map<std::string, std::vector<GroupWord>> states;
    std::deque<std::string> frontier;
    came[init_key] = {"", {}};
    states[init_key] = init;
    frontier.push_back(init_key);
    bool found = false;
    std::string goal_key;

    bool exhausted = false;
    while (!frontier.empty() && !found && !exhausted) {
      std::string key = frontier.front();
      frontier.pop_front();
      const auto& ws = states.at(key);
      if (ws.empty()) {
        found = true;
        goal_key = key;
        break;
      }
      detail::for_each_neighbor(p, ws, s, metric,
                                [&](std::vector<GroupWord> ns, detail::Recipe r) {
                                  std::string nk = state_key(ns);
                                  if (came.count(nk)) return !found;
                                  if (++explored_total > budget) {
                                    exhausted = true;
                                    return false;
                                  }
                                  came[nk] = {key, std::move(r)};
                                  states[nk] = std::move(ns);
                                  frontier.push_back(nk);
                                  if (states.at(nk).empty()) {
                                    found = true;
                                    goal_key = nk;
                                  }
                                  return !found;
                                });
    }
    if (exhausted && !found) {
      res.outcome = SpaceResult::Exhausted;
      res.explored = explored_total;
      return res;
    }
    if (found) {
      res.outcome = SpaceResult::Proven;
      res.space = s;
      res.explored = explored_total;
      // Reconstruct a literal derivation along the parent chain.
      std::vector<std::pair<std::string, detail::Recipe>> chain;
      std::string k = goal_key;
      while (k != init_key) {
        auto& [pk, recipe] = came.at(k);
        chain.push_back({pk, recipe});
        k = pk;
      }
      std::reverse(chain.begin(), chain.end());
      Derivation d;
      d.start = start;
      WordTuple cur = start;
      for (auto& [pkey, recipe] : chain) {
        const auto& pstate = states.at(pkey);
        // Align the literal tuple with the parent's canonical order: find a
        // bijection by canonical form, rotating words into canonical
        // rotation as needed (rotations are free moves).
        std::vector<int> literal_of(pstate.size(), -1);
        std::vector<bool> used(cur.words.size(), false);
        for (size_t ci = 0; ci < pstate.size(); ++ci)
          for (size_t li = 0; li < cur.words.size(); ++li) {
            if (used[li]) continue;
            if (canonical_rotation(cur.words[li]) == pstate[ci]) {
              literal_of[ci] = static_cast<int>(li);
              used[li] = true;
              break;
            }
          }
        // words referenced by the recipe must be in canonical rotation
        std::set<int> touched;
        for (const auto& mv : recipe.moves) {
          if (mv.kind == Move::InsertEmpty) continue;
          touched.insert(mv.word);
          if (mv.kind == Move::Merge) touched.insert(mv.word2);
        }
        for (int ci : touched) {
          int li = literal_of[ci];
          const GroupWord& lw = cur.words[li];
          if (lw == pstate[ci]) continue;
          for (size_t k2 = 1; k2 < lw.size(); ++k2)
            if (cyclic_shift(lw, k2) == pstate[ci]) {
              Move shift{Move::CyclicShift, li, static_cast<int>(k2), 0, -1, false, -1};
              apply_move(p, cur, shift, 0);
              d.moves.push_back(shift);
              break;
            }
        }
        for (Move mv : recipe.moves) {
          if (mv.kind != Move::InsertEmpty) {
            int w2 = mv.kind == Move::Merge ? literal_of[mv.word2] : -1;
            mv.word = literal_of[mv.word];
            mv.word2 = w2;
          } else {
            mv.word = static_cast<int>(cur.words.size());
          }
          apply_move(p, cur, mv, 0);
          d.moves.push_back(mv);
          // a split or merge renumbers the literal words; recompute lazily
          if (mv.kind == Move::Split || mv.kind == Move::Merge || mv.kind == Move::DropEmpty) break;
        }
        // Recipes with structural moves are single-move (plus alignment
        // shifts), so the loop above never skips a pending move.
      }
      if (!cur.words.empty()) throw std::logic_error("witness reconstruction did not reach ()");
      res.witness = std::move(d);
      return res;
    }
  }
  res.outcome = SpaceResult::Unreachable;
  res.explored = explored_total;
  return res;
}

}  // namespace spacefn
