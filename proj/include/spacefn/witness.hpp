#pragma once

#include "spacefn/rewriting.hpp"

namespace spacefn {

inline GroupWord gens_word(const GroupPresentation& p, const SMachine& m, const AdmissibleWord& w) {
  return detail::map_to_gens(p, m.alphabet, flatten(m, w));
}

namespace detail {

// Builds the move script realizing one rule application as a conjugation by
// the rule's first command letter: pad the sectors into factored form, drag
// the command letter right-to-left through the defining relators, reduce,
// rotate, cancel.
class StepBuilder {
 public:
  StepBuilder(const GroupPresentation& p, const SMachine& m, std::vector<Move>& sink,
              WordTuple& tuple, int word_index)
      : p_(p), m_(m), sink_(sink), tuple_(tuple), wi_(word_index) {}

  void expand_forward(const SRule& rule, const AdmissibleWord& from, const AdmissibleWord& to) {
    int N = static_cast<int>(m_.block_count());
    // 1. factored form: each sector c becomes u . (u^-1 c v^-1) . v
    for (int s = N - 2; s >= 0; --s) {
      GroupWord u = detail::map_to_gens(p_, m_.alphabet, rule.parts[s].lhs_right);
      GroupWord v = detail::map_to_gens(p_, m_.alphabet, rule.parts[s + 1].lhs_left);
      if (!v.empty()) pad(qpos(s + 1), invert(v));
      if (!u.empty()) pad(qpos(s) + 1, u);
    }
    // 2. the command letter pair at the end
    LetterCode t1 = encode(Letter{p_.theta(rule.name, 1), +1});
    emit({Move::InsertPair, wi_, static_cast<int>(word().size()), t1, -1, false, -1});
    int mi = static_cast<int>(word().size()) - 2;

    // 3. push
    for (int i = N; i >= 1; --i) {
      int b = i - 1;
      GroupWord u = detail::map_to_gens(p_, m_.alphabet, rule.parts[b].lhs_right);
      GroupWord v = detail::map_to_gens(p_, m_.alphabet, rule.parts[b].lhs_left);
      int target = qpos(b) + static_cast<int>(u.size());
      while (mi - 1 > target) {
        Letter a = decode(word().letters()[mi - 1]);
        size_t rel = p_.arel.at({rule.name, i + 1, p_.gens->name(a.sym)});
        GroupWord T(p_.gens, {word().letters()[mi], word().letters()[mi - 1]});
        replace_segment(mi - 1, 2, static_cast<int>(rel), T);
        mi -= 1;
      }
      // replace v_{i-1} q_i u_i theta_{i+1} by theta_i V_i
      size_t rel = p_.qrel.at({rule.name, i});
      GroupWord Vi =
          concat(concat(detail::map_to_gens(p_, m_.alphabet, rule.parts[b].rhs_left),
                        GroupWord(p_.gens, {encode(Letter{p_.gens->id(m_.alphabet->name(
                                                              rule.parts[b].rhs_state)),
                                                          +1})})),
                 detail::map_to_gens(p_, m_.alphabet, rule.parts[b].rhs_right));
      GroupWord T = concat(GroupWord(p_.gens, {encode(Letter{p_.theta(rule.name, i), +1})}), Vi);
      int span_start = qpos(b) - static_cast<int>(v.size());
      int span_len = static_cast<int>(v.size()) + 1 + static_cast<int>(u.size()) + 1;
      replace_segment(span_start, span_len, static_cast<int>(rel), T);
      mi = span_start;
    }
    if (mi != 0) throw std::logic_error("push did not end at the word head");

    // 4. reduce the interior
    reduce_interior();

    // 5. rotate the leading command letter away and cancel the pair
    GroupWord expect = gens_word(p_, m_, to);
    GroupWord cur = word();
    GroupWord interior(p_.gens, std::vector<LetterCode>(cur.letters().begin() + 1,
                                                        cur.letters().end() - 1));
    if (!(interior == expect))
      throw std::logic_error("conjugation step did not produce the applied word");
    emit({Move::CyclicShift, wi_, 1, 0, -1, false, -1});
    emit({Move::CancelPair, wi_, static_cast<int>(word().size()) - 2, 0, -1, false, -1});
    if (!(word() == expect)) throw std::logic_error("step left the word misaligned");
  }

  void remove_hub() {
    const GroupWord& stored = p_.hub().word;
    GroupWord cur = word();
    if (cur.size() != stored.size()) throw std::logic_error("hub removal: wrong word length");
    bool done = false;
    for (size_t k = 0; k < std::max<size_t>(cur.size(), 1) && !done; ++k) {
      if (cyclic_shift(cur, k) == stored) {
        if (k != 0) emit({Move::CyclicShift, wi_, static_cast<int>(k), 0, -1, false, -1});
        emit({Move::RemoveRelator, wi_, 0, 0, static_cast<int>(p_.hub_index), false, -1});
        done = true;
      }
    }
    if (!done) throw std::logic_error("final word is not a rotation of the hub");
    emit({Move::DropEmpty, wi_, 0, 0, -1, false, -1});
  }

 private:
  const GroupWord& word() const { return tuple_.words[wi_]; }

  void emit(Move m) {
    apply_move(p_, tuple_, m, sink_.size());
    sink_.push_back(m);
  }

  // positions of the block letters (state/separator kinds) in the word
  int qpos(int block) const {
    int seen = 0;
    const auto& ls = word().letters();
    for (int i = 0; i < static_cast<int>(ls.size()); ++i) {
      SymbolKind k = p_.gens->kind(decode(ls[i]).sym);
      if (k == SymbolKind::State || k == SymbolKind::Separator) {
        if (seen == block) return i;
        ++seen;
      }
    }
    throw std::logic_error("block letter not found");
  }

  // insert f . f^-1 at pos
  void pad(int pos, const GroupWord& f) {
    for (size_t t = 0; t < f.size(); ++t)
      emit({Move::InsertPair, wi_, pos + static_cast<int>(t), f.letters()[t], -1, false, -1});
  }

  // cancel `count` mutually inverse pairs collapsing around junction j
  void cancel_run(int j, int count) {
    for (int t = 0; t < count; ++t) emit({Move::CancelPair, wi_, j - t, 0, -1, false, -1});
  }

  // insert the word `needed` (a rotation of relator rel or its inverse) at
  // pos, padding as little as possible
  void insert_rotated(int rel, const GroupWord& needed, int pos) {
    const GroupWord& stored = relator_word(p_, rel);
    int best_k = -1, best_pad = -1;
    bool best_inv = false;
    for (bool inv : {false, true}) {
      GroupWord cand = inv ? invert(stored) : stored;
      if (cand.size() != needed.size()) break;
      for (size_t k = 0; k < std::max<size_t>(cand.size(), 1); ++k) {
        if (!(cyclic_shift(cand, k) == needed)) continue;
        int pad_len = k == 0 ? 0 : static_cast<int>(cand.size() - k);
        if (best_pad < 0 || pad_len < best_pad) {
          best_pad = pad_len;
          best_k = static_cast<int>(k);
          best_inv = inv;
        }
      }
    }
    if (best_k < 0)
      throw std::logic_error("required insertion is not a rotation of the given relator");
    if (best_k == 0) {
      emit({Move::InsertRelator, wi_, pos, 0, rel, best_inv, -1});
      return;
    }
    GroupWord cand = best_inv ? invert(stored) : stored;
    // needed = f . g with stored-oriented cand = g . f
    GroupWord f(p_.gens,
                std::vector<LetterCode>(cand.letters().begin() + best_k, cand.letters().end()));
    int fl = static_cast<int>(f.size());
    pad(pos, f);
    emit({Move::InsertRelator, wi_, pos + fl, 0, rel, best_inv, -1});
    cancel_run(pos + fl + static_cast<int>(cand.size()) - 1, fl);
  }

  // replace the segment [start, start+len) by T using one defining relator:
  // prefer inserting the stored literal inside the segment where both
  // junctions cancel outright, pad only when no split fits
  void replace_segment(int start, int len, int rel, const GroupWord& T) {
    GroupWord S(p_.gens,
                std::vector<LetterCode>(word().letters().begin() + start,
                                        word().letters().begin() + start + len));
    const GroupWord& stored = relator_word(p_, rel);
    for (int split = 0; split <= len; ++split) {
      GroupWord left(p_.gens, std::vector<LetterCode>(S.letters().begin(),
                                                      S.letters().begin() + split));
      GroupWord right(p_.gens,
                      std::vector<LetterCode>(S.letters().begin() + split, S.letters().end()));
      GroupWord rho = concat(concat(invert(left), T), invert(right));
      bool inv;
      if (rho == stored) inv = false;
      else if (rho == invert(stored)) inv = true;
      else continue;
      emit({Move::InsertRelator, wi_, start + split, 0, rel, inv, -1});
      if (split > 0) cancel_run(start + split - 1, split);
      int right_len = len - split;
      if (right_len > 0)
        cancel_run(start + static_cast<int>(T.size()) + right_len - 1, right_len);
      return;
    }
    GroupWord needed = concat(invert(S), T);
    insert_rotated(rel, needed, start + len);
    cancel_run(start + len - 1, len);
  }

  void reduce_interior() {
    bool changed = true;
    while (changed) {
      changed = false;
      const auto& ls = word().letters();
      for (int i = 1; i + 2 < static_cast<int>(ls.size()); ++i) {
        if (ls[i] == -ls[i + 1]) {
          emit({Move::CancelPair, wi_, i, 0, -1, false, -1});
          changed = true;
          break;
        }
      }
    }
  }

  const GroupPresentation& p_;
  const SMachine& m_;
  std::vector<Move>& sink_;
  WordTuple& tuple_;
  int wi_;
};

// Replays a move list from `start`, returning the inverse list (which takes
// the result back to `start`).
inline std::vector<Move> reverse_moves(const GroupPresentation& p, const WordTuple& start,
                                       const std::vector<Move>& moves) {
  std::vector<Move> rev;
  WordTuple t = start;
  for (const auto& m : moves) {
    Move inv = m;
    switch (m.kind) {
      case Move::CancelPair:
        inv.kind = Move::InsertPair;
        inv.letter = t.words[m.word].letters()[m.pos];
        break;
      case Move::InsertPair: inv.kind = Move::CancelPair; break;
      case Move::RemoveRelator: inv.kind = Move::InsertRelator; break;
      case Move::InsertRelator: inv.kind = Move::RemoveRelator; break;
      case Move::CyclicShift: {
        int len = static_cast<int>(t.words[m.word].size());
        inv.pos = len == 0 ? 0 : (len - m.pos % len) % len;
        break;
      }
      case Move::Split:
        inv.kind = Move::Merge;
        inv.word2 = m.word + 1;
        break;
      case Move::Merge:
        inv.kind = Move::Split;
        inv.pos = static_cast<int>(t.words[m.word].size());
        if (m.word2 != m.word + 1)
          throw std::logic_error("only adjacent merges can be reversed");
        break;
      case Move::DropEmpty: inv.kind = Move::InsertEmpty; break;
      case Move::InsertEmpty: inv.kind = Move::DropEmpty; break;
    }
    apply_move(p, t, m, 0);
    rev.push_back(inv);
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

}  // namespace detail

// Expands an accepting computation of the compiled machine into a full
// derivation (flatten(start)) -> ... -> ( ): every rule application becomes
// one conjugation step realized by relator insertions, and the hub relator
// removes the accept word at the end. Negative rules run their positive
// partner's expansion backwards.
inline Derivation witness_derivation(const GroupPresentation& p, const SMachine& m,
                                     const SComputation& c) {
  if (!m.accept_template.matches(c.words.back()))
    throw std::invalid_argument("witness_derivation: the computation does not accept");
  Derivation d;
  d.start = WordTuple(gens_word(p, m, c.words.front()));
  WordTuple cur = d.start;
  for (size_t t = 0; t < c.history.size(); ++t) {
    const SRule& r = m.rule(c.history[t]);
    if (r.sign > 0) {
      detail::StepBuilder sb(p, m, d.moves, cur, 0);
      sb.expand_forward(r, c.words[t], c.words[t + 1]);
    } else {
      const SRule& pos = m.rule(r.inverse_name);
      WordTuple scratch(gens_word(p, m, c.words[t + 1]));
      WordTuple scratch_start = scratch;
      std::vector<Move> fwd;
      detail::StepBuilder sb(p, m, fwd, scratch, 0);
      sb.expand_forward(pos, c.words[t + 1], c.words[t]);
      std::vector<Move> rev = detail::reverse_moves(p, scratch_start, fwd);
      for (const auto& mv : rev) {
        apply_move(p, cur, mv, d.moves.size());
        d.moves.push_back(mv);
      }
    }
  }
  detail::StepBuilder sb(p, m, d.moves, cur, 0);
  sb.remove_hub();
  if (!cur.words.empty()) throw std::logic_error("witness did not reach the empty tuple");
  return d;
}

// Derivation of the inverted word: positions mirror, relators flip
// orientation, shifts reverse. Only single-word derivations (plus the final
// drop) are handled, which covers everything the witness builder emits.
inline Derivation invert_derivation(const GroupPresentation& p, const Derivation& d) {
  Derivation out;
  out.start.words.reserve(d.start.words.size());
  for (const auto& w : d.start.words) out.start.words.push_back(invert(w));
  WordTuple t = d.start;
  for (const auto& m : d.moves) {
    int len = m.word >= 0 && static_cast<size_t>(m.word) < t.words.size()
                  ? static_cast<int>(t.words[m.word].size())
                  : 0;
    Move im = m;
    switch (m.kind) {
      case Move::CancelPair:
        im.pos = len - 2 - m.pos;
        im.letter = 0;
        break;
      case Move::InsertPair: im.pos = len - m.pos; break;
      case Move::InsertRelator:
        im.pos = len - m.pos;
        im.inverted = !m.inverted;
        break;
      case Move::RemoveRelator:
        im.pos = len - m.pos - static_cast<int>(relator_word(p, m.relator).size());
        im.inverted = !m.inverted;
        break;
      case Move::CyclicShift: im.pos = len == 0 ? 0 : (len - m.pos % len) % len; break;
      case Move::DropEmpty:
      case Move::InsertEmpty: break;
      default: throw std::invalid_argument("invert_derivation: unsupported move kind");
    }
    apply_move(p, t, m, 0);
    out.moves.push_back(im);
  }
  return out;
}

// ---- serialization -----------------------------------------------------------

inline Json derivation_to_json(const GroupPresentation& p, const Derivation& d) {
  static const char* names[] = {"cancel", "insert_pair", "remove_relator", "insert_relator",
                                "shift",  "split",       "merge",          "drop",
                                "insert_empty"};
  Json ms = Json::array();
  for (const auto& m : d.moves) {
    Json j{{"op", names[m.kind]}, {"w", m.word}};
    if (m.kind != Move::DropEmpty && m.kind != Move::InsertEmpty && m.kind != Move::Merge)
      j["pos"] = m.pos;
    if (m.kind == Move::InsertPair) {
      Letter l = decode(m.letter);
      j["letter"] = (l.sign < 0 ? "-" : "") + p.gens->name(l.sym);
    }
    if (m.kind == Move::RemoveRelator || m.kind == Move::InsertRelator) {
      j["rel"] = m.relator;
      j["inv"] = m.inverted;
    }
    if (m.kind == Move::Merge) j["w2"] = m.word2;
    ms.push_back(std::move(j));
  }
  return Json{{"start", tuple_to_json(d.start)}, {"moves", ms}};
}

inline Derivation derivation_from_json(const GroupPresentation& p, const Json& j) {
  Derivation d;
  d.start = tuple_from_json(p.gens, j.at("start"));
  static const std::map<std::string, Move::Kind> kinds = {
      {"cancel", Move::CancelPair},          {"insert_pair", Move::InsertPair},
      {"remove_relator", Move::RemoveRelator}, {"insert_relator", Move::InsertRelator},
      {"shift", Move::CyclicShift},          {"split", Move::Split},
      {"merge", Move::Merge},                {"drop", Move::DropEmpty},
      {"insert_empty", Move::InsertEmpty}};
  for (const auto& mj : j.at("moves")) {
    Move m;
    m.kind = kinds.at(mj.at("op").get<std::string>());
    m.word = mj.at("w").get<int>();
    if (mj.contains("pos")) m.pos = mj.at("pos").get<int>();
    if (mj.contains("letter")) {
      std::string s = mj.at("letter").get<std::string>();
      int sign = +1;
      if (!s.empty() && s[0] == '-') {
        sign = -1;
        s = s.substr(1);
      }
      m.letter = encode(Letter{p.gens->id(s), sign});
    }
    if (mj.contains("rel")) m.relator = mj.at("rel").get<int>();
    if (mj.contains("inv")) m.inverted = mj.at("inv").get<bool>();
    if (mj.contains("w2")) m.word2 = mj.at("w2").get<int>();
    d.moves.push_back(m);
  }
  return d;
}

}  // namespace spacefn
