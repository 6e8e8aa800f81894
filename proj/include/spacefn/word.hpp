#pragma once

#include "spacefn/alphabet.hpp"
#include "spacefn/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spacefn {

// A signed letter. Encoded as +-(symbol id + 1); 0 is not a letter.
struct Letter {
  SymbolId sym;
  int sign;  // +1 or -1

  Letter inverse() const { return Letter{sym, -sign}; }
  bool operator==(const Letter&) const = default;
};

using LetterCode = int32_t;

inline LetterCode encode(Letter l) {
  return l.sign > 0 ? static_cast<LetterCode>(l.sym + 1) : -static_cast<LetterCode>(l.sym + 1);
}
inline Letter decode(LetterCode c) {
  return c > 0 ? Letter{static_cast<SymbolId>(c - 1), +1} : Letter{static_cast<SymbolId>(-c - 1), -1};
}

// Immutable word over a group alphabet. Operations return fresh words so
// values can be shared freely across search frontiers.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(AlphabetPtr a) : alphabet_(std::move(a)) {}
  GroupWord(AlphabetPtr a, std::vector<LetterCode> letters)
      : alphabet_(std::move(a)), letters_(std::move(letters)) {}

  static GroupWord from_letters(AlphabetPtr a, const std::vector<Letter>& ls) {
    std::vector<LetterCode> v;
    v.reserve(ls.size());
    for (auto l : ls) v.push_back(encode(l));
    return GroupWord(std::move(a), std::move(v));
  }

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const std::vector<LetterCode>& letters() const { return letters_; }
  size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter at(size_t i) const { return decode(letters_.at(i)); }

  bool operator==(const GroupWord& o) const { return letters_ == o.letters_; }
  bool operator!=(const GroupWord& o) const { return letters_ != o.letters_; }
  bool operator<(const GroupWord& o) const { return letters_ < o.letters_; }

  bool reduced() const {
    for (size_t i = 0; i + 1 < letters_.size(); ++i)
      if (letters_[i] == -letters_[i + 1]) return false;
    return true;
  }

  bool positive() const {
    return std::all_of(letters_.begin(), letters_.end(), [](LetterCode c) { return c > 0; });
  }

  std::string str() const {
    std::string out;
    for (size_t i = 0; i < letters_.size(); ++i) {
      if (i) out += ' ';
      Letter l = decode(letters_[i]);
      if (l.sign < 0) out += '-';
      out += alphabet_ ? alphabet_->name(l.sym) : std::to_string(l.sym);
    }
    return out;
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<LetterCode> letters_;
};

// Combinatorial length ||w||.
inline size_t norm(const GroupWord& w) { return w.size(); }

// Tape-letter count |w|_a.
inline size_t a_length(const GroupWord& w) {
  size_t n = 0;
  for (auto c : w.letters())
    if (w.alphabet()->kind(decode(c).sym) == SymbolKind::Tape) ++n;
  return n;
}

inline GroupWord concat(const GroupWord& a, const GroupWord& b) {
  std::vector<LetterCode> v = a.letters();
  v.insert(v.end(), b.letters().begin(), b.letters().end());
  return GroupWord(a.alphabet() ? a.alphabet() : b.alphabet(), std::move(v));
}

inline GroupWord invert(const GroupWord& w) {
  std::vector<LetterCode> v;
  v.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) v.push_back(-*it);
  return GroupWord(w.alphabet(), std::move(v));
}

// Left rotation by k positions; k may exceed ||w||.
inline GroupWord cyclic_shift(const GroupWord& w, size_t k) {
  if (w.empty()) return w;
  k %= w.size();
  std::vector<LetterCode> v;
  v.reserve(w.size());
  v.insert(v.end(), w.letters().begin() + k, w.letters().end());
  v.insert(v.end(), w.letters().begin(), w.letters().begin() + k);
  return GroupWord(w.alphabet(), std::move(v));
}

// Unique freely reduced form, via a stack scan.
inline GroupWord free_reduce(const GroupWord& w) {
  std::vector<LetterCode> out;
  out.reserve(w.size());
  for (auto c : w.letters()) {
    if (!out.empty() && out.back() == -c)
      out.pop_back();
    else
      out.push_back(c);
  }
  return GroupWord(w.alphabet(), std::move(out));
}

inline GroupWord reduced_concat(const GroupWord& a, const GroupWord& b) {
  return free_reduce(concat(a, b));
}

// Symbol-to-symbol-or-empty mapping between alphabets. Unlisted symbols are
// unmapped and make project() fail with the symbol's name.
class SymbolMap {
 public:
  explicit SymbolMap(AlphabetPtr source, AlphabetPtr target)
      : source_(std::move(source)), target_(std::move(target)),
        table_(source_->size(), kUnmapped) {}

  static SymbolMap identity(const AlphabetPtr& a) {
    SymbolMap m(a, a);
    for (SymbolId i = 0; i < a->size(); ++i) m.map(i, i);
    return m;
  }

  void map(SymbolId from, SymbolId to) { table_.at(from) = static_cast<int64_t>(to); }
  void erase(SymbolId from) { table_.at(from) = kErased; }
  void map(const std::string& from, const std::string& to) { map(source_->id(from), target_->id(to)); }
  void erase(const std::string& from) { erase(source_->id(from)); }

  const AlphabetPtr& source() const { return source_; }
  const AlphabetPtr& target() const { return target_; }

  bool mapped(SymbolId s) const { return table_.at(s) != kUnmapped; }
  bool erased(SymbolId s) const { return table_.at(s) == kErased; }
  SymbolId image(SymbolId s) const { return static_cast<SymbolId>(table_.at(s)); }

 private:
  static constexpr int64_t kUnmapped = -2;
  static constexpr int64_t kErased = -1;
  AlphabetPtr source_, target_;
  std::vector<int64_t> table_;
};

// phi(x1)...phi(xn) with signs preserved and empty images dropped. The
// result is not auto-reduced.
inline GroupWord project(const GroupWord& w, const SymbolMap& m) {
  std::vector<LetterCode> out;
  out.reserve(w.size());
  for (auto c : w.letters()) {
    Letter l = decode(c);
    if (!m.mapped(l.sym))
      throw std::invalid_argument("project: unmapped symbol " + w.alphabet()->name(l.sym));
    if (m.erased(l.sym)) continue;
    out.push_back(encode(Letter{m.image(l.sym), l.sign}));
  }
  return GroupWord(m.target(), std::move(out));
}

// Modified length |w|: q-letters (state and separator kinds) weigh 1, and a
// q-free block with s command letters and t tape letters contributes
// s + delta*max(0, t-s).
inline Rat modified_length(const GroupWord& w, const Rat& delta) {
  Rat total(0);
  long long q_count = 0, s_block = 0, t_block = 0;
  auto flush = [&] {
    total += Rat(s_block) + delta * Rat(std::max(0LL, t_block - s_block));
    s_block = t_block = 0;
  };
  for (auto c : w.letters()) {
    switch (w.alphabet()->kind(decode(c).sym)) {
      case SymbolKind::State:
      case SymbolKind::Separator:
        flush();
        ++q_count;
        break;
      case SymbolKind::Command: ++s_block; break;
      case SymbolKind::Tape: ++t_block; break;
    }
  }
  flush();
  return total + Rat(q_count);
}

// Lexicographically least rotation; words here are short, so the quadratic
// scan is fine.
inline GroupWord canonical_rotation(const GroupWord& w) {
  if (w.empty()) return w;
  GroupWord best = w;
  for (size_t k = 1; k < w.size(); ++k) {
    GroupWord cand = cyclic_shift(w, k);
    if (cand < best) best = cand;
  }
  return best;
}

// Reduce a word as a cyclic word: freely reduce, then cancel across the seam.
inline GroupWord cyclic_reduce(const GroupWord& w) {
  GroupWord r = free_reduce(w);
  std::vector<LetterCode> v = r.letters();
  size_t lo = 0, hi = v.size();
  while (hi - lo >= 2 && v[lo] == -v[hi - 1]) {
    ++lo;
    --hi;
  }
  return GroupWord(w.alphabet(), std::vector<LetterCode>(v.begin() + lo, v.begin() + hi));
}

// ---- tuples ----------------------------------------------------------

// A finite sequence of words; the unit rewritten by the derivation calculus.
struct WordTuple {
  std::vector<GroupWord> words;

  WordTuple() = default;
  explicit WordTuple(std::vector<GroupWord> ws) : words(std::move(ws)) {}
  explicit WordTuple(GroupWord w) { words.push_back(std::move(w)); }

  size_t size() const { return words.size(); }
  bool empty() const { return words.empty(); }
  bool operator==(const WordTuple& o) const { return words == o.words; }
};

inline size_t norm(const WordTuple& t) {
  size_t n = 0;
  for (const auto& w : t.words) n += w.size();
  return n;
}

inline Rat modified_norm(const WordTuple& t, const Rat& delta) {
  Rat n(0);
  for (const auto& w : t.words) n += modified_length(w, delta);
  return n;
}

// ---- serialization ---------------------------------------------------

inline Json word_to_json(const GroupWord& w) {
  Json arr = Json::array();
  for (auto c : w.letters()) {
    Letter l = decode(c);
    std::string name = w.alphabet()->name(l.sym);
    arr.push_back(l.sign > 0 ? name : "-" + name);
  }
  return arr;
}

inline GroupWord word_from_json(const AlphabetPtr& a, const Json& j) {
  std::vector<LetterCode> v;
  for (const auto& tok : j) {
    std::string s = tok.get<std::string>();
    int sign = +1;
    if (!s.empty() && s[0] == '-') {
      sign = -1;
      s = s.substr(1);
    }
    v.push_back(encode(Letter{a->id(s), sign}));
  }
  return GroupWord(a, std::move(v));
}

inline Json tuple_to_json(const WordTuple& t) {
  Json arr = Json::array();
  for (const auto& w : t.words) arr.push_back(word_to_json(w));
  return arr;
}

inline WordTuple tuple_from_json(const AlphabetPtr& a, const Json& j) {
  WordTuple t;
  for (const auto& wj : j) t.words.push_back(word_from_json(a, wj));
  return t;
}

struct WordHash {
  size_t operator()(const GroupWord& w) const {
    size_t h = 0xcbf29ce484222325ull;
    for (auto c : w.letters()) h = (h ^ static_cast<size_t>(static_cast<uint32_t>(c))) * 0x100000001b3ull;
    return h;
  }
};

}  // namespace spacefn
