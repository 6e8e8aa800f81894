#pragma once

#include "spacefn/turing.hpp"

namespace spacefn {

inline std::shared_ptr<Alphabet> clone_alphabet(const Alphabet& a) {
  auto out = std::make_shared<Alphabet>();
  for (SymbolId i = 0; i < a.size(); ++i) {
    const auto& s = a.info(i);
    out->add(s.name, s.kind, s.block);
  }
  return out;
}

inline GroupWord rebind(const GroupWord& w, const AlphabetPtr& a) {
  return GroupWord(a, w.letters());
}

inline void rebind_machine(TMachine& m, const AlphabetPtr& a) {
  m.alphabet = a;
  for (auto& c : m.commands)
    for (auto& p : c.parts) {
      p.lhs_left = rebind(p.lhs_left, a);
      p.lhs_right = rebind(p.lhs_right, a);
      p.rhs_left = rebind(p.rhs_left, a);
      p.rhs_right = rebind(p.rhs_right, a);
    }
}

// The s10 shape: start states enter no command's rhs and exactly one command
// reads them; accept states leave no command and exactly one command writes
// them. On a symmetric machine only the positive commands count (the inverse
// of the entering command unavoidably re-enters the start vector).
inline bool check_s10(const TMachine& m, std::string* why = nullptr) {
  auto complain = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  auto is_start = [&](SymbolId q) {
    return std::find(m.start_states.begin(), m.start_states.end(), q) != m.start_states.end();
  };
  auto is_accept = [&](SymbolId q) {
    return std::find(m.accept_states.begin(), m.accept_states.end(), q) != m.accept_states.end();
  };
  bool sym = m.symmetric();
  int reads_start = 0, writes_accept = 0;
  for (const auto& c : m.commands) {
    if (sym && c.sign < 0) continue;
    bool lhs_start = false, rhs_start = false, lhs_accept = false, rhs_accept = false;
    for (const auto& p : c.parts) {
      lhs_start |= is_start(p.lhs_state);
      rhs_start |= is_start(p.rhs_state);
      lhs_accept |= is_accept(p.lhs_state);
      rhs_accept |= is_accept(p.rhs_state);
    }
    if (rhs_start) return complain("command " + c.name + " re-enters a start state");
    if (lhs_accept) return complain("command " + c.name + " leaves an accept state");
    reads_start += lhs_start;
    writes_accept += rhs_accept;
  }
  if (reads_start != 1) return complain("start states are read by " + std::to_string(reads_start) +
                                        " commands, want exactly 1");
  if (writes_accept != 1)
    return complain("accept states are written by " + std::to_string(writes_accept) +
                    " commands, want exactly 1");
  return true;
}

// Shipped reference machine: a one-tape deterministic acceptor of
// { a^(2m) : m >= 0 } erasing two letters per cycle, s10-normalized. Its
// language and per-input spaces are small enough to enumerate directly.
inline TMachine toy_machine() {
  Json j = {
      {"tapes", 1},
      {"input", {"a"}},
      {"tape_alphabets", {{"a"}}},
      {"state_blocks", {{"in", "even", "odd", "fin"}}},
      {"commands",
       {
           {{"name", "begin"}, {"parts", {{{"lhs", {"in"}}, {"rhs", {"even"}}}}}},
           {{"name", "drop1"}, {"parts", {{{"lhs", {"a", "even"}}, {"rhs", {"odd"}}}}}},
           {{"name", "drop2"}, {"parts", {{{"lhs", {"a", "odd"}}, {"rhs", {"even"}}}}}},
           {{"name", "accept"},
            {"parts", {{{"lhs", {"alpha1", "even", "omega1"}}, {"rhs", {"alpha1", "fin", "omega1"}}}}}},
       }},
      {"start", {"in"}},
      {"accept", {"fin"}},
  };
  return tm_from_json(j);
}

// Adds a balance tape whose star count offsets every length change of the
// original commands, so accepting computations never shrink below their
// starting footprint and the generalized space collapses to the space of the
// input. Stage 1 pre-grows the balance tape, stage 2 mirrors the original
// machine space-neutrally, stage 3 sweeps the balance tape clean.
inline TMachine pad_machine(const TMachine& m1) {
  std::string why;
  if (!check_s10(m1, &why)) throw std::invalid_argument("pad_machine: input not s10-normalized: " + why);
  TMachine m;
  int k = m1.tape_count;
  m.tape_count = k + 1;
  auto alpha = clone_alphabet(*m1.alphabet);
  m.state_blocks = m1.state_blocks;
  m.tape_alphabets = m1.tape_alphabets;
  m.input_alphabet = m1.input_alphabet;
  m.alphas = m1.alphas;
  m.omegas = m1.omegas;

  std::vector<SymbolId> hold(k), done(k);
  for (int i = 0; i < k; ++i) {
    hold[i] = alpha->add("hold" + std::to_string(i + 1), SymbolKind::State, i);
    done[i] = alpha->add("done" + std::to_string(i + 1), SymbolKind::State, i);
    m.state_blocks[i].push_back(hold[i]);
    m.state_blocks[i].push_back(done[i]);
  }
  SymbolId star = alpha->add("*", SymbolKind::Tape, k);
  SymbolId bal1 = alpha->add("bal1", SymbolKind::State, k);
  SymbolId bal2 = alpha->add("bal2", SymbolKind::State, k);
  SymbolId bal3 = alpha->add("bal3", SymbolKind::State, k);
  m.state_blocks.push_back({bal1, bal2, bal3});
  m.tape_alphabets.push_back({star});
  m.alphas.push_back(alpha->add("alpha" + std::to_string(k + 1), SymbolKind::Separator, k));
  m.omegas.push_back(alpha->add("omega" + std::to_string(k + 1), SymbolKind::Separator, k));
  m.alphabet = alpha;

  GroupWord eps(m.alphabet);
  GroupWord star1(m.alphabet, {encode(Letter{star, +1})});
  auto state_part = [&](SymbolId f, SymbolId t) {
    return TMCommandPart{false, false, eps, eps, eps, eps, f, t};
  };
  auto anchored_part = [&](SymbolId f, SymbolId t) {
    return TMCommandPart{true, true, eps, eps, eps, eps, f, t};
  };

  TMCommand grow{"grow", 0, "", {}};
  for (int i = 0; i < k; ++i) grow.parts.push_back(state_part(hold[i], hold[i]));
  grow.parts.push_back(TMCommandPart{false, false, eps, eps, star1, eps, bal1, bal1});
  m.commands.push_back(grow);

  TMCommand engage{"engage", 0, "", {}};
  for (int i = 0; i < k; ++i) engage.parts.push_back(state_part(hold[i], m1.start_states[i]));
  engage.parts.push_back(state_part(bal1, bal2));
  m.commands.push_back(engage);

  for (const auto& c : m1.commands) {
    TMCommand ext = c;
    for (auto& p : ext.parts) {
      p.lhs_left = rebind(p.lhs_left, m.alphabet);
      p.lhs_right = rebind(p.lhs_right, m.alphabet);
      p.rhs_left = rebind(p.rhs_left, m.alphabet);
      p.rhs_right = rebind(p.rhs_right, m.alphabet);
    }
    long long inserted = 0, deleted = 0;
    for (const auto& p : c.parts) {
      deleted += p.lhs_left.size() + p.lhs_right.size();
      inserted += p.rhs_left.size() + p.rhs_right.size();
    }
    long long d = inserted - deleted;  // balance tape absorbs -d
    std::vector<LetterCode> stars(static_cast<size_t>(std::abs(d)), encode(Letter{star, +1}));
    GroupWord sw(m.alphabet, std::move(stars));
    if (d > 0)
      ext.parts.push_back(TMCommandPart{false, false, sw, eps, eps, eps, bal2, bal2});
    else
      ext.parts.push_back(TMCommandPart{false, false, eps, eps, (d < 0 ? sw : eps), eps, bal2, bal2});
    m.commands.push_back(ext);
  }

  TMCommand finish{"finish", 0, "", {}};
  for (int i = 0; i < k; ++i) finish.parts.push_back(anchored_part(m1.accept_states[i], done[i]));
  finish.parts.push_back(state_part(bal2, bal3));
  m.commands.push_back(finish);

  TMCommand sweep{"sweep", 0, "", {}};
  for (int i = 0; i < k; ++i) sweep.parts.push_back(state_part(done[i], done[i]));
  sweep.parts.push_back(TMCommandPart{false, false, star1, eps, eps, eps, bal3, bal3});
  m.commands.push_back(sweep);

  m.start_states = hold;
  m.start_states.push_back(bal1);
  m.accept_states = done;
  m.accept_states.push_back(bal3);
  validate_machine(m);
  return m;
}

inline bool same_command_body(const TMCommand& a, const TMCommand& b) {
  if (a.parts.size() != b.parts.size()) return false;
  for (size_t i = 0; i < a.parts.size(); ++i) {
    const auto& p = a.parts[i];
    const auto& q = b.parts[i];
    if (p.anchor_left != q.anchor_left || p.anchor_right != q.anchor_right ||
        p.lhs_state != q.lhs_state || p.rhs_state != q.rhs_state || p.lhs_left != q.lhs_left ||
        p.lhs_right != q.lhs_right || p.rhs_left != q.rhs_left || p.rhs_right != q.rhs_right)
      return false;
  }
  return true;
}

// Theta^sym = Theta+ with all inverses adjoined. Commands already paired
// with a structural inverse keep their partner instead of gaining a copy.
inline TMachine symmetrize(const TMachine& m) {
  if (m.symmetric()) return m;
  TMachine out = m;
  out.commands.clear();
  std::vector<int> partner(m.commands.size(), -1);
  for (size_t i = 0; i < m.commands.size(); ++i) {
    if (partner[i] >= 0) continue;
    TMCommand inv = inverse_command(m.commands[i]);
    for (size_t j = i + 1; j < m.commands.size(); ++j)
      if (partner[j] < 0 && same_command_body(inv, m.commands[j])) {
        partner[i] = static_cast<int>(j);
        partner[j] = static_cast<int>(i);
        break;
      }
  }
  for (size_t i = 0; i < m.commands.size(); ++i) {
    TMCommand c = m.commands[i];
    if (partner[i] >= 0) {
      bool first = static_cast<size_t>(partner[i]) > i;
      c.sign = first ? +1 : -1;
      c.inverse_name = m.commands[partner[i]].name;
      out.commands.push_back(c);
    } else {
      c.sign = +1;
      c.inverse_name = c.name + "^-1";
      TMCommand inv = inverse_command(c);
      out.commands.push_back(c);
      out.commands.push_back(inv);
    }
  }
  validate_machine(out);
  return out;
}

namespace detail {

// Chain a multi-letter command into single-letter steps through fresh state
// vectors: first delete lhs letters one at a time (innermost first), then
// insert rhs letters. Anchors ride along on every step.
inline std::vector<TMCommand> split_chain(const TMCommand& c, TMachine& m,
                                          std::shared_ptr<Alphabet>& alpha) {
  struct Op {
    int tape;
    bool del;        // delete vs insert
    bool left_side;  // which side of the head
    LetterCode letter;
  };
  std::vector<Op> ops;
  for (size_t t = 0; t < c.parts.size(); ++t) {
    const auto& p = c.parts[t];
    for (auto it = p.lhs_left.letters().rbegin(); it != p.lhs_left.letters().rend(); ++it)
      ops.push_back({static_cast<int>(t), true, true, *it});
    for (auto cde : p.lhs_right.letters()) ops.push_back({static_cast<int>(t), true, false, cde});
  }
  for (size_t t = 0; t < c.parts.size(); ++t) {
    const auto& p = c.parts[t];
    for (auto cde : p.rhs_left.letters()) ops.push_back({static_cast<int>(t), false, true, cde});
    for (auto it = p.rhs_right.letters().rbegin(); it != p.rhs_right.letters().rend(); ++it)
      ops.push_back({static_cast<int>(t), false, false, *it});
  }
  if (ops.size() <= 1) return {c};

  size_t steps = ops.size();
  // Intermediate state vectors, fresh on every tape.
  std::vector<std::vector<SymbolId>> vecs(steps + 1);
  for (size_t t = 0; t < c.parts.size(); ++t) vecs[0].push_back(c.parts[t].lhs_state);
  for (size_t j = 1; j < steps; ++j)
    for (size_t t = 0; t < c.parts.size(); ++t) {
      SymbolId q = alpha->add(c.name + ".q" + std::to_string(t + 1) + "." + std::to_string(j),
                              SymbolKind::State, static_cast<int>(t));
      m.state_blocks[t].push_back(q);
      vecs[j].push_back(q);
    }
  for (size_t t = 0; t < c.parts.size(); ++t) vecs[steps].push_back(c.parts[t].rhs_state);

  GroupWord eps(m.alphabet);
  std::vector<TMCommand> out;
  for (size_t j = 0; j < steps; ++j) {
    TMCommand piece;
    piece.name = c.name + "." + std::to_string(j + 1);
    for (size_t t = 0; t < c.parts.size(); ++t) {
      TMCommandPart p;
      p.anchor_left = c.parts[t].anchor_left;
      p.anchor_right = c.parts[t].anchor_right;
      p.lhs_left = p.lhs_right = p.rhs_left = p.rhs_right = eps;
      p.lhs_state = vecs[j][t];
      p.rhs_state = vecs[j + 1][t];
      if (ops[j].tape == static_cast<int>(t)) {
        GroupWord one(m.alphabet, {ops[j].letter});
        if (ops[j].del)
          (ops[j].left_side ? p.lhs_left : p.lhs_right) = one;
        else
          (ops[j].left_side ? p.rhs_left : p.rhs_right) = one;
      }
      piece.parts.push_back(p);
    }
    out.push_back(piece);
  }
  return out;
}

}  // namespace detail

// Every command of the result touches at most one tape letter across both
// sides. On a symmetric machine the split of theta^-1 reuses the fresh
// states of theta's split, so the result stays symmetric.
inline TMachine split_single_letter(const TMachine& m) {
  TMachine out = m;
  auto alpha = clone_alphabet(*m.alphabet);
  out.alphabet = alpha;
  rebind_machine(out, alpha);
  std::vector<TMCommand> originals = out.commands;
  out.commands.clear();

  if (m.symmetric()) {
    std::vector<TMCommand> negatives;
    for (const auto& c : originals) {
      if (c.sign < 0) continue;
      auto pieces = detail::split_chain(c, out, alpha);
      for (auto& piece : pieces) {
        piece.sign = +1;
        piece.inverse_name = piece.name + "^-1";
        TMCommand inv = inverse_command(piece);
        out.commands.push_back(piece);
        negatives.push_back(inv);
      }
    }
    for (auto& n : negatives) out.commands.push_back(n);
  } else {
    for (const auto& c : originals)
      for (auto& piece : detail::split_chain(c, out, alpha)) out.commands.push_back(piece);
  }
  validate_machine(out);
  return out;
}

// Fresh start and accept vectors plus one entering and one accepting
// command. The entering command anchors the first tape on the right (input
// heads sit at the right end) and the other tapes on both sides.
inline TMachine normalize_s10(const TMachine& m) {
  TMachine out = m;
  auto alpha = clone_alphabet(*m.alphabet);
  out.alphabet = alpha;
  rebind_machine(out, alpha);
  int k = m.tape_count;
  std::vector<SymbolId> st(k), fin(k);
  for (int i = 0; i < k; ++i) {
    st[i] = alpha->add("start" + std::to_string(i + 1), SymbolKind::State, i);
    fin[i] = alpha->add("final" + std::to_string(i + 1), SymbolKind::State, i);
    out.state_blocks[i].push_back(st[i]);
    out.state_blocks[i].push_back(fin[i]);
  }
  GroupWord eps(out.alphabet);
  TMCommand enter{"enter", 0, "", {}};
  for (int i = 0; i < k; ++i) {
    TMCommandPart p{i > 0, true, eps, eps, eps, eps, st[i], m.start_states[i]};
    enter.parts.push_back(p);
  }
  TMCommand accept{"s10accept", 0, "", {}};
  for (int i = 0; i < k; ++i) {
    TMCommandPart p{true, true, eps, eps, eps, eps, m.accept_states[i], fin[i]};
    accept.parts.push_back(p);
  }
  if (m.symmetric()) {
    enter.sign = +1;
    enter.inverse_name = "enter^-1";
    accept.sign = +1;
    accept.inverse_name = "s10accept^-1";
    out.commands.push_back(enter);
    out.commands.push_back(inverse_command(enter));
    out.commands.push_back(accept);
    out.commands.push_back(inverse_command(accept));
  } else {
    out.commands.push_back(enter);
    out.commands.push_back(accept);
  }
  out.start_states = st;
  out.accept_states = fin;
  validate_machine(out);
  std::string why;
  if (!check_s10(out, &why)) throw std::logic_error("normalize_s10 failed: " + why);
  return out;
}

inline TMachine positive_fragment(const TMachine& m) {
  TMachine out = m;
  out.commands.clear();
  for (const auto& c : m.commands)
    if (c.sign >= 0) out.commands.push_back(c);
  return out;
}

// The input word of a padded-machine configuration: defined when the grow
// command is applicable or when the configuration is the immediate image of
// the engage command.
inline GroupWord u_of(const TMachine& padded, const TMConfig& w) {
  const TMCommand* grow = nullptr;
  const TMCommand* engage = nullptr;
  for (const auto& c : padded.commands) {
    if (c.name == "grow") grow = &c;
    if (c.name == "engage") engage = &c;
  }
  if (!grow || !engage) throw std::invalid_argument("u_of: machine has no padding stage");
  bool ok = tm_try_apply(padded, w, *grow).has_value();
  if (!ok) {
    ok = true;
    for (size_t i = 0; i < w.tapes.size(); ++i)
      if (w.tapes[i].state != engage->parts[i].rhs_state) ok = false;
  }
  if (!ok)
    throw std::invalid_argument("u_of: configuration is neither pre-engage nor just engaged");
  if (!w.tapes[0].right.empty())
    throw std::invalid_argument("u_of: input head is not at the right end");
  return w.tapes[0].left;
}

}  // namespace spacefn
