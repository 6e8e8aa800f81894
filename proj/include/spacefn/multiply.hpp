#pragma once

#include "spacefn/smachine.hpp"

namespace spacefn {

namespace detail {

struct MultiplyOptions {
  bool hat = false;  // drop the first copy's tape letters, hat the private names
};

inline GroupWord mirror(const GroupWord& w) {
  std::vector<LetterCode> v(w.letters().rbegin(), w.letters().rend());
  return GroupWord(w.alphabet(), std::move(v));
}

inline SMachine multiply_impl(const SMachine& s, int L, const MultiplyOptions& opt) {
  if (L < 2 || L % 2 != 0)
    throw std::invalid_argument("multiply: the copy count must be even and at least 2");
  if (s.copies != 1) throw std::invalid_argument("multiply: machine is already multiplied");
  size_t K = s.block_count();
  SMachine out;
  out.copies = L;
  out.input_base_names = s.input_base_names;
  auto alpha = std::make_shared<Alphabet>();

  auto shared_state = [&](SymbolId q) {
    const auto& st = s.start_template.states;
    const auto& ac = s.accept_template.states;
    return std::find(st.begin(), st.end(), q) != st.end() ||
           std::find(ac.begin(), ac.end(), q) != ac.end();
  };
  auto shared_tape = [&](SymbolId y) {
    return std::find(s.input_base_names.begin(), s.input_base_names.end(),
                     s.alphabet->name(y)) != s.input_base_names.end();
  };
  auto copy_name = [&](SymbolId sym, int c, bool is_state) {
    std::string n = s.alphabet->name(sym);
    bool shared = is_state ? shared_state(sym) : shared_tape(sym);
    if (opt.hat && !shared) n += "^";
    return n + "#" + std::to_string(c);
  };

  // Per-copy symbol maps, block and sector position maps.
  std::vector<std::vector<SymbolId>> state_map(L + 1), tape_map(L + 1);
  std::vector<std::vector<int>> block_pos(L + 1, std::vector<int>(K, -1));
  std::vector<std::vector<int>> sector_pos(L + 1, std::vector<int>(K > 0 ? K - 1 : 0, -1));
  std::vector<SymbolId> kletters(L + 1, 0);

  for (int c = 1; c <= L; ++c) {
    bool even = c % 2 == 0;
    int kblock = static_cast<int>(out.blocks.size());
    kletters[c] = alpha->add("k" + std::to_string(c), SymbolKind::Separator, kblock);
    if (!out.blocks.empty()) out.sector_alphabets.push_back({});  // before k_c
    out.blocks.push_back({kletters[c]});
    out.sector_alphabets.push_back({});  // between k_c and the copy

    state_map[c].assign(s.alphabet->size(), 0);
    tape_map[c].assign(s.alphabet->size(), 0);
    std::vector<size_t> order(K);
    for (size_t t = 0; t < K; ++t) order[t] = even ? K - 1 - t : t;
    for (size_t pos = 0; pos < K; ++pos) {
      size_t b = order[pos];
      int blkidx = static_cast<int>(out.blocks.size());
      block_pos[c][b] = blkidx;
      std::vector<SymbolId> blk;
      for (SymbolId q : s.blocks[b]) {
        SymbolId id = alpha->add(copy_name(q, c, true), s.alphabet->kind(q), blkidx);
        state_map[c][q] = id;
        blk.push_back(id);
      }
      out.blocks.push_back(std::move(blk));
      if (pos + 1 < K) {
        size_t base_sector = even ? order[pos + 1] : b;  // sector between order[pos],order[pos+1]
        int spos = static_cast<int>(out.sector_alphabets.size());
        sector_pos[c][base_sector] = spos;
        std::vector<SymbolId> sa;
        if (!(opt.hat && c == 1)) {
          for (SymbolId y : s.sector_alphabets[base_sector]) {
            SymbolId id = alpha->add(copy_name(y, c, false), SymbolKind::Tape, spos);
            tape_map[c][y] = id;
            sa.push_back(id);
          }
        }
        out.sector_alphabets.push_back(std::move(sa));
      }
    }
  }
  out.alphabet = alpha;
  GroupWord eps(out.alphabet);

  auto map_word = [&](const GroupWord& w, int c) {
    std::vector<LetterCode> v;
    for (auto cd : w.letters()) {
      Letter l = decode(cd);
      SymbolId id = tape_map[c][l.sym];
      v.push_back(encode(Letter{id, l.sign}));
    }
    GroupWord g(out.alphabet, std::move(v));
    return c % 2 == 0 ? mirror(g) : g;
  };
  auto map_domain = [&](const SectorDomain& d, int c) {
    if (d.kind != SectorDomain::Subset) return d;
    std::vector<SymbolId> ls;
    for (SymbolId y : d.letters) ls.push_back(tape_map[c][y]);
    return SectorDomain::subset(std::move(ls));
  };

  for (const auto& r : s.rules) {
    if (r.sign < 0) continue;
    SRule mr;
    mr.name = opt.hat ? "hat:" + r.name : r.name;
    mr.inverse_name = mr.name + "^-1";
    mr.tag = r.tag;
    mr.parts.resize(out.block_count());
    mr.domains.assign(out.sector_count(), SectorDomain::all());
    for (int c = 1; c <= L; ++c) {
      bool even = c % 2 == 0;
      int kblock = out.alphabet->block(kletters[c]);
      mr.parts[kblock] = {eps, eps, eps, eps, kletters[c], kletters[c]};
      for (size_t b = 0; b < K; ++b) {
        const SRulePart& p = r.parts[b];
        SRulePart q;
        q.lhs_state = state_map[c][p.lhs_state];
        q.rhs_state = state_map[c][p.rhs_state];
        if (opt.hat && c == 1) {
          q.lhs_left = q.lhs_right = q.rhs_left = q.rhs_right = eps;
        } else if (!even) {
          q.lhs_left = map_word(p.lhs_left, c);
          q.lhs_right = map_word(p.lhs_right, c);
          q.rhs_left = map_word(p.rhs_left, c);
          q.rhs_right = map_word(p.rhs_right, c);
        } else {
          q.lhs_left = map_word(p.lhs_right, c);
          q.lhs_right = map_word(p.lhs_left, c);
          q.rhs_left = map_word(p.rhs_right, c);
          q.rhs_right = map_word(p.rhs_left, c);
        }
        mr.parts[block_pos[c][b]] = std::move(q);
      }
      for (size_t t = 0; t + 1 < K; ++t) {
        SectorDomain d = opt.hat && c == 1 ? SectorDomain::all() : map_domain(r.domains[t], c);
        mr.domains[sector_pos[c][t]] = std::move(d);
      }
    }
    add_rule_pair(out, std::move(mr));
  }

  auto map_template = [&](const WordTemplate& t) {
    WordTemplate w;
    w.states.resize(out.block_count());
    w.sector_empty.assign(out.sector_count(), true);
    for (int c = 1; c <= L; ++c) {
      w.states[out.alphabet->block(kletters[c])] = kletters[c];
      for (size_t b = 0; b < K; ++b)
        w.states[block_pos[c][b]] = state_map[c][t.states[b]];
      for (size_t sidx = 0; sidx + 1 < K; ++sidx)
        if (!t.sector_empty[sidx] && !(opt.hat && c == 1))
          w.sector_empty[sector_pos[c][sidx]] = false;
    }
    return w;
  };
  out.start_template = map_template(s.start_template);
  out.accept_template = map_template(s.accept_template);
  for (int c = 1; c <= L; ++c) {
    if (opt.hat && c == 1) continue;
    for (const auto& slot : s.input_slots)
      out.input_slots.push_back(InputSlot{sector_pos[c][slot.sector], c, c % 2 == 0});
  }
  for (int c = 1; c <= L; ++c)
    for (int pb : s.p_blocks) out.p_blocks.push_back(block_pos[c][pb]);
  std::sort(out.p_blocks.begin(), out.p_blocks.end());
  validate_smachine(out);
  return out;
}

}  // namespace detail

// L/2 copies and L/2 mirror copies of the machine, separated by k-letters
// that no rule moves. Rules are in bijection with the originals and act on
// all copies at once, mirrored in the even ones.
inline SMachine multiply(const SMachine& s, int L) {
  return detail::multiply_impl(s, L, {false});
}

// The hat companion: same state skeleton, but the first copy carries no tape
// letters, and all letters outside the start/accept states and the input
// alphabet get private hatted names. Rule names gain a "hat:" prefix so the
// two rule sets stay disjoint.
inline SMachine hat_variant(const SMachine& s, int L) {
  return detail::multiply_impl(s, L, {true});
}

// Lifts an admissible word of the base machine into the multiplied one:
// every copy receives the word's states and sectors, mirrored in the even
// copies. Hat machines drop the first copy's tape letters.
inline AdmissibleWord multiply_word(const SMachine& multiplied, const SMachine& base,
                                    const AdmissibleWord& w) {
  int L = multiplied.copies;
  size_t K = base.block_count();
  bool hat = false;
  for (const auto& r : multiplied.rules)
    if (r.name.rfind("hat:", 0) == 0) {
      hat = true;
      break;
    }
  auto mapped = [&](SymbolId sym, int c) {
    std::string n = base.alphabet->name(sym) + "#" + std::to_string(c);
    if (multiplied.alphabet->has(n)) return multiplied.alphabet->id(n);
    return multiplied.alphabet->id(base.alphabet->name(sym) + "^#" + std::to_string(c));
  };
  AdmissibleWord out;
  out.states.resize(multiplied.block_count());
  out.sectors.assign(multiplied.sector_count(), GroupWord(multiplied.alphabet));
  for (int c = 1; c <= L; ++c) {
    size_t offset = static_cast<size_t>(c - 1) * (K + 1);
    bool even = c % 2 == 0;
    out.states[offset] = multiplied.blocks[offset][0];  // the separator
    for (size_t b = 0; b < K; ++b) {
      size_t pos = offset + 1 + (even ? K - 1 - b : b);
      out.states[pos] = mapped(w.states[b], c);
    }
    for (size_t t = 0; t + 1 < K; ++t) {
      size_t sidx = even ? offset + 1 + (K - 2 - t) : offset + 1 + t;
      if (hat && c == 1) continue;
      std::vector<LetterCode> v;
      for (auto cd : w.sectors[t].letters()) {
        Letter l = decode(cd);
        v.push_back(encode(Letter{mapped(l.sym, c), l.sign}));
      }
      GroupWord g(multiplied.alphabet, std::move(v));
      out.sectors[sidx] = even ? detail::mirror(g) : g;
    }
  }
  return out;
}

// Replays a computation of the unmultiplied machine on a multiplied one
// (rule names are shared, modulo the hat prefix).
inline SComputation multiply_computation(const SMachine& multiplied, const SMachine& base,
                                         const SComputation& c,
                                         const std::vector<std::string>& input_base_letters) {
  std::vector<std::string> history;
  bool hat = !multiplied.input_slots.empty() && multiplied.input_slots.front().copy != 1;
  for (const auto& h : c.history) history.push_back(hat ? "hat:" + h : h);
  (void)base;
  return s_replay(multiplied, make_input(multiplied, input_base_letters), history);
}

}  // namespace spacefn
