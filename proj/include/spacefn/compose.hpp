#pragma once

#include "spacefn/adding.hpp"
#include "spacefn/surgery.hpp"

namespace spacefn {

// ---- the S-machine view of a Turing machine --------------------------------
//
// Every head (including the end markers) becomes a state letter in its own
// block; each tape contributes a left sector, a right sector, and an empty
// gap sector. Tape letters are duplicated into ".l"/".r" copies so the
// sector alphabets stay disjoint. Commands translate into substitution
// rules: a checked letter on the lhs turns into its inverse on the rhs, and
// anchored parts become locked sectors.
inline SMachine s_from_tm(const TMachine& m) {
  if (!m.symmetric()) throw std::invalid_argument("s_from_tm: machine must be symmetric");
  for (const auto& c : m.commands) {
    size_t letters = 0;
    for (const auto& p : c.parts)
      letters += p.lhs_left.size() + p.lhs_right.size() + p.rhs_left.size() + p.rhs_right.size();
    if (letters > 1)
      throw std::invalid_argument("s_from_tm: command " + c.name + " touches more than one letter");
  }

  SMachine s;
  auto alpha = std::make_shared<Alphabet>();
  int k = m.tape_count;
  int n_blocks = 3 * k;
  std::vector<SymbolId> left_copy(m.alphabet->size(), 0), right_copy(m.alphabet->size(), 0);
  for (int t = 0; t < k; ++t) {
    int b = 3 * t;
    s.blocks.push_back({alpha->add(m.alphabet->name(m.alphas[t]), SymbolKind::Separator, b)});
    std::vector<SymbolId> qs;
    for (SymbolId q : m.state_blocks[t])
      qs.push_back(alpha->add(m.alphabet->name(q), SymbolKind::State, b + 1));
    s.blocks.push_back(qs);
    s.blocks.push_back({alpha->add(m.alphabet->name(m.omegas[t]), SymbolKind::Separator, b + 2)});
    std::vector<SymbolId> ls, rs;
    for (SymbolId y : m.tape_alphabets[t]) {
      ls.push_back(alpha->add(m.alphabet->name(y) + ".l", SymbolKind::Tape, b));
      rs.push_back(alpha->add(m.alphabet->name(y) + ".r", SymbolKind::Tape, b + 1));
      left_copy[y] = ls.back();
      right_copy[y] = rs.back();
    }
    s.sector_alphabets.push_back(ls);
    s.sector_alphabets.push_back(rs);
    if (t + 1 < k) s.sector_alphabets.push_back({});
  }
  s.alphabet = alpha;

  auto map_word = [&](const GroupWord& w, const std::vector<SymbolId>& copy) {
    std::vector<LetterCode> v;
    for (auto c : w.letters()) {
      Letter l = decode(c);
      v.push_back(encode(Letter{copy[l.sym], l.sign}));
    }
    return GroupWord(s.alphabet, std::move(v));
  };
  GroupWord eps(s.alphabet);

  for (const auto& c : m.commands) {
    if (c.sign < 0) continue;
    SRule r;
    r.name = c.name;
    r.inverse_name = c.inverse_name;
    r.parts.resize(n_blocks);
    r.domains.assign(n_blocks - 1, SectorDomain::all());
    for (int t = 0; t < k; ++t) {
      const auto& p = c.parts[t];
      int b = 3 * t;
      SymbolId al = s.blocks[b][0], om = s.blocks[b + 2][0];
      r.parts[b] = {eps, eps, eps, eps, al, al};
      r.parts[b + 2] = {eps, eps, eps, eps, om, om};
      GroupWord sub_left = map_word(reduced_concat(invert(p.lhs_left), p.rhs_left), left_copy);
      GroupWord sub_right = map_word(reduced_concat(p.rhs_right, invert(p.lhs_right)), right_copy);
      r.parts[b + 1] = {eps, eps, sub_left, sub_right, alpha->id(m.alphabet->name(p.lhs_state)),
                        alpha->id(m.alphabet->name(p.rhs_state))};
      if (p.anchor_left) r.domains[b] = SectorDomain::empty();
      if (p.anchor_right) r.domains[b + 1] = SectorDomain::empty();
    }
    add_rule_pair(s, std::move(r));
  }

  auto map_states = [&](const std::vector<SymbolId>& sv) {
    std::vector<SymbolId> out;
    for (int t = 0; t < k; ++t) {
      out.push_back(s.blocks[3 * t][0]);
      out.push_back(alpha->id(m.alphabet->name(sv[t])));
      out.push_back(s.blocks[3 * t + 2][0]);
    }
    return out;
  };
  s.start_template.states = map_states(m.start_states);
  s.accept_template.states = map_states(m.accept_states);
  s.start_template.sector_empty.assign(s.sector_count(), true);
  s.start_template.sector_empty[0] = false;  // the input word sits left of head 1
  s.accept_template.sector_empty.assign(s.sector_count(), true);
  for (SymbolId x : m.input_alphabet)
    s.input_base_names.push_back(m.alphabet->name(x) + ".l");
  s.input_slots = {InputSlot{0, 1, false}};
  validate_smachine(s);
  return s;
}

inline AdmissibleWord tm_config_to_word(const TMachine& m, const SMachine& s, const TMConfig& w) {
  AdmissibleWord out;
  out.states.resize(s.block_count());
  out.sectors.assign(s.sector_count(), GroupWord(s.alphabet));
  for (int t = 0; t < m.tape_count; ++t) {
    int b = 3 * t;
    out.states[b] = s.blocks[b][0];
    out.states[b + 1] = s.alphabet->id(m.alphabet->name(w.tapes[t].state));
    out.states[b + 2] = s.blocks[b + 2][0];
    auto map_side = [&](const GroupWord& side, const char* suffix) {
      std::vector<LetterCode> v;
      for (auto c : side.letters()) {
        Letter l = decode(c);
        v.push_back(encode(Letter{s.alphabet->id(m.alphabet->name(l.sym) + suffix), l.sign}));
      }
      return GroupWord(s.alphabet, std::move(v));
    };
    out.sectors[b] = map_side(w.tapes[t].left, ".l");
    out.sectors[b + 1] = map_side(w.tapes[t].right, ".r");
  }
  return out;
}

// ---- composition with adding machines --------------------------------------

struct ComposedNames {
  static std::string p(int sector, const std::string& rule, int digit, char sign) {
    return "p" + std::to_string(sector + 1) + "(" + rule + "," + std::to_string(digit) + sign +
           ")";
  }
  static std::string p_plain(int sector) { return "p" + std::to_string(sector + 1); }
  static std::string zrule(const std::string& base, const std::string& letter, int sector,
                           char sign, const std::string& rule) {
    std::string head = letter.empty() ? base : base + "(" + letter + ")";
    return head + "@" + std::to_string(sector + 1) + sign + ":" + rule;
  }
  static std::string pre(const std::string& rule) { return "pre:" + rule; }
  static std::string post(const std::string& rule) { return "post:" + rule; }
};

// Identifies the unique positive command reading the start vector and the
// unique one writing the accept vector.
inline std::pair<std::string, std::string> start_accept_commands(const TMachine& m) {
  std::string start, accept;
  for (const auto& c : m.commands) {
    if (c.sign < 0) continue;
    bool reads_start = false, writes_accept = false;
    for (size_t t = 0; t < c.parts.size(); ++t) {
      if (c.parts[t].lhs_state == m.start_states[t]) reads_start = true;
      if (c.parts[t].rhs_state == m.accept_states[t]) writes_accept = true;
    }
    if (reads_start) start = c.name;
    if (writes_accept) accept = c.name;
  }
  if (start.empty() || accept.empty() || start == accept)
    throw std::invalid_argument("machine lacks distinct start/accept commands");
  return {start, accept};
}

// The composition: between every two consecutive state letters of S(M) a
// p-head is inserted, and around every application of a basic rule the
// adding machines sweep each sector, once before in "-" dress and once
// after in "+" dress. The sweeps certify positive sector contents without
// changing word length.
inline SMachine compose(const TMachine& m) {
  std::string why;
  if (!m.symmetric()) throw std::invalid_argument("compose: machine must be symmetric");
  if (!check_s10(m, &why)) throw std::invalid_argument("compose: not s10-normalized: " + why);
  SMachine base = s_from_tm(m);
  auto [start_name, accept_name] = start_accept_commands(m);

  size_t nb = base.block_count();       // base blocks
  size_t ns = base.sector_count();      // base sectors = p-heads to insert
  SMachine s;
  s.copies = 1;
  auto alpha = std::make_shared<Alphabet>();

  std::vector<std::string> positive_rules;
  for (const auto& r : base.rules)
    if (r.sign > 0) positive_rules.push_back(r.name);

  // Blocks: base block 0, P_0, base block 1, P_1, ..., base block nb-1.
  std::vector<std::vector<SymbolId>> pblocks(ns);
  for (size_t b = 0; b < nb; ++b) {
    std::vector<SymbolId> blk;
    for (SymbolId q : base.blocks[b])
      blk.push_back(alpha->add(base.alphabet->name(q), base.alphabet->kind(q),
                               static_cast<int>(2 * b)));
    s.blocks.push_back(blk);
    if (b + 1 < nb) {
      size_t j = b;
      int blkidx = static_cast<int>(2 * j + 1);
      auto& P = pblocks[j];
      P.push_back(alpha->add(ComposedNames::p_plain(static_cast<int>(j)), SymbolKind::State, blkidx));
      for (const auto& rn : positive_rules) {
        bool is_start = rn == start_name, is_accept = rn == accept_name;
        for (int d = 1; d <= 3; ++d) {
          if (!is_start)
            P.push_back(alpha->add(ComposedNames::p(static_cast<int>(j), rn, d, '-'),
                                   SymbolKind::State, blkidx));
          if (!is_accept)
            P.push_back(alpha->add(ComposedNames::p(static_cast<int>(j), rn, d, '+'),
                                   SymbolKind::State, blkidx));
        }
      }
      s.blocks.push_back(P);
      s.p_blocks.push_back(blkidx);
    }
  }

  // Sectors: 2j carries the originals of base sector j plus their ".1"
  // copies, 2j+1 the ".2" copies.
  std::vector<std::vector<SymbolId>> originals(ns), copies1(ns), copies2(ns);
  for (size_t j = 0; j < ns; ++j) {
    std::vector<SymbolId> even, odd;
    for (SymbolId y : base.sector_alphabets[j]) {
      std::string nm = base.alphabet->name(y);
      originals[j].push_back(alpha->add(nm, SymbolKind::Tape, static_cast<int>(2 * j)));
      even.push_back(originals[j].back());
    }
    for (SymbolId y : base.sector_alphabets[j]) {
      std::string nm = base.alphabet->name(y);
      copies1[j].push_back(alpha->add(nm + ".1", SymbolKind::Tape, static_cast<int>(2 * j)));
      even.push_back(copies1[j].back());
    }
    for (SymbolId y : base.sector_alphabets[j]) {
      std::string nm = base.alphabet->name(y);
      copies2[j].push_back(alpha->add(nm + ".2", SymbolKind::Tape, static_cast<int>(2 * j + 1)));
      odd.push_back(copies2[j].back());
    }
    s.sector_alphabets.push_back(even);
    s.sector_alphabets.push_back(odd);
  }
  s.alphabet = alpha;
  GroupWord eps(s.alphabet);

  auto remap = [&](const GroupWord& w) {
    std::vector<LetterCode> v;
    for (auto c : w.letters()) {
      Letter l = decode(c);
      v.push_back(encode(Letter{alpha->id(base.alphabet->name(l.sym)), l.sign}));
    }
    return GroupWord(s.alphabet, std::move(v));
  };
  auto map_domain = [&](const SectorDomain& d, size_t j) {
    switch (d.kind) {
      case SectorDomain::All: return SectorDomain::subset(originals[j]);
      case SectorDomain::Empty: return SectorDomain::empty();
      case SectorDomain::Subset: {
        std::vector<SymbolId> ls;
        for (SymbolId y : d.letters) ls.push_back(alpha->id(base.alphabet->name(y)));
        return SectorDomain::subset(std::move(ls));
      }
    }
    return SectorDomain::all();
  };
  auto pid = [&](const std::string& nm) { return alpha->id(nm); };

  auto base_rule = [&](const std::string& rn) -> const SRule& { return base.rule(rn); };

  for (const auto& rn : positive_rules) {
    const SRule& br = base_rule(rn);
    bool is_start = rn == start_name, is_accept = rn == accept_name;
    for (size_t b = 0; b < nb; ++b)
      if (!br.parts[b].lhs_left.empty() || !br.parts[b].lhs_right.empty())
        throw std::logic_error("compose: base rule " + rn + " is not in substitution form");

    // Basic rule.
    SRule basic;
    basic.name = rn;
    basic.inverse_name = br.inverse_name;
    basic.tag = "basic";
    basic.parts.resize(s.block_count());
    basic.domains.assign(s.sector_count(), SectorDomain::all());
    for (size_t b = 0; b < nb; ++b) {
      SymbolId lq = pid(base.alphabet->name(br.parts[b].lhs_state));
      SymbolId rq = pid(base.alphabet->name(br.parts[b].rhs_state));
      basic.parts[2 * b] = {eps, eps, eps, remap(br.parts[b].rhs_right), lq, rq};
      if (b < ns) basic.domains[2 * b] = map_domain(br.domains[b], b);
    }
    for (size_t j = 0; j < ns; ++j) {
      SymbolId pf = is_start ? pid(ComposedNames::p_plain(static_cast<int>(j)))
                             : pid(ComposedNames::p(static_cast<int>(j), rn, 3, '-'));
      SymbolId pt = is_accept ? pid(ComposedNames::p_plain(static_cast<int>(j)))
                              : pid(ComposedNames::p(static_cast<int>(j), rn, 1, '+'));
      basic.parts[2 * j + 1] = {eps, eps, remap(br.parts[j + 1].rhs_left), eps, pf, pt};
      basic.domains[2 * j + 1] = SectorDomain::empty();
    }
    add_rule_pair(s, std::move(basic));

    // Adding machine copies and transitions.
    for (char sign : {'-', '+'}) {
      if (sign == '-' && is_start) continue;
      if (sign == '+' && is_accept) continue;
      auto kstate = [&](size_t b) {
        const auto& p = br.parts[b];
        return pid(base.alphabet->name(sign == '-' ? p.lhs_state : p.rhs_state));
      };
      auto phead = [&](size_t j, int digit) {
        return pid(ComposedNames::p(static_cast<int>(j), rn, digit, sign));
      };

      // Transition rule: "-" turns the plain p-heads into phase-1 dress
      // before the sweeps; "+" undresses them afterwards.
      SRule trans;
      trans.name = sign == '-' ? ComposedNames::pre(rn) : ComposedNames::post(rn);
      trans.tag = "shift";
      trans.parts.resize(s.block_count());
      trans.domains.assign(s.sector_count(), SectorDomain::all());
      for (size_t b = 0; b < nb; ++b) {
        trans.parts[2 * b] = {eps, eps, eps, eps, kstate(b), kstate(b)};
        if (b < ns) trans.domains[2 * b] = SectorDomain::subset(originals[b]);
      }
      for (size_t j = 0; j < ns; ++j) {
        SymbolId plain = pid(ComposedNames::p_plain(static_cast<int>(j)));
        SymbolId dressed = phead(j, sign == '-' ? 1 : 3);
        trans.parts[2 * j + 1] = {eps, eps, eps, eps, sign == '-' ? plain : dressed,
                                  sign == '-' ? dressed : plain};
        trans.domains[2 * j + 1] = SectorDomain::empty();
      }
      add_rule_pair(s, std::move(trans));

      // One adding machine per sector.
      for (size_t j = 0; j < ns; ++j) {
        auto make_z = [&](const std::string& zbase, const std::string& letter, int pf, int pt,
                          GroupWord rl, GroupWord rr, SectorDomain d1, SectorDomain d2) {
          SRule r;
          r.name = ComposedNames::zrule(zbase, letter, static_cast<int>(j), sign, rn);
          r.tag = "z";
          r.parts.resize(s.block_count());
          r.domains.assign(s.sector_count(), SectorDomain::all());
          for (size_t b = 0; b < nb; ++b) {
            r.parts[2 * b] = {eps, eps, eps, eps, kstate(b), kstate(b)};
            if (b < ns && b != j) r.domains[2 * b] = SectorDomain::subset(originals[b]);
          }
          for (size_t i = 0; i < ns; ++i) {
            if (i == j) continue;
            int digit = i < j ? 3 : 1;
            SymbolId ph = phead(i, digit);
            r.parts[2 * i + 1] = {eps, eps, eps, eps, ph, ph};
            r.domains[2 * i + 1] = SectorDomain::empty();
          }
          r.parts[2 * j + 1] = {eps, eps, std::move(rl), std::move(rr), phead(j, pf), phead(j, pt)};
          r.domains[2 * j] = std::move(d1);
          r.domains[2 * j + 1] = std::move(d2);
          add_rule_pair(s, std::move(r));
        };
        auto lw = [&](SymbolId sym, int sgn) {
          return GroupWord(s.alphabet, {encode(Letter{sym, sgn})});
        };
        for (size_t yi = 0; yi < originals[j].size(); ++yi) {
          std::string yname = alpha->name(originals[j][yi]);
          SymbolId y = originals[j][yi], y1 = copies1[j][yi], y2 = copies2[j][yi];
          make_z("seek", yname, 1, 1, lw(y1, -1), lw(y2, +1), SectorDomain::all(),
                 SectorDomain::all());
          make_z("mark", yname, 1, 2,
                 GroupWord(s.alphabet, {encode(Letter{y, -1}), encode(Letter{y1, +1})}), eps,
                 SectorDomain::all(), SectorDomain::all());
          make_z("back", yname, 2, 2, lw(y, +1), lw(y2, -1), SectorDomain::all(),
                 SectorDomain::all());
          make_z("restore", yname, 3, 3, lw(y, +1), lw(y2, -1), SectorDomain::subset(originals[j]),
                 SectorDomain::all());
        }
        make_z("cycle", "", 2, 1, eps, eps, SectorDomain::all(), SectorDomain::empty());
        make_z("finish", "", 1, 3, eps, eps, SectorDomain::empty(), SectorDomain::all());
      }
    }
  }

  auto lift_states = [&](const std::vector<SymbolId>& bs) {
    std::vector<SymbolId> out;
    for (size_t b = 0; b < nb; ++b) {
      out.push_back(pid(base.alphabet->name(bs[b])));
      if (b < ns) out.push_back(pid(ComposedNames::p_plain(static_cast<int>(b))));
    }
    return out;
  };
  s.start_template.states = lift_states(base.start_template.states);
  s.accept_template.states = lift_states(base.accept_template.states);
  s.start_template.sector_empty.assign(s.sector_count(), true);
  s.accept_template.sector_empty.assign(s.sector_count(), true);
  for (const auto& slot : base.input_slots)
    s.start_template.sector_empty[2 * slot.sector] = false;
  s.input_base_names = base.input_base_names;
  for (const auto& slot : base.input_slots)
    s.input_slots.push_back(InputSlot{2 * slot.sector, 1, false});
  validate_smachine(s);
  return s;
}

}  // namespace spacefn
