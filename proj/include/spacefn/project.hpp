#pragma once

#include "spacefn/compose.hpp"

namespace spacefn {

namespace detail {
// Composed sector sidx (between blocks sidx and sidx+1) lands in the base
// sector between the surrounding kept blocks.
inline std::vector<int> sector_targets(const SMachine& s) {
  auto is_p = [&](size_t b) {
    return std::find(s.p_blocks.begin(), s.p_blocks.end(), static_cast<int>(b)) != s.p_blocks.end();
  };
  std::vector<int> map(s.sector_count(), -1);
  int kept = 0;
  for (size_t b = 0; b + 1 < s.block_count(); ++b) {
    if (!is_p(b)) ++kept;
    map[b] = kept - 1;
  }
  return map;
}
}  // namespace detail

// Deletes the p-heads from an admissible word of the composed machine and
// merges each sector pair, mapping marked copies back to their originals.
// base is the machine the composition was built from (possibly multiplied).
inline AdmissibleWord project_word(const SMachine& s, const SMachine& base,
                                   const AdmissibleWord& w) {
  auto is_p = [&](size_t b) {
    return std::find(s.p_blocks.begin(), s.p_blocks.end(), static_cast<int>(b)) != s.p_blocks.end();
  };
  std::vector<int> sector_map = detail::sector_targets(s);
  AdmissibleWord out;
  std::vector<std::vector<LetterCode>> acc(base.sector_count());
  for (size_t b = 0; b < s.block_count(); ++b) {
    if (!is_p(b)) out.states.push_back(base.alphabet->id(s.alphabet->name(w.states[b])));
    if (b >= s.sector_count()) continue;
    for (auto c : w.sectors[b].letters()) {
      Letter l = decode(c);
      acc[sector_map[b]].push_back(
          encode(Letter{base.alphabet->id(copy_base(s.alphabet->name(l.sym))), l.sign}));
    }
  }
  if (out.states.size() != base.block_count())
    throw std::invalid_argument("project_word: base machine does not match");
  for (auto& v : acc) out.sectors.push_back(free_reduce(GroupWord(base.alphabet, std::move(v))));
  return out;
}

// The basic-rule subsequence of a composed computation, acting on p-stripped
// words. check_projection verifies that the projection stays constant while
// the adding machines work, which is what makes the result well-defined.
inline SComputation project_history(const SMachine& s, const SMachine& base,
                                    const SComputation& c, bool check_projection = true) {
  std::vector<std::string> basic;
  std::vector<AdmissibleWord> words;
  words.push_back(project_word(s, base, c.words.front()));
  for (size_t i = 0; i < c.history.size(); ++i) {
    const SRule& r = s.rule(c.history[i]);
    if (r.tag == "basic") {
      basic.push_back(r.name);
      words.push_back(project_word(s, base, c.words[i + 1]));
    } else if (check_projection) {
      AdmissibleWord prev = project_word(s, base, c.words[i]);
      AdmissibleWord next = project_word(s, base, c.words[i + 1]);
      if (!(prev == next))
        throw std::logic_error("projection changed under non-basic rule " + r.name);
    }
  }
  SComputation out = s_replay(base, words.front(), basic);
  for (size_t i = 0; i < out.words.size(); ++i)
    if (!(out.words[i] == words[i]))
      throw std::logic_error("projected computation does not replay on the base machine");
  return out;
}

// ---- canonical accepting runs ----------------------------------------------

namespace detail {

// Drives one adding machine of the composition to completion, following the
// recommended rule order.
inline void run_sector_sweep(const SMachine& s, AdmissibleWord& cur, size_t sector_j, char sign,
                             const std::string& rule_name, std::vector<std::string>& history) {
  int phase = 1;
  while (true) {
    auto step =
        canonical_z_step(phase, s.alphabet, cur.sectors[2 * sector_j], cur.sectors[2 * sector_j + 1]);
    if (!step) return;
    std::string rn =
        ComposedNames::zrule(step->base, step->letter, static_cast<int>(sector_j), sign, rule_name);
    cur = s_apply(s, cur, s.rule(rn));
    history.push_back(rn);
    if (step->base == "mark")
      phase = 2;
    else if (step->base == "cycle")
      phase = 1;
    else if (step->base == "finish")
      phase = 3;
  }
}

}  // namespace detail

// A deterministic accepting computation of the composed machine on input u:
// a minimal-space positive run of the underlying Turing machine, with the
// before/after sweeps of the adding machines spliced around every basic
// rule.
inline SComputation canonical_s_run(const SMachine& s, const TMachine& m, const GroupWord& u,
                                    size_t space_cap, size_t time_cap) {
  auto [start_name, accept_name] = start_accept_commands(m);
  TMachine pos = positive_fragment(m);
  auto tm_res = tm_space_bfs(pos, input_config(pos, u), space_cap, time_cap);
  if (tm_res.status != SearchStatus::Found)
    throw std::runtime_error("canonical_s_run: input not accepted within caps");

  std::vector<std::string> input_names;
  for (auto c : u.letters()) input_names.push_back(m.alphabet->name(decode(c).sym) + ".l");
  AdmissibleWord cur = make_input(s, input_names);
  AdmissibleWord start = cur;
  std::vector<std::string> history;
  size_t sweeps = s.p_blocks.size();

  for (const auto& cmd : tm_res.witness->history) {
    if (cmd != start_name) {
      cur = s_apply(s, cur, s.rule(ComposedNames::pre(cmd)));
      history.push_back(ComposedNames::pre(cmd));
      for (size_t j = 0; j < sweeps; ++j) detail::run_sector_sweep(s, cur, j, '-', cmd, history);
    }
    cur = s_apply(s, cur, s.rule(cmd));
    history.push_back(cmd);
    if (cmd != accept_name) {
      for (size_t j = 0; j < sweeps; ++j) detail::run_sector_sweep(s, cur, j, '+', cmd, history);
      cur = s_apply(s, cur, s.rule(ComposedNames::post(cmd)));
      history.push_back(ComposedNames::post(cmd));
    }
  }
  if (!s.accept_template.matches(cur))
    throw std::logic_error("canonical_s_run did not reach the accept word");
  return s_replay(s, start, history);
}

}  // namespace spacefn
