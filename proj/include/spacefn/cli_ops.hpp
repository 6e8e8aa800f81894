#pragma once

#include "spacefn/fitting.hpp"
#include "spacefn/multiply.hpp"
#include "spacefn/presentation.hpp"
#include "spacefn/project.hpp"
#include "spacefn/savitch.hpp"
#include "spacefn/surgery.hpp"
#include "spacefn/witness.hpp"

#include <fstream>
#include <iostream>
#include <atomic>
#include <thread>

namespace spacefn {

// Exit codes: 0 ok, 2 cap or budget exhausted, 3 validation error.
enum ExitCode { kOk = 0, kExhausted = 2, kInvalid = 3 };

struct ExperimentConfig {
  Json raw;

  static ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    ExperimentConfig c;
    in >> c.raw;
    return c;
  }

  std::string machine() const { return raw.at("machine").get<std::string>(); }
  std::vector<std::string> stages() const {
    std::vector<std::string> out;
    if (raw.contains("stages"))
      for (const auto& s : raw.at("stages")) out.push_back(s.get<std::string>());
    return out;
  }
  size_t cap(const std::string& name, size_t dflt) const {
    if (raw.contains("caps") && raw.at("caps").contains(name))
      return raw.at("caps").at(name).get<size_t>();
    return dflt;
  }
  std::string out() const { return raw.at("out").get<std::string>(); }
  uint64_t seed() const { return raw.contains("seed") ? raw.at("seed").get<uint64_t>() : 1; }
  int jobs() const { return raw.contains("jobs") ? raw.at("jobs").get<int>() : 1; }

  Metric metric(int big_n) const {
    Metric m;
    if (raw.contains("metric") && raw.at("metric").get<std::string>() == "modified") {
      m.modified = true;
      m.delta = raw.contains("delta") ? parse_rational(raw.at("delta").get<std::string>())
                                      : Rat(1, 3 * big_n + 1);
      if (big_n > 0 && !(m.delta < Rat(1, 3 * big_n)))
        throw std::invalid_argument("delta must be smaller than 1/(3N)");
      if (m.delta <= Rat(0)) throw std::invalid_argument("delta must be positive");
    }
    return m;
  }
};

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << bytes;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Machine files are dispatched on their keys: Turing machines carry "tapes",
// rewriting machines carry "blocks".
struct PipelineResult {
  std::optional<TMachine> tm;
  std::optional<SMachine> sm;
  std::optional<TMachine> tm_before_compose;  // kept for canonical runs
  std::vector<std::string> log;
};

inline PipelineResult run_pipeline(const Json& machine_json,
                                   const std::vector<std::string>& stages, std::ostream* warn) {
  PipelineResult r;
  if (machine_json.contains("tapes"))
    r.tm = tm_from_json(machine_json);
  else
    r.sm = smachine_from_json(machine_json);
  auto log_tm = [&](const std::string& stage) {
    r.log.push_back(stage + ": " + std::to_string(r.tm->commands.size()) + " commands, " +
                    std::to_string(r.tm->alphabet->size()) + " symbols");
  };
  auto log_sm = [&](const std::string& stage) {
    r.log.push_back(stage + ": " + std::to_string(r.sm->rules.size()) + " rules, " +
                    std::to_string(r.sm->block_count()) + " blocks");
  };
  for (const auto& stage : stages) {
    if (stage == "pad") {
      r.tm = pad_machine(*r.tm);
      log_tm(stage);
    } else if (stage == "symmetrize") {
      r.tm = symmetrize(*r.tm);
      log_tm(stage);
    } else if (stage == "split") {
      r.tm = split_single_letter(*r.tm);
      log_tm(stage);
    } else if (stage == "s10") {
      r.tm = normalize_s10(*r.tm);
      log_tm(stage);
    } else if (stage == "compose") {
      r.tm_before_compose = r.tm;
      r.sm = compose(*r.tm);
      r.tm.reset();
      log_sm(stage);
    } else if (stage.rfind("multiply:", 0) == 0 || stage.rfind("hat:", 0) == 0) {
      bool hat = stage[0] == 'h';
      int L = std::stoi(stage.substr(stage.find(':') + 1));
      if (L < 2 || L % 2 != 0)
        throw std::invalid_argument("multiply: the copy count must be even and at least 2, got " +
                                    std::to_string(L));
      if (L < 40 && warn)
        *warn << "warning: L=" << L << " is below the regime the group theorems assume (L >= 40)\n";
      r.sm = hat ? hat_variant(*r.sm, L) : multiply(*r.sm, L);
      log_sm(stage);
    } else {
      throw std::invalid_argument("unknown stage: " + stage);
    }
  }
  return r;
}

inline int cmd_build(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Json mj = Json::parse(read_file(cfg.machine()));
    PipelineResult r = run_pipeline(mj, cfg.stages(), &err);
    for (const auto& line : r.log) out << line << "\n";
    Json result = r.sm ? smachine_to_json(*r.sm) : tm_to_json(*r.tm);
    write_file(cfg.out(), dump(result));
    out << "wrote " << cfg.out() << "\n";
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

inline int cmd_compile(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Json mj = Json::parse(read_file(cfg.machine()));
    PipelineResult r = run_pipeline(mj, cfg.stages(), &err);
    if (!r.sm || r.sm->copies < 2) {
      err << "error: compile needs a multiplied machine\n";
      return kInvalid;
    }
    GroupPresentation p;
    if (cfg.raw.contains("embedding") && cfg.raw.at("embedding").get<bool>()) {
      // rebuild the pipeline with a hat final stage for the companion
      auto stages = cfg.stages();
      std::string last = stages.back();
      stages.back() = "hat:" + last.substr(last.find(':') + 1);
      PipelineResult rh = run_pipeline(mj, stages, nullptr);
      p = compile_embedding(*r.sm, *rh.sm);
    } else {
      p = compile(*r.sm);
    }
    out << "generators: " << p.gens->size() << ", relators: " << p.relators.size()
        << " (expected " << expected_relator_count(*r.sm) << ")\n";
    write_file(cfg.out(), dump(presentation_to_json(p)));
    out << "wrote " << cfg.out() << "\n";
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

inline int cmd_check(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Json mj = Json::parse(read_file(cfg.machine()));
    if (mj.contains("tapes")) {
      TMachine m = tm_from_json(mj);
      validate_machine(m);
      std::string why;
      bool s10 = check_s10(m, &why);
      out << "turing machine: " << m.tape_count << " tapes, " << m.commands.size()
          << " commands, symmetric=" << (m.symmetric() ? "yes" : "no")
          << ", s10=" << (s10 ? "yes" : "no");
      if (!s10) out << " (" << why << ")";
      out << "\n";
    } else {
      SMachine m = smachine_from_json(mj);
      validate_smachine(m);
      out << "rewriting machine: " << m.block_count() << " blocks, " << m.rules.size()
          << " rules, copies=" << m.copies << "\n";
    }
    out << "ok\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "invalid: " << e.what() << "\n";
    return kInvalid;
  }
}

inline int cmd_space(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Json mj = Json::parse(read_file(cfg.machine()));
    PipelineResult r = run_pipeline(mj, cfg.stages(), &err);
    if (!r.sm || r.sm->copies < 2) {
      err << "error: space needs a multiplied machine\n";
      return kInvalid;
    }
    GroupPresentation p = compile(*r.sm);
    Metric metric = cfg.metric(p.N);

    GroupWord word;
    std::optional<Derivation> upper;
    const Json& wspec = cfg.raw.at("word");
    if (wspec.contains("sigma")) {
      std::string u = wspec.at("sigma").get<std::string>();
      std::vector<std::string> base;
      for (char ch : u) base.push_back(std::string(1, ch) + ".l");
      word = sigma_word(p, *r.sm, base);
      if (r.tm_before_compose) {
        GroupWord uw(r.tm_before_compose->alphabet);
        {
          std::vector<LetterCode> v;
          for (char ch : u)
            v.push_back(
                encode(Letter{r.tm_before_compose->alphabet->id(std::string(1, ch)), +1}));
          uw = GroupWord(r.tm_before_compose->alphabet, std::move(v));
        }
        SMachine single = compose(*r.tm_before_compose);
        SComputation c =
            canonical_s_run(single, *r.tm_before_compose, uw, cfg.cap("space", 64),
                            cfg.cap("time", 1000000));
        SComputation cl = multiply_computation(*r.sm, single, c, [&] {
          std::vector<std::string> names;
          for (char ch : u) names.push_back(std::string(1, ch) + ".l");
          return names;
        }());
        upper = witness_derivation(p, *r.sm, cl);
      }
    } else {
      word = word_from_json(p.gens, wspec.at("letters"));
    }

    Rat s_cap;
    if (upper) {
      s_cap = verify(p, *upper, metric).space;
    } else {
      s_cap = Rat(static_cast<long long>(cfg.cap("space", 2 * word.size() + 4)));
    }
    SpaceResult res = space_search(p, WordTuple(word), s_cap, cfg.cap("budget", 1000000), metric);

    Json j{{"word", word_to_json(word)},
           {"cap", format_rational(s_cap)},
           {"outcome", res.outcome == SpaceResult::Proven
                           ? "proven"
                           : (res.outcome == SpaceResult::Unreachable ? "unreachable-within-cap"
                                                                      : "budget-exhausted")},
           {"explored", res.explored},
           {"seed", cfg.seed()}};
    if (res.outcome == SpaceResult::Proven) j["space"] = format_rational(res.space);
    if (upper) j["witness_space"] = format_rational(verify(p, *upper, metric).space);
    if (cfg.raw.contains("derivation_out")) {
      const Derivation* d = nullptr;
      if (res.witness) d = &*res.witness;
      else if (upper) d = &*upper;
      if (d) write_file(cfg.raw.at("derivation_out").get<std::string>(),
                        dump(derivation_to_json(p, *d)));
    }
    write_file(cfg.out(), dump(j));
    out << dump(j);
    return res.outcome == SpaceResult::Proven ? kOk : kExhausted;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

inline int cmd_table(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Json mj = Json::parse(read_file(cfg.machine()));
    PipelineResult r = run_pipeline(mj, cfg.stages(), &err);
    if (!r.sm || r.sm->copies < 2) {
      err << "error: table needs a multiplied machine\n";
      return kInvalid;
    }
    GroupPresentation p = compile(*r.sm);
    Metric metric = cfg.metric(p.N);
    const Json& wspec = cfg.raw.at("words");
    std::vector<GroupWord> words;
    if (wspec.at("source") == "sigma") {
      for (const auto& uj : wspec.at("inputs")) {
        std::string u = uj.get<std::string>();
        std::vector<std::string> base;
        for (char ch : u) base.push_back(std::string(1, ch) + ".l");
        words.push_back(sigma_word(p, *r.sm, base));
      }
    } else if (wspec.at("source") == "list") {
      for (const auto& wj : wspec.at("words")) words.push_back(word_from_json(p.gens, wj));
    } else if (wspec.at("source") == "relators") {
      for (const auto& rel : p.relators) words.push_back(rel.word);
    } else {
      throw std::invalid_argument("unknown word source");
    }
    int n_max = cfg.raw.contains("n_max") ? cfg.raw.at("n_max").get<int>() : 64;
    Rat s_cap(static_cast<long long>(cfg.cap("space", 64)));
    size_t budget = cfg.cap("budget", 1000000);

    // Rows are independent; workers share nothing and the output order is
    // fixed, so the table is schedule independent.
    int jobs = std::max(1, cfg.jobs());
    std::vector<SpaceTableRow> rows;
    if (jobs == 1 || words.size() <= 1) {
      rows = space_function(p, words, n_max, s_cap, budget, metric);
    } else {
      std::vector<std::optional<SpaceResult>> results(words.size());
      std::vector<std::thread> pool;
      std::atomic<size_t> next{0};
      for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
          for (size_t i = next.fetch_add(1); i < words.size(); i = next.fetch_add(1))
            results[i] = space_search(p, WordTuple(words[i]), s_cap, budget, metric);
        });
      for (auto& th : pool) th.join();
      std::map<long long, std::vector<std::pair<Rat, bool>>> by_n;
      for (size_t i = 0; i < words.size(); ++i) {
        long long n = static_cast<long long>(words[i].size());
        if (n > n_max) continue;
        bool proven = results[i]->outcome == SpaceResult::Proven;
        by_n[n].push_back({proven ? results[i]->space : Rat(0), !proven});
      }
      std::optional<Rat> running;
      bool capped = false;
      for (long long n = 1; n <= n_max; ++n) {
        SpaceTableRow row{n, std::nullopt, s_cap, "empty"};
        if (by_n.count(n))
          for (auto& [sp, cp] : by_n[n]) {
            if (cp) capped = true;
            else if (!running || sp > *running) running = sp;
          }
        if (running) {
          row.space = running;
          row.status = capped ? "capped" : "ok";
        } else if (capped) {
          row.status = "capped";
        }
        rows.push_back(row);
      }
    }
    write_file(cfg.out(), table_to_csv(rows));
    out << "wrote " << cfg.out() << "\n";
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

inline int cmd_verify(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    GroupPresentation p = presentation_from_json(Json::parse(read_file(
        cfg.raw.at("presentation").get<std::string>())));
    Derivation d = derivation_from_json(
        p, Json::parse(read_file(cfg.raw.at("derivation").get<std::string>())));
    Metric metric = cfg.metric(p.N);
    ReplayResult r = verify(p, d, metric);
    if (r.ok) {
      out << "ok space=" << format_rational(r.space) << " moves=" << d.moves.size() << "\n";
      return kOk;
    }
    out << "fail at step " << r.failed_step << ": " << r.error << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

inline int cmd_fit(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    auto f = table_from_csv(read_file(cfg.raw.at("f_table").get<std::string>()));
    GSpec g;
    const Json& gj = cfg.raw.at("g");
    if (gj.is_string()) {
      g = GSpec::parse(gj.get<std::string>());
    } else {
      g.kind = GSpec::Table;
      g.table = table_from_csv(read_file(gj.at("table").get<std::string>()));
    }
    long long c_max = cfg.raw.contains("c_max") ? cfg.raw.at("c_max").get<long long>() : 64;
    auto c = preceq_fit(f, g, c_max);
    if (c)
      out << *c << "\n";
    else
      out << "none\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

}  // namespace spacefn
