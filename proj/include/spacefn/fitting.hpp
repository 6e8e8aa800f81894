#pragma once

#include "spacefn/rewriting.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace spacefn {

// Comparison function g for the dominance fit: either a named total function
// or a finite table. A candidate constant is admissible only where g is
// defined on every point it is asked for.
struct GSpec {
  enum Kind { Identity, Double, Square, Cube, Exp2, Table } kind = Identity;
  std::map<long long, long long> table;

  std::optional<long long> operator()(long long n) const {
    switch (kind) {
      case Identity: return n;
      case Double: return 2 * n;
      case Square: return n * n;
      case Cube: return n * n * n;
      case Exp2: return n < 62 ? std::optional<long long>(1LL << n) : std::nullopt;
      case Table: {
        auto it = table.find(n);
        if (it == table.end()) return std::nullopt;
        return it->second;
      }
    }
    return std::nullopt;
  }

  static GSpec parse(const std::string& s) {
    GSpec g;
    if (s == "identity" || s == "n") g.kind = Identity;
    else if (s == "double" || s == "2n") g.kind = Double;
    else if (s == "square" || s == "n^2") g.kind = Square;
    else if (s == "cube" || s == "n^3") g.kind = Cube;
    else if (s == "exp2" || s == "2^n") g.kind = Exp2;
    else throw std::invalid_argument("unknown g spec: " + s);
    return g;
  }
};

// Least integer c <= c_max with f(n) <= c*g(c*n) + c*n for every tabulated
// n, or nothing. Candidates where g is undefined at some c*n fail.
inline std::optional<long long> preceq_fit(const std::map<long long, long long>& f_table,
                                           const GSpec& g, long long c_max) {
  for (long long c = 1; c <= c_max; ++c) {
    bool ok = true;
    for (const auto& [n, fn] : f_table) {
      auto gv = g(c * n);
      if (!gv || fn > c * (*gv) + c * n) {
        ok = false;
        break;
      }
    }
    if (ok) return c;
  }
  return std::nullopt;
}

// ---- the space function table ----------------------------------------------

struct SpaceTableRow {
  long long n;
  std::optional<Rat> space;  // max proven space among words of norm <= n
  Rat cap{0};
  std::string status;  // "ok" | "capped" | "empty"
};

// Per-n maxima of proven spaces over a supplied word source. The values are
// cap-relative lower bounds for the space function of the presentation.
inline std::vector<SpaceTableRow> space_function(const GroupPresentation& p,
                                                 const std::vector<GroupWord>& words, int n_max,
                                                 const Rat& s_cap, size_t budget,
                                                 const Metric& metric = {}) {
  struct Entry {
    Rat space;
    bool capped;
  };
  std::map<long long, std::vector<Entry>> by_n;
  for (const auto& w : words) {
    long long n = static_cast<long long>(w.size());
    if (n > n_max) continue;
    SpaceResult r = space_search(p, WordTuple(w), s_cap, budget, metric);
    Entry e{Rat(0), true};
    if (r.outcome == SpaceResult::Proven) e = {r.space, false};
    by_n[n].push_back(e);
  }
  std::vector<SpaceTableRow> rows;
  std::optional<Rat> running;
  bool any_capped = false;
  for (long long n = 1; n <= n_max; ++n) {
    SpaceTableRow row{n, std::nullopt, s_cap, "empty"};
    auto it = by_n.find(n);
    if (it != by_n.end()) {
      for (const auto& e : it->second) {
        if (e.capped)
          any_capped = true;
        else if (!running || e.space > *running)
          running = e.space;
      }
    }
    if (running) {
      row.space = running;  // maxima over nested sets are monotone
      row.status = any_capped ? "capped" : "ok";
    } else if (any_capped) {
      row.status = "capped";
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string table_to_csv(const std::vector<SpaceTableRow>& rows) {
  std::ostringstream out;
  out << "n,space,cap,status\n";
  for (const auto& r : rows) {
    out << r.n << "," << (r.space ? format_rational(*r.space) : "") << ","
        << format_rational(r.cap) << "," << r.status << "\n";
  }
  return out.str();
}

inline std::map<long long, long long> table_from_csv(const std::string& text) {
  std::map<long long, long long> out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string n, space;
    std::getline(ls, n, ',');
    std::getline(ls, space, ',');
    if (space.empty()) continue;
    Rat r = parse_rational(space);
    out[std::stoll(n)] = r.numerator() / r.denominator();
  }
  return out;
}

}  // namespace spacefn
