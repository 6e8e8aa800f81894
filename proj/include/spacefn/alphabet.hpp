#pragma once

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace spacefn {

using Json = nlohmann::ordered_json;

// Kinds follow the generator classification used throughout: state letters
// (heads), tape letters, command letters (only present in compiled
// presentations) and separator letters (the k-letters and the end-of-tape
// markers, which behave like states).
enum class SymbolKind : uint8_t { State, Tape, Command, Separator };

inline const char* kind_name(SymbolKind k) {
  switch (k) {
    case SymbolKind::State: return "state";
    case SymbolKind::Tape: return "tape";
    case SymbolKind::Command: return "command";
    case SymbolKind::Separator: return "separator";
  }
  return "?";
}

inline SymbolKind kind_from_name(const std::string& s) {
  if (s == "state") return SymbolKind::State;
  if (s == "tape") return SymbolKind::Tape;
  if (s == "command") return SymbolKind::Command;
  if (s == "separator") return SymbolKind::Separator;
  throw std::invalid_argument("unknown symbol kind: " + s);
}

using SymbolId = uint32_t;

struct SymbolInfo {
  std::string name;
  SymbolKind kind;
  int block;  // partition index; meaning depends on the owning structure
};

// Interning registry. Words store compact ids into one of these; every
// symbol has exactly one kind and one partition block.
class Alphabet {
 public:
  SymbolId add(std::string name, SymbolKind kind, int block) {
    auto it = index_.find(name);
    if (it != index_.end()) {
      const SymbolInfo& existing = symbols_[it->second];
      if (existing.kind != kind || existing.block != block)
        throw std::invalid_argument("symbol re-added with different kind/block: " + name);
      return it->second;
    }
    SymbolId id = static_cast<SymbolId>(symbols_.size());
    index_.emplace(name, id);
    symbols_.push_back(SymbolInfo{std::move(name), kind, block});
    return id;
  }

  size_t size() const { return symbols_.size(); }
  const SymbolInfo& info(SymbolId id) const { return symbols_.at(id); }
  const std::string& name(SymbolId id) const { return symbols_.at(id).name; }
  SymbolKind kind(SymbolId id) const { return symbols_.at(id).kind; }
  int block(SymbolId id) const { return symbols_.at(id).block; }

  bool has(const std::string& name) const { return index_.count(name) > 0; }

  SymbolId id(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("unknown symbol: " + name);
    return it->second;
  }

  Json to_json() const {
    Json arr = Json::array();
    for (const auto& s : symbols_)
      arr.push_back(Json{{"name", s.name}, {"kind", kind_name(s.kind)}, {"block", s.block}});
    return Json{{"symbols", arr}};
  }

  static std::shared_ptr<const Alphabet> from_json(const Json& j) {
    auto a = std::make_shared<Alphabet>();
    for (const auto& s : j.at("symbols"))
      a->add(s.at("name").get<std::string>(), kind_from_name(s.at("kind").get<std::string>()),
             s.at("block").get<int>());
    return a;
  }

 private:
  std::vector<SymbolInfo> symbols_;
  std::unordered_map<std::string, SymbolId> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

}  // namespace spacefn
