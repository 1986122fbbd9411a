#include "fraisse/structure.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fraisse {

std::optional<int> Signature::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

int Signature::reserved_index() const {
  if (!r_reserved) throw Error("signature has no reserved symbol");
  auto idx = index_of(kReservedSymbol);
  if (!idx) throw Error("reserved flag set but symbol r is missing");
  return *idx;
}

bool is_injective_tuple(const Tuple& t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] == t[j]) return false;
  return true;
}

bool is_surjective_labeling(const Tuple& labeling, int arity) {
  std::vector<bool> hit(arity, false);
  for (int v : labeling) {
    if (v < 0 || v >= arity) return false;
    hit[v] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

const Interp& FiniteStructure::interp_of(const std::string& name) const {
  auto idx = sig.index_of(name);
  if (!idx) throw Error("unknown symbol: " + name);
  return interp[*idx];
}

bool SurjectiveMap::surjective() const {
  std::vector<bool> hit(target_size, false);
  for (int v : table) {
    if (v < 0 || v >= target_size) return false;
    hit[v] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

SurjectiveMap SurjectiveMap::identity(int n) {
  SurjectiveMap m{n, n, std::vector<int>(n)};
  std::iota(m.table.begin(), m.table.end(), 0);
  return m;
}

SurjectiveMap SurjectiveMap::inverse() const {
  if (!bijective()) throw Error("inverse of a non-bijective map");
  SurjectiveMap inv{target_size, source_size, std::vector<int>(target_size)};
  for (int i = 0; i < source_size; ++i) inv.table[table[i]] = i;
  return inv;
}

SurjectiveMap compose(const SurjectiveMap& outer, const SurjectiveMap& inner) {
  if (inner.target_size != outer.source_size)
    throw Error("compose: size mismatch");
  SurjectiveMap out{inner.source_size, outer.target_size, {}};
  out.table.reserve(inner.table.size());
  for (int v : inner.table) out.table.push_back(outer.table.at(v));
  return out;
}

Tuple apply_to_tuple(const SurjectiveMap& f, const Tuple& t) {
  Tuple out;
  out.reserve(t.size());
  for (int v : t) out.push_back(f.table.at(v));
  return out;
}

Tuple pull_labeling(const Tuple& labeling, const SurjectiveMap& f) {
  Tuple out;
  out.reserve(f.table.size());
  for (int v : f.table) out.push_back(labeling.at(v));
  return out;
}

namespace {

std::string tuple_text(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[i]);
  }
  return s + ")";
}

}  // namespace

std::vector<Violation> validate_structure(const FiniteStructure& s) {
  std::vector<Violation> out;
  if (s.size < 1) out.push_back({"", "domain size must be positive"});

  for (std::size_t i = 0; i < s.sig.symbols.size(); ++i) {
    const auto& d = s.sig.symbols[i];
    if (d.name.empty()) out.push_back({d.name, "symbol name is empty"});
    if (d.arity < 1) out.push_back({d.name, "arity must be >= 1"});
    for (std::size_t j = i + 1; j < s.sig.symbols.size(); ++j)
      if (s.sig.symbols[j].name == d.name)
        out.push_back({d.name, "duplicate symbol name"});
  }

  if (s.sig.r_reserved) {
    auto idx = s.sig.index_of(kReservedSymbol);
    if (!idx) {
      out.push_back({kReservedSymbol, "reserved flag set but symbol r absent"});
    } else {
      const auto& d = s.sig.symbols[*idx];
      if (d.kind != SymbolKind::Direct || d.arity != 2)
        out.push_back({kReservedSymbol, "reserved r must be direct of arity 2"});
    }
  }

  if (s.interp.size() != s.sig.symbols.size()) {
    out.push_back({"", "interpretation count does not match signature"});
    return out;
  }

  for (std::size_t i = 0; i < s.sig.symbols.size(); ++i) {
    const auto& d = s.sig.symbols[i];
    for (const auto& t : s.interp[i]) {
      if (d.kind == SymbolKind::Direct) {
        if (static_cast<int>(t.size()) != d.arity) {
          out.push_back({d.name, "tuple " + tuple_text(t) + " has wrong arity"});
          continue;
        }
        bool in_range = std::all_of(t.begin(), t.end(), [&](int v) {
          return v >= 0 && v < s.size;
        });
        if (!in_range) {
          out.push_back({d.name, "tuple " + tuple_text(t) + " out of domain"});
          continue;
        }
        if (!is_injective_tuple(t))
          out.push_back({d.name, "tuple " + tuple_text(t) + " not injective"});
      } else {
        if (static_cast<int>(t.size()) != s.size) {
          out.push_back({d.name, "labeling " + tuple_text(t) + " has wrong length"});
          continue;
        }
        if (!is_surjective_labeling(t, d.arity))
          out.push_back({d.name, "labeling " + tuple_text(t) + " not surjective"});
      }
    }
  }

  if (s.sig.r_reserved) {
    auto idx = s.sig.index_of(kReservedSymbol);
    if (idx && s.sig.symbols[*idx].kind == SymbolKind::Direct &&
        s.sig.symbols[*idx].arity == 2) {
      const auto& r = s.interp[*idx];
      for (const auto& t : r) {
        if (t.size() != 2 || !is_injective_tuple(t)) continue;  // reported above
        if (!r.count({t[1], t[0]}))
          out.push_back({kReservedSymbol, "r not symmetric: " + tuple_text(t)});
      }
    }
  }

  return out;
}

void require_valid(const FiniteStructure& s) {
  auto vs = validate_structure(s);
  if (vs.empty()) return;
  std::string msg = "invalid structure:";
  for (const auto& v : vs) {
    msg += "\n  ";
    if (!v.symbol.empty()) msg += v.symbol + ": ";
    msg += v.message;
  }
  throw Error(msg);
}

FiniteStructure relabel(const FiniteStructure& s, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != s.size) throw Error("relabel: bad permutation");
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);

  FiniteStructure out;
  out.sig = s.sig;
  out.size = s.size;
  out.interp.resize(s.interp.size());
  for (std::size_t k = 0; k < s.interp.size(); ++k) {
    const bool direct = s.sig.symbols[k].kind == SymbolKind::Direct;
    for (const auto& t : s.interp[k]) {
      Tuple nt;
      nt.reserve(t.size());
      if (direct) {
        for (int v : t) nt.push_back(perm[v]);
      } else {
        for (std::size_t y = 0; y < t.size(); ++y) nt.push_back(t[inv[y]]);
      }
      out.interp[k].insert(std::move(nt));
    }
  }
  return out;
}

FiniteStructure canonical_form(const FiniteStructure& s, int bound) {
  if (s.size > bound)
    throw Error("canonical_form: domain size " + std::to_string(s.size) +
                " exceeds bound " + std::to_string(bound));
  std::vector<int> perm(s.size);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<FiniteStructure> best;
  do {
    FiniteStructure cand = relabel(s, perm);
    if (!best || cand < *best) best = std::move(cand);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best;
}

// ----------------------------------------------------------------------------
// Text format
// ----------------------------------------------------------------------------

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

bool keyword(const std::string& t) {
  return t == "signature" || t == "domain" || t == "direct" || t == "dual" ||
         t == "reserved";
}

bool valid_symbol_name(const std::string& t) {
  if (t.empty() || keyword(t)) return false;
  if (!std::isalpha(static_cast<unsigned char>(t[0])) && t[0] != '_') return false;
  for (char c : t)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

int parse_int(const Line& line, const std::string& tok, const char* what) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line.number, std::string("expected ") + what + ", got '" + tok + "'");
  }
}

}  // namespace

FiniteStructure parse_structure(const std::string& text) {
  auto lines = tokenize(text);
  std::size_t pos = 0;

  if (pos >= lines.size() || lines[pos].tokens != std::vector<std::string>{"signature"})
    throw ParseError(pos < lines.size() ? lines[pos].number : 1,
                     "expected 'signature' section");
  ++pos;

  FiniteStructure s;
  while (pos < lines.size()) {
    const Line& line = lines[pos];
    const auto& t = line.tokens;
    if (t[0] == "domain") break;
    if (t[0] == "direct" || t[0] == "dual") {
      if (t.size() != 3) throw ParseError(line.number, "expected '" + t[0] + " <name> <arity>'");
      if (!valid_symbol_name(t[1]))
        throw ParseError(line.number, "bad symbol name '" + t[1] + "'");
      if (s.sig.index_of(t[1]))
        throw ParseError(line.number, "duplicate symbol name '" + t[1] + "'");
      int arity = parse_int(line, t[2], "arity");
      if (arity < 1) throw ParseError(line.number, "arity must be >= 1");
      s.sig.symbols.push_back({t[1], arity,
                               t[0] == "direct" ? SymbolKind::Direct : SymbolKind::Dual});
    } else if (t[0] == "reserved") {
      if (t.size() != 2 || t[1] != kReservedSymbol)
        throw ParseError(line.number, "expected 'reserved r'");
      if (s.sig.r_reserved) throw ParseError(line.number, "duplicate 'reserved r'");
      if (s.sig.index_of(kReservedSymbol))
        throw ParseError(line.number, "duplicate symbol name 'r'");
      s.sig.symbols.push_back({kReservedSymbol, 2, SymbolKind::Direct});
      s.sig.r_reserved = true;
    } else {
      throw ParseError(line.number, "unexpected token '" + t[0] + "' in signature section");
    }
    ++pos;
  }

  if (pos >= lines.size()) throw ParseError(lines.back().number, "missing 'domain' section");
  {
    const Line& line = lines[pos];
    if (line.tokens.size() != 2) throw ParseError(line.number, "expected 'domain <size>'");
    s.size = parse_int(line, line.tokens[1], "domain size");
    if (s.size < 1) throw ParseError(line.number, "domain size must be positive");
    ++pos;
  }
  s.interp.resize(s.sig.symbols.size());

  std::set<int> seen_sections;
  int current = -1;
  for (; pos < lines.size(); ++pos) {
    const Line& line = lines[pos];
    const auto& t = line.tokens;
    if (t.size() == 1 && s.sig.index_of(t[0])) {
      current = *s.sig.index_of(t[0]);
      if (seen_sections.count(current))
        throw ParseError(line.number, "duplicate section for symbol '" + t[0] + "'");
      seen_sections.insert(current);
      continue;
    }
    if (current < 0)
      throw ParseError(line.number, "tuple line before any symbol section");
    const auto& decl = s.sig.symbols[current];
    const int expected =
        decl.kind == SymbolKind::Direct ? decl.arity : s.size;
    if (static_cast<int>(t.size()) != expected)
      throw ParseError(line.number, "symbol '" + decl.name + "' expects " +
                                        std::to_string(expected) + " entries, got " +
                                        std::to_string(t.size()));
    Tuple tup;
    tup.reserve(t.size());
    for (const auto& tok : t) tup.push_back(parse_int(line, tok, "index"));
    for (int v : tup) {
      const int limit = decl.kind == SymbolKind::Direct ? s.size : decl.arity;
      if (v < 0 || v >= limit)
        throw ParseError(line.number, "entry " + std::to_string(v) + " out of range");
    }
    s.interp[current].insert(std::move(tup));
  }

  auto violations = validate_structure(s);
  if (!violations.empty()) {
    std::string msg = "structure violates invariants:";
    for (const auto& v : violations) {
      msg += "\n  ";
      if (!v.symbol.empty()) msg += v.symbol + ": ";
      msg += v.message;
    }
    throw Error(msg);
  }
  return s;
}

std::string serialize_structure(const FiniteStructure& s) {
  std::ostringstream out;
  out << "signature\n";
  for (const auto& d : s.sig.symbols) {
    if (s.sig.r_reserved && d.name == kReservedSymbol) {
      out << "reserved r\n";
    } else {
      out << (d.kind == SymbolKind::Direct ? "direct " : "dual ") << d.name << " "
          << d.arity << "\n";
    }
  }
  out << "domain " << s.size << "\n";
  for (std::size_t i = 0; i < s.sig.symbols.size(); ++i) {
    out << s.sig.symbols[i].name << "\n";
    for (const auto& t : s.interp[i]) {  // std::set iterates lexicographically
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (j) out << " ";
        out << t[j];
      }
      out << "\n";
    }
  }
  return out.str();
}

FiniteStructure read_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open structure file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_structure(buf.str());
}

void write_structure_file(const FiniteStructure& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write structure file: " + path);
  out << serialize_structure(s);
}

std::vector<Tuple> enumerate_surjective_labelings(int points, int labels) {
  std::vector<Tuple> out;
  if (labels > points || labels < 1) return out;
  Tuple cur(points, 0);
  // depth-first over positions; prune when the remaining positions cannot
  // cover the labels still missing
  std::vector<int> used(labels, 0);
  auto rec = [&](auto&& self, int i, int missing) -> void {
    if (points - i < missing) return;
    if (i == points) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v < labels; ++v) {
      cur[i] = v;
      ++used[v];
      self(self, i + 1, missing - (used[v] == 1 ? 1 : 0));
      --used[v];
    }
  };
  rec(rec, 0, labels);
  return out;
}

std::vector<Tuple> enumerate_injective_tuples(int points, int arity) {
  std::vector<Tuple> out;
  if (arity > points) return out;
  Tuple cur;
  std::vector<bool> used(points, false);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == arity) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v < points; ++v) {
      if (used[v]) continue;
      used[v] = true;
      cur.push_back(v);
      self(self);
      cur.pop_back();
      used[v] = false;
    }
  };
  rec(rec);
  return out;
}

Signature reserved_r_signature() {
  Signature sig;
  sig.symbols.push_back({kReservedSymbol, 2, SymbolKind::Direct});
  sig.r_reserved = true;
  return sig;
}

FiniteStructure path_structure(int n) {
  if (n < 1) throw Error("path_structure: size must be positive");
  FiniteStructure s;
  s.sig = reserved_r_signature();
  s.size = n;
  s.interp.resize(1);
  for (int i = 0; i + 1 < n; ++i) {
    s.interp[0].insert({i, i + 1});
    s.interp[0].insert({i + 1, i});
  }
  return s;
}

FiniteStructure cycle_structure(int n) {
  if (n < 3) throw Error("cycle_structure: need at least 3 points");
  FiniteStructure s;
  s.sig = reserved_r_signature();
  s.size = n;
  s.interp.resize(1);
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    s.interp[0].insert({i, j});
    s.interp[0].insert({j, i});
  }
  return s;
}

FiniteStructure empty_signature_structure(int n) {
  if (n < 1) throw Error("empty_signature_structure: size must be positive");
  FiniteStructure s;
  s.size = n;
  return s;
}

}  // namespace fraisse
