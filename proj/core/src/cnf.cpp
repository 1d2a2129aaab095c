#include "satoc/cnf.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace satoc {

uint32_t CnfFormula::width() const {
  size_t k = 0;
  for (const auto& c : clauses) k = std::max(k, c.size());
  return static_cast<uint32_t>(k);
}

Clause normalize_clause(Clause clause, uint32_t num_vars) {
  if (clause.empty())
    throw ParseError("empty clause: the formula is constant false and the clause gadget is undefined");
  for (const auto& lit : clause) {
    if (lit.variable == 0 || lit.variable > num_vars) {
      throw ParseError("literal out of range: variable " + std::to_string(lit.variable) +
                       " with " + std::to_string(num_vars) + " declared");
    }
  }
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (size_t i = 1; i < clause.size(); ++i) {
    if (clause[i].variable == clause[i - 1].variable)
      throw ParseError("tautological clause (x and not-x on variable " +
                       std::to_string(clause[i].variable) + ") is unsupported");
  }
  return clause;
}

CnfFormula parse_dimacs(std::istream& in) {
  uint32_t n = 0;
  size_t m = 0;
  bool have_header = false;
  CnfFormula f;
  Clause current;

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == 'c') continue;
    std::istringstream ls(line);
    if (line[first] == 'p') {
      std::string p, fmt;
      long long hn = -1, hm = -1;
      if (have_header || !(ls >> p >> fmt >> hn >> hm) || p != "p" || fmt != "cnf" ||
          hn < 1 || hm < 1)
        throw ParseError("malformed DIMACS header at line " + std::to_string(line_no));
      have_header = true;
      n = static_cast<uint32_t>(hn);
      m = static_cast<size_t>(hm);
      f.num_vars = n;
      continue;
    }
    if (!have_header)
      throw ParseError("clause data before 'p cnf' header at line " + std::to_string(line_no));
    long long lit;
    while (ls >> lit) {
      if (lit == 0) {
        f.clauses.push_back(normalize_clause(std::move(current), n));
        current.clear();
      } else {
        uint64_t v = static_cast<uint64_t>(lit < 0 ? -lit : lit);
        if (v > n)
          throw ParseError("literal out of range: variable " + std::to_string(v) +
                           " with " + std::to_string(n) + " declared");
        current.push_back({static_cast<uint32_t>(v), lit < 0});
      }
    }
    if (ls.fail() && !ls.eof())
      throw ParseError("non-integer clause token at line " + std::to_string(line_no));
  }
  if (!have_header) throw ParseError("missing 'p cnf' header");
  if (!current.empty()) throw ParseError("unterminated clause (missing trailing 0)");
  if (f.clauses.size() != m)
    throw ParseError("clause count mismatch: header declares " + std::to_string(m) +
                     ", found " + std::to_string(f.clauses.size()));
  return f;
}

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

void emit_dimacs(const CnfFormula& f, std::ostream& out) {
  out << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
  for (const auto& clause : f.clauses) {
    for (const auto& lit : clause)
      out << (lit.negated ? "-" : "") << lit.variable << " ";
    out << "0\n";
  }
}

std::string emit_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  emit_dimacs(f, out);
  return out.str();
}

CnfFormula random_kcnf(uint32_t n, uint32_t m, uint32_t k, uint64_t seed) {
  if (k == 0 || k > n)
    throw ConfigError("random_kcnf needs 1 <= k <= n, got k=" + std::to_string(k) +
                      ", n=" + std::to_string(n));
  if (m == 0) throw ConfigError("random_kcnf needs m >= 1");

  SplitMix64 rng(seed);
  CnfFormula f;
  f.num_vars = n;
  f.clauses.reserve(m);

  std::vector<uint32_t> vars(n);
  std::iota(vars.begin(), vars.end(), 1u);
  for (uint32_t a = 0; a < m; ++a) {
    // partial Fisher-Yates: first k entries become the clause's variables
    for (uint32_t j = 0; j < k; ++j) {
      uint32_t pick = j + static_cast<uint32_t>(rng.below(n - j));
      std::swap(vars[j], vars[pick]);
    }
    Clause clause(k);
    for (uint32_t j = 0; j < k; ++j) clause[j] = {vars[j], rng.coin()};
    std::sort(clause.begin(), clause.end());
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

bool evaluate(const CnfFormula& f, const std::vector<bool>& assignment) {
  if (assignment.size() != f.num_vars)
    throw ValidationError("assignment length " + std::to_string(assignment.size()) +
                          " does not match n=" + std::to_string(f.num_vars));
  for (const auto& clause : f.clauses) {
    bool sat = false;
    for (const auto& lit : clause) {
      if (assignment[lit.variable - 1] != lit.negated) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

uint32_t phase_transition_m(uint32_t n, uint32_t k, std::optional<double> ratio) {
  double r;
  if (ratio) {
    r = *ratio;
  } else if (k == 3) {
    r = 4.267;
  } else if (k == 4) {
    r = 9.931;
  } else {
    throw ConfigError("phase_transition_m: no built-in ratio for k=" + std::to_string(k) +
                      "; supply one explicitly");
  }
  return static_cast<uint32_t>(std::floor(r * static_cast<double>(n)));
}

}  // namespace satoc
