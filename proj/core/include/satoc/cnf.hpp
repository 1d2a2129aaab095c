#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "satoc/common.hpp"

namespace satoc {

/// One variable or its negation. Variables are 1-based as in DIMACS.
struct Literal {
  uint32_t variable = 0;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.variable <=> b.variable; c != 0) return c;
    return a.negated <=> b.negated;
  }
};

/// Disjunction of literals. Normal form: sorted by (variable, negation),
/// duplicates removed, no (x, not-x) pair.
using Clause = std::vector<Literal>;

struct CnfFormula {
  uint32_t num_vars = 0;
  std::vector<Clause> clauses;

  uint32_t num_clauses() const { return static_cast<uint32_t>(clauses.size()); }
  /// Maximum clause width, the k of CNF_{n,m}^k.
  uint32_t width() const;
};

/// Sorts, dedupes, and validates one clause against n variables.
/// Rejects empty and tautological clauses: the clause gadget is one MCT with
/// pairwise-distinct controls and has no representation for either.
Clause normalize_clause(Clause clause, uint32_t num_vars);

CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs(const std::string& text);
void emit_dimacs(const CnfFormula& f, std::ostream& out);
std::string emit_dimacs(const CnfFormula& f);

/// Random k-CNF per the sampling procedure used for the benchmarks: each
/// clause picks k distinct variables uniformly (partial Fisher-Yates driven
/// by SplitMix64), negates each with probability 1/2; m clauses independently,
/// duplicates allowed.
CnfFormula random_kcnf(uint32_t n, uint32_t m, uint32_t k, uint64_t seed);

bool evaluate(const CnfFormula& f, const std::vector<bool>& assignment);

/// Clause count at the random-k-SAT phase transition: floor(ratio * n) with
/// ratio 4.267 for k=3 and 9.931 for k=4; other widths need an explicit ratio.
uint32_t phase_transition_m(uint32_t n, uint32_t k,
                            std::optional<double> ratio = std::nullopt);

}  // namespace satoc
