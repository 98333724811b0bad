#pragma once

#include <cstddef>
#include <random>
#include <string>

#include "obtt/kernel.hpp"

namespace obtt::testing {

// Random closed codes, built as syntax so they can be checked before use.
class CodeGen {
 public:
  explicit CodeGen(unsigned seed) : rng_(seed) {}

  // A code that checks at V level.
  TermPtr code(std::size_t level, std::size_t depth, std::size_t scope = 0);
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  std::mt19937 rng_;
};

ValuePtr checked_code(const TermPtr& t, std::size_t level);
bool same_code(const ValuePtr& a, const ValuePtr& b, std::size_t level);

// True if some cLift in t sits directly on a canonical code former.
bool lift_on_canonical_head(const Term& t);

struct Tally {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::size_t hits = 0;  // property-specific: e.g. equal pairs seen
  std::string first;     // first failure

  void fail(std::string what);
  bool ok() const { return failures == 0; }
};

Tally decode_commutes_with_lift(unsigned seed, int count);
Tally lift_functorial(unsigned seed, int count);
Tally lift_normal_forms(unsigned seed, int count);
Tally pi_injectivity(unsigned seed, int count);
Tally proof_irrelevance(unsigned seed, int count);

}  // namespace obtt::testing
