#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "obtt/fincat.hpp"
#include "obtt/ir_universe.hpp"
#include "obtt/presheaf.hpp"

namespace obtt {

using Universe = IRUniverse<PresheafHost>;
using ModelCode = CodePtr<PresheafHost>;

struct ModelOptions {
  std::vector<std::size_t> bounds{2, 3, 4};
  std::size_t depth = 2;
  bool strict = true;
  std::size_t cap = 1000000;
  std::size_t seed = 1;
  std::size_t familyBound = 2;
  std::size_t uniDepth = 0;
  std::size_t jobs = 1;
};

struct CheckRecord {
  std::string name;
  std::size_t level = 0;
  std::string stage;  // object name, or "*" for whole-category checks
  bool pass = true;
  std::size_t count = 0;     // instances checked
  std::size_t failures = 0;
  std::vector<std::string> samples;  // first few failures
  nlohmann::json witness;            // null when there is nothing to show
  std::string note;

  void fail(std::string what);
  nlohmann::json toJson() const;
};

// The codes a check quantifies over at the given depth: all codes up to depth
// 1, then Pi/Sigma codes over constant families, weighted by size.
std::vector<ModelCode> verifyCodes(const Universe& u, std::size_t level, std::size_t stage, std::size_t depth);

// Independent oracle: natural sections by filtering the full product.
Family sectionsBruteForce(const PresheafHost& h, const Family& dom, const std::vector<Family>& entries);

CheckRecord checkHostStage(const PresheafHost& h, std::size_t level, std::size_t stage);
CheckRecord checkRetraction(const Universe& u, std::size_t level, std::size_t stage);
CheckRecord checkDecodePi(const Universe& u, std::size_t stage, const std::vector<ModelCode>& codes);
CheckRecord checkNaturality(const Universe& u, std::size_t stage, const std::vector<ModelCode>& codes);
CheckRecord checkLift(const Universe& u, std::size_t stage, const std::vector<ModelCode>& codes);
CheckRecord checkInjectivity(const Universe& u, std::size_t stage, const std::vector<ModelCode>& codes,
                             std::size_t seed);
CheckRecord witnessHostNonInjectivity(const Universe& u, std::size_t level, std::size_t stage);
CheckRecord checkGenericity(const Universe& u, std::size_t level, std::size_t familyBound);

// Runs every check and assembles the report. Deterministic for fixed inputs
// whatever the number of jobs.
nlohmann::json runModel(const FinCat& cat, const ModelOptions& opts, const nlohmann::json& configEcho,
                        const std::string& inputsDigest);

}  // namespace obtt
