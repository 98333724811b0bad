#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "obtt/model.hpp"

namespace obtt {

// Exit codes are a contract with CI scripts.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string basePath;  // resolved against the config file's directory
  std::size_t levels = 3;
  std::vector<std::size_t> bounds{2, 3};
  std::size_t depth = 2;
  bool strict = true;
  std::size_t cap = 1000000;
  std::size_t seed = 1;
  std::size_t familyBound = 2;
  std::size_t uniDepth = 0;
};

// Command-line overrides; unset fields keep the config file's value.
struct Overrides {
  std::optional<std::string> mode;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> seed;
  std::optional<std::size_t> cap;
};

Config parseConfig(const nlohmann::json& raw, const std::string& configDir);
Config loadConfig(const std::string& path);
void applyOverrides(Config& c, const Overrides& o);
// Bounds padded out to `levels` entries, one more than the last each time.
std::vector<std::size_t> effectiveBounds(const Config& c);
nlohmann::json echo(const Config& c);

// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a64(std::string_view bytes);
std::string readFile(const std::string& path);

int cmdCheck(const std::vector<std::string>& files, std::ostream& out, std::ostream& err);
int cmdNormalize(const std::string& file, const std::string& name, std::ostream& out, std::ostream& err);

struct VerifyRequest {
  std::string configPath;
  Overrides overrides;
  std::size_t jobs = 1;
  std::optional<std::string> reportPath;  // stdout when absent
};
int cmdModelVerify(const VerifyRequest& req, std::ostream& out, std::ostream& err);

}  // namespace obtt
