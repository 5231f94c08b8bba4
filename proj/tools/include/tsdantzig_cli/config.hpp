#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace tsdantzig::cli {

using Json = nlohmann::json;

/// A rejected configuration; `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error("config key '" + key + "': " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class KeyKind { integer, number, string, boolean, number_list, string_list, beta };

struct KeySpec {
  std::string name;
  KeyKind kind;
  Json default_value;
  std::string help;
};

using Schema = std::vector<KeySpec>;

const std::vector<std::string>& command_names();
const Schema& schema_for(std::string_view command);

/// Parses a flag value: JSON when it parses, a bare string otherwise.
Json parse_override_value(const std::string& text);

/// Defaults, then `file_config`, then `overrides`; unknown keys and
/// ill-typed values raise ConfigError.
Json resolve_config(std::string_view command, const Json& file_config,
                    const std::vector<std::pair<std::string, Json>>& overrides);

/// Checks a complete configuration against the schema without adding defaults.
void validate_config(std::string_view command, const Json& config);

Json load_config_file(const std::string& path);

/// FNV-1a over the compact JSON dump.
std::uint64_t config_hash(const Json& config);

struct Provenance {
  std::string command;
  std::uint64_t seed = 0;
  std::uint64_t hash = 0;
  Json config;
};

/// "# command=<name> seed=<seed> config_hash=<16 hex digits> config=<compact json>"
std::string format_provenance(const Provenance& provenance);
/// Inverse of format_provenance; verifies the hash and the schema.
Provenance parse_provenance(const std::string& line);

// Typed accessors; the config has already been validated.
std::int64_t get_int(const Json& config, const char* key);
std::size_t get_count(const Json& config, const char* key);
double get_number(const Json& config, const char* key);
std::string get_string(const Json& config, const char* key);
bool get_bool(const Json& config, const char* key);
std::vector<double> get_numbers(const Json& config, const char* key);
std::vector<std::string> get_strings(const Json& config, const char* key);
std::uint64_t get_seed(const Json& config);

}  // namespace tsdantzig::cli
