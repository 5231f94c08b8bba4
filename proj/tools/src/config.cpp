#include "tsdantzig_cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>

namespace tsdantzig::cli {

namespace {

KeySpec key(std::string name, KeyKind kind, Json value, std::string help) {
  return KeySpec{std::move(name), kind, std::move(value), std::move(help)};
}

Schema with_seed(Schema schema) {
  schema.insert(schema.begin(), key("seed", KeyKind::integer, 1, "base seed of every random stream"));
  return schema;
}

Schema process_keys(std::size_t p, std::size_t n, double beta) {
  return {
      key("p", KeyKind::integer, p, "dimension"),
      key("n", KeyKind::integer, n, "sample size"),
      key("beta", KeyKind::beta, beta, "decay index of the coefficients (\"inf\" for i.i.d.)"),
      key("innovation", KeyKind::string, "gaussian", "uniform | gaussian | double_exponential | student_t3"),
      key("sparsify_frac", KeyKind::number, 0.8, "fraction of zeroed entries in each A_m"),
      key("truncation", KeyKind::integer, 2000, "number of lags M kept in the linear process"),
  };
}

Schema concat(Schema a, const Schema& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const std::map<std::string, Schema, std::less<>>& schemas() {
  static const std::map<std::string, Schema, std::less<>> table = [] {
    std::map<std::string, Schema, std::less<>> t;
    t["simulate"] = with_seed(concat(process_keys(10, 200, 2.0), {
        key("c0", KeyKind::number, 1.0, "decay constant; larger draws are rescaled"),
        key("model_out", KeyKind::string, "", "optional path for the model as JSON"),
    }));
    t["estimate"] = with_seed(concat(process_keys(50, 200, 2.0), {
        key("data", KeyKind::string, "", "sample CSV; estimates theta_hat from its covariance"),
        key("covariance", KeyKind::string, "", "covariance CSV used instead of data"),
        key("b", KeyKind::number_list, Json::array(), "b_hat; empty uses the column means of data"),
        key("mean_mode", KeyKind::string, "estimated", "known_zero | estimated"),
        key("lambda", KeyKind::number, 0.1, "constraint parameter"),
        key("lp_tol", KeyKind::number, 1e-9, "LP feasibility tolerance"),
        key("theta_zero_frac", KeyKind::number, 0.8, "simulation mode: fraction of zeros in theta"),
        key("replicates", KeyKind::integer, 10, "simulation mode: replicate count"),
    }));
    t["tune"] = with_seed(concat(process_keys(100, 100, 2.0), {
        key("theta_zero_frac", KeyKind::number, 0.8, "fraction of zeros in theta"),
        key("replicates", KeyKind::integer, 100, "replicate count"),
        key("grid_points", KeyKind::integer, 30, "lambda grid size"),
        key("grid_lo", KeyKind::number, 0.01, "smallest lambda as a multiple of |b|_inf"),
        key("grid_hi", KeyKind::number, 1.5, "largest lambda as a multiple of |b|_inf"),
        key("mean_mode", KeyKind::string, "known_zero", "known_zero | estimated"),
        key("lp_tol", KeyKind::number, 1e-9, "LP feasibility tolerance"),
    }));
    t["predict"] = with_seed({
        key("model", KeyKind::string, "ar1", "ar1 | ar14 | linear"),
        key("ar_theta", KeyKind::number, -0.5, "coefficient of the ar1 model"),
        key("noise_sd", KeyKind::number, 1.0, "innovation standard deviation of the AR models"),
        key("beta", KeyKind::beta, 0.8, "decay index of the linear model"),
        key("truncation", KeyKind::integer, 2000, "lags of the linear model"),
        key("n", KeyKind::integer, 500, "series length"),
        key("replicates", KeyKind::integer, 200, "replicate count"),
        key("methods", KeyKind::string_list, Json::array({"sfso", "ar"}), "sfso | fso | ar"),
        key("lambda_scale", KeyKind::number, 1.0, "SFSO lambda as a multiple of sqrt(log n / n)"),
        key("bandwidth_c_thr", KeyKind::number, 2.0, "threshold constant of the bandwidth rule"),
        key("max_order", KeyKind::integer, 0, "largest AR order (0 = min(floor(10 log10 n), n - 1))"),
    });
    t["portfolio"] = with_seed({
        key("returns_csv", KeyKind::string, "", "daily returns CSV (date, asset...); empty = synthetic"),
        key("market", KeyKind::string, "factor", "synthetic: factor | toeplitz"),
        key("p", KeyKind::integer, 100, "synthetic: assets"),
        key("active", KeyKind::integer, 5, "synthetic: assets with nonzero optimal weight"),
        key("signal_lo", KeyKind::number, 0.3, "synthetic: smallest |theta_j| on the support"),
        key("signal_hi", KeyKind::number, 0.6, "synthetic: largest |theta_j| on the support"),
        key("factors", KeyKind::integer, 3, "factor market: number of factors"),
        key("loading_sd", KeyKind::number, 1.0, "factor market: loading standard deviation"),
        key("idio_log_spread", KeyKind::number, 2.5, "factor market: log-range of idiosyncratic variances"),
        key("rho", KeyKind::number, 0.5, "toeplitz market: correlation decay"),
        key("volatility", KeyKind::number, 1.0, "toeplitz market: daily volatility"),
        key("n_days", KeyKind::integer, 2482, "synthetic: days simulated"),
        key("window", KeyKind::integer, 126, "training days per rebalance"),
        key("hold", KeyKind::integer, 21, "holding days"),
        key("K", KeyKind::integer, 17, "validation periods"),
        key("n_train", KeyKind::integer, 125, "training days per validation period"),
        key("n_test", KeyKind::integer, 21, "test days per validation period"),
        key("m", KeyKind::number, 1.0, "target return"),
        key("methods", KeyKind::string_list, Json::array({"dantzig", "ridge"}), "dantzig | ridge"),
        key("dantzig_grid", KeyKind::number_list, Json::array({0.0, 1.0, 21}), "[lo, hi, points]"),
        key("ridge_grid", KeyKind::number_list, Json::array({0.1, 2.0, 20}), "[lo, hi, points]"),
    });
    t["classify"] = with_seed({
        key("train_csv", KeyKind::string, "", "labeled training CSV; empty = synthetic block design"),
        key("test_csv", KeyKind::string, "", "labeled test CSV"),
        key("p", KeyKind::integer, 100, "synthetic: features"),
        key("block_len", KeyKind::integer, 16, "synthetic: rows per block"),
        key("train_blocks", KeyKind::integer, 20, "synthetic: training blocks"),
        key("test_blocks", KeyKind::integer, 20, "synthetic: test blocks"),
        key("active", KeyKind::integer, 5, "synthetic: coordinates with a mean difference"),
        key("signal", KeyKind::number, 0.5, "synthetic: mean difference on active coordinates"),
        key("rho", KeyKind::number, 0.8, "synthetic: cross-sectional correlation"),
        key("beta", KeyKind::beta, 2.0, "synthetic: temporal decay index"),
        key("truncation", KeyKind::integer, 50, "synthetic: lags of the noise process"),
        key("window", KeyKind::integer, 16, "rows averaged into one test observation"),
        key("seeds", KeyKind::integer, 10, "synthetic: number of independent designs"),
        key("grid_points", KeyKind::integer, 15, "lambda grid size"),
        key("grid_lo", KeyKind::number, 0.02, "smallest lambda as a multiple of |b_hat|_inf"),
        key("grid_hi", KeyKind::number, 1.0, "largest lambda as a multiple of |b_hat|_inf"),
        key("standardize", KeyKind::boolean, false, "scale features to unit training variance"),
        key("modes", KeyKind::string_list, Json::array({"functional", "gnb"}), "functional | gnb"),
    });
    t["rates"] = with_seed({
        key("regime", KeyKind::string, "subgaussian", "subgaussian | exponential | polynomial"),
        key("alpha", KeyKind::number, 1.0, "exponential tail index"),
        key("q", KeyKind::number, 8.0, "polynomial moment order"),
        key("beta", KeyKind::number, 2.0, "decay index"),
        key("n", KeyKind::number, 100.0, "sample size"),
        key("p", KeyKind::number, 100.0, "dimension"),
        key("r_b", KeyKind::number, 0.0, "rate of b_hat"),
        key("theta_l1_bound", KeyKind::number, 1.0, "bound on |theta|_1"),
        key("c1", KeyKind::number, 1.0, "multiplier of the rate term"),
    });
    return t;
  }();
  return table;
}

const char* kind_name(KeyKind kind) {
  switch (kind) {
    case KeyKind::integer: return "a nonnegative integer";
    case KeyKind::number: return "a number";
    case KeyKind::string: return "a string";
    case KeyKind::boolean: return "a boolean";
    case KeyKind::number_list: return "an array of numbers";
    case KeyKind::string_list: return "an array of strings";
    case KeyKind::beta: return "a number or \"inf\"";
  }
  return "a value";
}

bool is_integer(const Json& v) {
  if (v.is_number_unsigned()) return true;
  if (v.is_number_integer()) return v.get<std::int64_t>() >= 0;
  if (v.is_number_float()) {
    const double d = v.get<double>();
    return std::isfinite(d) && d >= 0 && d == std::floor(d) && d < 9.0e15;
  }
  return false;
}

bool matches(KeyKind kind, const Json& v) {
  switch (kind) {
    case KeyKind::integer: return is_integer(v);
    case KeyKind::number: return v.is_number();
    case KeyKind::string: return v.is_string();
    case KeyKind::boolean: return v.is_boolean();
    case KeyKind::number_list:
      if (!v.is_array()) return false;
      for (const auto& e : v)
        if (!e.is_number()) return false;
      return true;
    case KeyKind::string_list:
      if (!v.is_array()) return false;
      for (const auto& e : v)
        if (!e.is_string()) return false;
      return true;
    case KeyKind::beta: return v.is_number() || (v.is_string() && v.get<std::string>() == "inf");
  }
  return false;
}

/// Integers given as floats (e.g. 100.0 from a flag) are stored as integers
/// so the provenance header is stable.
Json normalize(KeyKind kind, Json v) {
  if (kind == KeyKind::integer && v.is_number_float()) return Json(static_cast<std::uint64_t>(v.get<double>()));
  if (kind == KeyKind::integer && v.is_number_integer()) return Json(v.get<std::uint64_t>());
  return v;
}

const KeySpec* find_key(const Schema& schema, std::string_view name) {
  for (const auto& k : schema)
    if (k.name == name) return &k;
  return nullptr;
}

void apply(const Schema& schema, Json& config, const std::string& name, const Json& value) {
  const KeySpec* spec = find_key(schema, name);
  if (spec == nullptr) throw ConfigError(name, "unknown key");
  if (!matches(spec->kind, value)) throw ConfigError(name, std::string("expected ") + kind_name(spec->kind));
  config[name] = normalize(spec->kind, value);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, schema] : schemas()) out.push_back(name);
    return out;
  }();
  return names;
}

const Schema& schema_for(std::string_view command) {
  const auto& table = schemas();
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("command", "unknown subcommand '" + std::string(command) + "'");
  return it->second;
}

Json parse_override_value(const std::string& text) {
  Json parsed = Json::parse(text, nullptr, false);
  if (parsed.is_discarded()) return Json(text);
  return parsed;
}

Json resolve_config(std::string_view command, const Json& file_config,
                    const std::vector<std::pair<std::string, Json>>& overrides) {
  const Schema& schema = schema_for(command);
  Json config = Json::object();
  for (const auto& k : schema) config[k.name] = k.default_value;
  if (!file_config.is_null()) {
    if (!file_config.is_object()) throw ConfigError("<root>", "the config file must hold a JSON object");
    for (const auto& [name, value] : file_config.items()) apply(schema, config, name, value);
  }
  for (const auto& [name, value] : overrides) {
    // A string flag value is also accepted for string keys that look like JSON (e.g. "inf").
    const KeySpec* spec = find_key(schema, name);
    if (spec != nullptr && spec->kind == KeyKind::string && !value.is_string()) {
      apply(schema, config, name, Json(value.dump()));
      continue;
    }
    apply(schema, config, name, value);
  }
  return config;
}

void validate_config(std::string_view command, const Json& config) {
  const Schema& schema = schema_for(command);
  if (!config.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  for (const auto& [name, value] : config.items()) {
    const KeySpec* spec = find_key(schema, name);
    if (spec == nullptr) throw ConfigError(name, "unknown key");
    if (!matches(spec->kind, value)) throw ConfigError(name, std::string("expected ") + kind_name(spec->kind));
  }
  for (const auto& k : schema)
    if (!config.contains(k.name)) throw ConfigError(k.name, "missing");
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  Json parsed = Json::parse(in, nullptr, false);
  if (parsed.is_discarded()) throw ConfigError("--config", "'" + path + "' is not valid JSON");
  return parsed;
}

std::uint64_t config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_provenance(const Provenance& provenance) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(provenance.hash));
  return "# command=" + provenance.command + " seed=" + std::to_string(provenance.seed) + " config_hash=" + hex +
         " config=" + provenance.config.dump();
}

Provenance parse_provenance(const std::string& line) {
  auto field = [&](const std::string& name, std::size_t from) -> std::pair<std::string, std::size_t> {
    const std::string tag = name + "=";
    const auto start = line.find(tag, from);
    if (start == std::string::npos) throw ConfigError("provenance", "missing field '" + name + "'");
    const auto value_start = start + tag.size();
    const auto end = name == "config" ? line.size() : line.find(' ', value_start);
    return {line.substr(value_start, end - value_start), end};
  };
  if (line.rfind("# ", 0) != 0) throw ConfigError("provenance", "header must start with '# '");
  Provenance out;
  auto [command, p1] = field("command", 0);
  auto [seed, p2] = field("seed", p1);
  auto [hash, p3] = field("config_hash", p2);
  auto [config, p4] = field("config", p3);
  (void)p4;
  out.command = command;
  try {
    out.seed = std::stoull(seed);
    out.hash = std::stoull(hash, nullptr, 16);
  } catch (const std::exception&) {
    throw ConfigError("provenance", "malformed seed or hash");
  }
  out.config = Json::parse(config, nullptr, false);
  if (out.config.is_discarded()) throw ConfigError("provenance", "config is not valid JSON");
  if (config_hash(out.config) != out.hash) throw ConfigError("provenance", "config hash mismatch");
  validate_config(out.command, out.config);
  return out;
}

std::int64_t get_int(const Json& config, const char* key) { return config.at(key).get<std::int64_t>(); }

std::size_t get_count(const Json& config, const char* key) {
  const std::int64_t v = get_int(config, key);
  if (v < 0) throw ConfigError(key, "must be nonnegative");
  return static_cast<std::size_t>(v);
}

double get_number(const Json& config, const char* key) {
  const Json& v = config.at(key);
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  return v.get<double>();
}

std::string get_string(const Json& config, const char* key) { return config.at(key).get<std::string>(); }

bool get_bool(const Json& config, const char* key) { return config.at(key).get<bool>(); }

std::vector<double> get_numbers(const Json& config, const char* key) {
  return config.at(key).get<std::vector<double>>();
}

std::vector<std::string> get_strings(const Json& config, const char* key) {
  return config.at(key).get<std::vector<std::string>>();
}

std::uint64_t get_seed(const Json& config) { return config.at("seed").get<std::uint64_t>(); }

}  // namespace tsdantzig::cli
