#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "schroflow/errors.hpp"
#include "schroflow/oscillator.hpp"

namespace schroflow::cli {

using json = nlohmann::json;

/// Everything written into the '#' header of an output file.
struct Provenance {
  std::string command;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> defaults;
  std::vector<std::pair<std::string, std::string>> truncations;

  void note_default(const std::string& key, const json& value);
  void note_truncation(const std::string& key, const json& value);
  /// Lines starting with "# ".
  std::string header() const;
  json as_json() const;
};

/// A JSON object block whose keys must all be consumed; defaults are recorded.
class Block {
 public:
  Block(const json* node, std::string path, Provenance* prov);

  bool has(const std::string& key) const;
  const json& raw(const std::string& key);

  template <class T>
  T get(const std::string& key, const T& fallback) {
    if (!has(key)) {
      prov_->note_default(qualified(key), json(fallback));
      return fallback;
    }
    return convert<T>(key);
  }

  template <class T>
  T require(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key '" + qualified(key) + "'");
    return convert<T>(key);
  }

  /// Sub-object; an absent key gives an empty block.
  Block child(const std::string& key);
  /// Throws ConfigError naming the first key that was never read.
  void finish() const;
  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  template <class T>
  T convert(const std::string& key) {
    used_.insert(key);
    try {
      return (*node_)[key].template get<T>();
    } catch (const json::exception&) {
      throw ConfigError("key '" + qualified(key) + "' has the wrong type");
    }
  }

  const json* node_;
  std::string path_;
  Provenance* prov_;
  std::set<std::string> used_;
};

/// 64-bit FNV-1a of the canonical (sorted-key, compact) dump, as 16 hex digits.
std::string config_hash(const json& config);

/// The angular problem and the spectral table derived from the problem block.
struct Problem {
  int dimension = 3;
  std::optional<double> constant_a;
  std::shared_ptr<const oscillator::SpectralTable> table;
  std::string description;
};

/// Reads the problem block. `min_modes` raises the requested table length (analytic spectra only).
Problem read_problem(Block& block, int min_modes = 0);

/// Throws HardyViolation when the table is not admissible.
struct HardyViolation : DomainError {
  using DomainError::DomainError;
};
void require_hardy(const Problem& p);

struct ExpectationMiss : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shared state of one run.
struct RunContext {
  std::string command;
  json config;
  std::filesystem::path out_dir;
  std::optional<json> expect;
  int threads = 1;
  std::uint64_t seed = 1;
  Provenance prov;
};

/// printf-style %.17g
std::string fmt(double v);

/// Writes header, extra "# " comment lines, column line and rows; the file name is relative to ctx.out_dir.
void write_csv(const RunContext& ctx, const std::string& name, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& comments = {});
/// Writes {schema_version, command, provenance, ...payload} pretty-printed.
void write_json(const RunContext& ctx, const std::string& name, const json& payload);

/// Reads an optional numeric expectation; "theory" resolves to the supplied value.
std::optional<double> expected_value(const json& expect, const std::string& key, double theory);

/// Commands read the "problem" and "experiment" blocks of `root` and call root.finish().
int cmd_spectrum(RunContext& ctx, Block& root, std::ostream& out);
int cmd_evolve(RunContext& ctx, Block& root, std::ostream& out);
int cmd_decay(RunContext& ctx, Block& root, std::ostream& out);
int cmd_kernel(RunContext& ctx, Block& root, std::ostream& out);
int cmd_heat(RunContext& ctx, Block& root, std::ostream& out);
int cmd_compare(RunContext& ctx, Block& root, std::ostream& out);

}  // namespace schroflow::cli
