#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace divcorr {

// Resource caps and deterministic parameters. Defaults are sized for a laptop;
// a key=value config file and DIVCORR_* environment variables override them.
struct Config {
  std::uint64_t max_sieve = 200'000'000;        // largest SieveTable limit
  double max_terms = 2.0e10;                    // series enumeration work cap
  double max_pairs = 5.0e10;                    // point-count work cap
  std::size_t max_rational_digits = 10'000;     // rho() digit cap
  unsigned threads = 0;                         // 0 = hardware concurrency
  std::uint64_t rho_seed = 2;                   // Pollard-rho start value
  std::uint64_t rho_increment = 1;              // Pollard-rho polynomial constant
  std::uint64_t halton_offset = 0;              // first Halton index used (after skipping 0)

  // Parse "key = value" lines ('#' comments allowed). Unknown keys are an error.
  static Config from_file(const std::string& path);
  void apply(const std::map<std::string, std::string>& kv);
  void apply_environment();
  std::map<std::string, std::string> to_map() const;
};

// Process-wide configuration; set once by the CLI before any computation starts.
const Config& config();
void set_config(const Config& c);

}  // namespace divcorr
