#include "divcorr/config.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "divcorr/errors.hpp"
#include "divcorr/parallel.hpp"

namespace divcorr {

namespace {

Config& global() {
  static Config c;
  return c;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  double x = 0;
  in >> x;
  require(!in.fail() && in.eof(), ErrorKind::precondition, "config: bad value for " + key + ": '" + v + "'");
  require(x >= 0, ErrorKind::precondition, "config: negative value for " + key);
  return static_cast<T>(x);
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::pole: return "pole";
    case ErrorKind::budget: return "budget";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::rank: return "rank";
    case ErrorKind::invariant: return "invariant";
  }
  return "unknown";
}

void Config::apply(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, v] : kv) {
    if (key == "max_sieve") max_sieve = parse_number<std::uint64_t>(key, v);
    else if (key == "max_terms") max_terms = parse_number<double>(key, v);
    else if (key == "max_pairs") max_pairs = parse_number<double>(key, v);
    else if (key == "max_rational_digits") max_rational_digits = parse_number<std::size_t>(key, v);
    else if (key == "threads") threads = parse_number<unsigned>(key, v);
    else if (key == "rho_seed") rho_seed = parse_number<std::uint64_t>(key, v);
    else if (key == "rho_increment") rho_increment = parse_number<std::uint64_t>(key, v);
    else if (key == "halton_offset") halton_offset = parse_number<std::uint64_t>(key, v);
    else fail(ErrorKind::precondition, "config: unknown key '" + key + "'");
  }
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::precondition, "config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::precondition, "config: expected key = value, got '" + line + "'");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  Config c;
  c.apply(kv);
  return c;
}

void Config::apply_environment() {
  std::map<std::string, std::string> kv;
  for (const auto& [key, _] : to_map()) {
    std::string env = "DIVCORR_";
    for (char ch : key) env += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (const char* v = std::getenv(env.c_str())) kv[key] = v;
  }
  apply(kv);
}

std::map<std::string, std::string> Config::to_map() const {
  auto num = [](double x) {
    std::ostringstream o;
    o.precision(17);
    o << x;
    return o.str();
  };
  return {{"max_sieve", std::to_string(max_sieve)},
          {"max_terms", num(max_terms)},
          {"max_pairs", num(max_pairs)},
          {"max_rational_digits", std::to_string(max_rational_digits)},
          {"threads", std::to_string(threads)},
          {"rho_seed", std::to_string(rho_seed)},
          {"rho_increment", std::to_string(rho_increment)},
          {"halton_offset", std::to_string(halton_offset)}};
}

const Config& config() { return global(); }
void set_config(const Config& c) { global() = c; }

unsigned worker_count() {
  const unsigned t = config().threads;
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace divcorr
