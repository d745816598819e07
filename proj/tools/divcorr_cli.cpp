// divcorr: command-line front end. Every command prints one JSON document
//   {command, manifest, results: [{name, value, error_bound, units}], diagnostics}
// on stdout (or a table with --human); logs go to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "divcorr/arith.hpp"
#include "divcorr/config.hpp"
#include "divcorr/constants.hpp"
#include "divcorr/counting.hpp"
#include "divcorr/errors.hpp"
#include "divcorr/estermann.hpp"
#include "divcorr/series.hpp"
#include "divcorr/special.hpp"
#include "divcorr/verify.hpp"

#ifndef DIVCORR_VERSION
#define DIVCORR_VERSION "0.0.0"
#endif

using json = nlohmann::ordered_json;
using namespace divcorr;

namespace {

constexpr int kExitUsage = 64;

struct Document {
  std::string command;
  json parameters = json::object();
  json results = json::array();
  json diagnostics = json::object();
  std::vector<std::array<double, 3>> csv_rows;  // X, value, error_bound
  std::string csv_header = "X,value,error_bound";
  int exit_status = 0;  // set by commands that print their document and still fail

  void add(const std::string& name, json value, double error_bound, const std::string& units = "") {
    results.push_back({{"name", name}, {"value", std::move(value)}, {"error_bound", error_bound}, {"units", units}});
  }
};

json complex_json(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return json{{"re", z.real()}, {"im", z.imag()}};
}

Complex parse_complex(const std::string& text) {
  static const std::regex full(R"(^\s*([+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?)?\s*(?:([+-])\s*([0-9.]*(?:[eE][+-]?[0-9]+)?)\s*[ij])?\s*$)");
  static const std::regex imag_only(R"(^\s*([+-]?[0-9.]*(?:[eE][+-]?[0-9]+)?)\s*[ij]\s*$)");
  std::smatch m;
  auto number = [&](const std::string& s, double fallback) {
    if (s.empty() || s == "+") return fallback;
    if (s == "-") return -fallback;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    require(used == s.size(), ErrorKind::precondition, "cannot parse number '" + s + "'");
    return v;
  };
  try {
    if (std::regex_match(text, m, imag_only)) return {0.0, number(m[1].str(), 1.0)};
    if (std::regex_match(text, m, full) && (m[1].matched || m[2].matched)) {
      const double re = m[1].matched ? number(m[1].str(), 0.0) : 0.0;
      double im = 0.0;
      if (m[2].matched) im = (m[2].str() == "-" ? -1.0 : 1.0) * number(m[3].str(), 1.0);
      return {re, im};
    }
  } catch (const std::invalid_argument&) {
  }
  fail(ErrorKind::precondition, "cannot parse complex number '" + text + "'");
}

std::vector<Complex> parse_complex_list(const std::string& text) {
  std::vector<Complex> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_complex(item));
  return out;
}

// "a,b,c" or "2^10..2^22" (powers of two, step 1) or "2^6..2^12:0.5"
std::vector<double> parse_grid(const std::string& text) {
  static const std::regex range(R"(^\s*2\^([0-9.]+)\s*\.\.\s*2\^([0-9.]+)\s*(?::\s*([0-9.]+))?\s*$)");
  std::smatch m;
  std::vector<double> out;
  if (std::regex_match(text, m, range)) {
    const double lo = std::stod(m[1].str()), hi = std::stod(m[2].str());
    const double step = m[3].matched ? std::stod(m[3].str()) : 1.0;
    require(step > 0.0 && hi >= lo, ErrorKind::precondition, "bad grid '" + text + "'");
    for (double e = lo; e <= hi + 1e-9; e += step) out.push_back(std::exp2(e));
    return out;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::precondition, "cannot parse grid value '" + item + "'");
    }
    require(used == item.size(), ErrorKind::precondition, "cannot parse grid value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << h;
  return o.str();
}

json config_json(const Config& c) {
  json j = json::object();
  for (const auto& [k, v] : c.to_map()) j[k] = v;
  return j;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::budget:
    case ErrorKind::overflow:
      return 2;
    case ErrorKind::invariant:
      return 3;
    default:
      return 1;
  }
}

// -- commands ---------------------------------------------------------------

struct Options {
  std::string a;
  std::string what;
  std::uint64_t N = 1000;
  std::uint64_t L = 100000;
  std::uint64_t T = 1000000;
  std::uint64_t Nmax = 50;
  std::uint64_t samples = 1 << 20;
  std::string s = "2";
  std::string w = "3";
  std::string alpha, beta;
  std::string X = "10";
  std::string B = "1000";
  std::string grid;
  std::string input;
  std::string suite = "identities";
  std::int64_t h = 0;
  std::uint64_t l = 1;
  std::int64_t m = 1;
  int sign = 1;
  int index = 0;
  bool shifted = false;
  bool oracle = false;
  bool lower_order = false;
  std::string method = "qmc";
  std::uint64_t seed = 20240611;
};

void cmd_sieve(const Options& o, Document& doc) {
  const SieveTable t = build_sieve(o.N);
  doc.parameters = {{"N", o.N}};
  doc.add("d(N)", t.d(o.N), 0.0);
  doc.add("mu(N)", t.mu(o.N), 0.0);
  doc.add("phi(N)", t.phi(o.N), 0.0);
  doc.add("spf(N)", t.spf(o.N), 0.0);
  doc.add("prime_count", t.primes().size(), 0.0, "primes <= N");
  json f = json::array();
  for (const auto& [p, e] : t.factorize(o.N).factors) f.push_back({p, e});
  doc.diagnostics["factorization"] = f;
}

void cmd_constants(const Options& o, Document& doc) {
  const CoefficientVector a = parse_coefficients(o.a);
  const std::string what = o.what.empty() ? "all" : o.what;
  doc.parameters = {{"a", a.str()}, {"what", what}, {"L", o.L}};
  const bool all = what == "all";
  bool known = all;
  if (all || what == "rho") {
    known = true;
    const RationalValue r = rho(a);
    doc.add("rho", r.str(), 0.0, "exact rational");
    doc.add("rho_float", to_double(r), 1e-16 * std::abs(to_double(r)));
  }
  if ((all && a.gcd() == 1) || what == "kappa") {
    known = true;
    doc.add("kappa", kappa(a), 0.0);
  }
  if ((all && a.gcd() == 1 && a.k() >= 3) || what == "rho-bounds") {
    known = true;
    const RhoBounds b = rho_bounds(a);
    doc.add("rho_lower_bound", b.lower, 1e-12 * b.lower);
    doc.add("rho_upper_bound", b.upper, 0.0);
    doc.add("rho_bounds_hold", b.holds, 0.0);
    doc.add("rho_upper_bound_extended", b.upper_extended, 1e-12 * b.upper_extended);
    doc.add("rho_bounds_extended_hold", b.holds_extended, 0.0);
  }
  if ((all && a.k() >= 3) || what == "c-leading") {
    known = true;
    const double c = leading_constant(a);
    doc.add("c_leading", c, 1e-10 * std::abs(c));
  }
  if ((all && a.k() >= 3) || what == "singular-series") {
    known = true;
    const SingularSeries s = singular_series(a, o.L);
    doc.add("singular_series_truncated", s.truncated.value.real(), s.truncated.tail_bound);
    doc.add("singular_series_closed_form", s.closed_form, 1e-11 * s.closed_form);
    doc.diagnostics["difference"] = std::abs(s.truncated.value.real() - s.closed_form);
  }
  require(known, ErrorKind::precondition, "constants: unknown --what '" + what + "'");
}

void cmd_series(const Options& o, Document& doc) {
  const std::string what = o.what.empty() ? "partial" : o.what;
  doc.parameters = {{"what", what}};
  if (what == "closed-k2") {
    const Complex s = parse_complex(o.s);
    doc.parameters["s"] = o.s;
    const Complex v = closed_form_k2(s);
    doc.add("zeta(2s)^4/zeta(4s)", complex_json(v), 1e-11 * std::abs(v));
    return;
  }
  if (what == "quadruple-zeta") {
    const Complex s = parse_complex(o.s);
    const auto al = parse_complex_list(o.alpha), be = parse_complex_list(o.beta);
    require(al.size() == 1 && be.size() == 1, ErrorKind::precondition, "quadruple-zeta needs one --alpha and one --beta");
    doc.parameters.update({{"s", o.s}, {"alpha", o.alpha}, {"beta", o.beta}, {"T", o.T}});
    const IdentityResidual r = quadruple_zeta_residual(s, al[0], be[0], o.T);
    doc.add("residual", r.residual, r.bound);
    doc.diagnostics["holds"] = r.holds();
    return;
  }
  const CoefficientVector a = parse_coefficients(o.a);
  doc.parameters["a"] = a.str();
  if (what == "h") {
    doc.parameters["Nmax"] = o.Nmax;
    for (const auto& [n, hn] : h_coefficients(a, o.Nmax)) {
      if (hn != 0) doc.add("h(" + std::to_string(n) + ")", hn, 0.0);
    }
    return;
  }
  require(what == "partial", ErrorKind::precondition, "series: unknown --what '" + what + "'");
  const Complex s = parse_complex(o.s);
  const auto al = parse_complex_list(o.alpha), be = parse_complex_list(o.beta);
  doc.parameters.update({{"s", o.s}, {"T", o.T}, {"normalization", o.shifted ? "shifted" : "plain"}});
  TruncatedValue v;
  if (o.shifted) {
    const std::vector<Complex> al2 = al.empty() ? std::vector<Complex>(a.k()) : al;
    const std::vector<Complex> be2 = be.empty() ? std::vector<Complex>(a.k()) : be;
    doc.parameters.update({{"alpha", o.alpha}, {"beta", o.beta}});
    v = partial_sum_A(a, s, al2, be2, o.T, Normalization::shifted);
  } else {
    require(al.empty() && be.empty(), ErrorKind::precondition, "series: shifts need --shifted");
    v = partial_sum_A(a, s, o.T);
  }
  doc.add("partial_sum", complex_json(v.value), v.tail_bound);
  doc.diagnostics["terms_used"] = v.terms_used;
  doc.diagnostics["cutoff"] = v.cutoff;
  if (a.k() == 2 && a[0] == -a[1] && a.abs(0) == 1 && !o.shifted) {
    const Complex c = closed_form_k2(s);
    doc.add("closed_form", complex_json(c), 1e-11 * std::abs(c));
  }
}

void cmd_smooth(const Options& o, Document& doc) {
  const CoefficientVector a = parse_coefficients(o.a);
  const std::vector<double> xs = parse_grid(o.grid.empty() ? o.X : o.grid);
  doc.parameters = {{"a", a.str()}, {"X", xs}, {"weight", "exp(1-1/(1-x^2))"}};
  const SmoothWeight phi;
  for (double X : xs) {
    const double v = smoothed_sum(a, phi, X);
    const double err = 1e-13 * std::abs(v);  // exact enumeration; float accumulation only
    std::ostringstream name;
    name << "S(X=" << X << ")";
    doc.add(name.str(), v, err);
    doc.csv_rows.push_back({X, v, err});
    const double lx = std::log(X);
    if (a.k() == 3 && X > 1.0) doc.diagnostics["ratio_X2_log3"][name.str()] = v / (X * X * lx * lx * lx);
  }
}

void cmd_count(const Options& o, Document& doc) {
  const CoefficientVector a = parse_coefficients(o.a);
  const std::vector<double> bs = parse_grid(o.grid.empty() ? o.B : o.grid);
  doc.parameters = {{"a", a.str()}, {"B", bs}, {"oracle", o.oracle}};
  doc.csv_header = "B,count,error_bound";
  std::vector<PointCountResult> res;
  if (o.oracle) {
    for (double B : bs) res.push_back(count_points_oracle(a, B));
  } else {
    res = count_points_grid(a, bs);
  }
  double elapsed = 0.0;
  std::uint64_t pairs = 0;
  for (const auto& r : res) {
    std::ostringstream name;
    name << "N(B=" << r.B << ")";
    doc.add(name.str(), r.count, 0.0, "points");
    doc.csv_rows.push_back({r.B, static_cast<double>(r.count), 0.0});
    elapsed = o.oracle ? elapsed + r.elapsed.count() : r.elapsed.count();
    pairs = o.oracle ? pairs + r.enumerated_pairs : r.enumerated_pairs;
  }
  doc.diagnostics["enumerated_pairs"] = pairs;
  doc.diagnostics["elapsed_s"] = elapsed;
}

void cmd_sigma(const Options& o, Document& doc) {
  const CoefficientVector a = parse_coefficients(o.a);
  doc.parameters = {{"a", a.str()}, {"i", o.index}, {"samples", o.samples}, {"method", o.method}};
  require(o.method == "qmc" || o.method == "quadrature", ErrorKind::precondition, "sigma: --method is qmc or quadrature");
  const int lo = o.index == 0 ? 1 : o.index, hi = o.index == 0 ? a.k() : o.index;
  for (int i = lo; i <= hi; ++i) {
    const VolumeEstimate v = o.method == "qmc" ? sigma_volume(a, i, o.samples) : sigma_volume_quadrature(a, i);
    doc.add("sigma_" + std::to_string(i), v.value, v.standard_error, "volume");
  }
  if (o.index == 0 && o.method == "qmc" && a.k() >= 3 && a.mixed_signs()) {
    const Prediction p = leading_term_prediction(a, o.samples);
    doc.add("leading_term_prediction", p.value, p.error, "coefficient of B log B");
  }
}

void cmd_estermann(const Options& o, Document& doc) {
  const std::string what = o.what.empty() ? "direct" : o.what;
  const Complex s = parse_complex(o.s);
  const auto al = parse_complex_list(o.alpha), be = parse_complex_list(o.beta);
  const Complex alpha = al.empty() ? Complex{} : al.at(0), beta = be.empty() ? Complex{} : be.at(0);
  doc.parameters = {{"what", what}, {"s", o.s}, {"alpha", o.alpha}, {"beta", o.beta}};
  const EstermannPoint p{alpha, beta, s, o.h, o.l};
  if (what == "direct") {
    doc.parameters.update({{"h", o.h}, {"l", o.l}, {"T", o.T}});
    const TruncatedValue v = estermann_direct(p, o.T);
    doc.add("D(s,h/l)", complex_json(v.value), v.tail_bound);
  } else if (what == "chi") {
    doc.parameters["sign"] = o.sign;
    const ChiFactor c = chi_factor(o.sign, s, alpha, beta);
    doc.add("chi", complex_json(c.value), 1e-11 * std::abs(c.value));
  } else if (what == "reduced") {
    doc.parameters.update({{"l", o.l}, {"T", o.T}});
    const TruncatedValue v = estermann_reduced_sum(s, o.l, o.T);
    doc.add("sum*_h D(s,h/l)", complex_json(v.value), v.tail_bound);
  } else if (what == "averaged") {
    const Complex w = parse_complex(o.w);
    doc.parameters.update({{"w", o.w}, {"L", o.L}, {"T", averaged_identity_cutoff(o.L)}});
    const IdentityResidual r = averaged_identity_residual(s, w, o.L);
    doc.add("residual", r.residual, r.bound);
    doc.diagnostics["holds"] = r.holds();
  } else if (what == "ramanujan") {
    doc.parameters.update({{"m", o.m}, {"L", o.L}});
    const IdentityResidual r = ramanujan_formula_residual(s, o.m, o.L);
    doc.add("residual", r.residual, r.bound);
    doc.diagnostics["holds"] = r.holds();
  } else if (what == "probe") {
    doc.parameters.update({{"h", o.h}, {"l", o.l}, {"T", o.T}});
    const FunctionalEquationProbe f = functional_equation_probe(p, o.T);
    doc.add("literal_reading_residual", f.residual, f.tail_bound);
    doc.diagnostics["lhs_abs"] = f.lhs_abs;
    doc.diagnostics["note"] = "right side evaluated at the same s; a small residual would support that reading";
  } else {
    fail(ErrorKind::precondition, "estermann: unknown --what '" + what + "'");
  }
}

std::vector<std::pair<double, double>> read_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::precondition, "cannot open '" + path + "'");
  std::vector<std::pair<double, double>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' || line[0] == '.')) continue;
    std::stringstream row(line);
    std::string x, v;
    std::getline(row, x, ',');
    std::getline(row, v, ',');
    out.emplace_back(std::stod(x), std::stod(v));
  }
  return out;
}

void cmd_fit(const Options& o, Document& doc) {
  const std::string what = o.what.empty() ? "main-terms" : o.what;
  const CoefficientVector a = parse_coefficients(o.a);
  doc.parameters = {{"what", what}, {"a", a.str()}};
  if (what == "main-terms") {
    std::vector<std::pair<double, double>> samples;
    if (!o.input.empty()) {
      samples = read_csv(o.input);
      doc.parameters["input"] = o.input;
    } else {
      const std::vector<double> xs = parse_grid(o.grid.empty() ? "2^6..2^12:0.5" : o.grid);
      doc.parameters["X"] = xs;
      const SmoothWeight phi;
      for (double X : xs) samples.emplace_back(X, smoothed_sum(a, phi, X));
    }
    for (const auto& [X, v] : samples) doc.csv_rows.push_back({X, v, 1e-13 * std::abs(v)});
    const FitResult f = fit_main_terms(samples, a.k(), o.lower_order);
    for (std::size_t j = 0; j < f.coefficients.size(); ++j)
      doc.add("c_" + std::to_string(j), f.coefficients[j], f.residual_norm);
    doc.diagnostics["model"] = f.model;
    doc.diagnostics["condition_estimate"] = f.condition_estimate;
    doc.diagnostics["residual_norm"] = f.residual_norm;
    doc.diagnostics["sample_range"] = {f.sample_range.first, f.sample_range.second};
  } else if (what == "count") {
    const std::vector<double> bs = parse_grid(o.grid.empty() ? "2^10..2^22" : o.grid);
    doc.parameters.update({{"B", bs}, {"samples", o.samples}});
    doc.csv_header = "B,count,error_bound";
    const std::vector<PointCountResult> counts = count_points_grid(a, bs);
    for (const auto& r : counts) doc.csv_rows.push_back({r.B, static_cast<double>(r.count), 0.0});
    const FitResult f = fit_count_asymptotic(a, bs, counts);
    doc.add("C", f.coefficients[0], f.residual_norm, "coefficient of B log B");
    doc.add("f", f.coefficients[1], f.residual_norm, "coefficient of B");
    const Prediction p = leading_term_prediction(a, o.samples);
    doc.add("prediction", p.value, p.error, "coefficient of B log B");
    doc.add("C/prediction", f.coefficients[0] / p.value, f.residual_norm / p.value);
    // Same volumes, primitivity factor 1/zeta(k-1)^2 in place of 1/zeta(k)^2.
    const double zk = zeta(static_cast<double>(a.k())), zk1 = zeta(a.k() - 1.0);
    doc.diagnostics["prediction_zeta_k_minus_1_normalization"] = p.value * zk * zk / (zk1 * zk1);
    doc.diagnostics["condition_estimate"] = f.condition_estimate;
    doc.diagnostics["model"] = f.model;
  } else {
    fail(ErrorKind::precondition, "fit: unknown --what '" + what + "'");
  }
}

void cmd_verify(const Options& o, Document& doc) {
  doc.parameters = {{"suite", o.suite}, {"seed", o.seed}};
  std::vector<SuiteEntry> entries;
  if (o.suite == "identities" || o.suite == "all") {
    const auto e = identity_suite(o.seed);
    entries.insert(entries.end(), e.begin(), e.end());
  }
  if (o.suite == "constants" || o.suite == "all") {
    const auto e = constants_suite(o.seed);
    entries.insert(entries.end(), e.begin(), e.end());
  }
  require(!entries.empty(), ErrorKind::precondition, "verify: unknown --suite '" + o.suite + "'");
  bool ok = true;
  for (const SuiteEntry& e : entries) {
    doc.add(e.name, e.residual, e.bound, e.name.starts_with("rho_bounds") ? "violations" : "max residual");
    doc.diagnostics["passed"][e.name] = e.passed;
    doc.diagnostics["cases"][e.name] = e.cases;
    ok = ok && e.passed;
  }
  if (!ok) {
    std::cerr << "divcorr: verify: a residual is above its bound\n";
    doc.exit_status = exit_code(ErrorKind::invariant);
  }
}

// -- output -------------------------------------------------------------------

std::string cell(const json& v) {
  if (v.is_number_float()) {
    std::ostringstream o;
    o << std::setprecision(12) << v.get<double>();
    return o.str();
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_human(const json& doc, std::ostream& out) {
  out << doc["command"].get<std::string>() << "\n";
  std::size_t w0 = 4, w1 = 5, w2 = 11;
  for (const auto& r : doc["results"]) {
    w0 = std::max(w0, r["name"].get<std::string>().size());
    w1 = std::max(w1, cell(r["value"]).size());
    w2 = std::max(w2, cell(r["error_bound"]).size());
  }
  out << std::left << std::setw(int(w0) + 2) << "name" << std::setw(int(w1) + 2) << "value" << std::setw(int(w2) + 2)
      << "error_bound" << "units\n";
  for (const auto& r : doc["results"])
    out << std::left << std::setw(int(w0) + 2) << r["name"].get<std::string>() << std::setw(int(w1) + 2)
        << cell(r["value"]) << std::setw(int(w2) + 2) << cell(r["error_bound"]) << r["units"].get<std::string>()
        << "\n";
  if (!doc["diagnostics"].empty()) out << "diagnostics: " << doc["diagnostics"].dump() << "\n";
}

int run(std::vector<std::string> args, std::optional<Config> preset) {
  CLI::App app{"Divisor correlation toolkit"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags may follow the subcommand
  Options o;
  std::string config_path, csv_path, replay_path;
  bool human = false;
  std::optional<unsigned> threads;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_flag("--human", human, "print a table instead of JSON");
  app.add_option("--csv", csv_path, "also write X,value,error_bound rows to this file");
  app.add_option("--replay", replay_path, "re-run the command recorded in a manifest");
  app.allow_extras(false);

  auto coeffs = [&](CLI::App* c) {
    c->add_option("--a", o.a, "coefficients, e.g. --a=-1,1,1 (use '=' when the first entry is negative)")->required();
  };
  auto* sieve = app.add_subcommand("sieve", "arithmetic tables up to N");
  sieve->add_option("--N", o.N)->check(CLI::PositiveNumber);
  auto* constants = app.add_subcommand("constants", "rho, kappa, rho bounds, leading constant, singular series");
  coeffs(constants);
  constants->add_option("--what", o.what, "rho | kappa | rho-bounds | c-leading | singular-series | all");
  constants->add_option("--L", o.L, "singular series truncation");
  auto* series = app.add_subcommand("series", "partial sums of the correlation series");
  series->add_option("--a", o.a, "coefficients");
  series->add_option("--what", o.what, "partial | h | closed-k2 | quadruple-zeta");
  series->add_option("--s", o.s, "complex s, e.g. 2 or 0.9+1i");
  series->add_option("--T", o.T, "truncation: max n_i <= T");
  series->add_option("--Nmax", o.Nmax, "h_a(n) for n <= Nmax");
  series->add_option("--alpha", o.alpha, "comma-separated complex shifts");
  series->add_option("--beta", o.beta, "comma-separated complex shifts");
  series->add_flag("--shifted", o.shifted, "use prod tau_{alpha,beta}(n_i) / n_i^{1/2+s}");
  auto* smooth = app.add_subcommand("smooth", "smoothed sums with the standard bump");
  coeffs(smooth);
  smooth->add_option("--X", o.X, "X values, comma-separated");
  smooth->add_option("--grid", o.grid, "grid such as 2^6..2^12 or 2^6..2^12:0.5");
  auto* count = app.add_subcommand("count", "rational points of bounded height");
  coeffs(count);
  count->add_option("--B", o.B, "height bounds, comma-separated");
  count->add_option("--grid", o.grid, "grid such as 2^10..2^22");
  count->add_flag("--oracle", o.oracle, "use the slow reference enumeration");
  auto* sigma = app.add_subcommand("sigma", "archimedean volumes");
  coeffs(sigma);
  sigma->add_option("--i", o.index, "1-based index; 0 = all and the leading-term prediction");
  sigma->add_option("--samples", o.samples);
  sigma->add_option("--method", o.method, "qmc | quadrature");
  auto* esterm = app.add_subcommand("estermann", "Estermann function and averaged identities");
  esterm->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  esterm->add_option("--what", o.what, "direct | chi | reduced | averaged | ramanujan | probe");
  esterm->add_option("--s", o.s);
  esterm->add_option("--w", o.w);
  esterm->add_option("--alpha", o.alpha);
  esterm->add_option("--beta", o.beta);
  esterm->add_option("--h", o.h);
  esterm->add_option("--l", o.l);
  esterm->add_option("--T", o.T);
  esterm->add_option("--L", o.L);
  esterm->add_option("--m", o.m);
  esterm->add_option("--sign", o.sign);
  auto* fit = app.add_subcommand("fit", "asymptotic fits");
  coeffs(fit);
  fit->add_option("--what", o.what, "main-terms | count");
  fit->add_option("--grid", o.grid, "X or B grid");
  fit->add_option("--input", o.input, "CSV with X,value[,error_bound] rows (main-terms)");
  fit->add_option("--samples", o.samples, "QMC samples for the prediction (count)");
  fit->add_flag("--lower-order", o.lower_order, "include the lower-order X^{k-k/i} terms");
  auto* verify = app.add_subcommand("verify", "residual suites");
  verify->add_option("--suite", o.suite, "identities | constants | all");
  verify->add_option("--seed", o.seed);

  std::vector<std::string> argv_store = {"divcorr"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (!replay_path.empty()) {
      std::ifstream in(replay_path);
      require(static_cast<bool>(in), ErrorKind::precondition, "cannot open manifest '" + replay_path + "'");
      const json doc = json::parse(in);
      const json& m = doc.contains("manifest") ? doc["manifest"] : doc;
      Config c;
      std::map<std::string, std::string> kv;
      for (const auto& [k, v] : m.at("config").items()) kv[k] = v.get<std::string>();
      c.apply(kv);
      std::vector<std::string> replay_args;
      for (const auto& a : m.at("command_line")) replay_args.push_back(a.get<std::string>());
      std::cerr << "[divcorr] replaying " << m.at("command_line").dump() << "\n";
      return run(replay_args, c);
    }
  } catch (const Error& e) {
    std::cerr << "divcorr: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "divcorr: cannot replay: " << e.what() << "\n";
    return 1;
  }

  if (app.get_subcommands().empty()) {
    std::cerr << "divcorr: a subcommand is required\n" << app.help();
    return kExitUsage;
  }
  const auto start = std::chrono::steady_clock::now();
  Document doc;
  CLI::App* sub = app.get_subcommands().front();
  doc.command = sub->get_name();
  try {
    Config c = preset ? *preset : Config{};
    if (!preset) {
      if (!config_path.empty()) c = Config::from_file(config_path);
      c.apply_environment();
    }
    if (threads) c.threads = *threads;
    set_config(c);

    if (sub == sieve) cmd_sieve(o, doc);
    else if (sub == constants) cmd_constants(o, doc);
    else if (sub == series) cmd_series(o, doc);
    else if (sub == smooth) cmd_smooth(o, doc);
    else if (sub == count) cmd_count(o, doc);
    else if (sub == sigma) cmd_sigma(o, doc);
    else if (sub == esterm) cmd_estermann(o, doc);
    else if (sub == fit) cmd_fit(o, doc);
    else if (sub == verify) cmd_verify(o, doc);
  } catch (const Error& e) {
    std::cerr << "divcorr: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "divcorr: internal error: " << e.what() << "\n";
    return 3;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // The manifest records the arguments without --replay/--config so that a
  // replay depends on the embedded configuration only.
  std::vector<std::string> recorded;
  for (std::size_t t = 0; t < args.size(); ++t) {
    const std::string& s = args[t];
    const bool with_value = s == "--replay" || s == "--config";
    if (with_value) {
      ++t;
      continue;
    }
    if (s.rfind("--replay=", 0) == 0 || s.rfind("--config=", 0) == 0) continue;
    recorded.push_back(s);
  }
  const json cfg = config_json(config());
  json out;
  out["command"] = doc.command;
  out["manifest"] = {{"command_line", recorded},
                     {"config", cfg},
                     {"config_hash", fnv1a_hex(cfg.dump())},
                     {"seeds", {{"rho_seed", config().rho_seed},
                                {"rho_increment", config().rho_increment},
                                {"halton_offset", config().halton_offset}}},
                     {"parameters", doc.parameters},
                     {"wall_time_s", wall},
                     {"version", DIVCORR_VERSION}};
  out["results"] = doc.results;
  out["diagnostics"] = doc.diagnostics;

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    require(static_cast<bool>(csv), ErrorKind::precondition, "cannot write '" + csv_path + "'");
    csv << doc.csv_header << "\n" << std::setprecision(17);
    for (const auto& r : doc.csv_rows) csv << r[0] << "," << r[1] << "," << r[2] << "\n";
  }
  if (human) print_human(out, std::cout);
  else std::cout << out.dump(2) << "\n";
  std::cerr << "[divcorr] " << doc.command << " finished in " << std::fixed << std::setprecision(3) << wall << " s\n";
  return doc.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::nullopt);
}
