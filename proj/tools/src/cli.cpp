#include "birkhoff/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "birkhoff/error.hpp"
#include "birkhoff/excursion_law.hpp"
#include "birkhoff/growth.hpp"
#include "birkhoff/observables.hpp"
#include "birkhoff/renewal.hpp"
#include "birkhoff/simulator.hpp"
#include "birkhoff/verification.hpp"

namespace birkhoff::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string g6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Files of one run are staged in memory and published together, so a failing
// command leaves nothing behind.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) {
    files_.emplace_back(name, std::move(content));
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& f : files_) out.push_back(f.first);
    return out;
  }

  void commit(const std::string& manifest) {
    fs::create_directories(dir_);
    for (const auto& [name, content] : files_) write_atomic(dir_ / name, content);
    write_atomic(dir_ / "manifest.json", manifest);
  }

 private:
  fs::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

Json manifest_head(const std::string& command, Json config, std::optional<std::uint64_t> seed,
                   std::optional<int> workers) {
  Json m;
  m["tool_version"] = tool_version();
  m["command"] = command;
  m["config"] = std::move(config);
  m["seed"] = seed ? Json(*seed) : Json(nullptr);
  m["workers"] = workers ? Json(*workers) : Json(nullptr);
  return m;
}

std::string finish_manifest(Json m, const OutputSet& files, Clock::time_point start) {
  m["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  Json list = Json::array();
  for (const auto& n : files.names()) list.push_back(n);
  list.push_back("manifest.json");
  m["output_files"] = std::move(list);
  return m.dump(2) + "\n";
}

LawSpec parse_law(const std::string& kind, double gamma) {
  LawSpec spec;
  if (kind == "log-squared") {
    spec = LawSpec::log_squared();
  } else if (kind == "log-squared-even") {
    spec = LawSpec::log_squared_even();
  } else if (kind == "power") {
    spec = LawSpec::power(gamma);
  } else {
    throw InvalidArgument("unknown law kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------- law

struct LawArgs {
  std::string kind = "log-squared";
  double gamma = 2.0;
  std::int64_t nmax = 1000;
  double precision = 1e-12;
};

int cmd_law(const LawArgs& a, const fs::path& dir, std::ostream& out) {
  const auto start = Clock::now();
  const LawSpec spec = parse_law(a.kind, a.gamma);
  if (a.nmax < 2) throw InvalidArgument("--nmax must be >= 2");
  const ExcursionLaw law(spec, a.nmax + 2, a.precision);

  std::string csv = "n,pmf,tail,hazard\n";
  for (std::int64_t n = 2; n <= a.nmax; ++n) {
    const double t = law.tail(n);
    const double q = t > 0.0 ? law.hazard(n) : std::nan("");
    csv += std::to_string(n) + "," + g17(law.pmf(n)) + "," + g17(t) + "," + g17(q) + "\n";
  }
  const Normalizer& norm = law.normalization();
  out << "c = " << g17(norm.c) << "  (certified |error| <= " << g6(norm.error_bound)
      << ", exact terms to n = " << norm.cutoff << ")\n";

  OutputSet files(dir);
  files.add("law.csv", std::move(csv));
  Json cfg;
  cfg["kind"] = a.kind;
  if (spec.kind == LawKind::PowerLaw) cfg["gamma"] = a.gamma;
  cfg["nmax"] = a.nmax;
  cfg["precision"] = a.precision;
  cfg["c"] = g17(norm.c);
  cfg["c_error_bound"] = g17(norm.error_bound);
  files.commit(finish_manifest(manifest_head("law", cfg, std::nullopt, std::nullopt), files, start));
  return kExitOk;
}

// ---------------------------------------------------------------- renewal

struct RenewalArgs {
  std::string kind = "log-squared";
  double gamma = 2.0;
  std::int64_t nmax = 10000;
  std::vector<std::int64_t> heights;
  std::vector<double> betas{0.5, 0.3};
  std::vector<std::int64_t> window_n{1000, 10000, 100000};
  std::vector<std::int64_t> nagaev_s{1000, 10000, 100000};
  bool brute_check = false;
};

constexpr std::int64_t kBruteLimit = 30;

// Sum over every composition of s into parts >= 2 of the product of masses.
long double composition_mass(const ExcursionLaw& law, std::int64_t s) {
  long double total = 0.0L;
  std::vector<std::pair<std::int64_t, long double>> stack{{s, 1.0L}};
  while (!stack.empty()) {
    const auto [rest, weight] = stack.back();
    stack.pop_back();
    if (rest == 0) {
      total += weight;
      continue;
    }
    for (std::int64_t part = 2; part <= rest; ++part) {
      const double p = law.pmf(part);
      if (p > 0.0) stack.emplace_back(rest - part, weight * p);
    }
  }
  return total;
}

int cmd_renewal(const RenewalArgs& a, const fs::path& dir, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const LawSpec spec = parse_law(a.kind, a.gamma);
  if (a.nmax < 2) throw InvalidArgument("--nmax must be >= 2");
  std::vector<std::int64_t> heights = a.heights.empty() ? std::vector{a.nmax} : a.heights;
  for (const auto n : heights) {
    if (n < 0 || n > a.nmax) throw InvalidArgument("--heights entries must lie in [0, nmax]");
  }
  for (const double b : a.betas) {
    if (!(b > 0.0 && b <= 1.0)) throw InvalidArgument("--beta entries must lie in (0, 1]");
  }

  const ExcursionLaw law(spec, a.nmax + 2);
  const RenewalTable table(law, a.nmax);

  double worst = 0.0;
  std::int64_t worst_n = 0;
  for (std::int64_t n = 0; n <= a.nmax; ++n) {
    const double d = std::abs(completeness_defect(table, n));
    if (d > worst) {
      worst = d;
      worst_n = n;
    }
  }
  out << "completeness: max |sum_k T(k) u[n-k] - 1| = " << g6(worst) << " (n = " << worst_n << ")\n";
  if (!(worst <= 1e-9)) {
    err << "error: completeness self-check failed beyond 1e-9\n";
    return kExitNumeric;
  }
  if (a.brute_check) {
    double brute = 0.0;
    const std::int64_t top = std::min(a.nmax, kBruteLimit);
    for (std::int64_t s = 0; s <= top; ++s) {
      const double oracle = static_cast<double>(composition_mass(law, s));
      brute = std::max(brute, std::abs(table.u(s) - oracle));
    }
    out << "brute-check: max |u_s - compositions| = " << g6(brute) << " for s <= " << top << "\n";
    if (!(brute <= 1e-12)) {
      err << "error: renewal masses disagree with composition enumeration\n";
      return kExitNumeric;
    }
  }

  OutputSet files(dir);
  std::string renewal = "s,u_s\n";
  for (std::int64_t s = 0; s <= a.nmax; ++s) renewal += std::to_string(s) + "," + g17(table.u(s)) + "\n";
  files.add("renewal.csv", std::move(renewal));

  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
  for (const auto n : heights) {
    const HeightDistribution h = height_distribution(table, n);
    std::string csv = "k,prob\n";
    for (std::size_t k = 0; k < h.probs.size(); ++k) csv += std::to_string(k) + "," + g17(h.probs[k]) + "\n";
    files.add("heights-" + std::to_string(n) + ".csv", std::move(csv));
  }

  std::string nagaev = "s,ratio\n";
  for (const auto s : a.nagaev_s) {
    if (s < 2 || s > a.nmax || law.pmf(s) == 0.0) continue;
    nagaev += std::to_string(s) + "," + g17(nagaev_ratio(table, s)) + "\n";
  }
  files.add("nagaev.csv", std::move(nagaev));

  std::string windows = "n,beta,mass\n";
  for (const double b : a.betas) {
    for (const auto n : a.window_n) {
      if (n < 1 || n > a.nmax) continue;
      windows += std::to_string(n) + "," + g17(b) + "," + g17(window_mass(table, n, b)) + "\n";
    }
  }
  files.add("windows.csv", std::move(windows));

  Json cfg;
  cfg["kind"] = a.kind;
  if (spec.kind == LawKind::PowerLaw) cfg["gamma"] = a.gamma;
  cfg["nmax"] = a.nmax;
  cfg["heights"] = heights;
  cfg["betas"] = a.betas;
  cfg["window_n"] = a.window_n;
  cfg["nagaev_s"] = a.nagaev_s;
  cfg["brute_check"] = a.brute_check;
  cfg["completeness_max_defect"] = g17(worst);
  files.commit(finish_manifest(manifest_head("renewal", cfg, std::nullopt, std::nullopt), files, start));
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string scenario = "stretched";
  double alpha = 0.5;
  double gamma = 2.0;
  std::int64_t n = 10000;
  std::int64_t samples = 1000;
  std::uint64_t seed = 1;
  int workers = 4;
  std::string start = "p0";
  std::string mark_law = "uniform";
  bool svg = false;
};

std::string histogram_svg(const std::vector<double>& values, const std::string& title) {
  constexpr int kBins = 40;
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 320.0;
  constexpr double kPad = 40.0;
  double lo = 0.0;
  double hi = 1.0;
  bool seen = false;
  for (const double v : values) {
    if (!std::isfinite(v)) continue;
    lo = seen ? std::min(lo, v) : v;
    hi = seen ? std::max(hi, v) : v;
    seen = true;
  }
  if (!(hi > lo)) hi = lo + 1.0;
  std::vector<std::int64_t> counts(kBins, 0);
  for (const double v : values) {
    if (!std::isfinite(v)) continue;
    const int b = std::clamp(static_cast<int>((v - lo) / (hi - lo) * kBins), 0, kBins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  const auto peak = static_cast<double>(std::max<std::int64_t>(1, *std::max_element(counts.begin(), counts.end())));
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + g6(kWidth + 2 * kPad) + "\" height=\"" +
         g6(kHeight + 2 * kPad) + "\">\n";
  svg += "<text x=\"" + g6(kPad) + "\" y=\"24\" font-family=\"monospace\" font-size=\"14\">" + title + "</text>\n";
  const double bw = kWidth / kBins;
  for (int b = 0; b < kBins; ++b) {
    const double h = kHeight * static_cast<double>(counts[static_cast<std::size_t>(b)]) / peak;
    svg += "<rect x=\"" + g6(kPad + b * bw) + "\" y=\"" + g6(kPad + kHeight - h) + "\" width=\"" +
           g6(bw - 1.0) + "\" height=\"" + g6(h) + "\" fill=\"#4a6fa5\"/>\n";
  }
  svg += "<text x=\"" + g6(kPad) + "\" y=\"" + g6(kHeight + kPad + 20) +
         "\" font-family=\"monospace\" font-size=\"12\">" + g6(lo) + "</text>\n";
  svg += "<text x=\"" + g6(kPad + kWidth) + "\" y=\"" + g6(kHeight + kPad + 20) +
         "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">" + g6(hi) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::string samples_csv(const RatioSampleSet& set) {
  std::string csv = "sample_id,ratio_sign,ratio_logmag,ratio_value,height,excursions,mark\n";
  csv.reserve(csv.size() + set.records.size() * 96);
  for (std::size_t i = 0; i < set.records.size(); ++i) {
    const TrajectoryRecord& r = set.records[i];
    csv += std::to_string(i) + "," + std::to_string(r.ratio.sign()) + "," + g17(r.ratio.logmag()) + "," +
           g17(r.ratio.to_double()) + "," + std::to_string(r.height) + "," + std::to_string(r.excursions) +
           "," + (r.mark ? g17(*r.mark) : std::string()) + "\n";
  }
  return csv;
}

int cmd_simulate(const SimulateArgs& a, const fs::path& dir, std::ostream& out) {
  const auto start = Clock::now();
  ScenarioConfig cfg;
  cfg.scenario = parse_scenario(a.scenario);
  cfg.alpha = a.alpha;
  cfg.gamma = a.gamma;
  cfg.n = a.n;
  cfg.samples = a.samples;
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  cfg.start = parse_start(a.start);
  cfg.mark_law = parse_mark_law(a.mark_law);
  cfg.validate();

  const RatioSampleSet set = run(cfg);

  OutputSet files(dir);
  files.add("samples.csv", samples_csv(set));
  if (a.svg) files.add("histogram.svg", histogram_svg(set.ratio_values(), "S_n f / B_n, " + a.scenario));

  Json c;
  c["scenario"] = to_string(cfg.scenario);
  c["alpha"] = cfg.alpha;
  if (cfg.scenario == Scenario::Degenerate) c["gamma"] = cfg.gamma;
  c["n"] = cfg.n;
  c["samples"] = cfg.samples;
  if (cfg.scenario == Scenario::Parity) c["start"] = to_string(cfg.start);
  if (cfg.scenario == Scenario::Decorated) c["mark_law"] = to_string(cfg.mark_law);
  c["normalization_logmag"] = g17(set.normalization_logmag);
  std::string norm = "exp(n^alpha)";
  if (cfg.scenario == Scenario::IidGaussian) norm = "sqrt(n)";
  if (cfg.scenario == Scenario::Parity && cfg.n % 2 != 0) norm = "exp(n^alpha)/2";
  c["normalization"] = norm;
  files.commit(finish_manifest(manifest_head("simulate", c, cfg.seed, cfg.workers), files, start));
  out << "wrote " << set.records.size() << " samples to " << (dir / "samples.csv").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- growth

struct GrowthArgs {
  std::string family;
  std::string input;
  double alpha = 0.5;
  double base = 2.0;
  double exponent = 2.0;
  std::int64_t length = 1000;
};

std::vector<double> read_log_sequence(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::vector<double> logs;
  std::string line;
  std::int64_t lineno = 0;
  const auto parse_num = [](std::string_view s, auto& v) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (comma == std::string::npos) throw InvalidArgument(where + ": expected 'n,log_B_n'");
    std::string_view sv(line);
    std::int64_t n = 0;
    double v = 0.0;
    if (!parse_num(sv.substr(0, comma), n)) {
      if (lineno == 1) continue;  // header
      throw InvalidArgument(where + ": malformed index");
    }
    if (!parse_num(sv.substr(comma + 1), v) || !std::isfinite(v)) {
      throw InvalidArgument(where + ": malformed log_B_n");
    }
    if (n != static_cast<std::int64_t>(logs.size()) + 1) {
      throw InvalidArgument(where + ": indices must run 1, 2, ..., N");
    }
    logs.push_back(v);
  }
  return logs;
}

int cmd_growth(const GrowthArgs& a, const fs::path& dir, std::ostream& out) {
  const auto start = Clock::now();
  if (a.family.empty() == a.input.empty()) {
    throw InvalidArgument("growth needs exactly one of --family or --input");
  }
  Json cfg;
  std::vector<double> logs;
  if (!a.input.empty()) {
    logs = read_log_sequence(a.input);
    cfg["input"] = a.input;
  } else {
    if (a.length < static_cast<std::int64_t>(NormSeq::kMinLength)) {
      throw InvalidArgument("--N must be >= " + std::to_string(NormSeq::kMinLength));
    }
    std::function<double(std::int64_t)> f;
    cfg["family"] = a.family;
    if (a.family == "stretched" || a.family == "parity") {
      require_alpha(a.alpha);
      const double alpha = a.alpha;
      cfg["alpha"] = alpha;
      if (a.family == "stretched") {
        f = [alpha](std::int64_t n) { return std::pow(static_cast<double>(n), alpha); };
      } else {
        f = [alpha](std::int64_t n) { return parity_log_normalization(n, alpha); };
      }
    } else if (a.family == "power") {
      if (!(a.exponent > 0.0)) throw InvalidArgument("--exponent must be positive");
      const double e = a.exponent;
      cfg["exponent"] = e;
      f = [e](std::int64_t n) { return e * std::log(static_cast<double>(n)); };
    } else if (a.family == "exp") {
      if (!(a.base > 1.0)) throw InvalidArgument("--base must exceed 1");
      const double lb = std::log(a.base);
      cfg["base"] = a.base;
      f = [lb](std::int64_t n) { return lb * static_cast<double>(n); };
    } else {
      throw InvalidArgument("unknown family '" + a.family + "'");
    }
    cfg["N"] = a.length;
    for (std::int64_t n = 1; n <= a.length; ++n) logs.push_back(f(n));
  }
  const NormSeq seq(std::move(logs));
  seq.require_fit_length();
  const GrowthReport report = growth_report(seq);

  for (const auto& v : report.verdicts) out << v << "\n";
  OutputSet files(dir);
  files.add("growth-report.json", to_json(report));
  files.commit(finish_manifest(manifest_head("growth", cfg, std::nullopt, std::nullopt), files, start));
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string name;
  std::uint64_t seed = VerifyOptions{}.seed;
  int workers = 4;
};

std::string verify_usage() {
  std::string s = "usage: birkhoff-lab verify <check> [--seed S] [--workers W] [--out DIR]\nchecks:";
  for (const auto& n : verification_names()) s += " " + n;
  return s + "\n";
}

int cmd_verify(const VerifyArgs& a, const fs::path& dir, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const auto& names = verification_names();
  if (std::find(names.begin(), names.end(), a.name) == names.end()) {
    err << "error: unknown check '" << a.name << "'\n" << verify_usage();
    return kExitUsage;
  }
  if (a.workers < 1) throw InvalidArgument("--workers must be >= 1");
  VerifyOptions opts;
  opts.seed = a.seed;
  opts.workers = a.workers;
  const VerifyResult r = run_verification(a.name, opts);

  Json params = Json::object();
  out << "verify " << r.check << "\n";
  for (const auto& [k, v] : r.parameters) {
    params[k] = v;
    out << "  " << k << " = " << v << "\n";
  }
  Json lines = Json::array();
  for (const auto& l : r.lines) {
    out << (l.passed ? "PASS  " : "FAIL  ") << l.name;
    if (!l.detail.empty()) out << "  [" << l.detail << "]";
    out << "\n";
    lines.push_back({{"name", l.name}, {"passed", l.passed}, {"detail", l.detail}});
  }
  out << (r.passed() ? "PASS" : "FAIL") << " " << r.check << "\n";

  Json cfg;
  cfg["check"] = r.check;
  cfg["parameters"] = params;
  cfg["results"] = lines;
  cfg["passed"] = r.passed();
  OutputSet files(dir);
  files.commit(finish_manifest(manifest_head("verify", cfg, opts.seed, opts.workers), files, start));
  return r.passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

std::string tool_version() { return "0.3.0"; }

int default_workers() {
  if (const char* env = std::getenv("BIRKHOFF_LAB_THREADS")) {
    int v = 0;
    const std::string_view s(env);
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size() && v > 0) return v;
  }
  return 4;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stretched-exponential Birkhoff sums: exact renewal oracles, simulation, diagnostics",
               "birkhoff-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());
  std::string out_dir = ".";

  LawArgs law;
  auto* c_law = app.add_subcommand("law", "Tabulate an excursion-length law (law.csv)");
  c_law->add_option("--kind", law.kind, "log-squared | log-squared-even | power")->capture_default_str();
  c_law->add_option("--gamma", law.gamma, "power-law exponent (> 1)")->capture_default_str();
  c_law->add_option("--nmax", law.nmax, "largest n tabulated")->capture_default_str();
  c_law->add_option("--precision", law.precision, "certified precision of c")->capture_default_str();

  RenewalArgs ren;
  auto* c_ren = app.add_subcommand("renewal", "Exact renewal masses and height laws");
  c_ren->add_option("--kind", ren.kind, "log-squared | log-squared-even | power")->capture_default_str();
  c_ren->add_option("--gamma", ren.gamma, "power-law exponent (> 1)")->capture_default_str();
  c_ren->add_option("--nmax", ren.nmax, "renewal table horizon")->capture_default_str();
  c_ren->add_option("--heights", ren.heights, "n values for heights-<n>.csv (default: nmax)");
  c_ren->add_option("--beta", ren.betas, "window exponents")->capture_default_str();
  c_ren->add_option("--window-n", ren.window_n, "n values for windows.csv")->capture_default_str();
  c_ren->add_option("--nagaev-s", ren.nagaev_s, "s values for nagaev.csv")->capture_default_str();
  c_ren->add_flag("--brute-check", ren.brute_check, "compare u_s, s <= 30, with composition enumeration");

  SimulateArgs sim;
  sim.workers = default_workers();
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo samples of S_n f / B_n");
  c_sim->add_option("--scenario", sim.scenario, "stretched | degenerate | decorated | parity | iid-gaussian")
      ->capture_default_str();
  c_sim->add_option("--alpha", sim.alpha)->capture_default_str();
  c_sim->add_option("--gamma", sim.gamma, "degenerate scenario exponent")->capture_default_str();
  c_sim->add_option("--n", sim.n)->capture_default_str();
  c_sim->add_option("--samples", sim.samples)->capture_default_str();
  c_sim->add_option("--seed", sim.seed)->capture_default_str();
  c_sim->add_option("--workers", sim.workers, "default: BIRKHOFF_LAB_THREADS or 4")->capture_default_str();
  c_sim->add_option("--start", sim.start, "p0 | q1 (parity)")->capture_default_str();
  c_sim->add_option("--mark-law", sim.mark_law, "uniform | gaussian (decorated)")->capture_default_str();
  c_sim->add_flag("--svg", sim.svg, "also write histogram.svg");

  GrowthArgs gr;
  auto* c_gr = app.add_subcommand("growth", "Diagnose a normalizing sequence B_n");
  c_gr->add_option("--family", gr.family, "stretched | power | exp | parity");
  c_gr->add_option("--input", gr.input, "CSV of n,log_B_n for n = 1..N");
  c_gr->add_option("--alpha", gr.alpha)->capture_default_str();
  c_gr->add_option("--base", gr.base)->capture_default_str();
  c_gr->add_option("--exponent", gr.exponent)->capture_default_str();
  c_gr->add_option("--N", gr.length)->capture_default_str();

  VerifyArgs ver;
  ver.workers = default_workers();
  auto* c_ver = app.add_subcommand("verify", "Run a named desk-scale check");
  c_ver->add_option("check", ver.name, "distrib-h | limit-distrib-h | nagaev | theorem | degenerate | "
                                       "decorated | parity | clt")
      ->required();
  c_ver->add_option("--seed", ver.seed)->capture_default_str();
  c_ver->add_option("--workers", ver.workers, "default: BIRKHOFF_LAB_THREADS or 4")->capture_default_str();

  for (auto* c : {c_law, c_ren, c_sim, c_gr, c_ver}) {
    c->add_option("--out", out_dir, "output directory")->capture_default_str();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (c_ver->parsed() && ver.name.empty()) err << verify_usage();
    return code == 0 ? kExitOk : kExitUsage;
  }

  const fs::path dir(out_dir);
  try {
    if (c_law->parsed()) return cmd_law(law, dir, out);
    if (c_ren->parsed()) return cmd_renewal(ren, dir, out, err);
    if (c_sim->parsed()) return cmd_simulate(sim, dir, out);
    if (c_gr->parsed()) return cmd_growth(gr, dir, out);
    if (c_ver->parsed()) return cmd_verify(ver, dir, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace birkhoff::cli
