// fbawgn: finite-blocklength bounds and Monte Carlo simulation for the
// power-constrained AWGN channel. Single records print as JSON on stdout,
// sweeps write CSV files; both are byte-stable across reruns with identical
// flags. Timing goes to stderr so output files stay reproducible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbawgn/exponents.hpp"
#include "fbawgn/gauss.hpp"
#include "fbawgn/shell.hpp"
#include "fbawgn/simulate.hpp"
#include "fbawgn/validate.hpp"
#include "fbawgn/waterfill.hpp"

using json = nlohmann::ordered_json;
using namespace fbawgn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailedChecks = 1;
constexpr int kExitBadArgs = 2;
constexpr int kExitVacuous = 3;
constexpr int kExitIo = 4;
constexpr double kLn2 = 0.69314718055994530941723212145818;

struct Units {
  std::string name = "bits";
  double from_nats(double x) const { return name == "bits" ? x / kLn2 : x; }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<double> parse_double_list(const std::string& csv,
                                      const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "could not parse '" + cell + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError(flag, "empty list");
  return out;
}

void require_open_unit_interval(double eps, const std::string& flag) {
  if (!(eps > 0.0 && eps < 1.0))
    throw CLI::ValidationError(flag,
                               "must lie in the open interval (0,1), got " +
                                   fmt(eps));
}

void emit(const json& record, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << record.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::ios_base::failure("cannot open " + out_path);
  out << record.dump(2) << "\n";
  if (!out) throw std::ios_base::failure("write failed: " + out_path);
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  ~Timer() {
    const double s = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    std::fprintf(stderr, "wall time: %.3f s\n", s);
  }
};

json na_record(std::int64_t n, double eps, double snr, bool third,
               const Units& units) {
  const gauss::NormalApproxTerms t =
      gauss::normal_approximation(n, eps, SnrPoint(snr), third);
  json rec;
  rec["schema"] = "fbawgn.na.v1";
  rec["n"] = n;
  rec["eps"] = eps;
  rec["snr"] = snr;
  rec["units"] = units.name;
  rec["capacity_term"] = units.from_nats(t.capacity_term);
  rec["dispersion_term"] = units.from_nats(t.dispersion_term);
  rec["third_order_term"] = units.from_nats(t.third_order_term);
  rec["total"] = units.from_nats(t.total);
  rec["provenance"] = "formula";
  return rec;
}

// ---------------------------------------------------------------- sweep ----

struct SweepConfig {
  std::string var;
  std::vector<double> values;
  std::int64_t n = 0;
  double eps = 0.0, snr = 0.0;
  std::vector<std::string> outputs;
  std::uint64_t trials = 100000;
  double tol = 0.05;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  bool regression_helper = false;
  Units units;
  std::string out_path;
};

void run_sweep(const SweepConfig& cfg) {
  std::ofstream out(cfg.out_path);
  if (!out) throw std::ios_base::failure("cannot open " + cfg.out_path);

  std::vector<std::string> header{cfg.var, "status"};
  for (const std::string& name : cfg.outputs) {
    header.push_back(name + "_" + cfg.units.name);
    if (name == "rcu") header.push_back("rcu_eps_stderr");
    if (name == "achievable") header.push_back("achievable_stderr");
    header.push_back(name + "_provenance");
  }
  if (cfg.regression_helper) header.push_back("third_order_residual_nats");

  out << "# fbawgn-sweep v1\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << csv_quote(header[i]);
  out << "\n";

  const std::string mc_tag = "monte-carlo(seed=" + std::to_string(cfg.seed) +
                             ",trials=" + std::to_string(cfg.trials) + ")";
  for (double value : cfg.values) {
    std::int64_t n = cfg.n;
    double eps = cfg.eps, snr = cfg.snr;
    if (cfg.var == "n")
      n = static_cast<std::int64_t>(std::llround(value));
    else if (cfg.var == "eps")
      eps = value;
    else
      snr = value;

    std::vector<std::string> row;
    row.push_back(cfg.var == "n" ? std::to_string(n) : fmt(value));
    std::string status = "ok";
    std::vector<std::string> cells;
    double rcu_nats = std::nan("");

    for (const std::string& name : cfg.outputs) {
      try {
        if (name == "na" || name == "na3") {
          const auto t = gauss::normal_approximation(n, eps, SnrPoint(snr),
                                                     name == "na3");
          cells.push_back(fmt(cfg.units.from_nats(t.total)));
          cells.push_back(name == "na3" ? "formula(na+half-log-n)"
                                        : "formula(na)");
        } else if (name == "rcu") {
          const BoundResult r = sim::rcu_max_rate(
              static_cast<int>(n), eps, snr, cfg.trials, cfg.tol, cfg.seed,
              cfg.workers);
          rcu_nats = r.total_nats;
          cells.push_back(fmt(cfg.units.from_nats(r.total_nats)));
          cells.push_back(fmt(*r.mc_stderr));
          cells.push_back(mc_tag);
        } else if (name == "achievable") {
          sim::AchievableOptions opt;
          opt.trials = cfg.trials;
          opt.seed = cfg.seed;
          opt.workers = cfg.workers;
          const BoundResult r =
              sim::achievable_log_m(static_cast<int>(n), eps, snr, opt);
          cells.push_back(fmt(cfg.units.from_nats(r.total_nats)));
          cells.push_back(fmt(*r.mc_stderr));
          cells.push_back(mc_tag);
        } else {
          throw CLI::ValidationError("--outputs", "unknown output '" + name +
                                                      "'");
        }
      } catch (const CLI::ValidationError&) {
        throw;
      } catch (const std::exception&) {
        // vacuous bound, unreachable bisection target, or an out-of-domain
        // sweep value: emit the row with empty cells and mark it
        status = "vacuous";
        cells.push_back("");
        if (name == "rcu" || name == "achievable") cells.push_back("");
        cells.push_back("");
      }
    }

    row.push_back(status);
    row.insert(row.end(), cells.begin(), cells.end());
    if (cfg.regression_helper) {
      if (std::isnan(rcu_nats)) {
        row.emplace_back("");
      } else {
        const SnrPoint sp(snr);
        const double resid =
            rcu_nats - static_cast<double>(n) * gauss::capacity(sp) -
            std::sqrt(static_cast<double>(n) * gauss::dispersion(sp)) *
                gauss::std_normal_cdf_inv(eps);
        row.emplace_back(fmt(resid));
      }
    }
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_quote(row[i]);
    out << "\n";
  }
  if (!out) throw std::ios_base::failure("write failed: " + cfg.out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "finite-blocklength bounds and simulation for the power-constrained "
      "AWGN channel"};
  app.require_subcommand(1);

  // Shared option storage; each subcommand registers the flags it uses.
  std::int64_t n = 0;
  double eps = 0.0, snr = 0.0, s_param = 0.0, rate = 0.0, power = 0.0;
  double tol = 0.05, delta = 0.0, fd_step = 1e-4;
  std::uint64_t trials = 100000, seed = 1;
  unsigned workers = 0;
  int m_words = 0, points = 0;
  Units units;
  std::string out_path, noise_csv, format = "bin";
  bool third_order = false;

  auto add_units = [&](CLI::App* cmd) {
    cmd->add_option("--units", units.name, "output units: bits or nats")
        ->check(CLI::IsMember({"bits", "nats"}))
        ->capture_default_str();
  };

  // ---- na
  CLI::App* na = app.add_subcommand("na", "normal approximation breakdown");
  na->add_option("--n", n, "blocklength")->required()->check(CLI::PositiveNumber);
  na->add_option("--eps", eps, "target error probability")->required();
  na->add_option("--snr", snr, "linear SNR")->required()->check(CLI::PositiveNumber);
  na->add_flag("--third-order", third_order, "include the (1/2) ln n term");
  add_units(na);
  na->add_option("--out", out_path, "write the JSON record to this path");

  // ---- rcu
  CLI::App* rcu = app.add_subcommand(
      "rcu", "largest simulated RCU rate meeting the target error");
  rcu->add_option("--n", n, "blocklength")->required()->check(CLI::Range(2, 1 << 24));
  rcu->add_option("--eps", eps, "target error probability")->required();
  rcu->add_option("--snr", snr, "linear SNR")->required()->check(CLI::PositiveNumber);
  rcu->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  rcu->add_option("--tol", tol, "bisection tolerance in nats")->check(CLI::PositiveNumber);
  rcu->add_option("--seed", seed, "64-bit RNG seed");
  rcu->add_option("--workers", workers, "worker threads (0 = auto)");
  add_units(rcu);
  rcu->add_option("--out", out_path, "write the JSON record to this path");

  // ---- density
  CLI::App* density = app.add_subcommand(
      "density", "conditional shell density: normalizer, mode, sup ratio");
  density->add_option("--n", n, "blocklength")->required()->check(CLI::Range(3, 1 << 24));
  density->add_option("--snr", snr, "linear SNR")->required();
  density->add_option("--s", s_param, "normalized output power")
      ->required()
      ->check(CLI::PositiveNumber);
  density->add_option("--points", points, "curve sample count for --out");
  density->add_option("--out", out_path, "CSV path for the sampled curve");

  // ---- laplace
  CLI::App* laplace = app.add_subcommand(
      "laplace", "Laplace-method sup bound L(P,s) and its diagnostics");
  laplace->add_option("--snr", snr, "linear SNR")->required()->check(CLI::PositiveNumber);
  laplace->add_option("--s", s_param, "normalized output power")
      ->required()
      ->check(CLI::PositiveNumber);
  laplace->add_option("--n", n, "also report sup_u f/sqrt(n) at this n");
  laplace->add_option("--out", out_path, "write the JSON record to this path");

  // ---- exponent
  CLI::App* exponent = app.add_subcommand(
      "exponent", "sphere-packing exponent, cone-angle form, prefactor");
  exponent->add_option("--rate", rate, "rate in nats per use")->required();
  exponent->add_option("--snr", snr, "linear SNR")->required()->check(CLI::PositiveNumber);
  exponent->add_option("--step", fd_step, "finite-difference step")->capture_default_str();
  exponent->add_option("--out", out_path, "write the JSON record to this path");

  // ---- cone-angle
  CLI::App* cone = app.add_subcommand("cone-angle",
                                      "cone half-angle for a rate and blocklength");
  cone->add_option("--rate", rate, "rate in nats per use")->required();
  cone->add_option("--n", n, "blocklength")->required()->check(CLI::Range(2, 1 << 24));
  cone->add_option("--out", out_path, "write the JSON record to this path");

  // ---- waterfill
  CLI::App* water = app.add_subcommand("waterfill",
                                       "water-filling power allocation");
  water->add_option("--noise", noise_csv, "comma-separated noise variances")->required();
  water->add_option("--power", power, "total power budget")->required()
      ->check(CLI::PositiveNumber);
  water->add_option("--out", out_path, "write the JSON record to this path");

  // ---- parallel-na
  CLI::App* pna = app.add_subcommand(
      "parallel-na", "parallel-channel normal approximation with (1/2) ln n");
  pna->add_option("--noise", noise_csv, "comma-separated noise variances")->required();
  pna->add_option("--power", power, "total power budget")->required()
      ->check(CLI::PositiveNumber);
  pna->add_option("--n", n, "blocklength")->required()->check(CLI::PositiveNumber);
  pna->add_option("--eps", eps, "target error probability")->required();
  add_units(pna);
  pna->add_option("--out", out_path, "write the JSON record to this path");

  // ---- typical
  CLI::App* typical = app.add_subcommand(
      "typical", "probability that the output norm leaves the typical window");
  typical->add_option("--n", n, "blocklength")->required()->check(CLI::Range(2, 1 << 24));
  typical->add_option("--snr", snr, "linear SNR")->required()->check(CLI::PositiveNumber);
  typical->add_option("--delta", delta, "window half-width (default n^{-1/3})");
  typical->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  typical->add_option("--seed", seed, "64-bit RNG seed");
  typical->add_option("--workers", workers, "worker threads (0 = auto)");
  typical->add_option("--out", out_path, "write the JSON record to this path");

  // ---- sweep
  SweepConfig sweep_cfg;
  std::string values_csv, outputs_csv = "na", scale = "linear";
  double start = 0.0, stop = 0.0;
  int count = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "tabulate bounds over a grid");
  sweep->add_option("--var", sweep_cfg.var, "swept variable: n, eps or snr")
      ->required()
      ->check(CLI::IsMember({"n", "eps", "snr"}));
  sweep->add_option("--values", values_csv, "explicit comma-separated values");
  sweep->add_option("--start", start, "grid start");
  sweep->add_option("--stop", stop, "grid stop");
  sweep->add_option("--count", count, "grid size");
  sweep->add_option("--scale", scale, "grid scale: linear or log")
      ->check(CLI::IsMember({"linear", "log"}));
  sweep->add_option("--n", sweep_cfg.n, "fixed blocklength");
  sweep->add_option("--eps", sweep_cfg.eps, "fixed error probability");
  sweep->add_option("--snr", sweep_cfg.snr, "fixed linear SNR");
  sweep->add_option("--outputs", outputs_csv,
                    "comma-separated bounds: na, na3, rcu, achievable")
      ->capture_default_str();
  sweep->add_option("--trials", sweep_cfg.trials, "Monte Carlo trials");
  sweep->add_option("--tol", sweep_cfg.tol, "rcu bisection tolerance (nats)");
  sweep->add_option("--seed", sweep_cfg.seed, "64-bit RNG seed");
  sweep->add_option("--workers", sweep_cfg.workers, "worker threads (0 = auto)");
  sweep->add_flag("--regression-helper", sweep_cfg.regression_helper,
                  "emit rcu - nC - sqrt(nV) PhiInv(eps) in nats");
  sweep->add_option("--units", sweep_cfg.units.name, "output units")
      ->check(CLI::IsMember({"bits", "nats"}));
  sweep->add_option("--out", sweep_cfg.out_path, "CSV output path")->required();

  // ---- validate
  std::string suite;
  std::vector<std::string> override_specs;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "run an invariant suite and report a machine-readable result");
  validate_cmd->add_option("suite", suite, "density|laplace|exponents|waterfill|rcu|all")
      ->required();
  validate_cmd->add_option("--override", override_specs,
                           "replace a check bound, as name=value");
  validate_cmd->add_option("--out", out_path, "write the JSON report to this path");

  // ---- codebook-export
  CLI::App* book = app.add_subcommand("codebook-export",
                                      "generate and write a spherical codebook");
  book->add_option("--n", n, "blocklength")->required()->check(CLI::PositiveNumber);
  book->add_option("--m", m_words, "number of codewords")->required()
      ->check(CLI::PositiveNumber);
  book->add_option("--snr", snr, "linear SNR")->required()->check(CLI::PositiveNumber);
  book->add_option("--seed", seed, "64-bit RNG seed");
  book->add_option("--format", format, "bin or csv")
      ->check(CLI::IsMember({"bin", "csv"}))
      ->capture_default_str();
  book->add_option("--out", out_path, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    Timer timer;

    if (na->parsed()) {
      require_open_unit_interval(eps, "--eps");
      emit(na_record(n, eps, snr, third_order, units), out_path);
      return kExitOk;
    }

    if (rcu->parsed()) {
      require_open_unit_interval(eps, "--eps");
      const BoundResult r = sim::rcu_max_rate(static_cast<int>(n), eps, snr,
                                              trials, tol, seed, workers);
      const auto na2 = gauss::normal_approximation(n, eps, SnrPoint(snr), false);
      const auto na3 = gauss::normal_approximation(n, eps, SnrPoint(snr), true);
      json rec;
      rec["schema"] = "fbawgn.rcu.v1";
      rec["n"] = n;
      rec["eps"] = eps;
      rec["snr"] = snr;
      rec["trials"] = trials;
      rec["seed"] = seed;
      rec["tol_nats"] = tol;
      rec["m_log_nats"] = r.total_nats;
      rec["m_log_bits"] = r.total_nats / kLn2;
      rec["eps_hat"] = r.extra("eps_hat");
      rec["eps_stderr"] = *r.mc_stderr;
      rec["window_lo_nats"] = na2.total;
      rec["window_hi_nats"] = na3.total;
      rec["third_order_residual_nats"] = r.third_order_term;
      rec["provenance"] = "monte-carlo(seed=" + std::to_string(seed) +
                          ",trials=" + std::to_string(trials) + ")";
      emit(rec, out_path);
      return kExitOk;
    }

    if (density->parsed()) {
      shell::ShellDensitySpec spec(static_cast<int>(n), snr, s_param);
      json rec;
      rec["schema"] = "fbawgn.density.v1";
      rec["n"] = n;
      rec["snr"] = snr;
      rec["s"] = s_param;
      rec["log_normalizer_nats"] = spec.log_normalizer();
      if (snr > 0) {
        const shell::LaplaceReport rep = shell::laplace_sup_bound(snr, s_param);
        rec["mode"] = shell::shell_mode_finite(snr * s_param, static_cast<int>(n));
        rec["sup_ratio"] = rep.sup_ratio(static_cast<int>(n));
        rec["l_bound"] = rep.l_bound();
      }
      emit(rec, "");
      if (!out_path.empty() && points > 1) {
        std::ofstream curve(out_path);
        if (!curve) throw std::ios_base::failure("cannot open " + out_path);
        curve << "# fbawgn-density v1\nu,density\n";
        for (int i = 0; i < points; ++i) {
          const double u = -1.0 + 2.0 * i / (points - 1);
          curve << fmt(u) << ',' << fmt(shell::shell_density(u, spec)) << "\n";
        }
        if (!curve) throw std::ios_base::failure("write failed: " + out_path);
      }
      return kExitOk;
    }

    if (laplace->parsed()) {
      const shell::LaplaceReport rep = shell::laplace_sup_bound(snr, s_param);
      json rec;
      rec["schema"] = "fbawgn.laplace.v1";
      rec["snr"] = snr;
      rec["s"] = s_param;
      rec["u_star"] = rep.u_star();
      rec["alpha_at_mode"] = rep.alpha_at_mode();
      rec["alpha_second_deriv"] = rep.alpha_second_deriv();
      rec["l_bound"] = rep.l_bound();
      rec["l_bound_from_mode"] = rep.l_bound_from_mode();
      if (n > 0) {
        rec["n"] = n;
        rec["u_star_n"] = rep.u_star_n(static_cast<int>(n));
        rec["sup_ratio"] = rep.sup_ratio(static_cast<int>(n));
      }
      emit(rec, out_path);
      return kExitOk;
    }

    if (exponent->parsed()) {
      const SnrPoint sp(snr);
      const exponents::ExponentPoint pt = exponents::exponent_point(rate, sp);
      json rec;
      rec["schema"] = "fbawgn.exponent.v1";
      rec["rate_nats"] = pt.rate;
      rec["snr"] = snr;
      rec["beta"] = pt.beta;
      rec["phi"] = pt.phi;
      rec["e_of_r"] = pt.e_of_r;
      rec["f_of_phi"] = pt.f_of_phi;
      rec["prefactor_exponent"] = exponents::prefactor_exponent(rate, sp, fd_step);
      emit(rec, out_path);
      return kExitOk;
    }

    if (cone->parsed()) {
      const double phi = exponents::cone_angle(rate, static_cast<int>(n));
      const double nd = static_cast<double>(n);
      const double residual = (nd - 1.0) * std::log(std::sin(phi)) -
                              std::log(std::cos(phi)) -
                              0.5 * std::log(2.0 * M_PI * nd) + nd * rate;
      json rec;
      rec["schema"] = "fbawgn.cone_angle.v1";
      rec["rate_nats"] = rate;
      rec["n"] = n;
      rec["phi"] = phi;
      rec["rate_from_angle"] = exponents::rate_from_angle(phi);
      rec["log_residual"] = residual;
      emit(rec, out_path);
      return kExitOk;
    }

    if (water->parsed()) {
      const std::vector<double> noise = parse_double_list(noise_csv, "--noise");
      const wf::PowerAllocation alloc = wf::waterfill(noise, power);
      json rec;
      rec["schema"] = "fbawgn.waterfill.v1";
      rec["noise"] = alloc.noise;
      rec["total_power"] = alloc.total_power;
      rec["nu"] = alloc.nu;
      rec["powers"] = alloc.powers;
      rec["active_set"] = alloc.active_set;
      emit(rec, out_path);
      return kExitOk;
    }

    if (pna->parsed()) {
      require_open_unit_interval(eps, "--eps");
      const std::vector<double> noise = parse_double_list(noise_csv, "--noise");
      const BoundResult r =
          wf::parallel_normal_approximation(n, eps, noise, power);
      json rec;
      rec["schema"] = "fbawgn.parallel_na.v1";
      rec["n"] = n;
      rec["eps"] = eps;
      rec["noise"] = noise;
      rec["total_power"] = power;
      rec["units"] = units.name;
      rec["capacity_term"] = units.from_nats(r.capacity_term);
      rec["dispersion_term"] = units.from_nats(r.dispersion_term);
      rec["third_order_term"] = units.from_nats(r.third_order_term);
      rec["total"] = units.from_nats(r.total_nats);
      rec["nu"] = r.extra("nu");
      rec["convention"] = r.convention;
      rec["provenance"] = "formula";
      emit(rec, out_path);
      return kExitOk;
    }

    if (typical->parsed()) {
      const sim::TypicalSetSpec spec =
          delta > 0.0 ? sim::TypicalSetSpec(static_cast<int>(n), snr, delta)
                      : sim::TypicalSetSpec::with_default_delta(
                            static_cast<int>(n), snr);
      const sim::TypicalSetEstimate est =
          sim::typical_set_prob(spec, trials, seed, workers);
      json rec;
      rec["schema"] = "fbawgn.typical.v1";
      rec["n"] = n;
      rec["snr"] = snr;
      rec["delta"] = spec.delta;
      rec["prob_complement"] = est.prob_complement;
      rec["stderr"] = est.stderr_est;
      rec["trials"] = trials;
      rec["seed"] = seed;
      rec["provenance"] = "monte-carlo(seed=" + std::to_string(seed) +
                          ",trials=" + std::to_string(trials) + ")";
      emit(rec, out_path);
      return kExitOk;
    }

    if (sweep->parsed()) {
      if (!values_csv.empty()) {
        sweep_cfg.values = parse_double_list(values_csv, "--values");
      } else {
        if (count < 1)
          throw CLI::ValidationError("--values",
                                     "provide --values or --start/--stop/--count");
        for (int i = 0; i < count; ++i) {
          const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
          sweep_cfg.values.push_back(
              scale == "log" ? start * std::pow(stop / start, f)
                             : start + (stop - start) * f);
        }
      }
      std::stringstream ss(outputs_csv);
      std::string name;
      while (std::getline(ss, name, ','))
        if (!name.empty()) sweep_cfg.outputs.push_back(name);
      if (sweep_cfg.outputs.empty())
        throw CLI::ValidationError("--outputs", "empty output list");
      run_sweep(sweep_cfg);
      return kExitOk;
    }

    if (validate_cmd->parsed()) {
      std::map<std::string, double> overrides;
      for (const std::string& spec : override_specs) {
        const auto pos = spec.rfind('=');
        if (pos == std::string::npos)
          throw CLI::ValidationError("--override", "expected name=value");
        overrides[spec.substr(0, pos)] = std::stod(spec.substr(pos + 1));
      }
      const std::vector<validate::Check> checks =
          validate::run_suite(suite, overrides);
      bool all_pass = true;
      json rec;
      rec["schema"] = "fbawgn.validate.v1";
      rec["suite"] = suite;
      rec["checks"] = json::array();
      for (const validate::Check& c : checks) {
        rec["checks"].push_back({{"name", c.name},
                                 {"measured", c.measured},
                                 {"bound", c.bound},
                                 {"pass", c.pass}});
        all_pass = all_pass && c.pass;
      }
      rec["all_pass"] = all_pass;
      emit(rec, out_path);
      return all_pass ? kExitOk : kExitFailedChecks;
    }

    if (book->parsed()) {
      const sim::SphereCodebook cb =
          sim::generate_codebook(static_cast<int>(n), m_words, snr, seed);
      if (format == "bin")
        sim::save_codebook_binary(cb, out_path);
      else
        sim::save_codebook_csv(cb, out_path);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const VacuousBoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVacuous;
  } catch (const sim::BracketError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVacuous;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  return kExitOk;
}
