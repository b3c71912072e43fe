#include "secantlab/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <limits>

#include "CLI11.hpp"
#include "secantlab/io.hpp"
#include "secantlab/jacobian.hpp"

namespace secantlab::cli {

namespace {

using io::Json;

constexpr std::array<std::pair<Command, std::string_view>, 10> kNames{{
    {Command::theta, "theta"},
    {Command::kummer, "kummer"},
    {Command::secant_check, "secant-check"},
    {Command::secant_search, "secant-search"},
    {Command::secant_propagate, "secant-propagate"},
    {Command::involution, "involution"},
    {Command::hierarchy_run, "hierarchy-run"},
    {Command::premise_check, "premise-check"},
    {Command::scenario_fay, "scenario-fay"},
    {Command::scenario_degenerate, "scenario-degenerate"},
}};

constexpr double kPremiseTolerance = 1e-7;
constexpr double kFayTolerance = 1e-7;
constexpr double kTangentTolerance = 1e-6;

struct Outcome {
  Json json;
  std::optional<io::CsvTable> csv;
  int code = kSuccess;
  std::string message;
};

std::string num(double x) { return io::format_number(x); }

io::CsvTable lift_table(const std::vector<LiftResidual>& rows) {
  io::CsvTable t({"lift", "residual"});
  for (const auto& r : rows) t.add_row({lift_to_string(r.lift), num(r.residual)});
  return t;
}

// Parses "lift,residual\n..." style reports carried by ToleranceError.
std::optional<io::CsvTable> table_from_report(const std::string& report) {
  if (report.empty()) return std::nullopt;
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  while (start < report.size()) {
    std::size_t end = report.find('\n', start);
    if (end == std::string::npos) end = report.size();
    if (end > start) {
      std::vector<std::string> cells;
      std::size_t a = start;
      while (true) {
        const std::size_t b = report.find(',', a);
        if (b == std::string::npos || b > end) {
          cells.push_back(report.substr(a, end - a));
          break;
        }
        cells.push_back(report.substr(a, b - a));
        a = b + 1;
      }
      rows.push_back(std::move(cells));
    }
    start = end + 1;
  }
  if (rows.empty()) return std::nullopt;
  io::CsvTable t(rows.front());
  for (std::size_t i = 1; i < rows.size(); ++i) t.add_row(rows[i]);
  return t;
}

PeriodMatrix load_tau(const RunConfig& cfg) {
  if (cfg.tau_path.empty()) throw InputError("--tau is required");
  return io::period_matrix_from_json(io::read_json_file(cfg.tau_path), cfg.tau_path);
}

Json load_input(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw InputError("--input is required");
  return io::read_json_file(cfg.input_path);
}

std::optional<Lift> requested_lift(const RunConfig& cfg, int g) {
  if (cfg.lift.empty()) return std::nullopt;
  return lift_from_string(cfg.lift, g);
}

double threshold(const RunConfig& cfg, double fallback) { return cfg.tol_given ? cfg.tol : fallback; }

// Residual plus coefficients when the configuration passes; a failed secant
// leaves alpha null and sets exit code 2.
void finish_secant(SecantConfiguration& sc, const RunConfig& cfg, Outcome& out) {
  try {
    secant_coefficients(sc, cfg.tol, cfg.eps);
  } catch (const ToleranceError& e) {
    out.code = kToleranceFailure;
    out.message = e.what();
  }
}

Outcome cmd_theta(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  const Json in = load_input(cfg);
  const std::string where = cfg.input_path;
  DerivativeSpec spec;
  ComplexPoint z;
  if (in.is_object() && in.contains("z")) {
    z = io::point_from_json(in["z"], pm.genus(), where + ".z");
    if (in.contains("directions")) {
      const Json& d = in["directions"];
      if (!d.is_array()) throw InputError(where + ".directions: expected an array of points");
      for (std::size_t i = 0; i < d.size(); ++i) {
        spec.directions.push_back(
            io::point_from_json(d[i], pm.genus(), where + ".directions[" + std::to_string(i) + "]"));
      }
    }
  } else {
    z = io::point_from_json(in, pm.genus(), where);
  }
  if (spec.order() > kMaxDerivativeOrder) throw InputError(where + ".directions: at most 12 directions");
  const ScaledComplex v = theta_scaled(pm, z, spec, cfg.eps);
  const Complex full = v.value();
  Outcome out;
  out.json = Json{{"z", io::point_to_json(z)},
                  {"order", spec.order()},
                  {"scaled", {{"re", v.scaled.real()}, {"im", v.scaled.imag()}}},
                  {"log_scale", v.log_scale}};
  out.json["value"] = std::isfinite(full.real()) && std::isfinite(full.imag())
                          ? Json{{"re", full.real()}, {"im", full.imag()}}
                          : Json(nullptr);
  return out;
}

Outcome cmd_kummer(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  const ComplexPoint z = io::point_from_json(load_input(cfg), pm.genus(), cfg.input_path);
  Outcome out;
  out.json = io::to_json(kummer(SecondOrderBasis(pm), z, cfg.eps));
  return out;
}

Outcome cmd_secant_check(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  SecantConfiguration sc = io::secant_from_json(load_input(cfg), pm, cfg.input_path);
  sc.residual.reset();
  sc.alpha.reset();
  Outcome out;
  const RVector sigma = secant_singular_values(sc, cfg.eps);
  finish_secant(sc, cfg, out);
  io::CsvTable t({"quantity", "value"});
  t.add_row({"secant_residual", sc.residual ? num(*sc.residual) : "nan"});
  if (sc.alpha) {
    t.add_row({"bilinear_residual", num(bilinear_residual(sc, *sc.alpha, cfg.samples, cfg.seed, cfg.eps))});
  }
  for (Eigen::Index i = 0; i < sigma.size(); ++i) t.add_row({"sigma_" + std::to_string(i + 1), num(sigma(i))});
  out.json = io::to_json(sc);
  out.csv = std::move(t);
  return out;
}

Outcome cmd_secant_search(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  const SecantConfiguration seed = io::secant_from_json(load_input(cfg), pm, cfg.input_path);
  SearchOptions opts;
  opts.tolerance = cfg.tol;
  opts.seed = cfg.seed;
  SearchResult res = secant_search(pm, seed.m, seed.points, seed.zeta, opts, cfg.eps);
  Outcome out;
  SecantConfiguration& sc = res.config;
  sc.alpha.reset();
  finish_secant(sc, cfg, out);
  if (out.code != kSuccess) out.message = "no secant found: " + out.message;
  io::CsvTable t({"iteration", "residual"});
  for (std::size_t i = 0; i < res.trace.size(); ++i) t.add_row({std::to_string(i + 1), num(res.trace[i])});
  out.json = io::to_json(sc);
  out.csv = std::move(t);
  return out;
}

Outcome cmd_secant_propagate(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  const Json in = load_input(cfg);
  const SecantConfiguration sc = io::secant_from_json(in, pm, cfg.input_path);
  if (!in.contains("zeta_prime")) throw InputError(cfg.input_path + ": missing field 'zeta_prime'");
  const ComplexPoint zp = io::point_from_json(in["zeta_prime"], pm.genus(), cfg.input_path + ".zeta_prime");
  Outcome out;
  Lift lift;
  if (const auto requested = requested_lift(cfg, pm.genus())) {
    lift = *requested;
  } else {
    const LiftScan scan = propagation_secant_check(sc, zp, cfg.eps);
    lift = scan.best_lift;
    out.csv = lift_table(scan.table);
  }
  const PropagationResult prop = propagate(sc, zp, lift);
  SecantConfiguration next{pm, sc.m, prop.b_points, sc.zeta, std::nullopt, std::nullopt};
  finish_secant(next, cfg, out);
  if (!out.csv) out.csv = lift_table({{lift, next.residual.value_or(std::nan(""))}});
  out.json = io::to_json(next);
  out.json["lift"] = lift_to_string(lift);
  out.json["zeta_prime"] = io::point_to_json(zp);
  return out;
}

Outcome cmd_involution(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  const Json in = load_input(cfg);
  const std::string where = cfg.input_path;
  if (!in.is_object() || !in.contains("points") || !in["points"].is_array() || in["points"].size() != 4) {
    throw InputError(where + ".points: expected four points");
  }
  std::array<ComplexPoint, 4> a;
  for (int i = 0; i < 4; ++i) a[i] = io::point_from_json(in["points"][i], pm.genus(), where + ".points[" + std::to_string(i) + "]");
  if (!in.contains("zeta_prime")) throw InputError(where + ": missing field 'zeta_prime'");
  const ComplexPoint zp = io::point_from_json(in["zeta_prime"], pm.genus(), where + ".zeta_prime");
  std::vector<LiftResidual> rows;
  if (const auto requested = requested_lift(cfg, pm.genus())) {
    rows.push_back({*requested, involution_identity(pm, a, zp, *requested)});
  } else {
    for (const Lift& l : all_lifts(pm.genus())) rows.push_back({l, involution_identity(pm, a, zp, l)});
  }
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.residual);
  Outcome out;
  out.json = Json{{"residual", worst}, {"lifts", rows.size()}};
  out.csv = lift_table(rows);
  if (worst > cfg.tol) {
    out.code = kToleranceFailure;
    out.message = "involution identity residual " + num(worst) + " exceeds tolerance";
  }
  return out;
}

Outcome cmd_hierarchy_run(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  const HierarchyState seed = io::hierarchy_from_json(load_input(cfg), pm, cfg.input_path);
  const auto samples = hierarchy_samples(pm, cfg.samples, cfg.seed);
  const HierarchyState st = run_hierarchy(seed, cfg.order, samples, cfg.eps);
  Outcome out;
  out.json = io::to_json(st);
  io::CsvTable t({"order", "residual", "rank"});
  const double limit = threshold(cfg, kHierarchySuccessResidual);
  for (std::size_t k = 0; k < st.per_order_residuals.size(); ++k) {
    t.add_row({std::to_string(k + 1), num(st.per_order_residuals[k]), std::to_string(st.per_order_ranks[k])});
    if (st.per_order_residuals[k] > limit && out.code == kSuccess) {
      out.code = kToleranceFailure;
      out.message = "hierarchy residual at order " + std::to_string(k + 1) + " is " +
                    num(st.per_order_residuals[k]);
    }
  }
  out.csv = std::move(t);
  return out;
}

Outcome cmd_premise_check(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  const HierarchyState st = io::hierarchy_from_json(load_input(cfg), pm, cfg.input_path);
  const PremiseReport rep = premise_check(pm, st.m, st.u, st.b, cfg.eps);
  const double limit = threshold(cfg, kPremiseTolerance);
  Outcome out;
  out.json = io::to_json(rep);
  out.json["passed"] = rep.passed(limit);
  io::CsvTable t({"check", "residual"});
  t.add_row({"tangency", num(rep.tangency)});
  for (std::size_t j = 0; j < rep.shifted.size(); ++j) t.add_row({"shift_" + std::to_string(j + 1), num(rep.shifted[j])});
  out.csv = std::move(t);
  if (!rep.passed(limit)) {
    out.code = kToleranceFailure;
    out.message = "premise check failed";
  }
  return out;
}

template <std::size_t N>
std::array<ThetaDivisorPoint, N> divisor_points(const PeriodMatrix& pm, std::uint64_t seed, double eps) {
  std::array<ThetaDivisorPoint, N> pts{};
  for (std::size_t k = 0; k < N; ++k) pts[k] = find_theta_divisor_point(pm, seed * 16 + k, eps);
  return pts;
}

void require_genus_two(const PeriodMatrix& pm, const RunConfig& cfg) {
  if (pm.genus() != 2) throw InputError(cfg.tau_path + ".g: scenarios need a genus-2 period matrix");
}

Outcome cmd_scenario_fay(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  require_genus_two(pm, cfg);
  const FayResult fay = fay_configuration(pm, divisor_points<4>(pm, cfg.seed, cfg.eps), threshold(cfg, kFayTolerance), cfg.eps);
  Outcome out;
  out.json = io::to_json(fay.config);
  out.csv = lift_table(fay.table);
  return out;
}

Outcome cmd_scenario_degenerate(const RunConfig& cfg) {
  const PeriodMatrix pm = load_tau(cfg);
  require_genus_two(pm, cfg);
  const DegenerateDatum d =
      degenerate_fay_configuration(pm, divisor_points<3>(pm, cfg.seed, cfg.eps), threshold(cfg, kTangentTolerance), cfg.eps);
  Outcome out;
  out.json = io::to_json(make_hierarchy_state(pm, 1, d.u, {d.b1}, d.tangent, cfg.order));
  out.csv = lift_table(d.table);
  return out;
}

Outcome dispatch(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::theta: return cmd_theta(cfg);
    case Command::kummer: return cmd_kummer(cfg);
    case Command::secant_check: return cmd_secant_check(cfg);
    case Command::secant_search: return cmd_secant_search(cfg);
    case Command::secant_propagate: return cmd_secant_propagate(cfg);
    case Command::involution: return cmd_involution(cfg);
    case Command::hierarchy_run: return cmd_hierarchy_run(cfg);
    case Command::premise_check: return cmd_premise_check(cfg);
    case Command::scenario_fay: return cmd_scenario_fay(cfg);
    case Command::scenario_degenerate: return cmd_scenario_degenerate(cfg);
  }
  throw InputError("unknown command");
}

void emit(const RunConfig& cfg, const Outcome& o, std::ostream& out) {
  const std::string text = o.json.dump(2) + "\n";
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  io::write_text_file(cfg.output, text);
  if (o.csv) {
    std::filesystem::path csv(cfg.output);
    csv.replace_extension(".csv");
    io::write_text_file(csv.string(), o.csv->str());
  }
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kNames)
    if (cmd == c) return name;
  return {};
}

std::optional<Command> command_from_name(std::string_view name) {
  for (const auto& [cmd, n] : kNames)
    if (n == name) return cmd;
  return std::nullopt;
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> cmds = [] {
    std::vector<Command> v;
    for (const auto& entry : kNames) v.push_back(entry.first);
    return v;
  }();
  return cmds;
}

void RunConfig::validate() const {
  if (!(eps > 0.0)) throw InputError("--eps must be positive");
  if (!(eps < tol)) throw InputError("--eps must be smaller than --tol");
  if (order < 1 || order > kMaxDerivativeOrder) throw InputError("--order must lie in 1..12");
  if (samples < 1) throw InputError("--samples must be at least 1");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    const Outcome o = dispatch(config);
    emit(config, o, out);
    if (o.code != kSuccess) err << "secantlab " << command_name(config.command) << ": " << o.message << "\n";
    return o.code;
  } catch (const InputError& e) {
    err << "secantlab " << command_name(config.command) << ": input error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const ToleranceError& e) {
    err << "secantlab " << command_name(config.command) << ": " << e.what() << "\n";
    Outcome o;
    o.json = Json{{"error", e.what()}};
    o.csv = table_from_report(e.report());
    try {
      emit(config, o, out);
    } catch (const InputError& w) {
      err << "secantlab: " << w.what() << "\n";
    }
    if (config.output.empty() && !e.report().empty()) err << e.report();
    return kToleranceFailure;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Theta functions, Kummer secants and the tangent hierarchy", "secantlab"};
  app.require_subcommand(1);
  RunConfig cfg;
  for (const auto& [cmd, name] : kNames) {
    CLI::App* sub = app.add_subcommand(std::string(name));
    sub->add_option("--tau", cfg.tau_path, "period matrix JSON {g, tau_re, tau_im}");
    sub->add_option("--input", cfg.input_path, "input JSON for the command");
    sub->add_option("--eps", cfg.eps, "absolute truncation error of scaled theta values")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "residual tolerance")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed of the counter-based generator")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "number of sample points")->capture_default_str();
    sub->add_option("--order", cfg.order, "highest hierarchy order")->capture_default_str();
    sub->add_option("--lift", cfg.lift, "half-period lift as g bits, e.g. 0101");
    sub->add_option("--output", cfg.output, "JSON output path; the CSV table goes to the same stem with .csv");
    sub->callback([&cfg, cmd = cmd, sub] {
      cfg.command = cmd;
      cfg.tol_given = sub->count("--tol") > 0;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "secantlab: " << e.what() << "\n";
    return kInputFailure;
  }
  return run(cfg, out, err);
}

}  // namespace secantlab::cli
