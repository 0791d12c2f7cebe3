#include "igasv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "igasv/blackscholes.hpp"
#include "igasv/calibration.hpp"
#include "igasv/expansion.hpp"
#include "igasv/io.hpp"
#include "igasv/montecarlo.hpp"
#include "igasv/stationary.hpp"

namespace igasv::cli {

namespace {

namespace fs = std::filesystem;

std::string fixed(double x, int digits) {
  if (!std::isfinite(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// Percent with two decimals and an explicit sign slot, as in "[-0.04]".
std::string bracket(double x) {
  if (!std::isfinite(x)) return "[  nan]";
  const double r = std::round(x * 1e4) / 100.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "[%5.2f]", r == 0.0 ? 0.0 : r);
  return buf;
}

void add_mc_flags(CLI::App* cmd, McConfig& cfg) {
  cmd->add_option("--paths", cfg.paths, "Monte Carlo paths")->check(CLI::PositiveNumber);
  cmd->add_option("--steps-per-year", cfg.steps_per_year, "Minimum time steps per year")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Random seed");
  cmd->add_flag("--antithetic", cfg.antithetic, "Antithetic variates");
  cmd->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
}

struct CalibrateArgs {
  std::string input;
  std::string output = ".";
  bool global_polish = false;
  std::uint64_t seed = CalibrationOptions{}.seed;
  std::size_t max_evals = CalibrationOptions{}.max_evals_per_slice;
};

struct PriceArgs {
  std::string params;
  double strike = 0.0;
  double maturity = 0.0;
  std::string type = "put";
  std::string method = "expansion";
  std::string output;
  McConfig mc;
};

struct SurfaceArgs {
  std::string market;
  std::string params;
  std::string output;
  bool with_mc = false;
  McConfig mc;
};

struct DensityArgs {
  double mean = 0.0;
  double std_dev = 0.0;
  std::string output = ".";
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  const MarketData md = read_market_data(a.input);
  CalibrationOptions opts;
  opts.global_polish = a.global_polish;
  opts.seed = a.seed;
  opts.max_evals_per_slice = a.max_evals;
  const CalibrationResult r = calibrate(md.surface, opts);

  const fs::path dir(a.output);
  const std::string stem = fs::path(a.input).stem().string();
  const fs::path json_path = dir / (stem + ".calibration.json");
  const fs::path csv_path = dir / (stem + ".errors.csv");
  write_text_file(json_path, calibration_result_json(r, md.surface));
  std::ostringstream csv;
  write_error_csv(csv, error_report(r, md.surface));
  write_text_file(csv_path, csv.str());

  out << md.name << ' ' << md.date << "  V0 = " << fixed(100.0 * r.v0, 2) << "%\n";
  out << "tenor   kappa   theta  lambda    rho\n";
  for (std::size_t k = 0; k < r.schedule.intervals(); ++k) {
    const auto& p = r.schedule.interval(k);
    char line[128];
    std::snprintf(line, sizeof line, "%-5s %7.2f %6.2f%% %7.2f %6.2f\n",
                  md.surface.slices[k].tenor.c_str(), p.kappa, 100.0 * p.theta, p.lambda, p.rho);
    out << line;
  }
  out << "median |error| " << fixed(r.stats.median_abs_bp, 1) << "bp, mean |error| "
      << fixed(r.stats.mean_abs_bp, 1) << "bp" << (r.polished ? " (polished)" : "") << '\n';
  out << "wrote " << json_path.string() << " and " << csv_path.string() << '\n';
  if (!r.converged) {
    out << "not converged within the evaluation budget\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_price(const PriceArgs& a, std::ostream& out, std::ostream& err) {
  const ModelFile m = read_model_file(a.params);
  const RateCurve dom = m.domestic_curve();
  const RateCurve fgn = m.foreign_curve();
  if (!(a.maturity > 0.0) || a.maturity > dom.grid().horizon() || a.maturity > fgn.grid().horizon()) {
    err << "maturity " << a.maturity << " outside the rate curves (0, " << dom.grid().horizon() << "]\n";
    return kExitInputError;
  }
  if (!(a.strike > 0.0)) {
    err << "strike must be positive\n";
    return kExitInputError;
  }
  if (a.type != "put" && a.type != "call") {
    err << "--type must be put or call\n";
    return kExitInputError;
  }
  const BsContext ctx(a.strike, a.maturity, dom.integral(0.0, a.maturity), fgn.integral(0.0, a.maturity));
  const ModelState state(m.spot, m.v0);
  // call - put, by parity
  const double forward_gap = m.spot * std::exp(-ctx.for_discount) - ctx.discounted_strike();

  std::ostringstream table;
  table << "method,type,strike,maturity,price,implied_vol,std_error\n";
  auto emit = [&](const std::string& method, double put, double se) {
    double iv = std::numeric_limits<double>::quiet_NaN();
    try {
      iv = implied_vol_put(ctx, m.spot, put);
    } catch (const std::domain_error&) {
    }
    const double price = a.type == "put" ? put : put + forward_gap;
    table << method << ',' << a.type << ',' << format_number(a.strike) << ','
          << format_number(a.maturity) << ',' << format_number(price) << ',' << format_number(iv)
          << ',' << (se >= 0.0 ? format_number(se) : std::string()) << '\n';
  };
  if (a.method == "expansion" || a.method == "both") {
    emit("expansion", price_put_expansion(state, m.schedule, ctx), -1.0);
  }
  if (a.method == "mc" || a.method == "both") {
    const McEstimate e = mc_price_put(state, m.schedule, ctx, a.mc);
    emit("mc", e.price, e.std_error);
  }
  out << table.str();
  if (!a.output.empty()) write_text_file(a.output, table.str());
  return kExitOk;
}

ErrorReport surface_report(const SurfaceArgs& a, bool with_mc, MarketData& md) {
  md = read_market_data(a.market);
  const ModelFile m = read_model_file(a.params);
  const CalibrationResult fit = evaluate_fit(md.surface, m.v0, m.schedule);
  return error_report(fit, md.surface, with_mc ? std::optional<McConfig>(a.mc) : std::nullopt);
}

void write_csv_if(const std::string& path, const ErrorReport& report) {
  if (path.empty()) return;
  std::ostringstream csv;
  write_error_csv(csv, report);
  write_text_file(path, csv.str());
}

int cmd_mc_check(const SurfaceArgs& a, std::ostream& out) {
  MarketData md;
  const ErrorReport report = surface_report(a, true, md);
  out << "tenor label   strike  expansion%      mc%   exp-mc(bp)  se(bp)\n";
  for (const auto& row : report.rows) {
    const auto& q = row.quote;
    char line[160];
    std::snprintf(line, sizeof line, "%-5s %-5s %8.4f %10.3f %8.3f %12.1f %7.1f\n", q.tenor.c_str(),
                  q.label.c_str(), q.strike, 100.0 * q.model_vol, 100.0 * row.mc_vol.value_or(NAN),
                  1e4 * row.expansion_error.value_or(NAN), 1e4 * row.mc_vol_std_error.value_or(NAN));
    out << line;
  }
  if (report.expansion_stats) {
    out << "expansion - MC: median |error| " << fixed(report.expansion_stats->median_abs_bp, 1)
        << "bp, mean |error| " << fixed(report.expansion_stats->mean_abs_bp, 1) << "bp\n";
  }
  write_csv_if(a.output, report);
  return kExitOk;
}

int cmd_report(const SurfaceArgs& a, std::ostream& out) {
  MarketData md;
  const ErrorReport report = surface_report(a, a.with_mc, md);
  // one line per tenor: market vol [calibration error] [expansion error], in percent
  std::vector<std::string> labels;
  std::map<std::string, std::vector<const ReportRow*>> by_tenor;
  std::vector<std::string> tenors;
  for (const auto& row : report.rows) {
    if (std::find(labels.begin(), labels.end(), row.quote.label) == labels.end()) labels.push_back(row.quote.label);
    if (!by_tenor.contains(row.quote.tenor)) tenors.push_back(row.quote.tenor);
    by_tenor[row.quote.tenor].push_back(&row);
  }
  out << md.name << ' ' << md.date << '\n' << "tenor";
  const int width = a.with_mc ? 21 : 13;
  char cell[64];
  for (const auto& l : labels) {
    std::snprintf(cell, sizeof cell, "  %*s", width, l.c_str());
    out << cell;
  }
  out << '\n';
  for (const auto& t : tenors) {
    std::snprintf(cell, sizeof cell, "%-5s", t.c_str());
    out << cell;
    for (const ReportRow* row : by_tenor[t]) {
      std::string body = fixed(100.0 * row->quote.market_vol, 2) + ' ' + bracket(row->quote.error);
      if (a.with_mc) body += ' ' + bracket(row->expansion_error.value_or(NAN));
      std::snprintf(cell, sizeof cell, "  %*s", width, body.c_str());
      out << cell;
    }
    out << '\n';
  }
  out << "calibration error: median " << fixed(report.calibration_stats.median_abs_bp, 1) << "bp, mean "
      << fixed(report.calibration_stats.mean_abs_bp, 1) << "bp\n";
  if (report.expansion_stats) {
    out << "expansion error:   median " << fixed(report.expansion_stats->median_abs_bp, 1) << "bp, mean "
        << fixed(report.expansion_stats->mean_abs_bp, 1) << "bp\n";
  }
  write_csv_if(a.output, report);
  return kExitOk;
}

int cmd_density(const DensityArgs& a, std::ostream& out) {
  const MatchedLaw mi = match_moments(StationaryModel::IGa, a.mean, a.std_dev);
  const MatchedLaw mh = match_moments(StationaryModel::Heston, a.mean, a.std_dev);
  const IgaStationary iga(mi.beta, mi.theta);
  const HestonVolStationary heston(mh.beta, mh.theta);

  const fs::path dir(a.output);
  const fs::path csv_path = dir / "density.csv";
  const fs::path json_path = dir / "density_params.json";
  std::ostringstream csv;
  write_density_csv(csv, iga, heston, density_grid(iga, heston));
  write_text_file(csv_path, csv.str());

  const nlohmann::json params = {
      {"target", {{"mean", a.mean}, {"std", a.std_dev}}},
      {"iga", {{"beta", mi.beta}, {"theta", mi.theta}, {"alpha", iga.alpha()}, {"scale", iga.scale()}}},
      {"heston",
       {{"beta", mh.beta}, {"theta", mh.theta}, {"b", heston.b()}, {"nu", heston.nu()}, {"feller", mh.feller()}}},
  };
  write_text_file(json_path, params.dump(2) + "\n");

  out << "IGa:    beta = " << fixed(mi.beta, 4) << ", theta = " << fixed(mi.theta, 4) << '\n';
  out << "Heston: beta = " << fixed(mh.beta, 4) << ", theta = " << fixed(mh.theta, 4)
      << ", 2 kappa theta / lambda^2 = " << fixed(mh.feller(), 4) << '\n';
  out << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"IGa stochastic volatility: calibration, expansion pricing, Monte Carlo checks"};
  app.require_subcommand(1);

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "Fit V0 and the parameter schedule to a market data file");
  c->add_option("input", cal.input, "Market data JSON")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--output", cal.output, "Output directory");
  c->add_flag("--global-polish", cal.global_polish, "Joint refit of all slices after the bootstrap");
  c->add_option("--seed", cal.seed, "Multistart seed");
  c->add_option("--max-evals", cal.max_evals, "Objective evaluations per slice")->check(CLI::PositiveNumber);

  PriceArgs pr;
  auto* p = app.add_subcommand("price", "Price a vanilla option from a parameter file");
  p->add_option("params", pr.params, "Parameter or calibration JSON")->required()->check(CLI::ExistingFile);
  p->add_option("--strike", pr.strike, "Strike")->required();
  p->add_option("--maturity", pr.maturity, "Maturity in years")->required();
  p->add_option("--type", pr.type, "put or call")->check(CLI::IsMember({"put", "call"}));
  p->add_option("--method", pr.method, "expansion, mc or both")->check(CLI::IsMember({"expansion", "mc", "both"}));
  p->add_option("-o,--output", pr.output, "Also write the CSV here");
  add_mc_flags(p, pr.mc);

  SurfaceArgs chk;
  auto* m = app.add_subcommand("mc-check", "Compare expansion and Monte Carlo implied vols on a surface");
  m->add_option("market", chk.market, "Market data JSON")->required()->check(CLI::ExistingFile);
  m->add_option("--params", chk.params, "Parameter or calibration JSON")->required()->check(CLI::ExistingFile);
  m->add_option("-o,--output", chk.output, "CSV output file");
  add_mc_flags(m, chk.mc);

  SurfaceArgs rep;
  auto* r = app.add_subcommand("report", "Error table: market vol [calibration error] [expansion error]");
  r->add_option("market", rep.market, "Market data JSON")->required()->check(CLI::ExistingFile);
  r->add_option("--params", rep.params, "Parameter or calibration JSON")->required()->check(CLI::ExistingFile);
  r->add_option("-o,--output", rep.output, "CSV output file");
  r->add_flag("--mc", rep.with_mc, "Add the expansion-vs-Monte Carlo column");
  add_mc_flags(r, rep.mc);

  DensityArgs den;
  auto* d = app.add_subcommand("density", "Stationary IGa and Heston vol densities with matched moments");
  d->add_option("--mean", den.mean, "Target stationary mean")->required();
  d->add_option("--std", den.std_dev, "Target stationary standard deviation")->required();
  d->add_option("-o,--output", den.output, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (c->parsed()) return cmd_calibrate(cal, out);
    if (p->parsed()) return cmd_price(pr, out, err);
    if (m->parsed()) return cmd_mc_check(chk, out);
    if (r->parsed()) return cmd_report(rep, out);
    if (d->parsed()) return cmd_density(den, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error, out_of_range
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace igasv::cli
