#include "igasv/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace igasv {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw InputError(where + "." + key + ": expected a number");
  return v.get<double>();
}

std::string text(const json& obj, const char* key, const std::string& where, std::string fallback = {}) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw InputError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

const json& array(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_array()) throw InputError(where + "." + key + ": expected an array");
  return v;
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& where) {
  std::vector<double> out;
  const json& a = array(obj, key, where);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw InputError(where + "." + key + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(a[i].get<double>());
  }
  return out;
}

json params_json(const ModelParams& p) {
  return {{"kappa", p.kappa}, {"theta", p.theta}, {"lambda", p.lambda}, {"rho", p.rho}};
}

json model_json(const ModelFile& m) {
  json params = json::array();
  for (const auto& p : m.schedule.params()) params.push_back(params_json(p));
  const auto b = m.schedule.grid().boundaries();
  return {
      {"spot", m.spot},
      {"v0", m.v0},
      {"grid", std::vector<double>(b.begin(), b.end())},
      {"params", params},
      {"rates",
       {{"maturities", m.rate_maturities}, {"r_d_eq", m.r_dom_eq}, {"r_f_eq", m.r_for_eq}}},
  };
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json stats_json(const ErrorStats& s) {
  return {{"median_abs_bp", s.median_abs_bp}, {"mean_abs_bp", s.mean_abs_bp}};
}

}  // namespace

RateCurve ModelFile::domestic_curve() const {
  return RateCurve::from_equivalent_rates(rate_maturities, r_dom_eq);
}

RateCurve ModelFile::foreign_curve() const {
  return RateCurve::from_equivalent_rates(rate_maturities, r_for_eq);
}

MarketData parse_market_data(const std::string& body) {
  const json j = parse_json(body);
  MarketData md;
  md.name = text(j, "name", "market data");
  md.date = text(j, "date", "market data");
  md.surface.spot = number(j, "spot", "market data");
  md.surface.day_count = text(j, "day_count", "market data", md.surface.day_count);
  const json& slices = array(j, "slices", "market data");
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const std::string where = "slices[" + std::to_string(i) + "]";
    const json& s = slices[i];
    Slice slice;
    slice.tenor = text(s, "tenor", where);
    slice.maturity = s.contains("maturity_years") ? number(s, "maturity_years", where)
                                                  : tenor_to_years(slice.tenor);
    slice.r_dom = number(s, "r_d_eq", where);
    slice.r_for = number(s, "r_f_eq", where);
    const json& quotes = array(s, "quotes", where);
    for (std::size_t k = 0; k < quotes.size(); ++k) {
      const std::string qwhere = where + ".quotes[" + std::to_string(k) + "]";
      slice.quotes.push_back({text(quotes[k], "label", qwhere), number(quotes[k], "strike", qwhere),
                              number(quotes[k], "vol", qwhere)});
    }
    md.surface.slices.push_back(std::move(slice));
  }
  try {
    md.surface.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return md;
}

MarketData read_market_data(const std::filesystem::path& path) {
  try {
    return parse_market_data(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

ModelFile parse_model_file(const std::string& body) {
  const json j = parse_json(body);
  const std::string where = "model";
  const double spot = number(j, "spot", where);
  const double v0 = number(j, "v0", where);
  const auto grid = numbers(j, "grid", where);
  const json& ps = array(j, "params", where);
  std::vector<ModelParams> params;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string pw = "params[" + std::to_string(i) + "]";
    params.push_back({number(ps[i], "kappa", pw), number(ps[i], "theta", pw),
                      number(ps[i], "lambda", pw), number(ps[i], "rho", pw)});
  }
  const json& rates = field(j, "rates", where);
  try {
    ModelFile m{spot, v0, ParamSchedule(TimeGrid(grid), params), numbers(rates, "maturities", "rates"),
                numbers(rates, "r_d_eq", "rates"), numbers(rates, "r_f_eq", "rates")};
    ModelState(m.spot, m.v0);
    m.domestic_curve();
    m.foreign_curve();
    return m;
  } catch (const std::logic_error& e) {
    throw InputError(std::string("model: ") + e.what());
  }
}

ModelFile read_model_file(const std::filesystem::path& path) {
  try {
    return parse_model_file(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string model_file_json(const ModelFile& model) { return model_json(model).dump(2) + "\n"; }

ModelFile model_file_from(const CalibrationResult& result, const VolSurface& surface) {
  ModelFile m{surface.spot, result.v0, result.schedule, {}, {}, {}};
  for (const auto& s : surface.slices) {
    m.rate_maturities.push_back(s.maturity);
    m.r_dom_eq.push_back(s.r_dom);
    m.r_for_eq.push_back(s.r_for);
  }
  return m;
}

std::string calibration_result_json(const CalibrationResult& result, const VolSurface& surface) {
  json j = model_json(model_file_from(result, surface));
  json quotes = json::array();
  for (const auto& q : result.quotes) {
    quotes.push_back({{"tenor", q.tenor},
                      {"label", q.label},
                      {"maturity", q.maturity},
                      {"strike", q.strike},
                      {"market_vol", q.market_vol},
                      {"model_vol", nullable(q.model_vol)},
                      {"error", nullable(q.error)}});
  }
  json slices = json::array();
  for (const auto& s : result.slices) {
    slices.push_back({{"loss", s.loss}, {"evals", s.evals}, {"converged", s.converged}});
  }
  j["quotes"] = quotes;
  j["slices"] = slices;
  j["stats"] = stats_json(result.stats);
  j["total_loss"] = result.total_loss;
  j["converged"] = result.converged;
  j["polished"] = result.polished;
  return j.dump(2) + "\n";
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_error_csv(std::ostream& out, const ErrorReport& report) {
  const bool mc = report.expansion_stats.has_value();
  out << "tenor,label,maturity,strike,market_vol,model_vol,calibration_error";
  if (mc) out << ",mc_vol,mc_vol_se,expansion_error";
  out << '\n';
  auto pct = [](double x) { return format_number(100.0 * x); };
  auto opt_pct = [&](const std::optional<double>& x) { return x ? pct(*x) : std::string(); };
  for (const auto& row : report.rows) {
    const auto& q = row.quote;
    out << q.tenor << ',' << q.label << ',' << format_number(q.maturity) << ','
        << format_number(q.strike) << ',' << pct(q.market_vol) << ',' << pct(q.model_vol) << ','
        << pct(q.error);
    if (mc) out << ',' << opt_pct(row.mc_vol) << ',' << opt_pct(row.mc_vol_std_error) << ',' << opt_pct(row.expansion_error);
    out << '\n';
  }
}

void write_density_csv(std::ostream& out, const IgaStationary& iga, const HestonVolStationary& heston,
                       const std::vector<double>& grid) {
  out << "x,iga_density,heston_density,log_iga_density,log_heston_density\n";
  for (double x : grid) {
    const double a = iga_vol_density(iga, x);
    const double h = heston_vol_density(heston, x);
    out << format_number(x) << ',' << format_number(a) << ',' << format_number(h) << ','
        << format_number(std::log(a)) << ',' << format_number(std::log(h)) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

}  // namespace igasv
