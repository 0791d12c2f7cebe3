#pragma once

// JSON market data / parameter files and CSV tables. Numbers are written with
// std::to_chars, so output never depends on the process locale.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "igasv/calibration.hpp"
#include "igasv/stationary.hpp"
#include "igasv/termstructure.hpp"

namespace igasv {

/// Malformed input; the message names the offending line or field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Market data as stored on disk.
struct MarketData {
  std::string name;
  std::string date;
  VolSurface surface;
};

/// Calibrated (or published) model: V0, schedule and the rate curves it was fitted with.
struct ModelFile {
  double spot = 0.0;
  double v0 = 0.0;
  ParamSchedule schedule;
  std::vector<double> rate_maturities;
  std::vector<double> r_dom_eq;
  std::vector<double> r_for_eq;

  RateCurve domestic_curve() const;
  RateCurve foreign_curve() const;
};

MarketData parse_market_data(const std::string& text);
MarketData read_market_data(const std::filesystem::path& path);

ModelFile parse_model_file(const std::string& text);
ModelFile read_model_file(const std::filesystem::path& path);
std::string model_file_json(const ModelFile& model);
ModelFile model_file_from(const CalibrationResult& result, const VolSurface& surface);

/// Result JSON: the model-file keys plus per-quote errors, slice fits and statistics.
std::string calibration_result_json(const CalibrationResult& result, const VolSurface& surface);

/// Shortest round-trip decimal representation.
std::string format_number(double x);

/// tenor,label,maturity,strike,market_vol,model_vol,calibration_error[,mc_vol,mc_vol_se,expansion_error]
/// with vols and errors in percent.
void write_error_csv(std::ostream& out, const ErrorReport& report);

/// x,iga_density,heston_density,log_iga_density,log_heston_density
void write_density_csv(std::ostream& out, const IgaStationary& iga, const HestonVolStationary& heston,
                       const std::vector<double>& grid);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace igasv
