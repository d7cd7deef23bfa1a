#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qfc/conversion.hpp"
#include "qfc/dispersion.hpp"
#include "qfc/noise.hpp"
#include "qfc/photonstats.hpp"
#include "qfc/spd.hpp"

namespace qfc {

struct TuningTargets {
  double center_nm = 0.0;
  double fwhm_nm = 0.0;
};

struct TuningSection {
  double pump_nm = 0.0;
  TuningRange range;
  TuningCalibration calibration;
  std::optional<TuningTargets> calibrate;
  std::optional<FringeSpec> fringe;
};

struct QpmSection {
  double signal_nm = 0.0;
  double pump_nm = 0.0;
};

struct NoiseCalibrateSection {
  double pump_power_mw = 0.0;
  double ncr_cps = 0.0;
  std::optional<double> fraction_crossing_mw;
};

struct NoiseSection {
  std::optional<double> a_linear_cps_per_w;
  std::optional<double> kappa_spdc_cps_per_w2;
  std::optional<NoiseCalibrateSection> calibrate;

  /// Resolves explicit coefficients or the calibration recipe into a model.
  NoiseModel build(const ConversionModel& conversion) const;
};

struct BudgetSection {
  LossBudget budget;
  DetectorModel spad;
};

struct SpdSection {
  double pump_min_mw = 0.0;
  double pump_max_mw = 0.0;
  double step_mw = 0.0;
};

struct FitEfficiencySection {
  std::filesystem::path input;
  double length_cm = 0.0;
};

struct NoiseBudgetSection {
  std::filesystem::path input;
};

struct G2Section {
  std::filesystem::path input;
  std::uint64_t tau_b_ps = 1500;
  std::int64_t max_delay_ps = 150000;
  unsigned channel_a = 0;
  unsigned channel_b = 1;
  std::optional<double> csv_duration_s;  // required when input is CSV
};

struct HeraldedG2Section {
  std::filesystem::path input;
  std::uint64_t tau_b_ps = 1500;
  std::int64_t max_delay_ps = 150000;
  unsigned herald_channel = 0;
  unsigned s1_channel = 1;
  unsigned s2_channel = 2;
  std::optional<double> csv_duration_s;
};

struct LayoutSection {
  LayoutKind kind = LayoutKind::kPair;
  double signal_arm_loss_db = 0.0;
  double idler_arm_loss_db = 0.0;
  double splitter_ratio = 0.5;
  std::optional<QfcStage> qfc;
};

struct DetectorsSection {
  std::optional<DetectorModel> signal;
  std::optional<DetectorModel> idler;
  std::optional<DetectorModel> s1;
  std::optional<DetectorModel> s2;
};

/// Parsed run configuration. Parsing is strict: unknown keys anywhere are
/// errors, and physical values carry their unit in the key name.
struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<WaveguideGeometry> geometry;
  SellmeierModel sellmeier = SellmeierModel::congruent_linbo3_e();
  std::optional<ConversionModel> conversion;
  std::optional<NoiseSection> noise;
  std::optional<TuningSection> tuning;
  std::optional<QpmSection> qpm;
  std::optional<PairSourceModel> source;
  std::optional<DetectorsSection> detectors;
  std::optional<LayoutSection> layout;
  std::optional<BudgetSection> budget;
  std::optional<SpdSection> spd;
  std::optional<FitEfficiencySection> fit_efficiency;
  std::optional<NoiseBudgetSection> noise_budget;
  std::optional<G2Section> g2;
  std::optional<HeraldedG2Section> heralded_g2;

  static RunConfig from_json(const nlohmann::json& j);

  /// Assembles the full experiment description; throws ValidationError when a
  /// declared channel lacks its detector section.
  ExperimentLayout experiment_layout() const;
};

/// Parses a JSON config file; syntax errors become ConfigError.
nlohmann::json parse_config_file(const std::filesystem::path& path);

/// Applies a `dotted.path=value` override onto the raw JSON; the value is
/// itself parsed as JSON where possible, else taken as a string.
void apply_override(nlohmann::json& config, const std::string& assignment);

}  // namespace qfc
