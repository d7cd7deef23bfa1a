#pragma once

#include <optional>
#include <vector>

#include "qfc/sellmeier.hpp"

namespace qfc {

/// Etched ridge on a thin film: vertical dimensions in nm, lateral in um.
/// poling_period_um == 0 means "unset".
struct WaveguideGeometry {
  double film_thickness_nm = 0.0;
  double etch_depth_nm = 0.0;
  double top_width_um = 0.0;
  double sidewall_angle_deg = 90.0;
  double length_mm = 0.0;
  double poling_period_um = 0.0;
  double cladding_top_index = 1.0;
  double cladding_bottom_index = 1.444;

  bool has_poling() const { return poling_period_um > 0.0; }
  double length_um() const { return length_mm * 1e3; }
  double length_cm() const { return length_mm * 0.1; }

  void validate() const;
};

/// Signal + pump + sum-frequency wavelengths tied by energy conservation
/// 1/sum = 1/signal + 1/pump.
struct WavelengthTriple {
  double signal_nm = 0.0;
  double pump_nm = 0.0;
  double sum_nm = 0.0;

  /// Derives the sum-frequency wavelength from signal and pump.
  static WavelengthTriple from_signal_pump(double signal_nm, double pump_nm);

  /// Accepts an explicit triple; throws unless energy conservation holds to
  /// 1e-9 relative.
  static WavelengthTriple checked(double signal_nm, double pump_nm, double sum_nm);
};

enum class SlabPolarization { kTE, kTM };

/// Effective index of a three-layer slab mode, solved by bracketed bisection
/// of the transcendental dispersion relation to 1e-12 on n_eff. Thickness in
/// nm, wavelength in nm. Throws CutoffError when the requested mode order has
/// no root (mode below cutoff).
double slab_effective_index(double core_index, double substrate_index, double cover_index,
                            double thickness_nm, double lambda_nm, int mode_order,
                            SlabPolarization pol = SlabPolarization::kTM);

/// Effective index of the fundamental quasi-TM ridge mode by the effective
/// index method: vertical TM solves in the ridge and outer-slab regions, then
/// a lateral TE solve across the ridge width taken at half the etch depth.
/// A fully etched ridge (etch == film) uses the larger cladding index as the
/// lateral background.
double ridge_effective_index(const WaveguideGeometry& geometry, const SellmeierModel& model,
                             double lambda_nm);

/// Group index n - lambda dn/dlambda of the ridge mode, central difference
/// with a 1 nm step.
double group_index(const WaveguideGeometry& geometry, const SellmeierModel& model,
                   double lambda_nm);

/// Signed quasi-phase-matched mismatch in rad/um:
///   dk = 2 pi (n_sf/l_sf - n_p/l_p - n_s/l_s) - 2 pi / poling_period.
double phase_mismatch(const WaveguideGeometry& geometry, const SellmeierModel& model,
                      const WavelengthTriple& triple);

/// First-order poling period (um) that zeroes the mismatch for this triple.
/// Throws when the material mismatch term is zero or negative.
double qpm_period(const WaveguideGeometry& geometry, const SellmeierModel& model,
                  const WavelengthTriple& triple);

/// Bulk-index variants: same expressions evaluated with the material index
/// directly, skipping the waveguide solves.
double bulk_phase_mismatch(const SellmeierModel& model, const WavelengthTriple& triple,
                           double poling_period_um);
double bulk_qpm_period(const SellmeierModel& model, const WavelengthTriple& triple);

/// Facet etalon modulating the tuning curve. reflectivity < 0 selects the
/// normal-incidence Fresnel value from n_eff at the curve center.
struct FringeSpec {
  double reflectivity = -1.0;
};

/// Calibration mapping applied to the modeled mismatch before the sinc^2:
///   dk_eff = slope_scale * dk_model + offset_rad_per_um.
struct TuningCalibration {
  double offset_rad_per_um = 0.0;
  double slope_scale = 1.0;
};

struct TuningRange {
  double min_nm = 0.0;
  double max_nm = 0.0;
  double step_nm = 0.0;
};

struct TuningCurve {
  std::vector<double> signal_nm;
  std::vector<double> relative_efficiency;  // normalized, peak == 1
  double center_nm = 0.0;
  double fwhm_nm = 0.0;
};

/// Relative sum-frequency efficiency versus signal wavelength at fixed pump.
/// sinc^2(dk_eff L / 2), sampled over the range plus the exact center, peak
/// normalized to 1; FWHM by linear interpolation between the outermost
/// half-maximum crossings. Throws when the range brackets no phase-matching
/// point.
TuningCurve tuning_curve(const WaveguideGeometry& geometry, const SellmeierModel& model,
                         double pump_nm, const TuningRange& range,
                         const TuningCalibration& calibration = {},
                         const std::optional<FringeSpec>& fringe = std::nullopt);

/// Picks (offset, slope_scale) so the curve centers exactly on
/// target_center_nm with the requested FWHM.
TuningCalibration calibrate_tuning(const WaveguideGeometry& geometry,
                                   const SellmeierModel& model, double pump_nm,
                                   double target_center_nm, double target_fwhm_nm);

}  // namespace qfc
