#include "qfc/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfc/errors.hpp"

namespace qfc {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
// sinc^2 falls to one half at this argument.
constexpr double kSincHalfMax = 1.3915573810029002;

double sinc2(double x) {
  if (std::abs(x) < 1e-9) return 1.0 - x * x / 3.0;
  const double s = std::sin(x) / x;
  return s * s;
}

struct SlabProblem {
  double core;
  double substrate;
  double cover;
  double thickness_um;
  double lambda_um;
  int mode_order;
  SlabPolarization pol;

  // Dispersion residual; monotone decreasing in n_eff, positive below the
  // mode root and negative above it.
  double residual(double n_eff) const {
    const double k0 = kTwoPi / lambda_um;
    const double kappa = k0 * std::sqrt(std::max(core * core - n_eff * n_eff, 0.0));
    const double gamma_s = k0 * std::sqrt(std::max(n_eff * n_eff - substrate * substrate, 0.0));
    const double gamma_c = k0 * std::sqrt(std::max(n_eff * n_eff - cover * cover, 0.0));
    if (kappa <= 0.0) return -(mode_order + 1) * M_PI;
    double phase_s = 0.0;
    double phase_c = 0.0;
    if (pol == SlabPolarization::kTM) {
      phase_s = std::atan((core * core) / (substrate * substrate) * gamma_s / kappa);
      phase_c = std::atan((core * core) / (cover * cover) * gamma_c / kappa);
    } else {
      phase_s = std::atan(gamma_s / kappa);
      phase_c = std::atan(gamma_c / kappa);
    }
    return kappa * thickness_um - mode_order * M_PI - phase_s - phase_c;
  }
};

}  // namespace

void WaveguideGeometry::validate() const {
  if (!(film_thickness_nm > 0.0)) throw ValidationError("geometry: film thickness must be > 0");
  if (!(etch_depth_nm > 0.0) || etch_depth_nm > film_thickness_nm) {
    throw ValidationError("geometry: etch depth must satisfy 0 < etch <= film thickness");
  }
  if (!(top_width_um > 0.0)) throw ValidationError("geometry: top width must be > 0");
  if (!(sidewall_angle_deg > 0.0) || sidewall_angle_deg > 90.0) {
    throw ValidationError("geometry: sidewall angle must be in (0, 90] degrees");
  }
  if (!(length_mm > 0.0)) throw ValidationError("geometry: length must be > 0");
  if (poling_period_um < 0.0) throw ValidationError("geometry: poling period must be positive or unset");
  if (!(cladding_top_index >= 1.0) || !(cladding_bottom_index >= 1.0)) {
    throw ValidationError("geometry: cladding indices must be >= 1");
  }
}

WavelengthTriple WavelengthTriple::from_signal_pump(double signal_nm, double pump_nm) {
  if (!(signal_nm > 0.0) || !(pump_nm > 0.0)) {
    throw ValidationError("wavelength triple: signal and pump must be > 0");
  }
  WavelengthTriple t;
  t.signal_nm = signal_nm;
  t.pump_nm = pump_nm;
  t.sum_nm = 1.0 / (1.0 / signal_nm + 1.0 / pump_nm);
  return t;
}

WavelengthTriple WavelengthTriple::checked(double signal_nm, double pump_nm, double sum_nm) {
  if (!(signal_nm > 0.0) || !(pump_nm > 0.0) || !(sum_nm > 0.0)) {
    throw ValidationError("wavelength triple: wavelengths must be > 0");
  }
  const double lhs = 1.0 / sum_nm;
  const double rhs = 1.0 / signal_nm + 1.0 / pump_nm;
  if (std::abs(lhs - rhs) > 1e-9 * rhs) {
    std::ostringstream msg;
    msg << "wavelength triple: energy conservation violated (1/sum = " << lhs
        << ", 1/signal + 1/pump = " << rhs << ")";
    throw ValidationError(msg.str());
  }
  return WavelengthTriple{signal_nm, pump_nm, sum_nm};
}

double slab_effective_index(double core_index, double substrate_index, double cover_index,
                            double thickness_nm, double lambda_nm, int mode_order,
                            SlabPolarization pol) {
  if (!(thickness_nm > 0.0)) throw ValidationError("slab: thickness must be > 0");
  if (mode_order < 0) throw ValidationError("slab: mode order must be >= 0");
  if (!(core_index > std::max(substrate_index, cover_index))) {
    throw ValidationError("slab: core index must exceed both claddings");
  }
  const SlabProblem problem{core_index, substrate_index, cover_index,
                            thickness_nm * 1e-3,        lambda_nm * 1e-3,
                            mode_order,                 pol};
  double lo = std::max(substrate_index, cover_index) + 1e-12;
  double hi = core_index - 1e-14;
  if (problem.residual(lo) <= 0.0) {
    std::ostringstream msg;
    msg << "slab: mode order " << mode_order << " below cutoff (thickness " << thickness_nm
        << " nm at " << lambda_nm << " nm)";
    throw CutoffError(msg.str());
  }
  // residual is monotone decreasing and negative at the core line.
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (problem.residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ridge_effective_index(const WaveguideGeometry& geometry, const SellmeierModel& model,
                             double lambda_nm) {
  geometry.validate();
  const double n_core = refractive_index(model, lambda_nm);
  const double n_top = geometry.cladding_top_index;
  const double n_bot = geometry.cladding_bottom_index;
  if (!(n_core > std::max(n_top, n_bot))) {
    throw ValidationError("ridge: film index must exceed both claddings");
  }

  const double n_ridge = slab_effective_index(n_core, n_bot, n_top, geometry.film_thickness_nm,
                                              lambda_nm, 0, SlabPolarization::kTM);

  const double slab_thickness_nm = geometry.film_thickness_nm - geometry.etch_depth_nm;
  double n_outer = 0.0;
  if (slab_thickness_nm <= 0.0) {
    // Fully etched: the lateral background is bare cladding.
    n_outer = std::max(n_top, n_bot);
  } else {
    n_outer = slab_effective_index(n_core, n_bot, n_top, slab_thickness_nm, lambda_nm, 0,
                                   SlabPolarization::kTM);
  }

  // Trapezoidal cross-section represented by its width at half the etch depth.
  const double angle_rad = geometry.sidewall_angle_deg * M_PI / 180.0;
  const double width_um = geometry.top_width_um + (geometry.etch_depth_nm * 1e-3) / std::tan(angle_rad);

  return slab_effective_index(n_ridge, n_outer, n_outer, width_um * 1e3, lambda_nm, 0,
                              SlabPolarization::kTE);
}

double group_index(const WaveguideGeometry& geometry, const SellmeierModel& model,
                   double lambda_nm) {
  const double step_nm = 1.0;
  const double n0 = ridge_effective_index(geometry, model, lambda_nm);
  const double n_minus = ridge_effective_index(geometry, model, lambda_nm - step_nm);
  const double n_plus = ridge_effective_index(geometry, model, lambda_nm + step_nm);
  const double dn_dlambda = (n_plus - n_minus) / (2.0 * step_nm);
  return n0 - lambda_nm * dn_dlambda;
}

namespace {

// Material + waveguide mismatch term n_sf/l_sf - n_p/l_p - n_s/l_s in 1/um.
double guided_mismatch_per_um(const WaveguideGeometry& geometry, const SellmeierModel& model,
                              const WavelengthTriple& triple) {
  const double n_s = ridge_effective_index(geometry, model, triple.signal_nm);
  const double n_p = ridge_effective_index(geometry, model, triple.pump_nm);
  const double n_sf = ridge_effective_index(geometry, model, triple.sum_nm);
  return n_sf / (triple.sum_nm * 1e-3) - n_p / (triple.pump_nm * 1e-3) -
         n_s / (triple.signal_nm * 1e-3);
}

double bulk_mismatch_per_um(const SellmeierModel& model, const WavelengthTriple& triple) {
  const double n_s = refractive_index(model, triple.signal_nm);
  const double n_p = refractive_index(model, triple.pump_nm);
  const double n_sf = refractive_index(model, triple.sum_nm);
  return n_sf / (triple.sum_nm * 1e-3) - n_p / (triple.pump_nm * 1e-3) -
         n_s / (triple.signal_nm * 1e-3);
}

double period_from_mismatch(double mismatch_per_um) {
  if (mismatch_per_um <= 1e-12) {
    throw Error("qpm: zero or negative material mismatch, no first-order poling period");
  }
  return 1.0 / mismatch_per_um;
}

}  // namespace

double phase_mismatch(const WaveguideGeometry& geometry, const SellmeierModel& model,
                      const WavelengthTriple& triple) {
  if (!geometry.has_poling()) throw ValidationError("phase mismatch: poling period unset");
  return kTwoPi * guided_mismatch_per_um(geometry, model, triple) -
         kTwoPi / geometry.poling_period_um;
}

double qpm_period(const WaveguideGeometry& geometry, const SellmeierModel& model,
                  const WavelengthTriple& triple) {
  return period_from_mismatch(guided_mismatch_per_um(geometry, model, triple));
}

double bulk_phase_mismatch(const SellmeierModel& model, const WavelengthTriple& triple,
                           double poling_period_um) {
  if (!(poling_period_um > 0.0)) throw ValidationError("phase mismatch: poling period unset");
  return kTwoPi * bulk_mismatch_per_um(model, triple) - kTwoPi / poling_period_um;
}

double bulk_qpm_period(const SellmeierModel& model, const WavelengthTriple& triple) {
  return period_from_mismatch(bulk_mismatch_per_um(model, triple));
}

namespace {

struct EffectiveMismatch {
  const WaveguideGeometry& geometry;
  const SellmeierModel& model;
  double pump_nm;
  TuningCalibration calibration;

  double operator()(double signal_nm) const {
    const auto triple = WavelengthTriple::from_signal_pump(signal_nm, pump_nm);
    return calibration.slope_scale * phase_mismatch(geometry, model, triple) +
           calibration.offset_rad_per_um;
  }
};

// Linear-interpolated half-maximum crossing between samples i and i+1.
double interpolate_crossing(const std::vector<double>& x, const std::vector<double>& y,
                            std::size_t i, double level) {
  const double t = (level - y[i]) / (y[i + 1] - y[i]);
  return x[i] + t * (x[i + 1] - x[i]);
}

}  // namespace

TuningCurve tuning_curve(const WaveguideGeometry& geometry, const SellmeierModel& model,
                         double pump_nm, const TuningRange& range,
                         const TuningCalibration& calibration,
                         const std::optional<FringeSpec>& fringe) {
  geometry.validate();
  if (!geometry.has_poling()) throw ValidationError("tuning curve: poling period unset");
  if (!(range.step_nm > 0.0) || !(range.max_nm > range.min_nm)) {
    throw ValidationError("tuning curve: invalid wavelength range");
  }

  const EffectiveMismatch dk{geometry, model, pump_nm, calibration};

  std::vector<double> grid;
  for (double w = range.min_nm; w <= range.max_nm + 1e-9; w += range.step_nm) {
    grid.push_back(std::min(w, range.max_nm));
  }

  // Locate the phase-matching point: first sign change of dk_eff on the grid.
  double center = 0.0;
  bool found = false;
  double prev = dk(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = dk(grid[i]);
    if (prev == 0.0) {
      center = grid[i - 1];
      found = true;
      break;
    }
    if ((prev > 0.0) != (cur > 0.0)) {
      double lo = grid[i - 1];
      double hi = grid[i];
      double f_lo = prev;
      for (int iter = 0; iter < 100 && hi - lo > 1e-9; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = dk(mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      center = 0.5 * (lo + hi);
      found = true;
      break;
    }
    prev = cur;
  }
  if (!found) throw Error("tuning curve: no phase-matching point in range");

  // Sample the exact center too, so the peak value is exactly 1 there.
  auto insert_at = std::lower_bound(grid.begin(), grid.end(), center);
  if (insert_at == grid.end() || std::abs(*insert_at - center) > 1e-12) {
    grid.insert(insert_at, center);
  }

  const double half_length_um = 0.5 * geometry.length_um();
  std::vector<double> eff(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    eff[i] = sinc2(dk(grid[i]) * half_length_um);
  }

  if (fringe) {
    double reflectivity = fringe->reflectivity;
    if (reflectivity < 0.0) {
      const double n_center = ridge_effective_index(geometry, model, center);
      reflectivity = (n_center - 1.0) * (n_center - 1.0) / ((n_center + 1.0) * (n_center + 1.0));
    }
    if (reflectivity >= 1.0) throw ValidationError("tuning curve: fringe reflectivity must be < 1");
    const double n_g = group_index(geometry, model, center);
    const double finesse_coeff = 4.0 * reflectivity / ((1.0 - reflectivity) * (1.0 - reflectivity));
    const double opd_um = 2.0 * n_g * geometry.length_um();
    // Airy transmission anchored so the etalon peaks at the curve center;
    // successive maxima are spaced by lambda^2 / (2 n_g L).
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double phase = M_PI * opd_um * (1.0 / (grid[i] * 1e-3) - 1.0 / (center * 1e-3));
      const double s = std::sin(phase);
      eff[i] /= 1.0 + finesse_coeff * s * s;
    }
  }

  const double peak = *std::max_element(eff.begin(), eff.end());
  if (!(peak > 0.0)) throw Error("tuning curve: degenerate (all-zero) curve");
  for (double& e : eff) e /= peak;

  // FWHM between the outermost half-maximum crossings.
  const std::size_t imax =
      static_cast<std::size_t>(std::max_element(eff.begin(), eff.end()) - eff.begin());
  double left = 0.0;
  double right = 0.0;
  bool have_left = false;
  bool have_right = false;
  for (std::size_t i = 0; i + 1 <= imax && i + 1 < grid.size(); ++i) {
    if (eff[i] < 0.5 && eff[i + 1] >= 0.5) {
      left = interpolate_crossing(grid, eff, i, 0.5);
      have_left = true;
      break;
    }
  }
  for (std::size_t i = grid.size() - 1; i > imax; --i) {
    if (eff[i] < 0.5 && eff[i - 1] >= 0.5) {
      const double t = (0.5 - eff[i]) / (eff[i - 1] - eff[i]);
      right = grid[i] + t * (grid[i - 1] - grid[i]);
      have_right = true;
      break;
    }
  }
  if (!have_left || !have_right) {
    throw Error("tuning curve: half maximum not bracketed by the wavelength range");
  }

  TuningCurve curve;
  curve.signal_nm = std::move(grid);
  curve.relative_efficiency = std::move(eff);
  curve.center_nm = center;
  curve.fwhm_nm = right - left;
  return curve;
}

TuningCalibration calibrate_tuning(const WaveguideGeometry& geometry, const SellmeierModel& model,
                                   double pump_nm, double target_center_nm,
                                   double target_fwhm_nm) {
  geometry.validate();
  if (!(target_fwhm_nm > 0.0)) throw ValidationError("calibration: target FWHM must be > 0");
  const EffectiveMismatch dk{geometry, model, pump_nm, TuningCalibration{}};
  const double dk_center = dk(target_center_nm);
  const double step_nm = 0.1;
  const double slope =
      (dk(target_center_nm + step_nm) - dk(target_center_nm - step_nm)) / (2.0 * step_nm);
  if (slope == 0.0) throw Error("calibration: mismatch has zero slope at the target center");
  const double raw_fwhm_nm =
      4.0 * kSincHalfMax / (geometry.length_um() * std::abs(slope));
  TuningCalibration cal;
  cal.slope_scale = raw_fwhm_nm / target_fwhm_nm;
  cal.offset_rad_per_um = -cal.slope_scale * dk_center;
  return cal;
}

}  // namespace qfc
