#pragma once

#include <span>
#include <vector>

namespace qfc {

/// Pump-power-dependent internal conversion efficiency
///   eta(P) = eta_max sin^2( sqrt(eta_nor P) L ).
/// Canonical units: eta_nor in 1/(W cm^2), L in cm, P in W.
struct ConversionModel {
  double eta_max = 0.0;
  double eta_nor = 0.0;   // 1/(W cm^2)
  double length_cm = 0.0;

  /// Converts the conventional %/(W cm^2) figure to the canonical unit.
  static double eta_nor_from_percent(double percent) { return percent / 100.0; }

  void validate() const;
};

/// sin^2(sqrt(eta_nor P) L); the efficiency without the eta_max prefactor.
/// Shared with the noise model, which upconverts with the same factor.
double sin2_factor(const ConversionModel& model, double pump_w);

/// Internal conversion efficiency at pump power P (watts at the output facet).
double efficiency(const ConversionModel& model, double pump_w);

/// Pump power maximizing the efficiency: (pi/2)^2 / (eta_nor L^2).
double optimal_pump(const ConversionModel& model);

/// Depletion of the transmitted signal, -10 log10(1 - sin^2 factor), in dB.
/// Returns +infinity when the conversion factor saturates at 1.
double depletion_db(const ConversionModel& model, double pump_w);

struct EfficiencySample {
  double pump_w = 0.0;
  double efficiency = 0.0;
};

struct ConversionFit {
  ConversionModel model;
  double eta_max_stderr = 0.0;
  double eta_nor_stderr = 0.0;
  double ssr = 0.0;
  int iterations = 0;
};

/// Least-squares fit of (eta_max, eta_nor) at fixed length. Coarse grid
/// bracket followed by damped Gauss-Newton refinement; standard errors from
/// the residual covariance. Throws FitError on degenerate data or
/// non-convergence.
ConversionFit fit_conversion(std::span<const EfficiencySample> samples, double length_cm);

}  // namespace qfc
