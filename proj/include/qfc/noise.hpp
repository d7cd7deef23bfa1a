#pragma once

#include <span>

#include "qfc/conversion.hpp"

namespace qfc {

/// On-chip noise count rate versus pump power,
///   N(P) = a_linear P + kappa_spdc P^2 sin^2(sqrt(eta_nor P) L).
/// The quadratic term is the cascaded second-harmonic/down-conversion noise
/// reaching the sum-frequency band through the same upconversion factor as
/// the signal; everything else in-band is lumped into the linear term. All
/// rates refer to the detection bandwidth the coefficients were calibrated at.
struct NoiseModel {
  double a_linear = 0.0;     // cps/W
  double kappa_spdc = 0.0;   // cps/W^2
  ConversionModel conversion;

  void validate() const;
};

double ncr_on_chip(const NoiseModel& model, double pump_w);

/// Analytic d ln N / d ln P. For a pure quadratic-term model this equals
/// 2 + x cot(x) with x = sqrt(eta_nor P) L.
double loglog_slope(const NoiseModel& model, double pump_w);

/// Fraction of the total rate contributed by the quadratic (SPDC) term.
double spdc_fraction(const NoiseModel& model, double pump_w);

/// kappa_spdc that reproduces ncr_cps at pump_w with a_linear = 0.
double calibrate_kappa(const ConversionModel& conversion, double pump_w, double ncr_cps);

/// a_linear placing the SPDC fraction at `fraction` at the given pump power,
/// for a fixed kappa_spdc.
double linear_for_fraction_crossing(const ConversionModel& conversion, double kappa_spdc,
                                    double pump_w, double fraction = 0.5);

struct NoiseSample {
  double pump_w = 0.0;
  double ncr_cps = 0.0;
};

struct NoiseFit {
  NoiseModel model;
  double a_linear_stderr = 0.0;
  double kappa_stderr = 0.0;
  double ssr = 0.0;
};

/// Non-negative least squares for (a_linear, kappa_spdc); the model is linear
/// in both coefficients once the conversion model is fixed, so this is an
/// exact constrained solve. Throws FitError on a degenerate design matrix.
NoiseFit fit_noise(std::span<const NoiseSample> samples, const ConversionModel& conversion);

}  // namespace qfc
