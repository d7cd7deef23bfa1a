#include "qfc/noise.hpp"

#include <cmath>
#include <limits>

#include "qfc/errors.hpp"

namespace qfc {

void NoiseModel::validate() const {
  if (a_linear < 0.0 || kappa_spdc < 0.0) {
    throw ValidationError("noise: coefficients must be >= 0");
  }
  conversion.validate();
}

double ncr_on_chip(const NoiseModel& model, double pump_w) {
  model.validate();
  if (pump_w < 0.0) throw ValidationError("noise: pump power must be >= 0");
  if (pump_w == 0.0) return 0.0;
  return model.a_linear * pump_w +
         model.kappa_spdc * pump_w * pump_w * sin2_factor(model.conversion, pump_w);
}

double loglog_slope(const NoiseModel& model, double pump_w) {
  model.validate();
  if (!(pump_w > 0.0)) throw ValidationError("slope: pump power must be > 0");
  const double total = ncr_on_chip(model, pump_w);
  if (!(total > 0.0)) throw ValidationError("slope: noise rate is zero");
  const double x = std::sqrt(model.conversion.eta_nor * pump_w) * model.conversion.length_cm;
  const double s2 = sin2_factor(model.conversion, pump_w);
  // dN/dP = a + 2 kappa P s2 + kappa P x sin(2x) / 2
  const double dn_dp = model.a_linear + 2.0 * model.kappa_spdc * pump_w * s2 +
                       0.5 * model.kappa_spdc * pump_w * x * std::sin(2.0 * x);
  return pump_w * dn_dp / total;
}

double spdc_fraction(const NoiseModel& model, double pump_w) {
  model.validate();
  const double total = ncr_on_chip(model, pump_w);
  if (!(total > 0.0)) throw ValidationError("spdc fraction: total noise rate is zero");
  const double spdc = model.kappa_spdc * pump_w * pump_w * sin2_factor(model.conversion, pump_w);
  return spdc / total;
}

double calibrate_kappa(const ConversionModel& conversion, double pump_w, double ncr_cps) {
  if (!(pump_w > 0.0) || !(ncr_cps > 0.0)) {
    throw ValidationError("noise calibration: pump power and rate must be > 0");
  }
  const double s2 = sin2_factor(conversion, pump_w);
  if (!(s2 > 0.0)) throw ValidationError("noise calibration: conversion factor is zero");
  return ncr_cps / (pump_w * pump_w * s2);
}

double linear_for_fraction_crossing(const ConversionModel& conversion, double kappa_spdc,
                                    double pump_w, double fraction) {
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw ValidationError("noise calibration: fraction must be in (0, 1)");
  }
  if (!(kappa_spdc > 0.0) || !(pump_w > 0.0)) {
    throw ValidationError("noise calibration: kappa and pump power must be > 0");
  }
  const double s2 = sin2_factor(conversion, pump_w);
  return kappa_spdc * pump_w * s2 * (1.0 / fraction - 1.0);
}

NoiseFit fit_noise(std::span<const NoiseSample> samples, const ConversionModel& conversion) {
  conversion.validate();
  if (samples.size() < 3) throw ValidationError("noise fit: need at least 3 samples");
  bool distinct = false;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].pump_w != samples[0].pump_w) distinct = true;
  }
  if (!distinct) throw FitError("noise fit: degenerate data, all pump powers equal");

  // Design matrix columns: c1 = P, c2 = P^2 sin^2 factor.
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, sy1 = 0.0, sy2 = 0.0, syy = 0.0;
  for (const auto& s : samples) {
    if (s.pump_w < 0.0 || s.ncr_cps < 0.0) {
      throw ValidationError("noise fit: samples must be non-negative");
    }
    const double c1 = s.pump_w;
    const double c2 = s.pump_w * s.pump_w * sin2_factor(conversion, s.pump_w);
    s11 += c1 * c1;
    s12 += c1 * c2;
    s22 += c2 * c2;
    sy1 += c1 * s.ncr_cps;
    sy2 += c2 * s.ncr_cps;
    syy += s.ncr_cps * s.ncr_cps;
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(det > 1e-12 * s11 * s22)) throw FitError("noise fit: degenerate design matrix");

  const auto ssr_for = [&](double a, double k) {
    return syy - 2.0 * (a * sy1 + k * sy2) + a * a * s11 + 2.0 * a * k * s12 + k * k * s22;
  };

  // Unconstrained solution, then boundary candidates if it leaves the cone.
  double a = (s22 * sy1 - s12 * sy2) / det;
  double k = (s11 * sy2 - s12 * sy1) / det;
  if (a < 0.0 || k < 0.0) {
    const double a_only = std::max(0.0, sy1 / s11);
    const double k_only = std::max(0.0, sy2 / s22);
    const double ssr_a = ssr_for(a_only, 0.0);
    const double ssr_k = ssr_for(0.0, k_only);
    if (ssr_a <= ssr_k) {
      a = a_only;
      k = 0.0;
    } else {
      a = 0.0;
      k = k_only;
    }
  }

  const double ssr = std::max(0.0, ssr_for(a, k));
  const double dof = static_cast<double>(samples.size()) - 2.0;
  const double sigma2 = dof > 0.0 ? ssr / dof : 0.0;

  NoiseFit fit;
  fit.model = NoiseModel{a, k, conversion};
  fit.model.validate();
  fit.a_linear_stderr = std::sqrt(sigma2 * s22 / det);
  fit.kappa_stderr = std::sqrt(sigma2 * s11 / det);
  fit.ssr = ssr;
  return fit;
}

}  // namespace qfc
