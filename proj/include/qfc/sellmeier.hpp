#pragma once

namespace qfc {

/// Temperature-dependent Sellmeier model for the extraordinary index of
/// congruent lithium niobate,
///
///   n^2 = a1 + b1 f + (a2 + b2 f) / (L^2 - (a3 + b3 f)^2)
///       + (a4 + b4 f) / (L^2 - a5^2) - a6 L^2,
///
/// with L the wavelength in micrometers and f = (T - 24.5)(T + 570.82),
/// T in degrees Celsius. Default coefficients are the congruent-LiNbO3
/// extraordinary set of D. H. Jundt, Opt. Lett. 22, 1553 (1997), valid for
/// 0.4-5.0 um.
struct SellmeierModel {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;
  double a5 = 0.0;
  double a6 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double b4 = 0.0;
  double min_wavelength_um = 0.0;
  double max_wavelength_um = 0.0;
  double temperature_c = 18.0;

  static SellmeierModel congruent_linbo3_e(double temperature_c = 18.0);

  /// Dispersionless stand-in with n(lambda) = n everywhere; used in tests and
  /// for analytic sanity checks.
  static SellmeierModel constant_index(double n);

  void validate() const;
};

/// Extraordinary refractive index at the given vacuum wavelength.
/// Throws ValidationError outside the model's valid range.
double refractive_index(const SellmeierModel& model, double lambda_nm);

}  // namespace qfc
