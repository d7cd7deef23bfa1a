#include "qfc/sellmeier.hpp"

#include <cmath>
#include <sstream>

#include "qfc/errors.hpp"

namespace qfc {

SellmeierModel SellmeierModel::congruent_linbo3_e(double temperature_c) {
  SellmeierModel m;
  m.a1 = 5.35583;
  m.a2 = 0.100473;
  m.a3 = 0.20692;
  m.a4 = 100.0;
  m.a5 = 11.34927;
  m.a6 = 1.5334e-2;
  m.b1 = 4.629e-7;
  m.b2 = 3.862e-8;
  m.b3 = -0.89e-8;
  m.b4 = 2.657e-5;
  m.min_wavelength_um = 0.4;
  m.max_wavelength_um = 5.0;
  m.temperature_c = temperature_c;
  return m;
}

SellmeierModel SellmeierModel::constant_index(double n) {
  SellmeierModel m;
  m.a1 = n * n;
  m.min_wavelength_um = 0.05;
  m.max_wavelength_um = 100.0;
  return m;
}

void SellmeierModel::validate() const {
  if (!(min_wavelength_um > 0.0) || !(max_wavelength_um > min_wavelength_um)) {
    throw ValidationError("sellmeier: invalid wavelength range");
  }
}

double refractive_index(const SellmeierModel& model, double lambda_nm) {
  model.validate();
  const double lambda_um = lambda_nm * 1e-3;
  if (lambda_um < model.min_wavelength_um || lambda_um > model.max_wavelength_um) {
    std::ostringstream msg;
    msg << "sellmeier: wavelength " << lambda_nm << " nm outside valid range ["
        << model.min_wavelength_um << ", " << model.max_wavelength_um << "] um";
    throw ValidationError(msg.str());
  }
  const double t = model.temperature_c;
  const double f = (t - 24.5) * (t + 570.82);
  const double l2 = lambda_um * lambda_um;
  const double r3 = model.a3 + model.b3 * f;
  const double n2 = model.a1 + model.b1 * f + (model.a2 + model.b2 * f) / (l2 - r3 * r3) +
                    (model.a4 + model.b4 * f) / (l2 - model.a5 * model.a5) - model.a6 * l2;
  if (!(n2 > 1.0)) {
    throw ValidationError("sellmeier: model evaluates to n <= 1; coefficients unusable here");
  }
  return std::sqrt(n2);
}

}  // namespace qfc
