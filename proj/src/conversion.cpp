#include "qfc/conversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qfc/errors.hpp"

namespace qfc {

void ConversionModel::validate() const {
  if (!(eta_max > 0.0) || eta_max > 1.0) {
    throw ValidationError("conversion: eta_max must be in (0, 1]");
  }
  if (!(eta_nor > 0.0)) throw ValidationError("conversion: eta_nor must be > 0");
  if (!(length_cm > 0.0)) throw ValidationError("conversion: length must be > 0");
}

double sin2_factor(const ConversionModel& model, double pump_w) {
  model.validate();
  if (pump_w < 0.0) throw ValidationError("conversion: pump power must be >= 0");
  const double x = std::sqrt(model.eta_nor * pump_w) * model.length_cm;
  const double s = std::sin(x);
  return s * s;
}

double efficiency(const ConversionModel& model, double pump_w) {
  return model.eta_max * sin2_factor(model, pump_w);
}

double optimal_pump(const ConversionModel& model) {
  model.validate();
  const double half_pi = 0.5 * M_PI;
  return half_pi * half_pi / (model.eta_nor * model.length_cm * model.length_cm);
}

double depletion_db(const ConversionModel& model, double pump_w) {
  if (!(pump_w > 0.0)) throw ValidationError("depletion: pump power must be > 0");
  const double s2 = sin2_factor(model, pump_w);
  const double remaining = 1.0 - s2;
  if (remaining < 1e-12) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(remaining);
}

namespace {

struct FitData {
  std::span<const EfficiencySample> samples;
  double length_cm;

  double ssr(double eta_max, double eta_nor) const {
    double total = 0.0;
    for (const auto& s : samples) {
      const double x = std::sqrt(eta_nor * s.pump_w) * length_cm;
      const double sn = std::sin(x);
      const double r = eta_max * sn * sn - s.efficiency;
      total += r * r;
    }
    return total;
  }
};

}  // namespace

ConversionFit fit_conversion(std::span<const EfficiencySample> samples, double length_cm) {
  if (!(length_cm > 0.0)) throw ValidationError("fit: length must be > 0");
  if (samples.size() < 3) throw ValidationError("fit: need at least 3 samples");
  double p_min = std::numeric_limits<double>::infinity();
  double p_max = 0.0;
  for (const auto& s : samples) {
    if (s.pump_w < 0.0) throw ValidationError("fit: pump power must be >= 0");
    if (s.efficiency < 0.0 || s.efficiency > 1.0) {
      throw ValidationError("fit: efficiency samples must lie in [0, 1]");
    }
    p_min = std::min(p_min, s.pump_w);
    p_max = std::max(p_max, s.pump_w);
  }
  if (p_max == p_min) throw FitError("fit: degenerate data, all pump powers equal");
  if (p_min > 0.0 && p_max / p_min < 3.0) {
    throw ValidationError("fit: samples must span at least a factor of 3 in pump power");
  }

  const FitData data{samples, length_cm};

  // Coarse grid over (eta_max, eta_nor). eta_nor is scanned in log space
  // around the scale where the sin^2 argument is order one at p_max.
  const double nor_scale = 1.0 / (length_cm * length_cm * p_max);
  double best_eta_max = 0.5;
  double best_eta_nor = nor_scale;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 80; ++i) {
    const double eta_nor = nor_scale * std::pow(10.0, -2.0 + 4.0 * i / 79.0);
    for (int j = 1; j <= 40; ++j) {
      const double eta_max = j / 40.0;
      const double ssr = data.ssr(eta_max, eta_nor);
      if (ssr < best_ssr) {
        best_ssr = ssr;
        best_eta_max = eta_max;
        best_eta_nor = eta_nor;
      }
    }
  }

  // Damped Gauss-Newton on (eta_max, eta_nor).
  double eta_max = best_eta_max;
  double eta_nor = best_eta_nor;
  double ssr = best_ssr;
  int iterations = 0;
  bool converged = false;
  for (; iterations < 200; ++iterations) {
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
    for (const auto& s : samples) {
      const double x = std::sqrt(eta_nor * s.pump_w) * length_cm;
      const double sn = std::sin(x);
      const double r = eta_max * sn * sn - s.efficiency;
      const double d_eta_max = sn * sn;
      // d/d eta_nor of sin^2(x) with x = sqrt(eta_nor P) L: sin(2x) x / (2 eta_nor)
      const double d_eta_nor = eta_nor > 0.0 ? eta_max * std::sin(2.0 * x) * x / (2.0 * eta_nor) : 0.0;
      jtj00 += d_eta_max * d_eta_max;
      jtj01 += d_eta_max * d_eta_nor;
      jtj11 += d_eta_nor * d_eta_nor;
      jtr0 += d_eta_max * r;
      jtr1 += d_eta_nor * r;
    }
    const double det = jtj00 * jtj11 - jtj01 * jtj01;
    if (std::abs(det) < 1e-300) throw FitError("fit: singular normal equations");
    double step_max = -(jtj11 * jtr0 - jtj01 * jtr1) / det;
    double step_nor = -(jtj00 * jtr1 - jtj01 * jtr0) / det;

    double damping = 1.0;
    double new_eta_max = eta_max;
    double new_eta_nor = eta_nor;
    double new_ssr = ssr;
    bool improved = false;
    for (int k = 0; k < 40; ++k) {
      const double cand_max = eta_max + damping * step_max;
      const double cand_nor = eta_nor + damping * step_nor;
      if (cand_max > 0.0 && cand_nor > 0.0) {
        const double cand_ssr = data.ssr(cand_max, cand_nor);
        if (cand_ssr <= ssr) {
          new_eta_max = cand_max;
          new_eta_nor = cand_nor;
          new_ssr = cand_ssr;
          improved = true;
          break;
        }
      }
      damping *= 0.5;
    }
    if (!improved) {
      converged = true;  // no descent direction left at double precision
      break;
    }
    const double rel_step = std::max(std::abs(new_eta_max - eta_max) / std::max(eta_max, 1e-30),
                                     std::abs(new_eta_nor - eta_nor) / std::max(eta_nor, 1e-30));
    eta_max = new_eta_max;
    eta_nor = new_eta_nor;
    ssr = new_ssr;
    if (rel_step < 1e-9) {
      converged = true;
      break;
    }
  }
  if (!converged) throw FitError("fit: did not converge within 200 iterations");

  // Residual covariance for the standard errors.
  double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0;
  for (const auto& s : samples) {
    const double x = std::sqrt(eta_nor * s.pump_w) * length_cm;
    const double sn = std::sin(x);
    const double d_eta_max = sn * sn;
    const double d_eta_nor = eta_max * std::sin(2.0 * x) * x / (2.0 * eta_nor);
    jtj00 += d_eta_max * d_eta_max;
    jtj01 += d_eta_max * d_eta_nor;
    jtj11 += d_eta_nor * d_eta_nor;
  }
  const double det = jtj00 * jtj11 - jtj01 * jtj01;
  const double dof = static_cast<double>(samples.size()) - 2.0;
  const double sigma2 = dof > 0.0 ? ssr / dof : 0.0;

  ConversionFit fit;
  fit.model = ConversionModel{eta_max, eta_nor, length_cm};
  fit.model.validate();
  if (det > 0.0) {
    fit.eta_max_stderr = std::sqrt(sigma2 * jtj11 / det);
    fit.eta_nor_stderr = std::sqrt(sigma2 * jtj00 / det);
  }
  fit.ssr = ssr;
  fit.iterations = iterations;
  return fit;
}

}  // namespace qfc
