#include "qfc/spd.hpp"

#include <cmath>
#include <utility>

#include "qfc/errors.hpp"
#include "qfc/units.hpp"

namespace qfc {

BudgetEntry BudgetEntry::from_db(std::string name, double db) {
  if (db < 0.0) throw ValidationError("budget: loss in dB must be >= 0");
  return BudgetEntry{std::move(name), db_to_transmission(db)};
}

BudgetEntry BudgetEntry::from_transmission(std::string name, double transmission) {
  if (!(transmission > 0.0) || transmission > 1.0) {
    throw ValidationError("budget: transmission must be in (0, 1]");
  }
  return BudgetEntry{std::move(name), transmission};
}

void LossBudget::validate() const {
  if (conversion_slot > entries.size()) {
    throw ValidationError("budget: conversion slot out of range");
  }
  if (!(spad_efficiency > 0.0) || spad_efficiency > 1.0) {
    throw ValidationError("budget: SPAD efficiency must be in (0, 1]");
  }
  double product = 1.0;
  for (const auto& e : entries) {
    if (!(e.transmission > 0.0) || e.transmission > 1.0) {
      throw ValidationError("budget: entry '" + e.name + "' transmission outside (0, 1]");
    }
    product *= e.transmission;
  }
  if (!(product > 0.0) || product > 1.0) {
    throw ValidationError("budget: cascade product outside (0, 1]");
  }
}

double LossBudget::static_transmission() const {
  double product = 1.0;
  for (const auto& e : entries) product *= e.transmission;
  return product;
}

double LossBudget::post_chip_transmission() const {
  double product = 1.0;
  for (std::size_t i = conversion_slot; i < entries.size(); ++i) {
    product *= entries[i].transmission;
  }
  return product;
}

double system_de_fixed(const LossBudget& budget, double conversion_efficiency) {
  budget.validate();
  if (conversion_efficiency < 0.0 || conversion_efficiency > 1.0) {
    throw ValidationError("system DE: conversion efficiency must be in [0, 1]");
  }
  return budget.static_transmission() * conversion_efficiency * budget.spad_efficiency;
}

double system_de(const LossBudget& budget, const ConversionModel& conversion, double pump_w) {
  return system_de_fixed(budget, efficiency(conversion, pump_w));
}

double system_ncr(const NoiseModel& noise, double post_chip_transmission,
                  const DetectorModel& spad, double pump_w) {
  if (!(post_chip_transmission > 0.0) || post_chip_transmission > 1.0) {
    throw ValidationError("system NCR: post-chip transmission must be in (0, 1]");
  }
  spad.validate();
  return ncr_on_chip(noise, pump_w) * post_chip_transmission * spad.efficiency +
         spad.dark_rate_cps;
}

std::vector<DeNcrPoint> de_ncr_curve(const LossBudget& budget, const ConversionModel& conversion,
                                     const NoiseModel& noise, const DetectorModel& spad,
                                     double pump_min_w, double pump_max_w, double step_w) {
  budget.validate();
  if (pump_min_w < 0.0 || !(pump_max_w >= pump_min_w) || !(step_w > 0.0)) {
    throw ValidationError("de/ncr curve: invalid pump power range");
  }
  const double post_chip = budget.post_chip_transmission();
  std::vector<DeNcrPoint> table;
  for (double p = pump_min_w; p <= pump_max_w + 1e-12; p += step_w) {
    const double pump = std::min(p, pump_max_w);
    DeNcrPoint point;
    point.pump_w = pump;
    point.de = system_de(budget, conversion, pump);
    point.ncr_cps = system_ncr(noise, post_chip, spad, pump);
    table.push_back(point);
  }
  return table;
}

}  // namespace qfc
