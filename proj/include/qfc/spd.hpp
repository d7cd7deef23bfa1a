#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qfc/conversion.hpp"
#include "qfc/noise.hpp"
#include "qfc/photonstats.hpp"

namespace qfc {

/// One fixed element of the detection chain, stored as a transmission.
struct BudgetEntry {
  std::string name;
  double transmission = 1.0;

  static BudgetEntry from_db(std::string name, double db);
  static BudgetEntry from_transmission(std::string name, double transmission);
};

/// Ordered cascade of fixed transmissions plus the two dynamic slots: the
/// internal conversion efficiency (inserted at conversion_slot) and the SPAD
/// efficiency (applied last).
struct LossBudget {
  std::vector<BudgetEntry> entries;
  std::size_t conversion_slot = 0;  // index in `entries` where the chip sits
  double spad_efficiency = 1.0;

  void validate() const;
  double static_transmission() const;
  /// Product of the entries downstream of the conversion slot; the path
  /// on-chip noise takes to the SPAD.
  double post_chip_transmission() const;
};

/// System detection efficiency with a fixed conversion value in place of the
/// dynamic slot.
double system_de_fixed(const LossBudget& budget, double conversion_efficiency);

/// System detection efficiency at pump power P; the conversion slot takes the
/// model value efficiency(conversion, P).
double system_de(const LossBudget& budget, const ConversionModel& conversion, double pump_w);

/// Detected noise count rate: on-chip NCR through the post-chip transmission
/// and SPAD efficiency, plus the SPAD dark rate.
double system_ncr(const NoiseModel& noise, double post_chip_transmission,
                  const DetectorModel& spad, double pump_w);

struct DeNcrPoint {
  double pump_w = 0.0;
  double de = 0.0;
  double ncr_cps = 0.0;
};

/// Sweeps DE and NCR over [pump_min_w, pump_max_w] in steps of step_w.
std::vector<DeNcrPoint> de_ncr_curve(const LossBudget& budget, const ConversionModel& conversion,
                                     const NoiseModel& noise, const DetectorModel& spad,
                                     double pump_min_w, double pump_max_w, double step_w);

}  // namespace qfc
