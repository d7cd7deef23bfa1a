#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qfc/timetag.hpp"

namespace qfc {

/// Photon arrival times in integer picoseconds before detection; kept sorted.
using PhotonTimes = std::vector<std::uint64_t>;

enum class PairStatistics { kThermal, kPoisson };

/// Photon-pair source. Time is divided into consecutive modes of
/// mode_duration_ps; the pair number per mode follows the chosen statistics
/// with mean mu, and each pair places one signal and one idler photon at the
/// same uniformly drawn timestamp inside the mode.
struct PairSourceModel {
  double mu = 0.0;
  double mode_duration_ps = 1500.0;
  double duration_s = 0.0;
  PairStatistics statistics = PairStatistics::kThermal;

  std::uint64_t duration_ps() const;
  std::uint64_t mode_count() const;
  void validate() const;
};

struct DetectorModel {
  double efficiency = 1.0;
  double dark_rate_cps = 0.0;
  double jitter_sigma_ps = 0.0;
  double dead_time_ps = 0.0;

  void validate() const;
};

struct QfcStage {
  double conversion_efficiency = 1.0;
  double noise_rate_cps = 0.0;

  void validate() const;
};

struct PairStreams {
  PhotonTimes signal;
  PhotonTimes idler;
  std::uint64_t duration_ps = 0;
};

PairStreams simulate_pair_source(const PairSourceModel& model, std::uint64_t seed);

/// Independent survival with the given probability; order preserved.
PhotonTimes apply_loss(const PhotonTimes& stream, double transmission, std::uint64_t seed);

/// Routes each photon to the first output with probability `ratio`; nothing
/// is lost or duplicated.
std::pair<PhotonTimes, PhotonTimes> apply_beamsplitter(const PhotonTimes& stream, double ratio,
                                                       std::uint64_t seed);

/// Conversion thinning plus Poissonian in-band noise merged in; the noise
/// events are indistinguishable from converted photons.
PhotonTimes apply_qfc_stage(const PhotonTimes& stream, const QfcStage& stage,
                            std::uint64_t duration_ps, std::uint64_t seed);

/// Efficiency thinning, Gaussian jitter (rounded to integer ps), dark counts,
/// then non-paralyzable dead-time pruning, in that order.
EventStream apply_detector(const PhotonTimes& stream, const DetectorModel& detector,
                           std::uint64_t duration_ps, std::uint64_t seed,
                           std::uint8_t channel = 0);

enum class LayoutKind { kPair, kHsps, kHspsQfc };

/// One of the three correlation experiments:
///   kPair    - signal and idler arms straight onto two detectors
///   kHsps    - idler heralds; signal split 50/50 onto two detectors
///   kHspsQfc - as kHsps with the conversion stage in the signal arm before
///              the splitter
struct ExperimentLayout {
  LayoutKind kind = LayoutKind::kPair;
  PairSourceModel source;
  double signal_arm_loss_db = 0.0;
  double idler_arm_loss_db = 0.0;
  double splitter_ratio = 0.5;
  QfcStage qfc;
  DetectorModel signal_detector;
  DetectorModel idler_detector;
  DetectorModel s1_detector;
  DetectorModel s2_detector;

  void validate() const;
};

/// Channel assignment of the emitted streams:
///   kPair: 0 = signal, 1 = idler; kHsps / kHspsQfc: 0 = herald, 1 = s1, 2 = s2.
struct ExperimentResult {
  std::uint64_t duration_ps = 0;
  std::vector<std::string> names;
  std::vector<EventStream> streams;
};

/// Composes the element operations for the layout. Every element draws from
/// its own substream of the master seed (see Rng::substream), so the same
/// seed yields bit-identical shared stages across layouts.
ExperimentResult run_experiment(const ExperimentLayout& layout, std::uint64_t master_seed);

/// Substream tags used by run_experiment, one per element.
namespace stream_tag {
inline constexpr std::uint64_t kSource = 1;
inline constexpr std::uint64_t kSignalArm = 2;
inline constexpr std::uint64_t kIdlerArm = 3;
inline constexpr std::uint64_t kQfc = 4;
inline constexpr std::uint64_t kSplitter = 5;
inline constexpr std::uint64_t kDetSignal = 6;
inline constexpr std::uint64_t kDetIdler = 7;
inline constexpr std::uint64_t kDetS1 = 8;
inline constexpr std::uint64_t kDetS2 = 9;
}  // namespace stream_tag

}  // namespace qfc
