#include "qfc/photonstats.hpp"

#include <algorithm>
#include <cmath>

#include "qfc/errors.hpp"
#include "qfc/rng.hpp"
#include "qfc/units.hpp"

namespace qfc {

namespace {

/// Homogeneous Poisson arrivals over [0, duration) at the given rate,
/// timestamps floored to integer picoseconds.
PhotonTimes poisson_events(double rate_cps, std::uint64_t duration_ps, Rng& rng) {
  PhotonTimes events;
  if (rate_cps <= 0.0 || duration_ps == 0) return events;
  const double mean_gap_ps = kPicosecondsPerSecond / rate_cps;
  double t = rng.next_exponential(mean_gap_ps);
  while (t < static_cast<double>(duration_ps)) {
    events.push_back(static_cast<std::uint64_t>(t));
    t += rng.next_exponential(mean_gap_ps);
  }
  return events;
}

}  // namespace

std::uint64_t PairSourceModel::duration_ps() const {
  return static_cast<std::uint64_t>(std::llround(duration_s * kPicosecondsPerSecond));
}

std::uint64_t PairSourceModel::mode_count() const {
  return duration_ps() / static_cast<std::uint64_t>(std::llround(mode_duration_ps));
}

void PairSourceModel::validate() const {
  if (mu < 0.0) throw ValidationError("pair source: mu must be >= 0");
  if (!(mode_duration_ps >= 1.0)) throw ValidationError("pair source: mode duration must be >= 1 ps");
  if (!(duration_s > 0.0)) throw ValidationError("pair source: duration must be > 0");
}

void DetectorModel::validate() const {
  if (efficiency < 0.0 || efficiency > 1.0) {
    throw ValidationError("detector: efficiency must be in [0, 1]");
  }
  if (dark_rate_cps < 0.0 || jitter_sigma_ps < 0.0 || dead_time_ps < 0.0) {
    throw ValidationError("detector: rates and times must be >= 0");
  }
}

void QfcStage::validate() const {
  if (conversion_efficiency < 0.0 || conversion_efficiency > 1.0) {
    throw ValidationError("qfc stage: conversion efficiency must be in [0, 1]");
  }
  if (noise_rate_cps < 0.0) throw ValidationError("qfc stage: noise rate must be >= 0");
}

PairStreams simulate_pair_source(const PairSourceModel& model, std::uint64_t seed) {
  model.validate();
  Rng rng(seed);
  const std::uint64_t mode_ps = static_cast<std::uint64_t>(std::llround(model.mode_duration_ps));
  const std::uint64_t n_modes = model.mode_count();

  PairStreams out;
  out.duration_ps = model.duration_ps();
  out.signal.reserve(static_cast<std::size_t>(model.mu * static_cast<double>(n_modes) * 1.1));

  for (std::uint64_t m = 0; m < n_modes; ++m) {
    const std::uint64_t n = model.statistics == PairStatistics::kThermal
                                ? rng.next_thermal(model.mu)
                                : rng.next_poisson(model.mu);
    const std::uint64_t mode_start = m * mode_ps;
    for (std::uint64_t i = 0; i < n; ++i) {
      out.signal.push_back(mode_start + rng.next_below(mode_ps));
    }
  }
  std::sort(out.signal.begin(), out.signal.end());
  out.idler = out.signal;  // pairs share timestamps exactly
  return out;
}

PhotonTimes apply_loss(const PhotonTimes& stream, double transmission, std::uint64_t seed) {
  if (transmission < 0.0 || transmission > 1.0) {
    throw ValidationError("loss: transmission must be in [0, 1]");
  }
  Rng rng(seed);
  PhotonTimes out;
  out.reserve(static_cast<std::size_t>(static_cast<double>(stream.size()) * transmission) + 16);
  for (const std::uint64_t t : stream) {
    if (rng.next_bernoulli(transmission)) out.push_back(t);
  }
  return out;
}

std::pair<PhotonTimes, PhotonTimes> apply_beamsplitter(const PhotonTimes& stream, double ratio,
                                                       std::uint64_t seed) {
  if (ratio < 0.0 || ratio > 1.0) throw ValidationError("beamsplitter: ratio must be in [0, 1]");
  Rng rng(seed);
  PhotonTimes a;
  PhotonTimes b;
  for (const std::uint64_t t : stream) {
    if (rng.next_bernoulli(ratio)) {
      a.push_back(t);
    } else {
      b.push_back(t);
    }
  }
  return {std::move(a), std::move(b)};
}

PhotonTimes apply_qfc_stage(const PhotonTimes& stream, const QfcStage& stage,
                            std::uint64_t duration_ps, std::uint64_t seed) {
  stage.validate();
  Rng rng(seed);
  PhotonTimes converted;
  converted.reserve(stream.size());
  for (const std::uint64_t t : stream) {
    if (rng.next_bernoulli(stage.conversion_efficiency)) converted.push_back(t);
  }
  const PhotonTimes noise = poisson_events(stage.noise_rate_cps, duration_ps, rng);
  PhotonTimes out;
  out.reserve(converted.size() + noise.size());
  std::merge(converted.begin(), converted.end(), noise.begin(), noise.end(),
             std::back_inserter(out));
  return out;
}

EventStream apply_detector(const PhotonTimes& stream, const DetectorModel& detector,
                           std::uint64_t duration_ps, std::uint64_t seed, std::uint8_t channel) {
  detector.validate();
  if (duration_ps == 0) throw ValidationError("detector: duration must be > 0");
  Rng rng(seed);

  std::vector<std::uint64_t> detected;
  detected.reserve(stream.size());
  for (const std::uint64_t t : stream) {
    if (!rng.next_bernoulli(detector.efficiency)) continue;
    std::uint64_t out_t = t;
    if (detector.jitter_sigma_ps > 0.0) {
      const double shifted =
          static_cast<double>(t) + detector.jitter_sigma_ps * rng.next_normal();
      const double rounded = std::nearbyint(shifted);
      if (rounded < 0.0 || rounded >= static_cast<double>(duration_ps)) continue;
      out_t = static_cast<std::uint64_t>(rounded);
    }
    detected.push_back(out_t);
  }

  const PhotonTimes darks = poisson_events(detector.dark_rate_cps, duration_ps, rng);
  detected.insert(detected.end(), darks.begin(), darks.end());
  // stable: photons keep precedence over dark counts at equal timestamps
  std::stable_sort(detected.begin(), detected.end());

  EventStream out;
  out.channel = channel;
  out.duration_ps = duration_ps;
  out.times_ps.reserve(detected.size());
  const std::uint64_t dead = static_cast<std::uint64_t>(std::llround(detector.dead_time_ps));
  bool armed_since = false;
  std::uint64_t last = 0;
  for (const std::uint64_t t : detected) {
    if (armed_since && t - last < dead) continue;  // non-paralyzable
    out.times_ps.push_back(t);
    last = t;
    armed_since = true;
  }
  return out;
}

void ExperimentLayout::validate() const {
  source.validate();
  if (signal_arm_loss_db < 0.0 || idler_arm_loss_db < 0.0) {
    throw ValidationError("layout: arm losses must be >= 0 dB");
  }
  if (splitter_ratio < 0.0 || splitter_ratio > 1.0) {
    throw ValidationError("layout: splitter ratio must be in [0, 1]");
  }
  qfc.validate();
  signal_detector.validate();
  idler_detector.validate();
  s1_detector.validate();
  s2_detector.validate();
}

ExperimentResult run_experiment(const ExperimentLayout& layout, std::uint64_t master_seed) {
  layout.validate();
  const auto element_seed = [master_seed](std::uint64_t tag) {
    return Rng::substream(master_seed, tag).next_u64();
  };

  const PairStreams source = simulate_pair_source(layout.source, element_seed(stream_tag::kSource));
  const std::uint64_t duration = source.duration_ps;

  PhotonTimes signal = apply_loss(source.signal, db_to_transmission(layout.signal_arm_loss_db),
                                  element_seed(stream_tag::kSignalArm));
  const PhotonTimes idler = apply_loss(source.idler, db_to_transmission(layout.idler_arm_loss_db),
                                       element_seed(stream_tag::kIdlerArm));

  ExperimentResult result;
  result.duration_ps = duration;

  if (layout.kind == LayoutKind::kPair) {
    result.names = {"signal", "idler"};
    result.streams.push_back(apply_detector(signal, layout.signal_detector, duration,
                                            element_seed(stream_tag::kDetSignal), 0));
    result.streams.push_back(apply_detector(idler, layout.idler_detector, duration,
                                            element_seed(stream_tag::kDetIdler), 1));
    return result;
  }

  if (layout.kind == LayoutKind::kHspsQfc) {
    signal = apply_qfc_stage(signal, layout.qfc, duration, element_seed(stream_tag::kQfc));
  }
  auto [s1, s2] =
      apply_beamsplitter(signal, layout.splitter_ratio, element_seed(stream_tag::kSplitter));

  result.names = {"herald", "s1", "s2"};
  result.streams.push_back(apply_detector(idler, layout.idler_detector, duration,
                                          element_seed(stream_tag::kDetIdler), 0));
  result.streams.push_back(
      apply_detector(s1, layout.s1_detector, duration, element_seed(stream_tag::kDetS1), 1));
  result.streams.push_back(
      apply_detector(s2, layout.s2_detector, duration, element_seed(stream_tag::kDetS2), 2));
  return result;
}

}  // namespace qfc
