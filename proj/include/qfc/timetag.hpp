#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qfc {

/// Channel-tagged detection timestamps in integer picoseconds, sorted
/// non-decreasing, all strictly below the acquisition duration.
struct EventStream {
  std::uint8_t channel = 0;
  std::uint64_t duration_ps = 0;
  std::vector<std::uint64_t> times_ps;

  void validate() const;
};

/// In-memory image of a timetag file: a shared resolution and one stream per
/// channel 0..n-1.
struct TimetagFile {
  std::uint64_t resolution_ps = 1;
  std::vector<EventStream> streams;
};

/// Binary "QTAG1" container.
///   bytes 0-4   magic "QTAG1"
///   byte  5     format version (1)
///   bytes 6-13  resolution, picoseconds per tick, little-endian u64
///   byte  14    channel count
///   bytes 15-22 acquisition duration in ticks, little-endian u64
/// followed by 9-byte records (u8 channel, little-endian u64 timestamp in
/// ticks) sorted by timestamp, ties by channel. Re-serializing a read file is
/// byte-identical.
void write_timetag(const TimetagFile& file, const std::filesystem::path& path);
TimetagFile read_timetag(const std::filesystem::path& path);

/// Single-channel conveniences (resolution 1 ps, channel 0).
void write_stream(const EventStream& stream, const std::filesystem::path& path);
EventStream read_stream(const std::filesystem::path& path);

/// CSV alternative, header `channel,timestamp_ps`, rows sorted by
/// (timestamp, channel). The CSV carries no duration, so reading takes it as
/// an argument.
void write_streams_csv(const std::vector<EventStream>& streams,
                       const std::filesystem::path& path);
std::vector<EventStream> read_streams_csv(const std::filesystem::path& path,
                                          std::uint64_t duration_ps);

/// Number of (t_a, t_b) pairs with |t_b - t_a - delay| <= tau_b / 2, the
/// window inclusive at both edges and exact in integer arithmetic. Events may
/// participate in multiple pairs. Single forward merge pass.
std::uint64_t count_coincidences(const EventStream& a, const EventStream& b,
                                 std::uint64_t tau_b_ps, std::int64_t delay_ps);

struct CorrelationHistogram {
  std::uint64_t tau_b_ps = 0;
  std::vector<std::int64_t> delays_ps;   // odd count, centered on zero
  std::vector<std::uint64_t> raw;        // coincidences per delay bin
  std::vector<double> g2;                // raw / (N_a N_b tau_b T)
  double rate_a_cps = 0.0;
  double rate_b_cps = 0.0;
};

/// Normalized cross-correlation over delay bins k tau_b, k = -K..K with
/// K = max_delay / tau_b. Each bin applies the same inclusive window as
/// count_coincidences.
CorrelationHistogram cross_correlation(const EventStream& a, const EventStream& b,
                                       std::uint64_t tau_b_ps, std::int64_t max_delay_ps);

struct HeraldedG2 {
  std::uint64_t tau_b_ps = 0;
  std::uint64_t herald_count = 0;
  std::uint64_t n_s1i_zero = 0;          // herald-s1 coincidences at zero delay
  std::vector<std::int64_t> delays_ps;
  std::vector<std::uint64_t> n_ssi;      // same-herald triples per delay
  std::vector<std::uint64_t> n_s2i;      // herald-s2 coincidences per delay
  std::vector<double> g2h;
  std::vector<bool> flagged;             // zero denominator at this delay
};

/// Heralded self-correlation
///   g2H(tau) = N_ssi(tau) N_i / (N_s1i(0) N_s2i(tau)),
/// where a triple requires s1 coincident with a herald at zero delay and s2
/// coincident with the SAME herald at the bin delay. Zero denominators flag
/// the bin (value 0) rather than fail.
HeraldedG2 heralded_g2(const EventStream& herald, const EventStream& s1, const EventStream& s2,
                       std::uint64_t tau_b_ps, std::int64_t max_delay_ps);

}  // namespace qfc
