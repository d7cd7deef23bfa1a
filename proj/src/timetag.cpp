#include "qfc/timetag.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qfc/errors.hpp"
#include "qfc/units.hpp"

namespace qfc {

namespace {

constexpr char kMagic[5] = {'Q', 'T', 'A', 'G', '1'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 23;
constexpr std::size_t kRecordSize = 9;
// Keeps every scaled-window computation inside int64.
constexpr std::uint64_t kMaxDuration = 1ULL << 62;

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

void EventStream::validate() const {
  if (duration_ps == 0 || duration_ps > kMaxDuration) {
    throw ValidationError("event stream: duration must be in (0, 2^62] ps");
  }
  std::uint64_t prev = 0;
  bool first = true;
  for (const std::uint64_t t : times_ps) {
    if (!first && t < prev) throw ValidationError("event stream: timestamps not sorted");
    if (t >= duration_ps) throw ValidationError("event stream: timestamp beyond duration");
    prev = t;
    first = false;
  }
}

void write_timetag(const TimetagFile& file, const std::filesystem::path& path) {
  if (file.resolution_ps == 0) throw ValidationError("timetag: resolution must be > 0");
  if (file.streams.empty()) throw ValidationError("timetag: no streams");
  if (file.streams.size() > 255) throw ValidationError("timetag: too many channels");
  const std::uint64_t duration = file.streams.front().duration_ps;
  for (std::size_t i = 0; i < file.streams.size(); ++i) {
    const auto& s = file.streams[i];
    s.validate();
    if (s.channel != i) throw ValidationError("timetag: channels must be 0..n-1 in order");
    if (s.duration_ps != duration) throw ValidationError("timetag: streams disagree on duration");
  }
  if (duration % file.resolution_ps != 0) {
    throw ValidationError("timetag: duration not a multiple of the resolution");
  }

  std::string out;
  out.reserve(kHeaderSize);
  out.append(kMagic, sizeof(kMagic));
  out.push_back(static_cast<char>(kVersion));
  put_u64_le(out, file.resolution_ps);
  out.push_back(static_cast<char>(file.streams.size()));
  put_u64_le(out, duration / file.resolution_ps);

  // Merge the per-channel streams into (timestamp, channel) record order.
  std::vector<std::size_t> cursor(file.streams.size(), 0);
  for (;;) {
    int best = -1;
    for (std::size_t c = 0; c < file.streams.size(); ++c) {
      if (cursor[c] >= file.streams[c].times_ps.size()) continue;
      if (best < 0 || file.streams[c].times_ps[cursor[c]] <
                          file.streams[best].times_ps[cursor[best]]) {
        best = static_cast<int>(c);
      }
    }
    if (best < 0) break;
    const std::uint64_t t = file.streams[best].times_ps[cursor[best]]++;
    if (t % file.resolution_ps != 0) {
      throw ValidationError("timetag: timestamp not a multiple of the resolution");
    }
    out.push_back(static_cast<char>(best));
    put_u64_le(out, t / file.resolution_ps);
  }

  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("timetag: cannot open " + tmp.string() + " for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("timetag: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

TimetagFile read_timetag(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("timetag: cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderSize) throw IoError("timetag: truncated header");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (std::memcmp(p, kMagic, sizeof(kMagic)) != 0) throw IoError("timetag: bad magic");
  if (p[5] != kVersion) throw IoError("timetag: unsupported format version");
  const std::uint64_t resolution = get_u64_le(p + 6);
  const unsigned channel_count = p[14];
  const std::uint64_t duration_ticks = get_u64_le(p + 15);
  if (resolution == 0) throw IoError("timetag: zero resolution");
  if (channel_count == 0) throw IoError("timetag: zero channel count");
  if (duration_ticks == 0 || duration_ticks > kMaxDuration / resolution) {
    throw IoError("timetag: acquisition duration out of range");
  }

  const std::size_t payload = bytes.size() - kHeaderSize;
  if (payload % kRecordSize != 0) throw IoError("timetag: truncated record");
  const std::size_t n_records = payload / kRecordSize;

  TimetagFile file;
  file.resolution_ps = resolution;
  file.streams.resize(channel_count);
  for (unsigned c = 0; c < channel_count; ++c) {
    file.streams[c].channel = static_cast<std::uint8_t>(c);
    file.streams[c].duration_ps = duration_ticks * resolution;
  }

  std::uint64_t prev_t = 0;
  unsigned prev_c = 0;
  for (std::size_t i = 0; i < n_records; ++i) {
    const unsigned char* rec = p + kHeaderSize + i * kRecordSize;
    const unsigned channel = rec[0];
    const std::uint64_t t = get_u64_le(rec + 1);
    if (channel >= channel_count) throw IoError("timetag: record channel out of range");
    if (t >= duration_ticks) throw IoError("timetag: record timestamp beyond duration");
    if (i > 0 && (t < prev_t || (t == prev_t && channel < prev_c))) {
      throw IoError("timetag: records not sorted by timestamp");
    }
    file.streams[channel].times_ps.push_back(t * resolution);
    prev_t = t;
    prev_c = channel;
  }
  return file;
}

void write_stream(const EventStream& stream, const std::filesystem::path& path) {
  EventStream s = stream;
  s.channel = 0;
  write_timetag(TimetagFile{1, {std::move(s)}}, path);
}

EventStream read_stream(const std::filesystem::path& path) {
  TimetagFile file = read_timetag(path);
  if (file.streams.size() != 1) {
    throw IoError("timetag: expected a single-channel file");
  }
  return std::move(file.streams.front());
}

void write_streams_csv(const std::vector<EventStream>& streams,
                       const std::filesystem::path& path) {
  for (const auto& s : streams) s.validate();
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("csv: cannot open " + path.string() + " for writing");
  f << "channel,timestamp_ps\n";
  std::vector<std::size_t> cursor(streams.size(), 0);
  for (;;) {
    int best = -1;
    for (std::size_t c = 0; c < streams.size(); ++c) {
      if (cursor[c] >= streams[c].times_ps.size()) continue;
      if (best < 0 ||
          streams[c].times_ps[cursor[c]] < streams[best].times_ps[cursor[best]] ||
          (streams[c].times_ps[cursor[c]] == streams[best].times_ps[cursor[best]] &&
           streams[c].channel < streams[best].channel)) {
        best = static_cast<int>(c);
      }
    }
    if (best < 0) break;
    f << static_cast<unsigned>(streams[best].channel) << ','
      << streams[best].times_ps[cursor[best]] << '\n';
    ++cursor[best];
  }
}

std::vector<EventStream> read_streams_csv(const std::filesystem::path& path,
                                          std::uint64_t duration_ps) {
  std::ifstream f(path);
  if (!f) throw IoError("csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != "channel,timestamp_ps") {
    throw IoError("csv: expected header 'channel,timestamp_ps'");
  }
  std::vector<EventStream> streams;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw IoError("csv: missing comma on line " + std::to_string(line_no));
    }
    unsigned channel = 0;
    std::uint64_t t = 0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + comma, channel);
    auto r2 = std::from_chars(b + comma + 1, b + line.size(), t);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || channel > 255) {
      throw IoError("csv: malformed record on line " + std::to_string(line_no));
    }
    if (channel >= streams.size()) {
      const std::size_t old = streams.size();
      streams.resize(channel + 1);
      for (std::size_t c = old; c < streams.size(); ++c) {
        streams[c].channel = static_cast<std::uint8_t>(c);
        streams[c].duration_ps = duration_ps;
      }
    }
    streams[channel].times_ps.push_back(t);
  }
  for (auto& s : streams) s.validate();
  return streams;
}

namespace {

// Window test in doubled integer units so odd tau_b stays exact:
// |dt - delay| <= tau_b/2  <=>  |2 (dt - delay)| <= tau_b.
struct Window {
  std::int64_t lo2;  // 2*(delay) - tau_b
  std::int64_t hi2;  // 2*(delay) + tau_b
};

Window make_window(std::uint64_t tau_b, std::int64_t delay) {
  return Window{2 * delay - static_cast<std::int64_t>(tau_b),
                2 * delay + static_cast<std::int64_t>(tau_b)};
}

void check_correlation_inputs(const EventStream& a, const EventStream& b,
                              std::uint64_t tau_b_ps) {
  a.validate();
  b.validate();
  if (tau_b_ps == 0) throw ValidationError("correlation: tau_b must be > 0");
  if (a.duration_ps != b.duration_ps) {
    throw ValidationError("correlation: streams disagree on acquisition duration");
  }
}

}  // namespace

std::uint64_t count_coincidences(const EventStream& a, const EventStream& b,
                                 std::uint64_t tau_b_ps, std::int64_t delay_ps) {
  check_correlation_inputs(a, b, tau_b_ps);
  const Window w = make_window(tau_b_ps, delay_ps);
  std::uint64_t count = 0;
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (const std::uint64_t ta : a.times_ps) {
    const std::int64_t base = 2 * static_cast<std::int64_t>(ta);
    while (lo < b.times_ps.size() &&
           2 * static_cast<std::int64_t>(b.times_ps[lo]) - base < w.lo2) {
      ++lo;
    }
    if (hi < lo) hi = lo;
    while (hi < b.times_ps.size() &&
           2 * static_cast<std::int64_t>(b.times_ps[hi]) - base <= w.hi2) {
      ++hi;
    }
    count += hi - lo;
  }
  return count;
}

CorrelationHistogram cross_correlation(const EventStream& a, const EventStream& b,
                                       std::uint64_t tau_b_ps, std::int64_t max_delay_ps) {
  check_correlation_inputs(a, b, tau_b_ps);
  if (max_delay_ps < 0) throw ValidationError("correlation: max delay must be >= 0");
  if (a.times_ps.empty() || b.times_ps.empty()) {
    throw ValidationError("correlation: zero-rate channel");
  }
  const std::int64_t tau = static_cast<std::int64_t>(tau_b_ps);
  const std::int64_t k_max = max_delay_ps / tau;
  const std::size_t n_bins = static_cast<std::size_t>(2 * k_max + 1);

  CorrelationHistogram h;
  h.tau_b_ps = tau_b_ps;
  h.delays_ps.resize(n_bins);
  h.raw.assign(n_bins, 0);
  for (std::int64_t k = -k_max; k <= k_max; ++k) {
    h.delays_ps[static_cast<std::size_t>(k + k_max)] = k * tau;
  }

  // One merge pass over the superwindow |2 dt| <= (2K+1) tau; each pair feeds
  // every bin whose inclusive window contains it (adjacent bins can share a
  // boundary point).
  const std::int64_t span2 = (2 * k_max + 1) * tau;
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (const std::uint64_t ta : a.times_ps) {
    const std::int64_t base = 2 * static_cast<std::int64_t>(ta);
    while (lo < b.times_ps.size() &&
           2 * static_cast<std::int64_t>(b.times_ps[lo]) - base < -span2) {
      ++lo;
    }
    if (hi < lo) hi = lo;
    while (hi < b.times_ps.size() &&
           2 * static_cast<std::int64_t>(b.times_ps[hi]) - base <= span2) {
      ++hi;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      const std::int64_t d2 = 2 * static_cast<std::int64_t>(b.times_ps[i]) - base;
      // bins with |d2 - 2 k tau| <= tau
      const std::int64_t num_lo = d2 - tau;
      const std::int64_t num_hi = d2 + tau;
      const std::int64_t two_tau = 2 * tau;
      auto div_floor = [](std::int64_t n, std::int64_t d) {
        std::int64_t q = n / d;
        if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
        return q;
      };
      const std::int64_t k_lo = std::max(-k_max, -div_floor(-num_lo, two_tau));
      const std::int64_t k_hi = std::min(k_max, div_floor(num_hi, two_tau));
      for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        ++h.raw[static_cast<std::size_t>(k + k_max)];
      }
    }
  }

  const double t_ps = static_cast<double>(a.duration_ps);
  const double ca = static_cast<double>(a.times_ps.size());
  const double cb = static_cast<double>(b.times_ps.size());
  h.rate_a_cps = ca * kPicosecondsPerSecond / t_ps;
  h.rate_b_cps = cb * kPicosecondsPerSecond / t_ps;
  h.g2.resize(n_bins);
  const double norm = ca * cb * static_cast<double>(tau_b_ps) / t_ps;
  for (std::size_t i = 0; i < n_bins; ++i) {
    h.g2[i] = static_cast<double>(h.raw[i]) / norm;
  }
  return h;
}

HeraldedG2 heralded_g2(const EventStream& herald, const EventStream& s1, const EventStream& s2,
                       std::uint64_t tau_b_ps, std::int64_t max_delay_ps) {
  check_correlation_inputs(herald, s1, tau_b_ps);
  check_correlation_inputs(herald, s2, tau_b_ps);
  if (max_delay_ps < 0) throw ValidationError("correlation: max delay must be >= 0");
  if (herald.times_ps.empty()) throw ValidationError("heralded g2: herald rate is zero");

  const std::int64_t tau = static_cast<std::int64_t>(tau_b_ps);
  const std::int64_t k_max = max_delay_ps / tau;
  const std::size_t n_bins = static_cast<std::size_t>(2 * k_max + 1);
  const std::size_t n_h = herald.times_ps.size();

  HeraldedG2 out;
  out.tau_b_ps = tau_b_ps;
  out.herald_count = n_h;
  out.delays_ps.resize(n_bins);
  out.n_ssi.assign(n_bins, 0);
  out.n_s2i.assign(n_bins, 0);
  out.g2h.assign(n_bins, 0.0);
  out.flagged.assign(n_bins, false);

  // Per-herald s1 multiplicity inside the zero-delay window.
  std::vector<std::uint32_t> c1(n_h, 0);
  {
    const Window w = make_window(tau_b_ps, 0);
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t j = 0; j < n_h; ++j) {
      const std::int64_t base = 2 * static_cast<std::int64_t>(herald.times_ps[j]);
      while (lo < s1.times_ps.size() &&
             2 * static_cast<std::int64_t>(s1.times_ps[lo]) - base < w.lo2) {
        ++lo;
      }
      if (hi < lo) hi = lo;
      while (hi < s1.times_ps.size() &&
             2 * static_cast<std::int64_t>(s1.times_ps[hi]) - base <= w.hi2) {
        ++hi;
      }
      c1[j] = static_cast<std::uint32_t>(hi - lo);
      out.n_s1i_zero += hi - lo;
    }
  }

  for (std::int64_t k = -k_max; k <= k_max; ++k) {
    const std::size_t bin = static_cast<std::size_t>(k + k_max);
    out.delays_ps[bin] = k * tau;
    const Window w = make_window(tau_b_ps, k * tau);
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::uint64_t n_s2i = 0;
    std::uint64_t n_ssi = 0;
    for (std::size_t j = 0; j < n_h; ++j) {
      const std::int64_t base = 2 * static_cast<std::int64_t>(herald.times_ps[j]);
      while (lo < s2.times_ps.size() &&
             2 * static_cast<std::int64_t>(s2.times_ps[lo]) - base < w.lo2) {
        ++lo;
      }
      if (hi < lo) hi = lo;
      while (hi < s2.times_ps.size() &&
             2 * static_cast<std::int64_t>(s2.times_ps[hi]) - base <= w.hi2) {
        ++hi;
      }
      const std::uint64_t c2 = hi - lo;
      n_s2i += c2;
      n_ssi += static_cast<std::uint64_t>(c1[j]) * c2;
    }
    out.n_s2i[bin] = n_s2i;
    out.n_ssi[bin] = n_ssi;
    const double denom = static_cast<double>(out.n_s1i_zero) * static_cast<double>(n_s2i);
    if (denom <= 0.0) {
      out.flagged[bin] = true;
      out.g2h[bin] = 0.0;
    } else {
      out.g2h[bin] = static_cast<double>(n_ssi) * static_cast<double>(n_h) / denom;
    }
  }
  return out;
}

}  // namespace qfc
