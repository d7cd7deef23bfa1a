#include "qfc/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qfc/errors.hpp"

namespace qfc {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* b = field.data();
  const auto res = std::from_chars(b, b + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != b + field.size()) {
    throw IoError("csv: malformed number '" + field + "' on line " + std::to_string(line_no));
  }
  return v;
}

std::vector<std::pair<double, double>> read_two_columns(const std::filesystem::path& path,
                                                        const std::string& expected_header) {
  std::ifstream f(path);
  if (!f) throw IoError("csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != expected_header) {
    throw IoError("csv: expected header '" + expected_header + "' in " + path.string());
  }
  std::vector<std::pair<double, double>> rows;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw IoError("csv: missing comma on line " + std::to_string(line_no));
    }
    rows.emplace_back(parse_double(line.substr(0, comma), line_no),
                      parse_double(line.substr(comma + 1), line_no));
  }
  return rows;
}

}  // namespace

std::vector<EfficiencySample> read_efficiency_samples(const std::filesystem::path& path) {
  std::vector<EfficiencySample> samples;
  for (const auto& [p, e] : read_two_columns(path, "pump_power_w,efficiency")) {
    samples.push_back(EfficiencySample{p, e});
  }
  return samples;
}

std::vector<NoiseSample> read_noise_samples(const std::filesystem::path& path) {
  std::vector<NoiseSample> samples;
  for (const auto& [p, n] : read_two_columns(path, "pump_power_w,ncr_cps")) {
    samples.push_back(NoiseSample{p, n});
  }
  return samples;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  write_text_atomic(path, out.str());
}

}  // namespace qfc
