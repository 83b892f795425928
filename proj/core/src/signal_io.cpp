// Copyright 2026 The floss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "floss/signal_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "floss/error.hpp"

namespace floss {
namespace {

constexpr std::size_t kFixedHeaderBytes = 256;
constexpr std::size_t kPerSignalHeaderBytes = 256;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n' ||
                        s.front() == '\0'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n' ||
                        s.back() == '\0'))
    s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double parse_double(std::string_view field, std::string_view what) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(value)) {
    throw Error(ErrorCode::HeaderFieldUnparsable,
                std::string(what) + " = '" + std::string(field) + "'");
  }
  return value;
}

long parse_long(std::string_view field, std::string_view what) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::HeaderFieldUnparsable,
                std::string(what) + " = '" + std::string(field) + "'");
  }
  return value;
}

// Formats `value` into at most `width` characters, dropping decimals as needed.
std::string format_number(double value, std::size_t width) {
  char buf[64];
  for (int decimals = 6; decimals >= 0; --decimals) {
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s(buf);
    if (decimals > 0) {
      while (s.back() == '0') s.pop_back();
      if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    if (s.size() <= width) return s;
  }
  throw Error(ErrorCode::InvalidArgument,
              "value does not fit an EDF header field: " + std::to_string(value));
}

void put_field(std::string& header, std::string_view value, std::size_t width) {
  std::string field(value.substr(0, width));
  field.resize(width, ' ');
  header += field;
}

// Scaling as it will be read back after passing through the 8-byte fields.
EdfScaling as_serialized(const EdfScaling& s) {
  EdfScaling out;
  out.phys_min = parse_double(format_number(s.phys_min, 8), "phys_min");
  out.phys_max = parse_double(format_number(s.phys_max, 8), "phys_max");
  out.dig_min = s.dig_min;
  out.dig_max = s.dig_max;
  return out;
}

enum class SignalKind { Eeg, AccX, AccY, AccZ, Other };

SignalKind classify_signal(std::string_view label, std::string_view unit) {
  const std::string u = lower(trim(unit));
  if (u == "uv" || u == "\xc2\xb5v" || u == "\xb5v") return SignalKind::Eeg;
  if (u == "g") {
    const std::string l = lower(trim(label));
    for (auto it = l.rbegin(); it != l.rend(); ++it) {
      if (!std::isalpha(static_cast<unsigned char>(*it))) continue;
      if (*it == 'x') return SignalKind::AccX;
      if (*it == 'y') return SignalKind::AccY;
      if (*it == 'z') return SignalKind::AccZ;
      break;
    }
    if (l.find('x') != std::string::npos) return SignalKind::AccX;
    if (l.find('y') != std::string::npos) return SignalKind::AccY;
    if (l.find('z') != std::string::npos) return SignalKind::AccZ;
  }
  return SignalKind::Other;
}

struct IsoTime {
  int year = 2000, month = 1, day = 1, hour = 0, minute = 0, second = 0;
};

IsoTime parse_iso(std::string_view s) {
  IsoTime t;
  if (std::sscanf(std::string(s).c_str(), "%d-%d-%dT%d:%d:%d", &t.year, &t.month,
                  &t.day, &t.hour, &t.minute, &t.second) != 6) {
    throw Error(ErrorCode::InvalidArgument,
                "start_time is not ISO-8601: '" + std::string(s) + "'");
  }
  return t;
}

std::string format_iso(const IsoTime& t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d", t.year, t.month,
                t.day, t.hour, t.minute, t.second);
  return buf;
}

struct SignalHeader {
  std::string label, transducer, unit, prefilter;
  EdfScaling scaling;
  long samples_per_record = 0;
};

}  // namespace

int EdfScaling::to_digital(double physical) const {
  const double code = (physical - phys_min) * (dig_max - dig_min) /
                          (phys_max - phys_min) +
                      dig_min;
  const double rounded = std::nearbyint(code);
  return static_cast<int>(std::clamp(rounded, static_cast<double>(dig_min),
                                     static_cast<double>(dig_max)));
}

std::size_t Recording::sample_count() const {
  if (!channels.empty()) return channels.front().samples.size();
  if (acc) return acc->size();
  return 0;
}

const ChannelSignal* Recording::find_channel(std::string_view label) const {
  for (const auto& ch : channels)
    if (ch.label == label) return &ch;
  return nullptr;
}

void validate(const Recording& rec) {
  if (rec.fs <= 0)
    throw Error(ErrorCode::SamplingRateMismatch, "sampling rate must be positive");
  const std::size_t n = rec.sample_count();
  for (const auto& ch : rec.channels) {
    if (ch.samples.size() != n)
      throw Error(ErrorCode::LengthMismatchEegAcc,
                  "channel '" + ch.label + "' has a different length");
    for (double v : ch.samples)
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFiniteSamples, "channel '" + ch.label + "'");
  }
  if (rec.acc) {
    const auto& a = *rec.acc;
    if (a.ay.size() != a.ax.size() || a.az.size() != a.ax.size())
      throw Error(ErrorCode::LengthMismatchEegAcc, "ACC axes differ in length");
    if (a.ax.size() != n)
      throw Error(ErrorCode::LengthMismatchEegAcc, "ACC and EEG lengths differ");
    for (const auto* axis : {&a.ax, &a.ay, &a.az})
      for (double v : *axis)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteSamples, "ACC");
  }
}

EdfScaling default_scaling(std::span<const double> samples, bool is_eeg) {
  double peak = 0.0;
  for (double v : samples) peak = std::max(peak, std::abs(v));
  EdfScaling s;
  if (is_eeg && peak <= 1975.93) return s;
  // Symmetric range, rounded up so that it prints compactly.
  double bound = is_eeg ? std::ceil(peak) : std::max(4.0, std::ceil(peak));
  if (bound <= 0.0) bound = 1.0;
  s.phys_min = -bound;
  s.phys_max = bound;
  return s;
}

std::vector<std::uint8_t> write_edf(const Recording& rec) {
  validate(rec);
  const std::size_t n = rec.sample_count();
  if (n % static_cast<std::size_t>(rec.fs) != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "sample count must be a multiple of fs for 1 s data records");
  }

  struct OutSignal {
    SignalHeader header;
    const std::vector<double>* data;
  };
  std::vector<OutSignal> signals;
  auto add = [&](std::string label, std::string unit, const std::vector<double>& data,
                 const std::optional<EdfScaling>& scaling, bool eeg) {
    OutSignal s;
    s.header.label = std::move(label);
    s.header.unit = std::move(unit);
    s.header.scaling = as_serialized(scaling ? *scaling : default_scaling(data, eeg));
    if (s.header.scaling.dig_min >= s.header.scaling.dig_max)
      throw Error(ErrorCode::DigitalRangeDegenerate, s.header.label);
    s.header.samples_per_record = rec.fs;
    s.data = &data;
    signals.push_back(std::move(s));
  };
  for (const auto& ch : rec.channels) add(ch.label, "uV", ch.samples, ch.scaling, true);
  if (rec.acc) {
    add("ACC X", "g", rec.acc->ax, rec.acc->scaling_x, false);
    add("ACC Y", "g", rec.acc->ay, rec.acc->scaling_y, false);
    add("ACC Z", "g", rec.acc->az, rec.acc->scaling_z, false);
  }

  for (const auto& s : signals) {
    const auto& sc = s.header.scaling;
    const double lo = std::min(sc.phys_min, sc.phys_max);
    const double hi = std::max(sc.phys_min, sc.phys_max);
    const double half_step = 0.5 * (hi - lo) / (sc.dig_max - sc.dig_min);
    for (double v : *s.data) {
      if (v < lo - half_step || v > hi + half_step) {
        throw Error(ErrorCode::AmplitudeOutOfDeclaredRange,
                    s.header.label + " sample " + std::to_string(v));
      }
    }
  }

  const std::size_t ns = signals.size();
  const std::size_t n_records = n / static_cast<std::size_t>(rec.fs);
  const IsoTime t = parse_iso(rec.start_time);
  char date[16], time[16];
  std::snprintf(date, sizeof date, "%02d.%02d.%02d", t.day, t.month, t.year % 100);
  std::snprintf(time, sizeof time, "%02d.%02d.%02d", t.hour, t.minute, t.second);

  std::string header;
  header.reserve(kFixedHeaderBytes + kPerSignalHeaderBytes * ns);
  put_field(header, "0", 8);
  put_field(header, "X X X X", 80);
  put_field(header, rec.device_id, 80);
  put_field(header, date, 8);
  put_field(header, time, 8);
  put_field(header, std::to_string(kFixedHeaderBytes + kPerSignalHeaderBytes * ns), 8);
  put_field(header, "", 44);
  put_field(header, std::to_string(n_records), 8);
  put_field(header, "1", 8);
  put_field(header, std::to_string(ns), 4);
  for (const auto& s : signals) put_field(header, s.header.label, 16);
  for (const auto& s : signals) put_field(header, s.header.transducer, 80);
  for (const auto& s : signals) put_field(header, s.header.unit, 8);
  for (const auto& s : signals) put_field(header, format_number(s.header.scaling.phys_min, 8), 8);
  for (const auto& s : signals) put_field(header, format_number(s.header.scaling.phys_max, 8), 8);
  for (const auto& s : signals) put_field(header, std::to_string(s.header.scaling.dig_min), 8);
  for (const auto& s : signals) put_field(header, std::to_string(s.header.scaling.dig_max), 8);
  for (const auto& s : signals) put_field(header, s.header.prefilter, 80);
  for (const auto& s : signals) put_field(header, std::to_string(s.header.samples_per_record), 8);
  for (std::size_t i = 0; i < ns; ++i) put_field(header, "", 32);

  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + n * ns * 2);
  const std::size_t spr = static_cast<std::size_t>(rec.fs);
  for (std::size_t r = 0; r < n_records; ++r) {
    for (const auto& s : signals) {
      for (std::size_t k = 0; k < spr; ++k) {
        const int d = s.header.scaling.to_digital((*s.data)[r * spr + k]);
        const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(d));
        out.push_back(static_cast<std::uint8_t>(u & 0xff));
        out.push_back(static_cast<std::uint8_t>(u >> 8));
      }
    }
  }
  return out;
}

Recording read_edf(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFixedHeaderBytes)
    throw Error(ErrorCode::TruncatedFile, "shorter than the fixed EDF header");
  const std::string_view raw(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  std::size_t pos = 0;
  auto take = [&](std::size_t width) {
    if (pos + width > raw.size())
      throw Error(ErrorCode::TruncatedFile, "header ends early");
    std::string_view f = raw.substr(pos, width);
    pos += width;
    return f;
  };

  take(8);  // version
  take(80);  // patient
  Recording rec;
  rec.device_id = std::string(trim(take(80)));
  const std::string date(trim(take(8)));
  const std::string time(trim(take(8)));
  const long header_bytes = parse_long(take(8), "header bytes");
  take(44);
  long n_records = parse_long(take(8), "number of records");
  const double record_duration = parse_double(take(8), "record duration");
  const long ns = parse_long(take(4), "number of signals");
  if (ns < 0 || record_duration < 0.0)
    throw Error(ErrorCode::HeaderFieldUnparsable, "negative signal count or duration");
  if (header_bytes != static_cast<long>(kFixedHeaderBytes + kPerSignalHeaderBytes * ns))
    throw Error(ErrorCode::HeaderFieldUnparsable, "header size disagrees with signal count");

  IsoTime t;
  int yy = 0;
  if (std::sscanf(date.c_str(), "%d.%d.%d", &t.day, &t.month, &yy) != 3 ||
      std::sscanf(time.c_str(), "%d.%d.%d", &t.hour, &t.minute, &t.second) != 3) {
    throw Error(ErrorCode::HeaderFieldUnparsable, "start date/time");
  }
  t.year = yy >= 85 ? 1900 + yy : 2000 + yy;
  rec.start_time = format_iso(t);

  std::vector<SignalHeader> sig(static_cast<std::size_t>(ns));
  for (auto& s : sig) s.label = std::string(trim(take(16)));
  for (auto& s : sig) s.transducer = std::string(trim(take(80)));
  for (auto& s : sig) s.unit = std::string(trim(take(8)));
  for (auto& s : sig) s.scaling.phys_min = parse_double(take(8), "physical minimum");
  for (auto& s : sig) s.scaling.phys_max = parse_double(take(8), "physical maximum");
  for (auto& s : sig) s.scaling.dig_min = static_cast<int>(parse_long(take(8), "digital minimum"));
  for (auto& s : sig) s.scaling.dig_max = static_cast<int>(parse_long(take(8), "digital maximum"));
  for (auto& s : sig) s.prefilter = std::string(trim(take(80)));
  for (auto& s : sig) s.samples_per_record = parse_long(take(8), "samples per record");
  for (std::size_t i = 0; i < sig.size(); ++i) take(32);

  std::size_t record_bytes = 0;
  for (const auto& s : sig) {
    if (s.scaling.dig_min == s.scaling.dig_max)
      throw Error(ErrorCode::DigitalRangeDegenerate, s.label);
    if (s.scaling.dig_min > s.scaling.dig_max || s.scaling.phys_min == s.scaling.phys_max)
      throw Error(ErrorCode::HeaderFieldUnparsable, "calibration of " + s.label);
    if (s.samples_per_record < 0)
      throw Error(ErrorCode::HeaderFieldUnparsable, "samples per record of " + s.label);
    record_bytes += static_cast<std::size_t>(s.samples_per_record) * 2;
  }

  const std::size_t payload = bytes.size() - pos;
  if (n_records < 0) {
    // -1 means "unknown" while recording; infer from the payload size.
    n_records = record_bytes ? static_cast<long>(payload / record_bytes) : 0;
  }
  if (payload < static_cast<std::size_t>(n_records) * record_bytes) {
    throw Error(ErrorCode::TruncatedFile,
                "expected " + std::to_string(n_records * record_bytes) +
                    " data bytes, found " + std::to_string(payload));
  }

  std::vector<SignalKind> kinds;
  long spr = -1;
  for (const auto& s : sig) {
    kinds.push_back(classify_signal(s.label, s.unit));
    if (kinds.back() == SignalKind::Other) continue;
    if (spr >= 0 && s.samples_per_record != spr)
      throw Error(ErrorCode::SamplingRateMismatch, s.label);
    spr = s.samples_per_record;
  }
  if (spr > 0) {
    const double fs = spr / record_duration;
    if (record_duration <= 0.0 || std::abs(fs - std::round(fs)) > 1e-9)
      throw Error(ErrorCode::SamplingRateMismatch, "non-integer sampling rate");
    rec.fs = static_cast<int>(std::lround(fs));
  }

  std::vector<std::vector<double>> data(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i)
    if (kinds[i] != SignalKind::Other)
      data[i].reserve(static_cast<std::size_t>(n_records * sig[i].samples_per_record));
  const std::uint8_t* p = bytes.data() + pos;
  for (long r = 0; r < n_records; ++r) {
    for (std::size_t i = 0; i < sig.size(); ++i) {
      const auto count = static_cast<std::size_t>(sig[i].samples_per_record);
      if (kinds[i] != SignalKind::Other) {
        for (std::size_t k = 0; k < count; ++k) {
          const auto u = static_cast<std::uint16_t>(p[2 * k] | (p[2 * k + 1] << 8));
          const double v = sig[i].scaling.to_physical(static_cast<std::int16_t>(u));
          if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteSamples, sig[i].label);
          data[i].push_back(v);
        }
      }
      p += 2 * count;
    }
  }

  std::optional<TriAxialAcc> acc;
  for (std::size_t i = 0; i < sig.size(); ++i) {
    switch (kinds[i]) {
      case SignalKind::Eeg:
        rec.channels.push_back({sig[i].label, std::move(data[i]), sig[i].scaling});
        break;
      case SignalKind::AccX:
        if (!acc) acc.emplace();
        acc->ax = std::move(data[i]);
        acc->scaling_x = sig[i].scaling;
        break;
      case SignalKind::AccY:
        if (!acc) acc.emplace();
        acc->ay = std::move(data[i]);
        acc->scaling_y = sig[i].scaling;
        break;
      case SignalKind::AccZ:
        if (!acc) acc.emplace();
        acc->az = std::move(data[i]);
        acc->scaling_z = sig[i].scaling;
        break;
      case SignalKind::Other:
        break;
    }
  }
  if (acc && (!acc->scaling_x || !acc->scaling_y || !acc->scaling_z)) {
    throw Error(ErrorCode::ChannelMissing, "accelerometer is missing an axis");
  }
  rec.acc = std::move(acc);
  validate(rec);
  return rec;
}

Recording read_edf_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return read_edf(bytes);
}

void write_edf_file(const std::filesystem::path& path, const Recording& rec) {
  const auto bytes = write_edf(rec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FileUnreadable, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string write_csv(const Recording& rec) {
  validate(rec);
  std::string out = "t_s";
  for (const auto& ch : rec.channels) out += "," + ch.label;
  if (rec.acc) out += ",accX,accY,accZ";
  out += '\n';
  const std::size_t n = rec.sample_count();
  for (std::size_t i = 0; i < n; ++i) {
    append_number(out, static_cast<double>(i) / rec.fs);
    for (const auto& ch : rec.channels) {
      out += ',';
      append_number(out, ch.samples[i]);
    }
    if (rec.acc) {
      for (const auto* axis : {&rec.acc->ax, &rec.acc->ay, &rec.acc->az}) {
        out += ',';
        append_number(out, (*axis)[i]);
      }
    }
    out += '\n';
  }
  return out;
}

Recording read_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(start, end - start));
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::HeaderFieldUnparsable, "empty CSV");

  const auto header = split_commas(lines.front());
  if (header.empty() || lower(header.front()) != "t_s")
    throw Error(ErrorCode::HeaderFieldUnparsable, "CSV must start with a t_s column");

  Recording rec;
  std::vector<int> target(header.size(), -1);  // channel index, or -2..-4 for ACC
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string name = lower(header[c]);
    if (name == "accx") target[c] = -2;
    else if (name == "accy") target[c] = -3;
    else if (name == "accz") target[c] = -4;
    else {
      target[c] = static_cast<int>(rec.channels.size());
      rec.channels.push_back({std::string(header[c]), {}, std::nullopt});
    }
  }
  const bool has_acc = std::count_if(target.begin(), target.end(),
                                     [](int t) { return t <= -2; }) > 0;
  if (has_acc) rec.acc.emplace();

  std::vector<double> times;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split_commas(lines[r]);
    if (cells.size() != header.size())
      throw Error(ErrorCode::TruncatedFile, "row " + std::to_string(r) + " has wrong width");
    times.push_back(parse_double(cells[0], "t_s"));
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const double v = parse_double(cells[c], header[c]);
      switch (target[c]) {
        case -2: rec.acc->ax.push_back(v); break;
        case -3: rec.acc->ay.push_back(v); break;
        case -4: rec.acc->az.push_back(v); break;
        default: rec.channels[static_cast<std::size_t>(target[c])].samples.push_back(v);
      }
    }
  }
  if (times.size() >= 2) {
    const double dt = times[1] - times[0];
    if (dt <= 0.0) throw Error(ErrorCode::SamplingRateMismatch, "non-increasing t_s");
    const double fs = 1.0 / dt;
    if (std::abs(fs - std::round(fs)) > 1e-6 * fs)
      throw Error(ErrorCode::SamplingRateMismatch, "non-integer sampling rate");
    rec.fs = static_cast<int>(std::lround(fs));
  }
  validate(rec);
  return rec;
}

Recording read_recording(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".csv") {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileUnreadable, path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return read_csv(ss.str());
  }
  return read_edf_file(path);
}

}  // namespace floss
