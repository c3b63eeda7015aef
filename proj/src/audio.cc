// Copyright (c) 2026 The svkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svkit/audio.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "io_util.h"
#include "svkit/errors.h"

namespace svkit {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatExtensible = 0xFFFE;

// Reads a chunk header field; a short read means the file was cut off.
template <typename T>
T GetOrTruncated(internal::ByteReader* r, const char* field) {
  if (r->remaining() < sizeof(T))
    throw IoError(std::string("truncated WAV file reading ") + field);
  return r->Get<T>(field);
}

}  // namespace

AudioBuffer DecodeWav(std::string_view bytes) {
  internal::ByteReader r(bytes);
  if (bytes.size() < 12) throw IoError("truncated WAV file: no RIFF header");
  if (r.GetBytes(4, "RIFF tag") != "RIFF") throw FormatError("not a RIFF file");
  r.Get<uint32_t>("RIFF size");
  if (r.GetBytes(4, "WAVE tag") != "WAVE") throw FormatError("not a WAVE file");

  bool have_fmt = false;
  AudioBuffer audio;
  while (true) {
    if (r.remaining() == 0) throw IoError("WAV file has no data chunk");
    if (r.remaining() < 8) throw IoError("truncated WAV chunk header");
    std::string_view tag = r.GetBytes(4, "chunk tag");
    uint32_t size = r.Get<uint32_t>("chunk size");
    if (tag == "fmt ") {
      if (size < 16 || r.remaining() < size)
        throw IoError("truncated fmt chunk");
      std::string_view body = r.GetBytes(size, "fmt chunk");
      internal::ByteReader f(body);
      uint16_t format = f.Get<uint16_t>("format");
      uint16_t channels = f.Get<uint16_t>("channels");
      uint32_t rate = f.Get<uint32_t>("sample rate");
      f.Get<uint32_t>("byte rate");
      f.Get<uint16_t>("block align");
      uint16_t bits = f.Get<uint16_t>("bits per sample");
      if (format == kFormatExtensible && size >= 40) {
        f.Get<uint16_t>("cb size");
        f.Get<uint16_t>("valid bits");
        f.Get<uint32_t>("channel mask");
        format = f.Get<uint16_t>("sub format");
      }
      if (format != kFormatPcm)
        throw FormatError("unsupported WAV encoding " + std::to_string(format));
      if (channels != 1)
        throw FormatError("unsupported channel count " +
                          std::to_string(channels));
      if (bits != 16)
        throw FormatError("unsupported sample width " + std::to_string(bits));
      if (rate == 0) throw FormatError("WAV sample rate is zero");
      audio.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) throw FormatError("WAV data chunk before fmt chunk");
      if (r.remaining() < size) throw IoError("truncated WAV data chunk");
      if (size % 2 != 0) throw FormatError("odd-sized PCM16 data chunk");
      std::string_view body = r.GetBytes(size, "data chunk");
      internal::ByteReader d(body);
      audio.samples.resize(size / 2);
      for (auto& s : audio.samples) s = d.Get<int16_t>("sample") / 32768.0;
      return audio;
    } else {
      uint64_t skip = size + (size & 1u);
      if (r.remaining() < skip) throw IoError("truncated WAV chunk");
      r.GetBytes(skip, "chunk body");
    }
  }
}

AudioBuffer ReadWav(const std::string& path) {
  return DecodeWav(internal::ReadFile(path));
}

std::string EncodeWav(const AudioBuffer& audio) {
  SVKIT_REQUIRE(audio.sample_rate > 0, "sample rate must be positive");
  const uint32_t data_bytes = static_cast<uint32_t>(audio.samples.size() * 2);
  internal::ByteWriter w;
  w.PutBytes("RIFF");
  w.Put<uint32_t>(36 + data_bytes);
  w.PutBytes("WAVE");
  w.PutBytes("fmt ");
  w.Put<uint32_t>(16);
  w.Put<uint16_t>(kFormatPcm);
  w.Put<uint16_t>(1);
  w.Put<uint32_t>(static_cast<uint32_t>(audio.sample_rate));
  w.Put<uint32_t>(static_cast<uint32_t>(audio.sample_rate) * 2);
  w.Put<uint16_t>(2);
  w.Put<uint16_t>(16);
  w.PutBytes("data");
  w.Put<uint32_t>(data_bytes);
  for (double s : audio.samples) {
    double v = std::nearbyint(s * 32768.0);
    v = std::clamp(v, -32768.0, 32767.0);
    w.Put<int16_t>(static_cast<int16_t>(v));
  }
  return w.Take();
}

void WriteWav(const AudioBuffer& audio, const std::string& path) {
  internal::WriteFile(path, EncodeWav(audio));
}

namespace {

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

double Kaiser(double x, double beta) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - x * x)) /
         std::cyl_bessel_i(0.0, beta);
}

}  // namespace

AudioBuffer Resample(const AudioBuffer& audio, int target_rate,
                     const ResamplerConfig& config) {
  SVKIT_REQUIRE(target_rate > 0, "target rate must be positive");
  SVKIT_REQUIRE(audio.sample_rate > 0, "source rate must be positive");
  SVKIT_REQUIRE(config.taps_per_phase >= 2, "taps_per_phase must be >= 2");
  AudioBuffer out;
  out.sample_rate = target_rate;
  const int64_t n_in = static_cast<int64_t>(audio.samples.size());
  if (n_in == 0) return out;
  if (target_rate == audio.sample_rate) {
    out.samples = audio.samples;
    return out;
  }

  const int64_t src = audio.sample_rate;
  const int64_t dst = target_rate;
  const int64_t g = std::gcd(src, dst);
  const int64_t up = dst / g;    // number of phases
  const int64_t down = src / g;  // input advance per `up` outputs
  const int64_t n_out = static_cast<int64_t>(
      std::llround(static_cast<double>(n_in) * dst / src));

  // Kernel in input-sample units.
  const double lower = static_cast<double>(std::min(src, dst));
  const double cutoff = config.rolloff * lower / 2.0 / src;  // cycles/sample
  const double half_width = config.taps_per_phase / 2.0 * src / lower;
  const int64_t reach = static_cast<int64_t>(std::ceil(half_width));
  const int64_t width = 2 * reach;

  // table[p][j] weights input sample (base + j - reach + 1) for phase p.
  std::vector<double> table(static_cast<size_t>(up * width));
  for (int64_t p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / up;
    double* row = &table[static_cast<size_t>(p * width)];
    double sum = 0.0;
    for (int64_t j = 0; j < width; ++j) {
      const double tau = frac - static_cast<double>(j - reach + 1);
      const double h = 2.0 * cutoff * Sinc(2.0 * cutoff * tau) *
                       Kaiser(tau / half_width, config.kaiser_beta);
      row[j] = h;
      sum += h;
    }
    for (int64_t j = 0; j < width; ++j) row[j] /= sum;
  }

  out.samples.resize(static_cast<size_t>(n_out));
  for (int64_t n = 0; n < n_out; ++n) {
    const int64_t pos = n * down;
    const int64_t base = pos / up;
    const int64_t phase = pos % up;
    const double* row = &table[static_cast<size_t>(phase * width)];
    const int64_t first = base - reach + 1;
    const int64_t j0 = std::max<int64_t>(0, -first);
    const int64_t j1 = std::min<int64_t>(width, n_in - first);
    double acc = 0.0;
    for (int64_t j = j0; j < j1; ++j) acc += row[j] * audio.samples[first + j];
    out.samples[static_cast<size_t>(n)] = acc;
  }
  return out;
}

}  // namespace svkit
