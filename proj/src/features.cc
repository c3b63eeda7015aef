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

#include "svkit/features.h"

#include <cmath>
#include <limits>
#include <random>

#include "fft.h"
#include "io_util.h"
#include "svkit/errors.h"

namespace svkit {

int FrameSpec::LengthSamples(int sample_rate) const {
  return static_cast<int>(std::lround(frame_length_ms * sample_rate / 1000.0));
}

int FrameSpec::ShiftSamples(int sample_rate) const {
  return static_cast<int>(std::lround(frame_shift_ms * sample_rate / 1000.0));
}

int64_t FrameSpec::NumFrames(int64_t num_samples, int sample_rate) const {
  const int64_t len = LengthSamples(sample_rate);
  const int64_t shift = ShiftSamples(sample_rate);
  if (num_samples < len) return 0;
  return 1 + (num_samples - len) / shift;
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

namespace {

void CheckFrameSpec(const FrameSpec& frame, int sample_rate) {
  SVKIT_REQUIRE(sample_rate > 0, "sample rate must be positive");
  SVKIT_REQUIRE(frame.frame_shift_ms > 0 &&
                    frame.frame_shift_ms <= frame.frame_length_ms,
                "frame shift must satisfy 0 < shift <= length");
  SVKIT_REQUIRE(frame.ShiftSamples(sample_rate) >= 1,
                "frame shift shorter than one sample");
}

double HighFreq(const FbankConfig& config, int sample_rate) {
  return config.high_freq.value_or(sample_rate / 2.0);
}

void CheckFbankConfig(const FbankConfig& config, int sample_rate) {
  CheckFrameSpec(config.frame, sample_rate);
  SVKIT_REQUIRE(config.num_mel_bins >= 1, "num_mel_bins must be >= 1");
  SVKIT_REQUIRE(config.log_floor > 0, "log_floor must be positive");
  const double high = HighFreq(config, sample_rate);
  SVKIT_REQUIRE(config.low_freq >= 0 && config.low_freq < high &&
                    high <= sample_rate / 2.0,
                "mel band edges must satisfy 0 <= low < high <= rate/2");
}

// Triangular filters defined on the mel axis, evaluated at FFT bin
// frequencies. Returns num_mel_bins x (n_fft/2 + 1).
Matrix MelBank(const FbankConfig& config, int sample_rate, size_t n_fft) {
  const double mel_low = HzToMel(config.low_freq);
  const double mel_high = HzToMel(HighFreq(config, sample_rate));
  const double delta = (mel_high - mel_low) / (config.num_mel_bins + 1);
  const size_t n_bins = n_fft / 2 + 1;
  Matrix bank = Matrix::Zero(config.num_mel_bins, static_cast<Eigen::Index>(n_bins));
  for (int m = 0; m < config.num_mel_bins; ++m) {
    const double left = mel_low + m * delta;
    const double center = left + delta;
    const double right = center + delta;
    for (size_t k = 0; k < n_bins; ++k) {
      const double mel =
          HzToMel(static_cast<double>(k) * sample_rate / static_cast<double>(n_fft));
      if (mel <= left || mel >= right) continue;
      bank(m, static_cast<Eigen::Index>(k)) =
          mel <= center ? (mel - left) / (center - left)
                        : (right - mel) / (right - center);
    }
  }
  return bank;
}

}  // namespace

std::vector<double> MelCenterFrequencies(const FbankConfig& config,
                                         int sample_rate) {
  CheckFbankConfig(config, sample_rate);
  const double mel_low = HzToMel(config.low_freq);
  const double mel_high = HzToMel(HighFreq(config, sample_rate));
  const double delta = (mel_high - mel_low) / (config.num_mel_bins + 1);
  std::vector<double> centers(config.num_mel_bins);
  for (int m = 0; m < config.num_mel_bins; ++m)
    centers[m] = MelToHz(mel_low + (m + 1) * delta);
  return centers;
}

FeatureMatrix LogMelFbank(const AudioBuffer& audio, const FbankConfig& config) {
  const int rate = audio.sample_rate;
  CheckFbankConfig(config, rate);
  const int64_t num_frames =
      config.frame.NumFrames(static_cast<int64_t>(audio.samples.size()), rate);
  if (num_frames <= 0)
    throw FormatError("audio shorter than one frame: no features");

  const int len = config.frame.LengthSamples(rate);
  const int shift = config.frame.ShiftSamples(rate);
  const size_t n_fft = internal::NextPowerOfTwo(static_cast<size_t>(len));
  internal::Fft fft(n_fft);
  const Matrix bank = MelBank(config, rate, n_fft);

  std::vector<double> window(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) {
    window[i] = len == 1 ? 1.0
                         : 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (len - 1));
  }

  std::mt19937_64 rng(config.dither_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  FeatureMatrix out;
  out.frame_shift_ms = config.frame.frame_shift_ms;
  out.source_rate = rate;
  out.values.resize(num_frames, config.num_mel_bins);

  std::vector<double> frame(static_cast<size_t>(len));
  std::vector<double> power;
  for (int64_t t = 0; t < num_frames; ++t) {
    const double* src = audio.samples.data() + t * shift;
    for (int i = 0; i < len; ++i) {
      frame[i] = src[i];
      if (config.dither > 0) frame[i] += config.dither * gauss(rng) / 32768.0;
    }
    for (int i = len - 1; i > 0; --i) frame[i] -= config.preemphasis * frame[i - 1];
    frame[0] -= config.preemphasis * frame[0];
    for (int i = 0; i < len; ++i) frame[i] *= window[i];
    fft.PowerSpectrum(frame, &power);
    Eigen::Map<const Vector> spectrum(power.data(),
                                      static_cast<Eigen::Index>(power.size()));
    Vector energies = bank * spectrum;
    for (int m = 0; m < config.num_mel_bins; ++m)
      out.values(t, m) = std::log(std::max(energies[m], config.log_floor));
  }
  return out;
}

std::vector<double> FrameLogEnergies(const AudioBuffer& audio,
                                     const FrameSpec& frame) {
  CheckFrameSpec(frame, audio.sample_rate);
  const int64_t num_frames = frame.NumFrames(
      static_cast<int64_t>(audio.samples.size()), audio.sample_rate);
  if (num_frames <= 0) throw FormatError("audio shorter than one frame");
  const int len = frame.LengthSamples(audio.sample_rate);
  const int shift = frame.ShiftSamples(audio.sample_rate);
  const double floor = std::numeric_limits<float>::epsilon();
  std::vector<double> out(static_cast<size_t>(num_frames));
  for (int64_t t = 0; t < num_frames; ++t) {
    double energy = 0.0;
    for (int i = 0; i < len; ++i) {
      const double s = audio.samples[t * shift + i] * 32768.0;
      energy += s * s;
    }
    out[t] = std::log(std::max(energy, floor));
  }
  return out;
}

VadMask VadFromLogEnergies(const std::vector<double>& log_energies,
                           const VadConfig& config) {
  SVKIT_REQUIRE(config.context_frames >= 0, "context_frames must be >= 0");
  SVKIT_REQUIRE(config.proportion_threshold > 0 &&
                    config.proportion_threshold <= 1,
                "proportion_threshold must be in (0, 1]");
  const int64_t n = static_cast<int64_t>(log_energies.size());
  if (n == 0) return {};
  double mean = 0.0;
  for (double e : log_energies) mean += e;
  mean /= static_cast<double>(n);
  const double threshold =
      config.energy_threshold + config.energy_mean_scale * mean;

  std::vector<int> raw(static_cast<size_t>(n));
  for (int64_t t = 0; t < n; ++t) raw[t] = log_energies[t] > threshold ? 1 : 0;

  VadMask mask(static_cast<size_t>(n));
  const int64_t ctx = config.context_frames;
  for (int64_t t = 0; t < n; ++t) {
    const int64_t lo = std::max<int64_t>(0, t - ctx);
    const int64_t hi = std::min<int64_t>(n - 1, t + ctx);
    int64_t speech = 0;
    for (int64_t u = lo; u <= hi; ++u) speech += raw[u];
    const double count = static_cast<double>(hi - lo + 1);
    mask[t] = speech >= config.proportion_threshold * count;
  }
  return mask;
}

VadMask EnergyVad(const AudioBuffer& audio, const VadConfig& config) {
  return VadFromLogEnergies(FrameLogEnergies(audio, config.frame), config);
}

FeatureMatrix ApplyVad(const FeatureMatrix& feats, const VadMask& mask) {
  if (static_cast<Eigen::Index>(mask.size()) != feats.num_frames()) {
    throw ContractError("VAD mask length " + std::to_string(mask.size()) +
                        " does not match " +
                        std::to_string(feats.num_frames()) + " frames");
  }
  Eigen::Index kept = 0;
  for (bool m : mask) kept += m ? 1 : 0;
  FeatureMatrix out;
  out.frame_shift_ms = feats.frame_shift_ms;
  out.source_rate = feats.source_rate;
  out.values.resize(kept, feats.dim());
  Eigen::Index row = 0;
  for (size_t t = 0; t < mask.size(); ++t) {
    if (mask[t]) out.values.row(row++) = feats.values.row(static_cast<Eigen::Index>(t));
  }
  return out;
}

EmbeddingSet FeaturesToSet(const FeatureMatrix& feats) {
  return FromMatrix(feats.values);
}

void WriteFeaturesTsv(const FeatureMatrix& feats, const std::string& path) {
  std::string out;
  for (Eigen::Index t = 0; t < feats.num_frames(); ++t) {
    for (Eigen::Index f = 0; f < feats.dim(); ++f) {
      if (f) out += '\t';
      out += internal::FormatG(feats.values(t, f), 9);
    }
    out += '\n';
  }
  internal::WriteFile(path, out);
}

}  // namespace svkit
