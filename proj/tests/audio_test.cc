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

#include <cmath>
#include <cstdint>
#include <string>

#include "gtest/gtest.h"
#include "oracles.h"
#include "svkit/errors.h"

namespace svkit {
namespace {

void Put16(std::string* s, uint16_t v) {
  s->push_back(static_cast<char>(v & 0xff));
  s->push_back(static_cast<char>(v >> 8));
}
void Put32(std::string* s, uint32_t v) {
  Put16(s, v & 0xffff);
  Put16(s, v >> 16);
}

// Hand-built RIFF/WAVE PCM file.
std::string MakeWav(const std::vector<int16_t>& pcm, int channels, int rate,
                    int bits = 16, int format = 1) {
  std::string s = "RIFF";
  const uint32_t data_bytes = static_cast<uint32_t>(pcm.size() * 2);
  Put32(&s, 36 + data_bytes);
  s += "WAVEfmt ";
  Put32(&s, 16);
  Put16(&s, format);
  Put16(&s, channels);
  Put32(&s, rate);
  Put32(&s, rate * channels * bits / 8);
  Put16(&s, channels * bits / 8);
  Put16(&s, bits);
  s += "data";
  Put32(&s, data_bytes);
  for (int16_t v : pcm) Put16(&s, static_cast<uint16_t>(v));
  return s;
}

TEST(WavTest, KnownSamplesScale) {
  std::vector<int16_t> pcm(16, 0);
  pcm[1] = 16384;
  pcm[2] = -32768;
  pcm[3] = 32767;
  const AudioBuffer a = DecodeWav(MakeWav(pcm, 1, 16000));
  ASSERT_EQ(a.samples.size(), 16u);
  EXPECT_EQ(a.sample_rate, 16000);
  EXPECT_EQ(a.samples[0], 0.0);
  EXPECT_EQ(a.samples[1], 0.5);
  EXPECT_EQ(a.samples[2], -1.0);
  EXPECT_EQ(a.samples[3], 32767.0 / 32768.0);
}

TEST(WavTest, RejectsStereoAndNonPcm) {
  EXPECT_THROW(DecodeWav(MakeWav({0, 0, 1, 1}, 2, 16000)), FormatError);
  EXPECT_THROW(DecodeWav(MakeWav({0, 0}, 1, 16000, 16, 3)), FormatError);
  EXPECT_THROW(DecodeWav("not a wave file at all........................"),
               FormatError);
}

TEST(WavTest, TruncatedFileIsIoError) {
  const std::string w = MakeWav(std::vector<int16_t>(100, 7), 1, 8000);
  EXPECT_THROW(DecodeWav(w.substr(0, w.size() - 10)), IoError);
}

TEST(WavTest, FileRoundtrip) {
  AudioBuffer a;
  a.sample_rate = 8000;
  for (int i = -50; i < 50; ++i) a.samples.push_back(i / 64.0);
  const auto dir = oracle::TempDir("wav");
  WriteWav(a, (dir / "a.wav").string());
  const AudioBuffer b = ReadWav((dir / "a.wav").string());
  EXPECT_EQ(b.sample_rate, 8000);
  EXPECT_EQ(b.samples, a.samples);
  EXPECT_THROW(ReadWav((dir / "missing.wav").string()), IoError);
}

TEST(ResampleTest, EmptyStaysEmpty) {
  AudioBuffer a;
  const AudioBuffer b = Resample(a, 8000);
  EXPECT_TRUE(b.samples.empty());
  EXPECT_EQ(b.sample_rate, 8000);
}

TEST(ResampleTest, DcPreserved) {
  AudioBuffer a{std::vector<double>(16000, 0.5), 16000};
  const AudioBuffer b = Resample(a, 8000);
  ASSERT_EQ(b.samples.size(), 8000u);
  for (size_t i = 100; i < b.samples.size() - 100; ++i)
    ASSERT_NEAR(b.samples[i], 0.5, 1e-3) << i;
}

TEST(ResampleTest, InBandTonePreserved) {
  AudioBuffer a{oracle::Sine(1000, 16000, 16000), 16000};
  const AudioBuffer b = Resample(a, 8000);
  // 800 samples at 8 kHz hold exactly 100 periods of 1 kHz.
  EXPECT_NEAR(oracle::PeakFrequency(b.samples, 2000, 800, 8000), 1000, 1e-9);
  EXPECT_NEAR(oracle::ToneAmplitude(b.samples, 2000, 800, 1000, 8000), 0.5,
              0.005);
}

TEST(ResampleTest, AboveNyquistRejected) {
  AudioBuffer a{oracle::Sine(6000, 16000, 16000), 16000};
  const AudioBuffer b = Resample(a, 8000);
  const double in = oracle::Rms(a.samples, 0, a.samples.size());
  const double out = oracle::Rms(b.samples, 200, b.samples.size() - 400);
  EXPECT_LE(20 * std::log10(out / in), -40.0);
}

TEST(ResampleTest, UpsampleTone) {
  AudioBuffer a{oracle::Sine(1000, 8000, 8000), 8000};
  const AudioBuffer b = Resample(a, 16000);
  ASSERT_EQ(b.samples.size(), 16000u);
  EXPECT_EQ(b.sample_rate, 16000);
  EXPECT_NEAR(oracle::ToneAmplitude(b.samples, 4000, 1600, 1000, 16000), 0.5,
              0.005);
}

TEST(ResampleTest, SameRateIsCopy) {
  AudioBuffer a{oracle::Sine(440, 16000, 999), 16000};
  EXPECT_EQ(Resample(a, 16000).samples, a.samples);
}

}  // namespace
}  // namespace svkit
