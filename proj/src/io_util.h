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

// Little-endian byte packing and small text helpers shared by the file
// formats. Internal to the library.

#ifndef SVKIT_SRC_IO_UTIL_H_
#define SVKIT_SRC_IO_UTIL_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "svkit/errors.h"

namespace svkit::internal {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

class ByteWriter {
 public:
  template <typename T>
  void Put(T value) {
    static_assert(std::is_arithmetic_v<T>);
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      for (size_t i = 0; i < sizeof(T) / 2; ++i)
        std::swap(raw[i], raw[sizeof(T) - 1 - i]);
    }
    out_.append(reinterpret_cast<const char*>(raw), sizeof(T));
  }
  void PutBytes(std::string_view bytes) { out_.append(bytes); }

  const std::string& bytes() const { return out_; }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

// Reads fixed-width fields; running past the end throws FormatError naming
// the field being read.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  template <typename T>
  T Get(const char* field) {
    static_assert(std::is_arithmetic_v<T>);
    Need(sizeof(T), field);
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, data_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      for (size_t i = 0; i < sizeof(T) / 2; ++i)
        std::swap(raw[i], raw[sizeof(T) - 1 - i]);
    }
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }

  std::string_view GetBytes(size_t n, const char* field) {
    Need(n, field);
    std::string_view out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }

 private:
  void Need(size_t n, const char* field) const {
    if (data_.size() - pos_ < n)
      throw FormatError(std::string("truncated data while reading ") + field);
  }

  std::string_view data_;
  size_t pos_ = 0;
};

// Whole-file helpers; failures throw IoError.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view bytes);

// Splits on runs of spaces/tabs; ignores trailing '\r'.
std::vector<std::string_view> SplitFields(std::string_view line);
std::vector<std::string_view> SplitLines(std::string_view text);
std::string_view Trim(std::string_view s);

// Strict number parsing: the whole field must be consumed.
bool ParseDouble(std::string_view field, double* out);
bool ParseFloat(std::string_view field, float* out);
bool ParseInt(std::string_view field, long long* out);

// Printf-style "%.*g" / "%.*f" into a std::string.
std::string FormatG(double value, int significant);
std::string FormatFixed(double value, int decimals);

}  // namespace svkit::internal

#endif  // SVKIT_SRC_IO_UTIL_H_
