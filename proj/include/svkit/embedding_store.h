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

#ifndef SVKIT_EMBEDDING_STORE_H_
#define SVKIT_EMBEDDING_STORE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "svkit/types.h"

namespace svkit {

struct EmbeddingRecord {
  std::string id;
  std::vector<float> vector;

  bool operator==(const EmbeddingRecord&) const = default;
};

// Ordered, id-indexed collection of fixed-dimension float vectors.
// Ids are unique, non-empty and contain no whitespace.
class EmbeddingSet {
 public:
  explicit EmbeddingSet(size_t dim = 0) : dim_(dim) {}

  // Throws ContractError on a duplicate id, bad id, dimension mismatch or
  // non-finite value.
  void Add(std::string id, std::vector<float> vector);

  size_t dim() const { return dim_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const std::vector<EmbeddingRecord>& records() const { return records_; }
  const EmbeddingRecord& operator[](size_t i) const { return records_[i]; }

  bool Contains(const std::string& id) const { return index_.count(id) > 0; }
  // Throws LookupError naming the id.
  const std::vector<float>& Get(const std::string& id) const;
  size_t IndexOf(const std::string& id) const;

  // Speaker labels, id -> label. Stored separately from the vectors.
  const std::map<std::string, std::string>& labels() const { return labels_; }
  void SetLabel(const std::string& id, std::string label);
  std::optional<std::string> LabelOf(const std::string& id) const;

  // Rows of the returned matrix follow record order.
  Matrix ToMatrix() const;

  bool operator==(const EmbeddingSet& other) const {
    return dim_ == other.dim_ && records_ == other.records_ &&
           labels_ == other.labels_;
  }

 private:
  size_t dim_;
  std::vector<EmbeddingRecord> records_;
  std::unordered_map<std::string, size_t> index_;
  std::map<std::string, std::string> labels_;
};

// Builds a set from matrix rows. Ids default to the decimal row index.
EmbeddingSet FromMatrix(const Matrix& rows,
                        const std::vector<std::string>& ids = {});

// Records in the requested order; labels of selected ids are carried over.
EmbeddingSet Select(const EmbeddingSet& set, std::span<const std::string> ids);

// SVEB binary layout, all little-endian:
//   "SVEB" | u16 version=1 | u64 count | u32 dim |
//   count x ( u16 id_len | id bytes | dim x f32 )
inline constexpr char kSvebMagic[4] = {'S', 'V', 'E', 'B'};
inline constexpr uint16_t kSvebVersion = 1;
inline constexpr size_t kSvebHeaderBytes = 18;

void WriteEmbeddings(const EmbeddingSet& set, const std::string& path);
std::string EncodeEmbeddings(const EmbeddingSet& set);

// Tab-separated `id\tv1\tv2...`, values printed with 9 significant digits.
void WriteEmbeddingsTsv(const EmbeddingSet& set, const std::string& path);

// Auto-detects SVEB by magic; anything else is parsed as TSV (tabs or
// spaces between fields).
EmbeddingSet ReadEmbeddings(const std::string& path);
EmbeddingSet DecodeEmbeddings(std::string_view bytes);
EmbeddingSet ParseEmbeddingsTsv(std::string_view text);

// Sidecar label file: `id\tspeaker` per line.
std::map<std::string, std::string> ReadLabels(const std::string& path);
void WriteLabels(const std::map<std::string, std::string>& labels,
                 const std::string& path);
// Attaches labels for ids present in the set; throws LookupError if a label
// names an unknown id and `strict` is set.
void AttachLabels(EmbeddingSet* set,
                  const std::map<std::string, std::string>& labels,
                  bool strict = false);

}  // namespace svkit

#endif  // SVKIT_EMBEDDING_STORE_H_
