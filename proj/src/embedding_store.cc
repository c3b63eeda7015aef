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

#include "svkit/embedding_store.h"

#include <cmath>
#include <limits>

#include "io_util.h"
#include "svkit/errors.h"

namespace svkit {

namespace {

bool ValidId(const std::string& id) {
  if (id.empty() || id.size() > std::numeric_limits<uint16_t>::max())
    return false;
  for (char c : id) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
        c == '\f')
      return false;
  }
  return true;
}

}  // namespace

void EmbeddingSet::Add(std::string id, std::vector<float> vector) {
  SVKIT_REQUIRE(ValidId(id), "invalid embedding id: '" + id + "'");
  if (index_.count(id)) throw ContractError("duplicate embedding id: " + id);
  if (records_.empty() && dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_) {
    throw ContractError("dimension mismatch for " + id + ": expected " +
                        std::to_string(dim_) + ", got " +
                        std::to_string(vector.size()));
  }
  for (float v : vector) {
    if (!std::isfinite(v)) throw ContractError("non-finite value in " + id);
  }
  index_.emplace(id, records_.size());
  records_.push_back({std::move(id), std::move(vector)});
}

const std::vector<float>& EmbeddingSet::Get(const std::string& id) const {
  return records_[IndexOf(id)].vector;
}

size_t EmbeddingSet::IndexOf(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw LookupError(id);
  return it->second;
}

void EmbeddingSet::SetLabel(const std::string& id, std::string label) {
  if (!Contains(id)) throw LookupError(id);
  labels_[id] = std::move(label);
}

std::optional<std::string> EmbeddingSet::LabelOf(const std::string& id) const {
  auto it = labels_.find(id);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

Matrix EmbeddingSet::ToMatrix() const {
  Matrix m(static_cast<Eigen::Index>(records_.size()),
           static_cast<Eigen::Index>(dim_));
  for (size_t i = 0; i < records_.size(); ++i) {
    for (size_t j = 0; j < dim_; ++j) m(i, j) = records_[i].vector[j];
  }
  return m;
}

EmbeddingSet FromMatrix(const Matrix& rows, const std::vector<std::string>& ids) {
  SVKIT_REQUIRE(ids.empty() || ids.size() == static_cast<size_t>(rows.rows()),
                "id count does not match row count");
  EmbeddingSet set(static_cast<size_t>(rows.cols()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    std::vector<float> v(static_cast<size_t>(rows.cols()));
    for (Eigen::Index j = 0; j < rows.cols(); ++j)
      v[j] = static_cast<float>(rows(i, j));
    set.Add(ids.empty() ? std::to_string(i) : ids[i], std::move(v));
  }
  return set;
}

EmbeddingSet Select(const EmbeddingSet& set, std::span<const std::string> ids) {
  EmbeddingSet out(set.dim());
  for (const std::string& id : ids) {
    out.Add(id, set.Get(id));
    if (auto label = set.LabelOf(id)) out.SetLabel(id, *label);
  }
  return out;
}

std::string EncodeEmbeddings(const EmbeddingSet& set) {
  internal::ByteWriter w;
  w.PutBytes(std::string_view(kSvebMagic, 4));
  w.Put<uint16_t>(kSvebVersion);
  w.Put<uint64_t>(set.size());
  w.Put<uint32_t>(static_cast<uint32_t>(set.dim()));
  for (const auto& rec : set.records()) {
    w.Put<uint16_t>(static_cast<uint16_t>(rec.id.size()));
    w.PutBytes(rec.id);
    for (float v : rec.vector) w.Put<float>(v);
  }
  return w.Take();
}

void WriteEmbeddings(const EmbeddingSet& set, const std::string& path) {
  internal::WriteFile(path, EncodeEmbeddings(set));
}

void WriteEmbeddingsTsv(const EmbeddingSet& set, const std::string& path) {
  std::string out;
  for (const auto& rec : set.records()) {
    out += rec.id;
    for (float v : rec.vector) {
      out += '\t';
      out += internal::FormatG(v, 9);
    }
    out += '\n';
  }
  internal::WriteFile(path, out);
}

EmbeddingSet DecodeEmbeddings(std::string_view bytes) {
  internal::ByteReader r(bytes);
  if (r.GetBytes(4, "magic") != std::string_view(kSvebMagic, 4))
    throw FormatError("bad SVEB magic");
  uint16_t version = r.Get<uint16_t>("version");
  if (version != kSvebVersion)
    throw FormatError("unsupported SVEB version " + std::to_string(version));
  uint64_t count = r.Get<uint64_t>("count");
  uint32_t dim = r.Get<uint32_t>("dim");
  // Each record needs at least the id length field and the vector.
  uint64_t min_record = 2 + 4ull * dim;
  if (count > r.remaining() / min_record)
    throw FormatError("SVEB record count exceeds file size");
  EmbeddingSet set(dim);
  for (uint64_t i = 0; i < count; ++i) {
    uint16_t id_len = r.Get<uint16_t>("id length");
    std::string id(r.GetBytes(id_len, "id"));
    std::vector<float> v(dim);
    for (uint32_t j = 0; j < dim; ++j) v[j] = r.Get<float>("vector");
    try {
      set.Add(std::move(id), std::move(v));
    } catch (const ContractError& e) {
      throw FormatError(std::string("invalid SVEB record: ") + e.what());
    }
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after SVEB data");
  return set;
}

EmbeddingSet ParseEmbeddingsTsv(std::string_view text) {
  EmbeddingSet set;
  bool have_dim = false;
  auto lines = internal::SplitLines(text);
  for (size_t n = 0; n < lines.size(); ++n) {
    auto fields = internal::SplitFields(lines[n]);
    if (fields.empty()) continue;
    std::vector<float> v;
    v.reserve(fields.size() - 1);
    for (size_t j = 1; j < fields.size(); ++j) {
      float x;
      if (!internal::ParseFloat(fields[j], &x) || !std::isfinite(x))
        throw ParseError("bad number '" + std::string(fields[j]) + "'", n + 1);
      v.push_back(x);
    }
    if (!have_dim) {
      set = EmbeddingSet(v.size());
      have_dim = true;
    } else if (v.size() != set.dim()) {
      throw ParseError("dimension " + std::to_string(v.size()) +
                           " differs from " + std::to_string(set.dim()),
                       n + 1);
    }
    try {
      set.Add(std::string(fields[0]), std::move(v));
    } catch (const ContractError& e) {
      throw ParseError(e.what(), n + 1);
    }
  }
  return set;
}

EmbeddingSet ReadEmbeddings(const std::string& path) {
  std::string data = internal::ReadFile(path);
  if (data.size() >= 4 && std::string_view(data).substr(0, 4) ==
                              std::string_view(kSvebMagic, 4)) {
    return DecodeEmbeddings(data);
  }
  return ParseEmbeddingsTsv(data);
}

std::map<std::string, std::string> ReadLabels(const std::string& path) {
  std::string data = internal::ReadFile(path);
  std::map<std::string, std::string> labels;
  auto lines = internal::SplitLines(data);
  for (size_t n = 0; n < lines.size(); ++n) {
    auto fields = internal::SplitFields(lines[n]);
    if (fields.empty() || fields[0].front() == '#') continue;
    if (fields.size() != 2) throw ParseError("expected `id speaker`", n + 1);
    auto [it, inserted] =
        labels.emplace(std::string(fields[0]), std::string(fields[1]));
    if (!inserted)
      throw ParseError("duplicate label for " + it->first, n + 1);
  }
  return labels;
}

void WriteLabels(const std::map<std::string, std::string>& labels,
                 const std::string& path) {
  std::string out;
  for (const auto& [id, label] : labels) out += id + '\t' + label + '\n';
  internal::WriteFile(path, out);
}

void AttachLabels(EmbeddingSet* set,
                  const std::map<std::string, std::string>& labels,
                  bool strict) {
  for (const auto& [id, label] : labels) {
    if (!set->Contains(id)) {
      if (strict) throw LookupError(id);
      continue;
    }
    set->SetLabel(id, label);
  }
}

}  // namespace svkit
