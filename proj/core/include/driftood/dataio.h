// Copyright 2026 The driftood Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRIFTOOD_DATAIO_H_
#define DRIFTOOD_DATAIO_H_

// TQE1 on-disk dataset: manifest.json, records.bin and prompts.bin in one
// directory. All binary fields are little-endian; see docs/FORMAT.md for the
// byte layout.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace driftood {

inline constexpr char kFormatVersion[] = "TQE1";
inline constexpr char kManifestFile[] = "manifest.json";
inline constexpr char kRecordsFile[] = "records.bin";
inline constexpr char kPromptsFile[] = "prompts.bin";

struct TimestepCounts {
  std::uint64_t n_id = 0;
  std::uint64_t n_ood = 0;

  bool operator==(const TimestepCounts&) const = default;
};

struct DatasetManifest {
  std::string format_version = kFormatVersion;
  std::uint32_t d = 0;
  std::uint32_t num_patches = 0;  // N; 0 means no patch payload
  std::uint32_t num_classes = 0;  // K
  std::vector<std::string> class_names;
  std::uint32_t timesteps = 0;
  std::vector<TimestepCounts> counts;
  std::vector<std::uint32_t> prompt_counts;
  std::string endianness = "little";
  std::string dtype = "f32";

  // Throws kInvalidConfig / kManifestMismatch for inconsistent fields.
  void Validate() const;

  std::uint64_t RecordBytes(bool is_id) const;
  std::uint64_t ExpectedRecordsBytes() const;
  std::uint64_t ExpectedPromptsBytes() const;
  std::uint64_t TotalRecords() const;

  bool operator==(const DatasetManifest&) const = default;
};

// One record exactly as stored. Vectors may be unnormalized.
struct SampleRecord {
  std::uint32_t timestep = 0;
  std::int32_t label = -1;  // -1 marks OOD
  std::vector<float> global;
  std::vector<float> patches;  // N * d floats, empty when N == 0
  std::vector<float> caption;
  std::vector<float> corrupted_global;  // ID records only
  std::uint64_t pair_id = 0;

  bool is_id() const { return label >= 0; }
  bool operator==(const SampleRecord&) const = default;
};

// prompts[k][i] is the i-th prompt embedding of class k.
using PromptTable = std::vector<std::vector<std::vector<float>>>;

std::string ManifestToJson(const DatasetManifest& manifest);
DatasetManifest ManifestFromJson(const std::string& text);

// Streaming writer. Records must arrive grouped by nondecreasing timestep
// and match the manifest counts; Close() verifies the totals.
class DatasetWriter {
 public:
  DatasetWriter(const std::filesystem::path& dir, DatasetManifest manifest);
  ~DatasetWriter();
  DatasetWriter(const DatasetWriter&) = delete;
  DatasetWriter& operator=(const DatasetWriter&) = delete;

  void WritePrompts(const PromptTable& prompts);
  void Append(const SampleRecord& record);
  void Close();

 private:
  std::filesystem::path dir_;
  DatasetManifest manifest_;
  std::ofstream records_;
  std::vector<TimestepCounts> seen_;
  std::uint32_t last_timestep_ = 0;
  bool prompts_written_ = false;
  bool closed_ = false;
};

// Convenience wrapper over DatasetWriter.
void WriteDataset(const std::filesystem::path& dir, const DatasetManifest& manifest,
                  const PromptTable& prompts, const std::vector<SampleRecord>& records);

// Streaming reader. The constructor validates the manifest and the exact
// byte lengths of both binary files; Next() yields records in file order and
// holds at most one record in memory.
class DatasetReader {
 public:
  explicit DatasetReader(const std::filesystem::path& dir);

  const DatasetManifest& manifest() const { return manifest_; }
  PromptTable ReadPrompts() const;

  // Returns false at end of data.
  bool Next(SampleRecord& out);
  std::uint64_t records_read() const { return records_read_; }

 private:
  std::filesystem::path dir_;
  DatasetManifest manifest_;
  std::ifstream records_;
  std::uint64_t offset_ = 0;
  std::uint64_t records_read_ = 0;
  std::vector<TimestepCounts> seen_;
  std::uint32_t last_timestep_ = 0;
};

}  // namespace driftood

#endif  // DRIFTOOD_DATAIO_H_
