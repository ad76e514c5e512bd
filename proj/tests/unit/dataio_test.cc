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

#include "driftood/dataio.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "driftood/error.h"
#include "gtest/gtest.h"
#include "support/test_util.h"

namespace driftood {
namespace {

namespace fs = std::filesystem;
using ::driftood::testing::CaughtCode;
using ::driftood::testing::ReadFileBytes;
using ::driftood::testing::ScopedTempDir;

std::vector<float> Filled(std::size_t n, float start) {
  std::vector<float> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start + 0.5f * static_cast<float>(i);
  return v;
}

DatasetManifest SmallManifest(std::uint32_t d, std::uint32_t n_patches) {
  DatasetManifest m;
  m.d = d;
  m.num_patches = n_patches;
  m.num_classes = 2;
  m.class_names = {"a", "b"};
  m.timesteps = 2;
  m.counts = {{2, 1}, {1, 1}};
  m.prompt_counts = {1, 2};
  return m;
}

SampleRecord MakeRecord(const DatasetManifest& m, std::uint32_t t, std::int32_t label,
                        std::uint64_t pair_id) {
  SampleRecord r;
  r.timestep = t;
  r.label = label;
  const float base = static_cast<float>(pair_id);
  r.global = Filled(m.d, base);
  r.patches = Filled(static_cast<std::size_t>(m.d) * m.num_patches, base + 100.0f);
  r.caption = Filled(m.d, -base);
  if (label >= 0) r.corrupted_global = Filled(m.d, base + 0.25f);
  r.pair_id = pair_id;
  return r;
}

std::vector<SampleRecord> SmallRecords(const DatasetManifest& m) {
  return {MakeRecord(m, 0, 0, 1), MakeRecord(m, 0, -1, 2), MakeRecord(m, 0, 1, 3),
          MakeRecord(m, 1, 1, 4), MakeRecord(m, 1, -1, 5)};
}

PromptTable SmallPrompts(const DatasetManifest& m) {
  return {{Filled(m.d, 7.0f)}, {Filled(m.d, 8.0f), Filled(m.d, 9.0f)}};
}

std::vector<SampleRecord> ReadAll(DatasetReader& reader) {
  std::vector<SampleRecord> out;
  SampleRecord r;
  while (reader.Next(r)) out.push_back(r);
  return out;
}

void Truncate(const fs::path& path, std::uintmax_t size) { fs::resize_file(path, size); }

TEST(ManifestTest, JsonRoundTrip) {
  const auto m = SmallManifest(3, 2);
  EXPECT_EQ(ManifestFromJson(ManifestToJson(m)), m);
}

TEST(ManifestTest, ByteCounts) {
  const auto m = SmallManifest(3, 2);
  EXPECT_EQ(m.RecordBytes(true), 16u + 4u * 3u * 5u);
  EXPECT_EQ(m.RecordBytes(false), 16u + 4u * 3u * 4u);
  EXPECT_EQ(m.ExpectedRecordsBytes(), 3 * m.RecordBytes(true) + 2 * m.RecordBytes(false));
  EXPECT_EQ(m.ExpectedPromptsBytes(), 3u * 4u * 3u);
  EXPECT_EQ(m.TotalRecords(), 5u);
}

TEST(ManifestTest, BadTagsAndFields) {
  EXPECT_EQ(CaughtCode([] { ManifestFromJson("not json"); }), ErrorCode::kBadMagic);
  EXPECT_EQ(CaughtCode([] { ManifestFromJson("{\"d\": 3}"); }), ErrorCode::kBadMagic);
  EXPECT_EQ(CaughtCode([] { ManifestFromJson("{\"format_version\": \"XYZ1\"}"); }),
            ErrorCode::kBadMagic);
  EXPECT_EQ(CaughtCode([] { ManifestFromJson("{\"format_version\": \"TQE2\"}"); }),
            ErrorCode::kVersionUnsupported);
  EXPECT_EQ(CaughtCode([] { ManifestFromJson("{\"format_version\": \"TQE1\"}"); }),
            ErrorCode::kManifestMismatch);
  auto m = SmallManifest(3, 0);
  m.endianness = "big";
  EXPECT_EQ(CaughtCode([&] { ManifestFromJson(ManifestToJson(m)); }),
            ErrorCode::kManifestMismatch);
  m = SmallManifest(3, 0);
  m.class_names.pop_back();
  EXPECT_EQ(CaughtCode([&] { m.Validate(); }), ErrorCode::kManifestMismatch);
}

TEST(DatasetIoTest, RoundTripWithPatches) {
  ScopedTempDir dir("dataio_rt");
  const auto m = SmallManifest(4, 3);
  const auto records = SmallRecords(m);
  WriteDataset(dir.path(), m, SmallPrompts(m), records);
  DatasetReader reader(dir.path());
  EXPECT_EQ(reader.manifest(), m);
  EXPECT_EQ(reader.ReadPrompts(), SmallPrompts(m));
  EXPECT_EQ(ReadAll(reader), records);
  EXPECT_EQ(reader.records_read(), 5u);
}

TEST(DatasetIoTest, RoundTripWithoutPatchesOrOod) {
  ScopedTempDir dir("dataio_nopatch");
  auto m = SmallManifest(2, 0);
  m.counts = {{1, 0}, {1, 0}};
  const std::vector<SampleRecord> records = {MakeRecord(m, 0, 1, 1), MakeRecord(m, 1, 0, 2)};
  WriteDataset(dir.path(), m, SmallPrompts(m), records);
  DatasetReader reader(dir.path());
  const auto back = ReadAll(reader);
  EXPECT_EQ(back, records);
  EXPECT_TRUE(back[0].patches.empty());
}

TEST(DatasetIoTest, GoldenLittleEndianLayout) {
  ScopedTempDir dir("dataio_golden");
  DatasetManifest m;
  m.d = 1;
  m.num_classes = 2;
  m.class_names = {"x", "y"};
  m.timesteps = 1;
  m.counts = {{1, 1}};
  m.prompt_counts = {1, 1};
  SampleRecord id;
  id.timestep = 0;
  id.label = 1;
  id.global = {1.0f};
  id.caption = {-2.0f};
  id.corrupted_global = {0.5f};
  id.pair_id = 0x0102030405060708ULL;
  SampleRecord ood;
  ood.timestep = 0;
  ood.label = -1;
  ood.global = {0.0f};
  ood.caption = {1.0f};
  ood.pair_id = 9;
  WriteDataset(dir.path(), m, {{{1.0f}}, {{2.0f}}}, {id, ood});

  const std::string expected_records(
      "\x00\x00\x00\x00"               // timestep 0
      "\x01\x00\x00\x00"               // label 1
      "\x00\x00\x80\x3f"               // global 1.0f
      "\x00\x00\x00\xc0"               // caption -2.0f
      "\x00\x00\x00\x3f"               // corrupted 0.5f
      "\x08\x07\x06\x05\x04\x03\x02\x01"  // pair_id
      "\x00\x00\x00\x00"               // timestep 0
      "\xff\xff\xff\xff"               // label -1
      "\x00\x00\x00\x00"               // global 0.0f
      "\x00\x00\x80\x3f"               // caption 1.0f
      "\x09\x00\x00\x00\x00\x00\x00\x00",  // pair_id 9
      28 + 24);
  EXPECT_EQ(ReadFileBytes(dir.path() / kRecordsFile), expected_records);
  const std::string expected_prompts("\x00\x00\x80\x3f\x00\x00\x00\x40", 8);
  EXPECT_EQ(ReadFileBytes(dir.path() / kPromptsFile), expected_prompts);
}

TEST(DatasetIoTest, TruncatedRecordsReportOffset) {
  ScopedTempDir dir("dataio_trunc");
  const auto m = SmallManifest(3, 0);
  WriteDataset(dir.path(), m, SmallPrompts(m), SmallRecords(m));
  const auto path = dir.path() / kRecordsFile;
  Truncate(path, fs::file_size(path) - 5);
  try {
    DatasetReader reader(dir.path());
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncatedFile);
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }
}

TEST(DatasetIoTest, TruncatedPrompts) {
  ScopedTempDir dir("dataio_ptrunc");
  const auto m = SmallManifest(3, 0);
  WriteDataset(dir.path(), m, SmallPrompts(m), SmallRecords(m));
  Truncate(dir.path() / kPromptsFile, 4);
  EXPECT_EQ(CaughtCode([&] { DatasetReader reader(dir.path()); }), ErrorCode::kTruncatedFile);
}

TEST(DatasetIoTest, DimensionMismatch) {
  ScopedTempDir dir("dataio_dim");
  const auto m = SmallManifest(3, 0);
  WriteDataset(dir.path(), m, SmallPrompts(m), SmallRecords(m));
  auto other = m;
  other.d = 2;
  std::ofstream(dir.path() / kManifestFile) << ManifestToJson(other);
  EXPECT_EQ(CaughtCode([&] { DatasetReader reader(dir.path()); }),
            ErrorCode::kManifestMismatch);
}

TEST(DatasetIoTest, BadMagicAndVersionOnDisk) {
  ScopedTempDir dir("dataio_magic");
  const auto m = SmallManifest(3, 0);
  WriteDataset(dir.path(), m, SmallPrompts(m), SmallRecords(m));
  auto text = ReadFileBytes(dir.path() / kManifestFile);
  const auto at = text.find("TQE1");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 4, "TQE9");
  std::ofstream(dir.path() / kManifestFile, std::ios::trunc) << text;
  EXPECT_EQ(CaughtCode([&] { DatasetReader reader(dir.path()); }),
            ErrorCode::kVersionUnsupported);
  text.replace(at, 4, "ABCD");
  std::ofstream(dir.path() / kManifestFile, std::ios::trunc) << text;
  EXPECT_EQ(CaughtCode([&] { DatasetReader reader(dir.path()); }), ErrorCode::kBadMagic);
}

TEST(DatasetIoTest, WriterRejectsUnsortedTimesteps) {
  ScopedTempDir dir("dataio_unsorted");
  const auto m = SmallManifest(3, 0);
  DatasetWriter writer(dir.path(), m);
  writer.WritePrompts(SmallPrompts(m));
  writer.Append(MakeRecord(m, 1, 0, 1));
  EXPECT_EQ(CaughtCode([&] { writer.Append(MakeRecord(m, 0, 0, 2)); }),
            ErrorCode::kUnsortedTimesteps);
}

TEST(DatasetIoTest, ReaderRejectsUnsortedTimesteps) {
  ScopedTempDir dir("dataio_unsorted_read");
  auto m = SmallManifest(3, 0);
  m.counts = {{1, 0}, {1, 0}};
  WriteDataset(dir.path(), m, SmallPrompts(m), {MakeRecord(m, 0, 0, 1), MakeRecord(m, 1, 0, 2)});
  // Swap the two equal-length records on disk.
  auto bytes = ReadFileBytes(dir.path() / kRecordsFile);
  const std::size_t half = bytes.size() / 2;
  const std::string swapped = bytes.substr(half) + bytes.substr(0, half);
  std::ofstream(dir.path() / kRecordsFile, std::ios::binary | std::ios::trunc) << swapped;
  DatasetReader reader(dir.path());
  SampleRecord r;
  EXPECT_TRUE(reader.Next(r));
  EXPECT_EQ(CaughtCode([&] { reader.Next(r); }), ErrorCode::kUnsortedTimesteps);
}

TEST(DatasetIoTest, WriterChecksCountsAndShapes) {
  ScopedTempDir dir("dataio_counts");
  const auto m = SmallManifest(3, 0);
  {
    DatasetWriter writer(dir.path() / "a", m);
    writer.WritePrompts(SmallPrompts(m));
    writer.Append(MakeRecord(m, 0, 0, 1));
    EXPECT_EQ(CaughtCode([&] { writer.Close(); }), ErrorCode::kManifestMismatch);
  }
  {
    DatasetWriter writer(dir.path() / "b", m);
    writer.WritePrompts(SmallPrompts(m));
    auto r = MakeRecord(m, 0, 0, 1);
    r.caption.pop_back();
    EXPECT_EQ(CaughtCode([&] { writer.Append(r); }), ErrorCode::kManifestMismatch);
    auto bad_label = MakeRecord(m, 0, 5, 1);
    EXPECT_EQ(CaughtCode([&] { writer.Append(bad_label); }), ErrorCode::kLabelOutOfRange);
  }
}

}  // namespace
}  // namespace driftood
