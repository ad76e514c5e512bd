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

#include <array>
#include <bit>
#include <cstring>
#include <limits>
#include <sstream>

#include "driftood/error.h"
#include "json.hpp"

namespace driftood {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

void PutU32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutFloats(std::string& buf, const std::vector<float>& v) {
  for (float f : v) PutU32(buf, std::bit_cast<std::uint32_t>(f));
}

std::uint32_t GetU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t GetU64(const unsigned char* p) {
  return static_cast<std::uint64_t>(GetU32(p)) |
         (static_cast<std::uint64_t>(GetU32(p + 4)) << 32);
}

void GetFloats(const unsigned char* p, std::size_t n, std::vector<float>& out) {
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::bit_cast<float>(GetU32(p + 4 * i));
}

std::uint64_t FileSize(const fs::path& path) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec) throw Error(ErrorCode::kIOFailure, "cannot stat " + path.string() + ": " + ec.message());
  return size;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIOFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void CheckVectorSize(const std::vector<float>& v, std::size_t expected, const char* field) {
  if (v.size() != expected) {
    throw Error(ErrorCode::kManifestMismatch,
                std::string(field) + " has " + std::to_string(v.size()) + " floats, manifest says " +
                    std::to_string(expected));
  }
}

// Checks the timestep ordering and per-timestep counts of a record stream.
void TrackRecord(const DatasetManifest& m, const SampleRecord& r, std::uint64_t index,
                 std::vector<TimestepCounts>& seen, std::uint32_t& last_timestep) {
  if (r.timestep >= m.timesteps) {
    throw Error(ErrorCode::kManifestMismatch,
                "record " + std::to_string(index) + " has timestep " +
                    std::to_string(r.timestep) + " >= " + std::to_string(m.timesteps));
  }
  if (index > 0 && r.timestep < last_timestep) {
    throw Error(ErrorCode::kUnsortedTimesteps,
                "record " + std::to_string(index) + " goes back to timestep " +
                    std::to_string(r.timestep));
  }
  if (r.label < -1 || r.label >= static_cast<std::int32_t>(m.num_classes)) {
    throw Error(ErrorCode::kLabelOutOfRange,
                "record " + std::to_string(index) + " label " + std::to_string(r.label));
  }
  last_timestep = r.timestep;
  auto& c = seen[r.timestep];
  const auto& expected = m.counts[r.timestep];
  if (r.is_id() ? ++c.n_id > expected.n_id : ++c.n_ood > expected.n_ood) {
    throw Error(ErrorCode::kManifestMismatch,
                "more " + std::string(r.is_id() ? "ID" : "OOD") + " records at timestep " +
                    std::to_string(r.timestep) + " than the manifest declares");
  }
}

}  // namespace

void DatasetManifest::Validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kManifestMismatch, what); };
  if (d < 1) fail("d must be at least 1");
  if (num_classes < 2) fail("K must be at least 2");
  if (timesteps < 1) fail("timesteps must be at least 1");
  if (class_names.size() != num_classes) fail("class_names length differs from K");
  if (counts.size() != timesteps) fail("counts length differs from timesteps");
  if (prompt_counts.size() != num_classes) fail("prompt_counts length differs from K");
  for (auto p : prompt_counts) {
    if (p < 1) fail("every class needs at least one prompt");
  }
  if (endianness != "little") fail("only little-endian datasets are supported");
  if (dtype != "f32") fail("only f32 datasets are supported");
}

std::uint64_t DatasetManifest::RecordBytes(bool is_id) const {
  // timestep u32 + label i32 + global + patches + caption (+ corrupted) + pair_id u64
  const std::uint64_t vectors = 2 + static_cast<std::uint64_t>(num_patches) + (is_id ? 1 : 0);
  return 4 + 4 + 4 * vectors * d + 8;
}

std::uint64_t DatasetManifest::ExpectedRecordsBytes() const {
  std::uint64_t total = 0;
  for (const auto& c : counts) total += c.n_id * RecordBytes(true) + c.n_ood * RecordBytes(false);
  return total;
}

std::uint64_t DatasetManifest::ExpectedPromptsBytes() const {
  std::uint64_t total = 0;
  for (auto p : prompt_counts) total += 4ULL * p * d;
  return total;
}

std::uint64_t DatasetManifest::TotalRecords() const {
  std::uint64_t total = 0;
  for (const auto& c : counts) total += c.n_id + c.n_ood;
  return total;
}

std::string ManifestToJson(const DatasetManifest& m) {
  Json j;
  j["format_version"] = m.format_version;
  j["d"] = m.d;
  j["N"] = m.num_patches;
  j["K"] = m.num_classes;
  j["class_names"] = m.class_names;
  j["timesteps"] = m.timesteps;
  Json counts = Json::array();
  for (const auto& c : m.counts) counts.push_back({{"n_id", c.n_id}, {"n_ood", c.n_ood}});
  j["counts"] = counts;
  j["prompt_counts"] = m.prompt_counts;
  j["endianness"] = m.endianness;
  j["dtype"] = m.dtype;
  return j.dump(2) + "\n";
}

DatasetManifest ManifestFromJson(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kBadMagic, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format_version") || !j["format_version"].is_string()) {
    throw Error(ErrorCode::kBadMagic, "manifest has no format_version tag");
  }
  const auto version = j["format_version"].get<std::string>();
  if (version.rfind("TQE", 0) != 0) {
    throw Error(ErrorCode::kBadMagic, "format_version '" + version + "' is not a TQE tag");
  }
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kVersionUnsupported, "format_version '" + version + "'");
  }
  DatasetManifest m;
  try {
    m.format_version = version;
    m.d = j.at("d").get<std::uint32_t>();
    m.num_patches = j.at("N").get<std::uint32_t>();
    m.num_classes = j.at("K").get<std::uint32_t>();
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.timesteps = j.at("timesteps").get<std::uint32_t>();
    for (const auto& c : j.at("counts")) {
      m.counts.push_back({c.at("n_id").get<std::uint64_t>(), c.at("n_ood").get<std::uint64_t>()});
    }
    m.prompt_counts = j.at("prompt_counts").get<std::vector<std::uint32_t>>();
    m.endianness = j.value("endianness", std::string("little"));
    m.dtype = j.value("dtype", std::string("f32"));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kManifestMismatch, std::string("malformed manifest: ") + e.what());
  }
  m.Validate();
  return m;
}

DatasetWriter::DatasetWriter(const fs::path& dir, DatasetManifest manifest)
    : dir_(dir), manifest_(std::move(manifest)) {
  manifest_.Validate();
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kIOFailure, "cannot create " + dir_.string() + ": " + ec.message());
  records_.open(dir_ / kRecordsFile, std::ios::binary | std::ios::trunc);
  if (!records_) throw Error(ErrorCode::kIOFailure, "cannot write " + (dir_ / kRecordsFile).string());
  seen_.assign(manifest_.timesteps, {});
}

DatasetWriter::~DatasetWriter() {
  // Close() reports errors; a writer abandoned mid-stream leaves partial files.
  if (records_.is_open()) records_.close();
}

void DatasetWriter::WritePrompts(const PromptTable& prompts) {
  if (prompts.size() != manifest_.num_classes) {
    throw Error(ErrorCode::kManifestMismatch, "prompt table has wrong class count");
  }
  std::string buf;
  for (std::size_t k = 0; k < prompts.size(); ++k) {
    if (prompts[k].size() != manifest_.prompt_counts[k]) {
      throw Error(ErrorCode::kManifestMismatch,
                  "class " + std::to_string(k) + " prompt count differs from manifest");
    }
    for (const auto& e : prompts[k]) {
      CheckVectorSize(e, manifest_.d, "prompt embedding");
      PutFloats(buf, e);
    }
  }
  std::ofstream out(dir_ / kPromptsFile, std::ios::binary | std::ios::trunc);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::kIOFailure, "cannot write prompts.bin");
  prompts_written_ = true;
}

void DatasetWriter::Append(const SampleRecord& r) {
  std::uint64_t index = 0;
  for (const auto& c : seen_) index += c.n_id + c.n_ood;
  TrackRecord(manifest_, r, index, seen_, last_timestep_);
  const std::size_t d = manifest_.d;
  CheckVectorSize(r.global, d, "global");
  CheckVectorSize(r.patches, static_cast<std::size_t>(manifest_.num_patches) * d, "patches");
  CheckVectorSize(r.caption, d, "caption");
  CheckVectorSize(r.corrupted_global, r.is_id() ? d : 0, "corrupted_global");

  std::string buf;
  buf.reserve(manifest_.RecordBytes(r.is_id()));
  PutU32(buf, r.timestep);
  PutU32(buf, static_cast<std::uint32_t>(r.label));
  PutFloats(buf, r.global);
  PutFloats(buf, r.patches);
  PutFloats(buf, r.caption);
  PutFloats(buf, r.corrupted_global);
  PutU64(buf, r.pair_id);
  records_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!records_) throw Error(ErrorCode::kIOFailure, "write to records.bin failed");
}

void DatasetWriter::Close() {
  if (closed_) return;
  if (!prompts_written_) throw Error(ErrorCode::kManifestMismatch, "prompts were never written");
  for (std::uint32_t t = 0; t < manifest_.timesteps; ++t) {
    if (!(seen_[t] == manifest_.counts[t])) {
      throw Error(ErrorCode::kManifestMismatch,
                  "timestep " + std::to_string(t) + " record counts differ from manifest");
    }
  }
  records_.close();
  if (!records_) throw Error(ErrorCode::kIOFailure, "closing records.bin failed");
  std::ofstream out(dir_ / kManifestFile, std::ios::binary | std::ios::trunc);
  out << ManifestToJson(manifest_);
  if (!out) throw Error(ErrorCode::kIOFailure, "cannot write manifest.json");
  closed_ = true;
}

void WriteDataset(const fs::path& dir, const DatasetManifest& manifest,
                  const PromptTable& prompts, const std::vector<SampleRecord>& records) {
  DatasetWriter writer(dir, manifest);
  writer.WritePrompts(prompts);
  for (const auto& r : records) writer.Append(r);
  writer.Close();
}

DatasetReader::DatasetReader(const fs::path& dir) : dir_(dir) {
  manifest_ = ManifestFromJson(ReadText(dir_ / kManifestFile));
  seen_.assign(manifest_.timesteps, {});

  const auto path = dir_ / kRecordsFile;
  const std::uint64_t actual = FileSize(path);
  const std::uint64_t expected = manifest_.ExpectedRecordsBytes();
  if (actual != expected) {
    // A file that is an exact fit for the same record counts at another
    // dimension was written against a different manifest; anything else
    // shorter than expected is a truncated write.
    const std::uint64_t n_total = manifest_.TotalRecords();
    std::uint64_t per_dim = 0;
    for (const auto& c : manifest_.counts) {
      per_dim += 4 * (c.n_id * (3 + manifest_.num_patches) + c.n_ood * (2 + manifest_.num_patches));
    }
    const std::uint64_t fixed = 16 * n_total;
    const bool other_dim = actual > fixed && per_dim > 0 && (actual - fixed) % per_dim == 0;
    if (actual > expected || other_dim) {
      throw Error(ErrorCode::kManifestMismatch,
                  "records.bin is " + std::to_string(actual) + " bytes, manifest implies " +
                      std::to_string(expected));
    }
    throw Error(ErrorCode::kTruncatedFile,
                "records.bin ends at byte offset " + std::to_string(actual) + ", expected " +
                    std::to_string(expected) + " bytes");
  }
  const auto prompts_path = dir_ / kPromptsFile;
  const std::uint64_t prompts_actual = FileSize(prompts_path);
  if (prompts_actual != manifest_.ExpectedPromptsBytes()) {
    throw Error(prompts_actual < manifest_.ExpectedPromptsBytes() ? ErrorCode::kTruncatedFile
                                                                  : ErrorCode::kManifestMismatch,
                "prompts.bin is " + std::to_string(prompts_actual) + " bytes, expected " +
                    std::to_string(manifest_.ExpectedPromptsBytes()));
  }
  records_.open(path, std::ios::binary);
  if (!records_) throw Error(ErrorCode::kIOFailure, "cannot open " + path.string());
}

PromptTable DatasetReader::ReadPrompts() const {
  std::ifstream in(dir_ / kPromptsFile, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIOFailure, "cannot open prompts.bin");
  PromptTable table(manifest_.num_classes);
  std::vector<unsigned char> buf(4ULL * manifest_.d);
  std::uint64_t offset = 0;
  for (std::uint32_t k = 0; k < manifest_.num_classes; ++k) {
    for (std::uint32_t i = 0; i < manifest_.prompt_counts[k]; ++i) {
      if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
        throw Error(ErrorCode::kTruncatedFile,
                    "prompts.bin truncated at byte offset " + std::to_string(offset));
      }
      std::vector<float> e;
      GetFloats(buf.data(), manifest_.d, e);
      table[k].push_back(std::move(e));
      offset += buf.size();
    }
  }
  return table;
}

bool DatasetReader::Next(SampleRecord& out) {
  if (records_read_ == manifest_.TotalRecords()) return false;
  const std::uint64_t start = offset_;
  auto read = [&](void* dst, std::size_t n) {
    if (!records_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n))) {
      throw Error(ErrorCode::kTruncatedFile,
                  "record " + std::to_string(records_read_) + " starting at byte offset " +
                      std::to_string(start) + " is incomplete");
    }
    offset_ += n;
  };
  std::array<unsigned char, 8> head;
  read(head.data(), head.size());
  out.timestep = GetU32(head.data());
  out.label = static_cast<std::int32_t>(GetU32(head.data() + 4));
  TrackRecord(manifest_, out, records_read_, seen_, last_timestep_);

  const std::size_t d = manifest_.d;
  const std::size_t n_floats =
      d * (2 + manifest_.num_patches + (out.is_id() ? 1 : 0));
  std::vector<unsigned char> body(4 * n_floats + 8);
  read(body.data(), body.size());
  const unsigned char* p = body.data();
  GetFloats(p, d, out.global);
  p += 4 * d;
  GetFloats(p, d * manifest_.num_patches, out.patches);
  p += 4 * d * manifest_.num_patches;
  GetFloats(p, d, out.caption);
  p += 4 * d;
  if (out.is_id()) {
    GetFloats(p, d, out.corrupted_global);
    p += 4 * d;
  } else {
    out.corrupted_global.clear();
  }
  out.pair_id = GetU64(p);
  ++records_read_;
  return true;
}

}  // namespace driftood
