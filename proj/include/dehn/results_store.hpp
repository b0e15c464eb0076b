#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "dehn/errors.hpp"
#include "dehn/invariant.hpp"
#include "dehn/json_io.hpp"

namespace dehn {

inline constexpr const char* tool_version = "0.1.0";

/// Lowercase hex SHA-256 of `data`.
inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

struct StoreKey {
  std::string knot;
  residue p = 0;
  std::string kind;
  std::string convention = convention_version;

  std::string str() const { return knot + "|" + std::to_string(p) + "|" + kind + "|" + convention; }
  friend bool operator==(const StoreKey&, const StoreKey&) = default;
};

struct StoreRecord {
  StoreKey key;
  std::string inputs_hash;
  Json output;
  std::string timestamp;
  std::string version = tool_version;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

/// Timestamp goes last so two runs with equal inputs differ only in the tail.
inline std::string serialize_record(const StoreRecord& r) {
  Json j{{"knot", r.key.knot},     {"p", r.key.p},
         {"kind", r.key.kind},     {"convention", r.key.convention},
         {"inputs_hash", r.inputs_hash}, {"tool_version", r.version},
         {"output", r.output},     {"timestamp", r.timestamp}};
  return j.dump();
}

inline StoreRecord parse_record(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
    StoreRecord r;
    r.key = {j.at("knot").get<std::string>(), j.at("p").get<residue>(), j.at("kind").get<std::string>(),
             j.at("convention").get<std::string>()};
    r.inputs_hash = j.at("inputs_hash").get<std::string>();
    r.version = j.at("tool_version").get<std::string>();
    r.output = j.at("output");
    r.timestamp = j.at("timestamp").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("corrupt results record: ") + e.what());
  }
}

/// Append-only JSON-lines file of records plus an index sidecar (<path>.idx)
/// mapping key and inputs hash to byte offsets. One writer at a time; the
/// index is rebuilt from the data file whenever it is missing or stale.
class ResultsStore {
public:
  explicit ResultsStore(std::filesystem::path path) : path_(std::move(path)), index_path_(path_.string() + ".idx") {
    load_index();
  }

  const std::filesystem::path& path() const noexcept { return path_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Output of the latest record with this key and inputs hash.
  std::optional<Json> lookup(const StoreKey& key, const std::string& inputs_hash) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
      if (it->key == key.str() && it->hash == inputs_hash)
        return read_at(*it).output;
    return std::nullopt;
  }

  std::vector<StoreRecord> records() const {
    std::vector<StoreRecord> out;
    for (const auto& e : entries_)
      out.push_back(read_at(e));
    return out;
  }

  void append(const StoreRecord& r) {
    const std::string line = serialize_record(r);
    std::uint64_t offset = file_size();
    {
      std::ofstream data(path_, std::ios::app | std::ios::binary);
      if (!data)
        throw InputError("cannot write results store " + path_.string());
      data << line << '\n';
    }
    Entry e{r.key.str(), r.inputs_hash, offset, line.size() + 1};
    std::ofstream idx(index_path_, std::ios::app | std::ios::binary);
    idx << index_line(e) << '\n';
    entries_.push_back(std::move(e));
  }

  /// Returns the cached output or computes, stores and returns a fresh one.
  template <typename Fn>
  Json get_or_compute(const StoreKey& key, const std::string& inputs_hash, Fn&& compute, bool* hit = nullptr) {
    if (auto cached = lookup(key, inputs_hash)) {
      if (hit)
        *hit = true;
      return *cached;
    }
    if (hit)
      *hit = false;
    Json out = compute();
    append({key, inputs_hash, out, utc_timestamp(), tool_version});
    return out;
  }

private:
  struct Entry {
    std::string key;
    std::string hash;
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
  };

  std::filesystem::path path_;
  std::filesystem::path index_path_;
  std::vector<Entry> entries_;

  std::uint64_t file_size() const {
    std::error_code ec;
    auto n = std::filesystem::file_size(path_, ec);
    return ec ? 0 : n;
  }

  static std::string index_line(const Entry& e) {
    return Json{{"key", e.key}, {"inputs_hash", e.hash}, {"offset", e.offset}, {"length", e.length}}.dump();
  }

  StoreRecord read_at(const Entry& e) const {
    std::ifstream in(path_, std::ios::binary);
    in.seekg(static_cast<std::streamoff>(e.offset));
    std::string line(e.length, '\0');
    in.read(line.data(), static_cast<std::streamsize>(e.length));
    if (!in || line.empty() || line.back() != '\n')
      throw InputError("results store index points outside " + path_.string());
    line.pop_back();
    return parse_record(line);
  }

  void load_index() {
    entries_.clear();
    const std::uint64_t size = file_size();
    std::ifstream idx(index_path_, std::ios::binary);
    std::uint64_t covered = 0;
    bool ok = static_cast<bool>(idx);
    std::string line;
    while (ok && std::getline(idx, line)) {
      try {
        Json j = Json::parse(line);
        Entry e{j.at("key").get<std::string>(), j.at("inputs_hash").get<std::string>(),
                j.at("offset").get<std::uint64_t>(), j.at("length").get<std::uint64_t>()};
        ok = e.offset == covered;
        covered = e.offset + e.length;
        entries_.push_back(std::move(e));
      } catch (const nlohmann::json::exception&) {
        ok = false;
      }
    }
    if (ok && covered == size)
      return;
    rebuild_index();
  }

  void rebuild_index() {
    entries_.clear();
    std::ifstream data(path_, std::ios::binary);
    std::string line;
    std::uint64_t offset = 0;
    while (data && std::getline(data, line)) {
      const std::uint64_t len = line.size() + 1;
      if (!line.empty()) {
        StoreRecord r = parse_record(line);
        entries_.push_back({r.key.str(), r.inputs_hash, offset, len});
      }
      offset += len;
    }
    std::ofstream idx(index_path_, std::ios::trunc | std::ios::binary);
    for (const auto& e : entries_)
      idx << index_line(e) << '\n';
  }
};

} // namespace dehn
