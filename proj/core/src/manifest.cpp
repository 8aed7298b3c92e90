#include "snse/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace snse {
namespace {

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t size) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

Manifest::Manifest(const RunConfig& cfg, std::string subcommand)
    : cfg_(cfg), subcommand_(std::move(subcommand)), started_at_(iso8601_utc_now()) {}

void Manifest::add_output(const std::string& run_dir, const std::string& rel_path) {
  OutputRecord rec;
  rec.path = rel_path;
  const std::string full = run_dir + "/" + rel_path;
  std::ifstream in(full, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("manifest: missing output " + full);
  rec.bytes = static_cast<std::uint64_t>(in.tellg());
  rec.fnv64 = hex64(fnv1a_file(full));
  outputs_.push_back(std::move(rec));
}

void Manifest::add_note(const std::string& key, const std::string& value) {
  notes_.emplace_back(key, value);
}

void Manifest::write(const std::string& run_dir) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["subcommand"] = subcommand_;
  j["started_at"] = started_at_;
  j["finished_at"] = iso8601_utc_now();

  const std::string canon = cfg_.canonical_text();
  j["config"] = canon;
  j["config_fnv64"] = hex64(fnv1a(canon.data(), canon.size()));
  j["seed"] = cfg_.seed;

  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outputs_) {
    outs.push_back({{"path", o.path}, {"bytes", o.bytes}, {"fnv64", o.fnv64}});
  }
  j["outputs"] = outs;

  nlohmann::json notes = nlohmann::json::object();
  for (const auto& [k, v] : notes_) notes[k] = v;
  j["notes"] = notes;

  const std::string path = run_dir + "/manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace snse
