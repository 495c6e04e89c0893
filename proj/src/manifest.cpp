#include "betagos/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace betagos {

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fnv1a_file_hex(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return fnv1a_hex(os.str());
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["tool"] = kToolVersion;
  j["subcommand"] = subcommand;
  j["config"] = config;
  j["seed"] = seed;
  j["substreams"] = substreams;
  j["inputs"] = input_digests;
  j["outputs"] = output_digests;
  return j.dump(2);
}

RunManifest RunManifest::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.config = j.at("config");
  m.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("substreams"))
    m.substreams = j["substreams"].get<std::map<std::string, std::uint64_t>>();
  if (j.contains("inputs"))
    m.input_digests = j["inputs"].get<std::map<std::string, std::string>>();
  if (j.contains("outputs"))
    m.output_digests = j["outputs"].get<std::map<std::string, std::string>>();
  return m;
}

}  // namespace betagos
