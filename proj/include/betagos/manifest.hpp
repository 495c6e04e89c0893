#ifndef BETAGOS_MANIFEST_HPP
#define BETAGOS_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"

namespace betagos {

inline constexpr const char* kToolVersion = "betagos 0.1.0";

// 64-bit FNV-1a, hex-encoded. Cheap content fingerprint for the manifest's
// reproducibility contract (not a cryptographic digest).
std::string fnv1a_hex(std::string_view bytes);
std::string fnv1a_file_hex(const std::string& path);  // throws on unreadable file

// Everything needed to reproduce one CLI invocation bit-exactly.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config;  // full flag echo
  std::uint64_t seed = 0;
  std::map<std::string, std::uint64_t> substreams;
  std::map<std::string, std::string> input_digests;
  std::map<std::string, std::string> output_digests;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

}  // namespace betagos

#endif  // BETAGOS_MANIFEST_HPP
