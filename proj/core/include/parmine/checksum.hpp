#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace parmine {

// 64-bit FNV-1a, used for manifests and lexicon fingerprints (not security).
class Fnv1a {
 public:
  void update(std::string_view bytes);
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string fnv1a_hex(std::string_view bytes);
std::string file_checksum(const std::string& path);

}  // namespace parmine
