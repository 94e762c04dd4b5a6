#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tmrbe {

inline constexpr const char* kVersion = "0.1.0";

/// Ordered key=value record of a run's configuration. Rendered as the first
/// line of every emitted CSV:
///   # tmrbe <version> config=<16 hex digits> key=value ...
class Provenance {
 public:
  explicit Provenance(std::string command) : command_(std::move(command)) {}

  Provenance& add(const std::string& key, const std::string& value);
  Provenance& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
  Provenance& add(const std::string& key, double value);
  Provenance& add(const std::string& key, std::int64_t value);
  Provenance& add(const std::string& key, std::uint64_t value);
  Provenance& add(const std::string& key, bool value);

  /// FNV-1a over the command and entries, in insertion order.
  std::uint64_t hash() const;
  std::string line() const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace tmrbe
