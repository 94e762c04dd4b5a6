#include "tmrbe/provenance.hpp"

#include <cstdio>
#include <sstream>

#include "tmrbe/rng.hpp"

namespace tmrbe {

Provenance& Provenance::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
  return *this;
}

Provenance& Provenance::add(const std::string& key, double value) {
  std::ostringstream os;
  os << value;
  return add(key, os.str());
}

Provenance& Provenance::add(const std::string& key, std::int64_t value) { return add(key, std::to_string(value)); }
Provenance& Provenance::add(const std::string& key, std::uint64_t value) { return add(key, std::to_string(value)); }
Provenance& Provenance::add(const std::string& key, bool value) { return add(key, std::string(value ? "1" : "0")); }

std::uint64_t Provenance::hash() const {
  std::string flat = command_;
  for (const auto& [k, v] : entries_) flat += '\n' + k + '=' + v;
  return stream_id(flat);
}

std::string Provenance::line() const {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash()));
  std::string out = std::string("# tmrbe ") + kVersion + " command=" + command_ + " config=" + hex;
  for (const auto& [k, v] : entries_) out += ' ' + k + '=' + v;
  return out;
}

}  // namespace tmrbe
