#pragma once
#include <map>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace dph {

// Line-oriented "key = value" files grouped by [section] headers.
// Lookup keys are "section.key"; '#' starts a comment.
class Config {
 public:
  static Config parse_text(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_str(const std::string& key) const;
  std::string get_str(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key) const;
  double get_num(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key) const;  // comma separated

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  // Deterministic serialization: sections and keys sorted, single spacing.
  std::string canonical() const;
  // FNV-1a over the canonical form, hex encoded.
  std::string hash() const;

  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string fnv1a_hex(const std::string& data);

}  // namespace dph
