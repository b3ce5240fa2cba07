#include "core/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace dph {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_config("config line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail_config("config line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail_config("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_config("config line " + std::to_string(lineno) + ": empty key");
    cfg.values_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_config("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

std::string Config::get_str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail_config("missing config key: " + key);
  return it->second;
}

std::string Config::get_str(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_num(const std::string& key) const {
  const std::string s = get_str(key);
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) fail_config("config key " + key + ": trailing characters in number '" + s + "'");
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail_config("config key " + key + ": not a number: '" + s + "'");
  }
}

double Config::get_num(const std::string& key, double fallback) const { return has(key) ? get_num(key) : fallback; }

long Config::get_int(const std::string& key) const {
  const double v = get_num(key);
  const long r = static_cast<long>(v);
  if (static_cast<double>(r) != v) fail_config("config key " + key + ": expected integer");
  return r;
}

long Config::get_int(const std::string& key, long fallback) const { return has(key) ? get_int(key) : fallback; }

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_str(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail_config("config key " + key + ": expected boolean, got '" + s + "'");
}

std::vector<double> Config::get_list(const std::string& key) const {
  const std::string s = get_str(key);
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (...) {
      fail_config("config key " + key + ": bad list element '" + tok + "'");
    }
  }
  if (out.empty()) fail_config("config key " + key + ": empty list");
  return out;
}

std::string Config::canonical() const {
  std::string cur_section;
  std::ostringstream out;
  for (const auto& [k, v] : values_) {
    const size_t dot = k.rfind('.');
    const std::string section = dot == std::string::npos ? "" : k.substr(0, dot);
    const std::string key = dot == std::string::npos ? k : k.substr(dot + 1);
    if (section != cur_section) {
      out << "[" << section << "]\n";
      cur_section = section;
    }
    out << key << " = " << v << "\n";
  }
  return out.str();
}

std::string fnv1a_hex(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string Config::hash() const { return fnv1a_hex(canonical()); }

}  // namespace dph
