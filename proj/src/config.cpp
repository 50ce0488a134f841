#include "fedlab/config.hpp"

#include <fstream>
#include <sstream>

namespace fedlab {

namespace {
std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_error, "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      raise(ErrorCode::config_error,
            "config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      raise(ErrorCode::config_error,
            "config line " + std::to_string(lineno) + ": empty key");
    if (cfg.kv_.count(key))
      raise(ErrorCode::config_error, "duplicate config key: " + key);
    cfg.kv_[key] = value;
  }
  return cfg;
}

std::string Config::get_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    raise(ErrorCode::config_error, "missing config key: " + key);
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& dflt) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? dflt : it->second;
}

long long Config::get_int(const std::string& key) const {
  std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    long long r = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    raise(ErrorCode::config_error, "config key " + key + ": not an integer");
  }
}

long long Config::get_int(const std::string& key, long long dflt) const {
  return has(key) ? get_int(key) : dflt;
}

double Config::get_real(const std::string& key) const {
  std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    raise(ErrorCode::config_error, "config key " + key + ": not a number");
  }
}

double Config::get_real(const std::string& key, double dflt) const {
  return has(key) ? get_real(key) : dflt;
}

void Config::restrict_keys(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : kv_)
    if (!allowed.count(key))
      raise(ErrorCode::config_error, "unknown config key: " + key);
}

std::string Config::echo() const {
  std::string out;
  for (const auto& [key, value] : kv_) out += key + " = " + value + "\n";
  return out;
}

}  // namespace fedlab
