#pragma once
#include <map>
#include <set>
#include <string>

#include "fedlab/errors.hpp"

namespace fedlab {

// Flat key=value text config; '#' starts a comment; keys are unique.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& dflt) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long dflt) const;
  double get_real(const std::string& key) const;
  double get_real(const std::string& key, double dflt) const;

  // Unknown keys are hard errors.
  void restrict_keys(const std::set<std::string>& allowed) const;

  std::string echo() const;  // canonical serialized form

  const std::map<std::string, std::string>& entries() const { return kv_; }
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace fedlab
