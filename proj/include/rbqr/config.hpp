#ifndef RBQR_CONFIG_HPP
#define RBQR_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace rbqr {

/// Line-oriented `key = value` configuration with `[section]` headers.
///
/// A key inside `[greedy]` written as `tau` is stored as `greedy.tau`; keys
/// before any section must be fully qualified. Only keys from the built-in
/// schema are accepted, each starting from its default value. '#' starts a
/// comment. A key given twice in one source is an error.
class Config {
 public:
  /// All keys at their defaults.
  Config();

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& source = "<string>");

  /// Applies one `key=value` override. Throws InputError for unknown keys.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<long long> get_int_list(const std::string& key) const;

  /// Canonical text form: one section per key prefix, keys sorted. Parsing
  /// it back yields an equal Config.
  std::string to_string() const;

  const std::map<std::string, std::string>& values() const { return values_; }
  bool operator==(const Config& other) const { return values_ == other.values_; }

  /// Known keys and their defaults.
  static const std::map<std::string, std::string>& schema();

 private:
  void parse(const std::string& text, const std::string& source);
  std::map<std::string, std::string> values_;
};

}  // namespace rbqr

#endif  // RBQR_CONFIG_HPP
