#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dprir::cli {

/// Bad flags, unknown keys or values that fail their schema.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class KeyType { Int, Real, Bool, Text };

struct KeySpec {
  std::string key;
  KeyType type;
  std::string default_value;
};

/// Effective configuration of one command: schema defaults, then the config
/// file, then `--set` overrides, then dedicated flags. Every stored value has
/// passed its type check.
class Config {
 public:
  explicit Config(std::vector<KeySpec> schema);

  /// Flat text: one `section.key = value` per line, '#' starts a comment.
  void merge_text(std::string_view text, std::string_view origin);
  /// `section.key=value`
  void merge_assignment(std::string_view assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.contains(key); }
  const std::string& text(const std::string& key) const;
  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  /// Sorted `key = value` lines.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;

 private:
  const KeySpec& spec(const std::string& key) const;

  std::vector<KeySpec> schema_;
  std::map<std::string, std::string> values_;
};

}  // namespace dprir::cli
