#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dprir/random.hpp"

namespace dprir::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(std::string_view v, bool& out) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return out = true, true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return out = false, true;
  return false;
}

void check_type(const KeySpec& s, const std::string& v) {
  const char* b = v.data();
  const char* e = v.data() + v.size();
  bool ok = true;
  switch (s.type) {
    case KeyType::Int: {
      long long x = 0;
      auto r = std::from_chars(b, e, x);
      ok = r.ec == std::errc() && r.ptr == e;
      break;
    }
    case KeyType::Real: {
      double x = 0;
      auto r = std::from_chars(b, e, x);
      ok = r.ec == std::errc() && r.ptr == e && std::isfinite(x);
      break;
    }
    case KeyType::Bool: {
      bool x = false;
      ok = parse_bool(v, x);
      break;
    }
    case KeyType::Text:
      break;
  }
  if (!ok) throw UsageError("invalid value for " + s.key + ": '" + v + "'");
}

}  // namespace

Config::Config(std::vector<KeySpec> schema) : schema_(std::move(schema)) {
  for (const KeySpec& s : schema_) values_[s.key] = s.default_value;
}

const KeySpec& Config::spec(const std::string& key) const {
  for (const KeySpec& s : schema_)
    if (s.key == key) return s;
  throw UsageError("unknown configuration key: " + key);
}

void Config::set(const std::string& key, const std::string& value) {
  const KeySpec& s = spec(key);
  check_type(s, value);
  values_[key] = value;
}

void Config::merge_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw UsageError("expected key=value, got '" + std::string(assignment) + "'");
  set(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))));
}

void Config::merge_text(std::string_view text, std::string_view origin) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      merge_assignment(line);
    } catch (const UsageError& e) {
      throw UsageError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

const std::string& Config::text(const std::string& key) const {
  spec(key);
  return values_.at(key);
}

long long Config::integer(const std::string& key) const {
  if (spec(key).type != KeyType::Int) throw std::logic_error(key + " is not an integer key");
  return std::stoll(values_.at(key));
}

double Config::real(const std::string& key) const {
  const KeySpec& s = spec(key);
  if (s.type != KeyType::Real && s.type != KeyType::Int) throw std::logic_error(key + " is not numeric");
  double x = 0;
  const std::string& v = values_.at(key);
  std::from_chars(v.data(), v.data() + v.size(), x);
  return x;
}

bool Config::boolean(const std::string& key) const {
  if (spec(key).type != KeyType::Bool) throw std::logic_error(key + " is not a boolean key");
  bool x = false;
  parse_bool(values_.at(key), x);
  return x;
}

std::uint64_t Config::u64(const std::string& key) const {
  const long long v = integer(key);
  if (v < 0) throw UsageError(key + " must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

std::string Config::canonical() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << " = " << v << '\n';
  return os.str();
}

std::string Config::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

}  // namespace dprir::cli
