// Minimal TOML reader covering the subset used by the bundled configs:
// [section] headers, scalar keys (string / bool / integer / float) and flat
// arrays of scalars. Dotted keys, nested tables and multi-line values are
// out of scope; anything unrecognized raises toml_lite::ParseError with a
// line number.
#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace toml_lite {

class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg) {}
};

struct Value {
  std::variant<std::string, bool, std::int64_t, double, std::vector<Value>> v;

  bool is_array() const { return std::holds_alternative<std::vector<Value>>(v); }
  const std::vector<Value>& array() const { return std::get<std::vector<Value>>(v); }

  std::string as_string() const {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    throw std::runtime_error("expected a string");
  }
  bool as_bool() const {
    if (auto* b = std::get_if<bool>(&v)) return *b;
    throw std::runtime_error("expected a boolean");
  }
  std::int64_t as_int() const {
    if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw std::runtime_error("expected an integer");
  }
  double as_double() const {
    if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (auto* d = std::get_if<double>(&v)) return *d;
    throw std::runtime_error("expected a number");
  }
};

/// Keys are "section.key"; top-level keys have no dot.
using Table = std::map<std::string, Value>;

namespace detail {

inline void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline Value parse_scalar(const std::string& s, size_t& i, int line);

inline Value parse_value(const std::string& s, size_t& i, int line) {
  skip_ws(s, i);
  if (i < s.size() && s[i] == '[') {
    ++i;
    std::vector<Value> items;
    skip_ws(s, i);
    while (i < s.size() && s[i] != ']') {
      items.push_back(parse_value(s, i, line));
      skip_ws(s, i);
      if (i < s.size() && s[i] == ',') {
        ++i;
        skip_ws(s, i);
      }
    }
    if (i >= s.size() || s[i] != ']') throw ParseError(line, "unterminated array");
    ++i;
    return Value{std::move(items)};
  }
  return parse_scalar(s, i, line);
}

inline Value parse_scalar(const std::string& s, size_t& i, int line) {
  if (i >= s.size()) throw ParseError(line, "missing value");
  if (s[i] == '"') {
    std::string out;
    ++i;
    while (i < s.size() && s[i] != '"') {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      out += s[i++];
    }
    if (i >= s.size()) throw ParseError(line, "unterminated string");
    ++i;
    return Value{std::move(out)};
  }
  size_t start = i;
  while (i < s.size() && s[i] != ',' && s[i] != ']' && s[i] != '#' && s[i] != ' ' &&
         s[i] != '\t')
    ++i;
  std::string tok = s.substr(start, i - start);
  if (tok.empty()) throw ParseError(line, "missing value");
  if (tok == "true") return Value{true};
  if (tok == "false") return Value{false};
  if (tok.find_first_of(".eE") == std::string::npos) {
    try {
      size_t used = 0;
      std::int64_t n = std::stoll(tok, &used, 10);
      if (used == tok.size()) return Value{n};
    } catch (const std::exception&) {
    }
  }
  try {
    size_t used = 0;
    double d = std::stod(tok, &used);
    if (used == tok.size()) return Value{d};
  } catch (const std::exception&) {
  }
  throw ParseError(line, "cannot parse value '" + tok + "'");
}

}  // namespace detail

inline Table parse(std::istream& in) {
  Table t;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t i = 0;
    detail::skip_ws(line, i);
    if (i >= line.size() || line[i] == '#') continue;
    if (line[i] == '[') {
      size_t close = line.find(']', i);
      if (close == std::string::npos) throw ParseError(lineno, "unterminated section header");
      section = line.substr(i + 1, close - i - 1);
      if (section.empty()) throw ParseError(lineno, "empty section name");
      continue;
    }
    size_t eq = line.find('=', i);
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    std::string key = line.substr(i, eq - i);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    if (key.empty()) throw ParseError(lineno, "empty key");
    size_t vi = eq + 1;
    Value v = detail::parse_value(line, vi, lineno);
    detail::skip_ws(line, vi);
    if (vi < line.size() && line[vi] != '#')
      throw ParseError(lineno, "trailing characters after value");
    t[section.empty() ? key : section + "." + key] = std::move(v);
  }
  return t;
}

inline Table parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse(in);
}

// Lookup helpers with defaults; the throwing variants name the key.
inline const Value* find(const Table& t, const std::string& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

inline const Value& require(const Table& t, const std::string& key) {
  if (const Value* v = find(t, key)) return *v;
  throw std::runtime_error("missing required config key '" + key + "'");
}

inline std::string get_string(const Table& t, const std::string& key, const std::string& def) {
  const Value* v = find(t, key);
  return v ? v->as_string() : def;
}
inline double get_double(const Table& t, const std::string& key, double def) {
  const Value* v = find(t, key);
  return v ? v->as_double() : def;
}
inline std::int64_t get_int(const Table& t, const std::string& key, std::int64_t def) {
  const Value* v = find(t, key);
  return v ? v->as_int() : def;
}
inline std::vector<double> get_doubles(const Table& t, const std::string& key,
                                       std::vector<double> def = {}) {
  const Value* v = find(t, key);
  if (!v) return def;
  std::vector<double> out;
  for (const Value& item : v->array()) out.push_back(item.as_double());
  return out;
}
inline std::vector<std::string> get_strings(const Table& t, const std::string& key,
                                            std::vector<std::string> def = {}) {
  const Value* v = find(t, key);
  if (!v) return def;
  std::vector<std::string> out;
  for (const Value& item : v->array()) out.push_back(item.as_string());
  return out;
}

}  // namespace toml_lite
