#pragma once

// Deterministic JSON emission: fixed field order (insertion order), numbers
// formatted with %.15g, LF line endings, no locale dependence. Output is
// byte-stable for identical inputs, which the CLI golden tests rely on.

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bdconvex::jsonio {

struct Value;
using Array = std::vector<Value>;
using Object = std::vector<std::pair<std::string, Value>>;

struct Value {
  std::variant<std::nullptr_t, bool, double, std::string, Array, Object> v;

  Value() : v(nullptr) {}
  Value(std::nullptr_t) : v(nullptr) {}
  Value(bool b) : v(b) {}
  Value(double d) : v(d) {}
  Value(int i) : v(static_cast<double>(i)) {}
  Value(long long i) : v(static_cast<double>(i)) {}
  Value(const char* s) : v(std::string(s)) {}
  Value(std::string s) : v(std::move(s)) {}
  Value(Array a) : v(std::move(a)) {}
  Value(Object o) : v(std::move(o)) {}
};

// 15 significant digits, shortest form (%.15g). Not JSON-escaped.
std::string format_double(double d);

// Compact single-line document; non-finite numbers are emitted as null.
std::string dump(const Value& value);

}  // namespace bdconvex::jsonio
