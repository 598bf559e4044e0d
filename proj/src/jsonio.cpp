#include "bdconvex/jsonio.hpp"

#include <cmath>
#include <cstdio>

namespace bdconvex::jsonio {

std::string format_double(double d) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", d);
  return buf;
}

namespace {

void escape_to(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_to(const Value& value, std::string& out) {
  if (std::holds_alternative<std::nullptr_t>(value.v)) {
    out += "null";
  } else if (const bool* b = std::get_if<bool>(&value.v)) {
    out += *b ? "true" : "false";
  } else if (const double* d = std::get_if<double>(&value.v)) {
    if (std::isfinite(*d))
      out += format_double(*d);
    else
      out += "null";
  } else if (const std::string* s = std::get_if<std::string>(&value.v)) {
    escape_to(*s, out);
  } else if (const Array* a = std::get_if<Array>(&value.v)) {
    out += '[';
    for (size_t i = 0; i < a->size(); ++i) {
      if (i) out += ',';
      dump_to((*a)[i], out);
    }
    out += ']';
  } else {
    const Object& o = std::get<Object>(value.v);
    out += '{';
    for (size_t i = 0; i < o.size(); ++i) {
      if (i) out += ',';
      escape_to(o[i].first, out);
      out += ':';
      dump_to(o[i].second, out);
    }
    out += '}';
  }
}

}  // namespace

std::string dump(const Value& value) {
  std::string out;
  dump_to(value, out);
  return out;
}

}  // namespace bdconvex::jsonio
