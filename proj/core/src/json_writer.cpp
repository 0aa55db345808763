#include "nsolit/json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace nsolit {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += char(c);
        }
    }
  }
  return out;
}

Json Json::array(const std::vector<double>& xs) {
  Json j = array();
  for (double x : xs) j.push(x);
  return j;
}

Json Json::array(const std::vector<std::string>& xs) {
  Json j = array();
  for (const auto& x : xs) j.push(x);
  return j;
}

Json& Json::set(const std::string& key, Json value) {
  if (!is_object()) v_ = Object{};
  auto& obj = std::get<Object>(v_);
  for (auto& [k, v] : obj)
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  obj.emplace_back(key, std::move(value));
  return *this;
}

Json& Json::push(Json value) {
  if (!is_array()) v_ = Array{};
  std::get<Array>(v_).push_back(std::move(value));
  return *this;
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += "\n";
  return out;
}

void Json::write(std::string& out, int indent, int depth) const {
  const auto newline = [&](int d) {
    if (indent <= 0) return;
    out += '\n';
    out.append(std::size_t(indent * d), ' ');
  };
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (const auto* b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (const auto* i = std::get_if<std::int64_t>(&v_)) {
    out += std::to_string(*i);
  } else if (const auto* d = std::get_if<double>(&v_)) {
    out += std::isfinite(*d) ? format_double(*d) : "null";
  } else if (const auto* s = std::get_if<std::string>(&v_)) {
    out += '"' + json_escape(*s) + '"';
  } else if (const auto* o = std::get_if<Object>(&v_)) {
    if (o->empty()) {
      out += "{}";
      return;
    }
    out += '{';
    for (std::size_t k = 0; k < o->size(); ++k) {
      if (k) out += ',';
      newline(depth + 1);
      out += '"' + json_escape((*o)[k].first) + "\":";
      if (indent > 0) out += ' ';
      (*o)[k].second.write(out, indent, depth + 1);
    }
    newline(depth);
    out += '}';
  } else {
    const auto& a = std::get<Array>(v_);
    if (a.empty()) {
      out += "[]";
      return;
    }
    // Arrays of scalars stay on one line to keep tables readable.
    bool flat = true;
    for (const auto& x : a) flat = flat && !x.is_array() && !x.is_object();
    out += '[';
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k) out += flat ? ", " : ",";
      if (!flat) newline(depth + 1);
      a[k].write(out, indent, depth + 1);
    }
    if (!flat) newline(depth);
    out += ']';
  }
}

}  // namespace nsolit
