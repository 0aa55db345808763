#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nsolit {

/// Insertion-ordered JSON value with deterministic output: doubles as %.12e,
/// non-finite doubles as null, two-space indentation.
class Json {
 public:
  using Object = std::vector<std::pair<std::string, Json>>;
  using Array = std::vector<Json>;

  Json() = default;
  Json(std::nullptr_t) {}
  Json(bool b) : v_(b) {}
  Json(int i) : v_(std::int64_t(i)) {}
  Json(std::int64_t i) : v_(i) {}
  Json(std::size_t i) : v_(std::int64_t(i)) {}
  Json(double d) : v_(d) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}

  static Json object() { Json j; j.v_ = Object{}; return j; }
  static Json array() { Json j; j.v_ = Array{}; return j; }
  static Json array(const std::vector<double>& xs);
  static Json array(const std::vector<std::string>& xs);

  /// Appends (or replaces) a key, keeping first-insertion order.
  Json& set(const std::string& key, Json value);
  Json& push(Json value);

  [[nodiscard]] bool is_object() const { return std::holds_alternative<Object>(v_); }
  [[nodiscard]] bool is_array() const { return std::holds_alternative<Array>(v_); }
  [[nodiscard]] std::string dump(int indent = 2) const;

 private:
  void write(std::string& out, int indent, int depth) const;
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Object, Array> v_ = nullptr;
};

/// %.12e, the single number format used for all artifacts.
[[nodiscard]] std::string format_double(double x);
[[nodiscard]] std::string json_escape(const std::string& s);

}  // namespace nsolit
