#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <initializer_list>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "colliderbn/error.hpp"

namespace colliderbn {

/// A parsed JSON document that remembers where each value started, so
/// semantic errors found after parsing can still point at line and column.
class JsonSource {
 public:
  /// Throws Error(Syntax) with the location of the first malformed byte.
  /// Duplicate object keys are also a syntax error.
  static JsonSource parse(std::string_view text);

  const nlohmann::ordered_json& root() const { return root_; }

  /// Location of the value at a JSON pointer ("" is the root). Falls back to
  /// the nearest enclosing value that was recorded.
  SourceLocation location(std::string_view pointer) const;
  /// Raw source text of the value at `pointer`, shortened for messages.
  std::string token(std::string_view pointer) const;

  /// Throws Error(code) positioned at `pointer`.
  [[noreturn]] void fail(ErrorCode code, std::string_view pointer,
                         const std::string& message) const;

 private:
  std::size_t offset(std::string_view pointer) const;

  std::string text_;
  nlohmann::ordered_json root_;
  std::unordered_map<std::string, std::size_t> offsets_;
};

/// Typed accessors over a JsonSource; every mismatch is a positioned SYNTAX.
class JsonReader {
 public:
  explicit JsonReader(const JsonSource& source) : source_(source) {}

  const JsonSource& source() const { return source_; }

  /// Requires an object whose keys all appear in `allowed`.
  const nlohmann::ordered_json& object(const nlohmann::ordered_json& v, const std::string& ptr,
                                      std::initializer_list<std::string_view> allowed) const;
  const nlohmann::ordered_json* optional_member(const nlohmann::ordered_json& obj,
                                                std::string_view key) const;
  const nlohmann::ordered_json& member(const nlohmann::ordered_json& obj, const std::string& ptr,
                                      std::string_view key) const;
  std::string string(const nlohmann::ordered_json& v, const std::string& ptr) const;
  const nlohmann::ordered_json& array(const nlohmann::ordered_json& v,
                                     const std::string& ptr) const;
  std::vector<std::string> strings(const nlohmann::ordered_json& v, const std::string& ptr) const;
  double number(const nlohmann::ordered_json& v, const std::string& ptr) const;
  /// An object of string values, in document order.
  std::vector<std::pair<std::string, std::string>> string_map(const nlohmann::ordered_json& v,
                                                              const std::string& ptr) const;

 private:
  const JsonSource& source_;
};

/// Appends an escaped reference token to a JSON pointer.
std::string pointer_append(std::string_view pointer, std::string_view token);
std::string pointer_append(std::string_view pointer, std::size_t index);

SourceLocation location_at(std::string_view text, std::size_t offset);

}  // namespace colliderbn
