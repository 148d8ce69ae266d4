#include "colliderbn/json_source.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <vector>

namespace colliderbn {

namespace {

using ordered_json = nlohmann::ordered_json;

// Input iterator that publishes how far the lexer has read.
class TrackingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  TrackingIterator(const char* p, const char** cursor) : p_(p), cursor_(cursor) {}

  reference operator*() const { return *p_; }
  TrackingIterator& operator++() {
    ++p_;
    if (cursor_) *cursor_ = p_;
    return *this;
  }
  TrackingIterator operator++(int) {
    TrackingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const TrackingIterator& other) const { return p_ == other.p_; }

 private:
  const char* p_;
  const char** cursor_;
};

bool number_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.' ||
         c == 'e' || c == 'E';
}

class DomBuilder {
 public:
  DomBuilder(std::string_view text, const char* const* cursor,
             std::unordered_map<std::string, std::size_t>& offsets)
      : text_(text), cursor_(cursor), offsets_(offsets) {}

  ordered_json take() { return std::move(root_); }

  bool null() { return scalar(nullptr, literal_start()); }
  bool boolean(bool v) { return scalar(v, literal_start()); }
  bool number_integer(std::int64_t v) { return scalar(v, number_start()); }
  bool number_unsigned(std::uint64_t v) { return scalar(v, number_start()); }
  bool number_float(double v, const std::string&) { return scalar(v, number_start()); }
  bool string(std::string& v) { return scalar(std::move(v), string_start()); }
  bool binary(ordered_json::binary_t&) { return false; }

  bool start_object(std::size_t) { return open(ordered_json::object()); }
  bool start_array(std::size_t) { return open(ordered_json::array()); }
  bool end_object() { return close(); }
  bool end_array() { return close(); }

  bool key(std::string& k) {
    if (frames_.back().value->contains(k)) {
      const std::size_t start = string_start();
      throw Error(ErrorCode::Syntax, "duplicate object key \"" + k + "\"",
                  location_at(text_, start), "\"" + k + "\"");
    }
    frames_.back().key = k;
    return true;
  }

  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) {
    // Re-thrown by JsonSource::parse with position information.
    message_ = ex.what();
    return false;
  }

  const std::string& message() const { return message_; }

 private:
  struct Frame {
    ordered_json* value;
    std::string pointer;
    std::string key;
  };

  std::size_t consumed() const { return static_cast<std::size_t>(*cursor_ - text_.data()); }

  std::size_t literal_start() const {
    std::size_t i = consumed();
    while (i > 0 && std::isalpha(static_cast<unsigned char>(text_[i - 1]))) --i;
    return i;
  }

  std::size_t number_start() const {
    std::size_t i = consumed();
    // The lexer reads one character past a number.
    if (i > 0 && !number_char(text_[i - 1])) --i;
    while (i > 0 && number_char(text_[i - 1])) --i;
    return i;
  }

  std::size_t string_start() const {
    std::size_t i = consumed();
    if (i == 0) return 0;
    --i;  // closing quote
    while (i > 0) {
      --i;
      if (text_[i] != '"') continue;
      std::size_t backslashes = 0;
      while (i > backslashes && text_[i - 1 - backslashes] == '\\') ++backslashes;
      if (backslashes % 2 == 0) return i;
    }
    return 0;
  }

  // Places `value` in the current container and returns its pointer.
  std::pair<ordered_json*, std::string> place(ordered_json value) {
    if (frames_.empty()) {
      root_ = std::move(value);
      return {&root_, ""};
    }
    Frame& top = frames_.back();
    if (top.value->is_array()) {
      std::string ptr = pointer_append(top.pointer, top.value->size());
      top.value->push_back(std::move(value));
      return {&top.value->back(), std::move(ptr)};
    }
    ordered_json& slot = (*top.value)[top.key];
    slot = std::move(value);
    return {&slot, pointer_append(top.pointer, top.key)};
  }

  bool scalar(ordered_json value, std::size_t start) {
    auto [slot, ptr] = place(std::move(value));
    offsets_[ptr] = start;
    return true;
  }

  bool open(ordered_json container) {
    const std::size_t start = consumed() == 0 ? 0 : consumed() - 1;
    auto [slot, ptr] = place(std::move(container));
    offsets_[ptr] = start;
    frames_.push_back(Frame{slot, std::move(ptr), {}});
    return true;
  }

  bool close() {
    frames_.pop_back();
    return true;
  }

  std::string_view text_;
  const char* const* cursor_;
  std::unordered_map<std::string, std::size_t>& offsets_;
  ordered_json root_;
  std::vector<Frame> frames_;
  std::string message_;
};

}  // namespace

SourceLocation location_at(std::string_view text, std::size_t offset) {
  SourceLocation loc;
  offset = std::min(offset, text.size());
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

std::string pointer_append(std::string_view pointer, std::string_view token) {
  std::string out(pointer);
  out += '/';
  for (char c : token) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string pointer_append(std::string_view pointer, std::size_t index) {
  return std::string(pointer) + "/" + std::to_string(index);
}

JsonSource JsonSource::parse(std::string_view text) {
  JsonSource source;
  source.text_ = std::string(text);
  const char* begin = source.text_.data();
  const char* end = begin + source.text_.size();
  const char* cursor = begin;

  DomBuilder builder(source.text_, &cursor, source.offsets_);
  const bool ok = ordered_json::sax_parse(TrackingIterator(begin, &cursor),
                                          TrackingIterator(end, nullptr), &builder);
  if (!ok) {
    // The lexer stops right after the offending character.
    const std::size_t consumed = static_cast<std::size_t>(cursor - begin);
    const std::size_t at = consumed == 0 ? 0 : consumed - 1;
    std::string token;
    if (at < source.text_.size()) token = source.text_.substr(at, 1);
    std::string message = builder.message();
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) message = "empty document";
    throw Error(ErrorCode::Syntax, message, location_at(source.text_, at), token);
  }
  source.root_ = builder.take();
  return source;
}

std::size_t JsonSource::offset(std::string_view pointer) const {
  std::string p(pointer);
  while (true) {
    auto it = offsets_.find(p);
    if (it != offsets_.end()) return it->second;
    if (p.empty()) return 0;
    p.erase(p.rfind('/'));
  }
}

SourceLocation JsonSource::location(std::string_view pointer) const {
  return location_at(text_, offset(pointer));
}

std::string JsonSource::token(std::string_view pointer) const {
  const std::size_t start = offset(pointer);
  std::size_t len = 0;
  while (start + len < text_.size() && len < 40 && text_[start + len] != '\n') ++len;
  std::string tok = text_.substr(start, len);
  // Scalars: cut at the first delimiter after the value.
  if (!tok.empty() && tok.front() != '{' && tok.front() != '[') {
    if (tok.front() == '"') {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] == '\\') {
          ++i;
        } else if (tok[i] == '"') {
          tok.resize(i + 1);
          break;
        }
      }
    } else {
      const auto cut = tok.find_first_of(",]} \t\r");
      if (cut != std::string::npos) tok.resize(cut);
    }
  }
  return tok;
}

void JsonSource::fail(ErrorCode code, std::string_view pointer, const std::string& message) const {
  throw Error(code, message, location(pointer), token(pointer));
}

const ordered_json& JsonReader::object(const ordered_json& v, const std::string& ptr,
                                       std::initializer_list<std::string_view> allowed) const {
  if (!v.is_object()) source_.fail(ErrorCode::Syntax, ptr, "expected an object");
  for (const auto& [key, value] : v.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      source_.fail(ErrorCode::Syntax, pointer_append(ptr, key), "unexpected key \"" + key + "\"");
    }
  }
  return v;
}

const ordered_json* JsonReader::optional_member(const ordered_json& obj,
                                                std::string_view key) const {
  auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

const ordered_json& JsonReader::member(const ordered_json& obj, const std::string& ptr,
                                       std::string_view key) const {
  if (const auto* v = optional_member(obj, key)) return *v;
  source_.fail(ErrorCode::Syntax, ptr, "missing required key \"" + std::string(key) + "\"");
}

std::string JsonReader::string(const ordered_json& v, const std::string& ptr) const {
  if (!v.is_string()) source_.fail(ErrorCode::Syntax, ptr, "expected a string");
  return v.get<std::string>();
}

const ordered_json& JsonReader::array(const ordered_json& v, const std::string& ptr) const {
  if (!v.is_array()) source_.fail(ErrorCode::Syntax, ptr, "expected an array");
  return v;
}

std::vector<std::string> JsonReader::strings(const ordered_json& v, const std::string& ptr) const {
  array(v, ptr);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(string(v[i], pointer_append(ptr, i)));
  return out;
}

double JsonReader::number(const ordered_json& v, const std::string& ptr) const {
  if (!v.is_number()) source_.fail(ErrorCode::Syntax, ptr, "expected a number");
  return v.get<double>();
}

std::vector<std::pair<std::string, std::string>> JsonReader::string_map(
    const ordered_json& v, const std::string& ptr) const {
  if (!v.is_object()) source_.fail(ErrorCode::Syntax, ptr, "expected an object");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, value] : v.items()) {
    out.emplace_back(key, string(value, pointer_append(ptr, key)));
  }
  return out;
}

}  // namespace colliderbn
