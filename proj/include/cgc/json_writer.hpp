#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace cgc {

// Minimal streaming JSON writer. Doubles are emitted with 17 significant
// digits so every value round-trips exactly. Output is deterministic:
// identical call sequences give identical bytes.
class JsonWriter {
public:
  void begin_object() { prefix(); out_ += '{'; stack_.push_back(true); }
  void end_object() { out_ += '}'; stack_.pop_back(); after_value(); }
  void begin_array() { prefix(); out_ += '['; stack_.push_back(true); }
  void end_array() { out_ += ']'; stack_.pop_back(); after_value(); }

  void key(const std::string& k) {
    prefix();
    append_string(k);
    out_ += ':';
    pending_key_ = true;
  }

  void value(double v) {
    prefix();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out_ += buf;
    after_value();
  }
  void value(const std::string& s) { prefix(); append_string(s); after_value(); }
  void value(const char* s) { value(std::string(s)); }
  void value(bool b) { prefix(); out_ += b ? "true" : "false"; after_value(); }
  void value(std::uint64_t v) { prefix(); out_ += std::to_string(v); after_value(); }
  void value(int v) { prefix(); out_ += std::to_string(v); after_value(); }

  void field(const std::string& k, double v) { key(k); value(v); }
  void field(const std::string& k, const std::string& v) { key(k); value(v); }
  void field(const std::string& k, const char* v) { key(k); value(v); }
  void field(const std::string& k, bool v) { key(k); value(v); }
  void field(const std::string& k, std::uint64_t v) { key(k); value(v); }
  void field(const std::string& k, int v) { key(k); value(v); }

  const std::string& str() const { return out_; }

private:
  void prefix() {
    if (pending_key_) {
      pending_key_ = false;
      return;
    }
    if (!stack_.empty() && !stack_.back()) out_ += ',';
  }
  void after_value() {
    if (!stack_.empty()) stack_.back() = false;  // container no longer empty
  }
  void append_string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\r': out_ += "\\r"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
          break;
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> stack_;  // true while the open container is still empty
  bool pending_key_ = false;
};

}  // namespace cgc
