#ifndef NECORPIA_CSV_HPP
#define NECORPIA_CSV_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace necorpia::csv {

/// Minimal CSV builder with locale-independent, reproducible formatting.
/// Finite values only; emitting NaN or Inf is a bug upstream.
class Table {
 public:
  explicit Table(std::string header) : out_(std::move(header)) { out_.push_back('\n'); }

  Table& field(uint64_t v) {
    sep();
    out_ += std::to_string(v);
    return *this;
  }

  Table& field(int64_t v) {
    sep();
    out_ += std::to_string(v);
    return *this;
  }

  Table& field(uint32_t v) { return field(static_cast<uint64_t>(v)); }

  Table& field(double v) {
    if (!std::isfinite(v)) throw std::logic_error("csv: refusing to emit a non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    sep();
    out_ += buf;
    return *this;
  }

  Table& field(const std::string& v) {
    sep();
    out_ += v;
    return *this;
  }

  Table& endrow() {
    out_.push_back('\n');
    fresh_row_ = true;
    return *this;
  }

  const std::string& str() const { return out_; }

 private:
  void sep() {
    if (!fresh_row_) out_.push_back(',');
    fresh_row_ = false;
  }

  std::string out_;
  bool fresh_row_ = true;
};

}  // namespace necorpia::csv

#endif
