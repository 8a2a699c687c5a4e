#pragma once

#include <ostream>
#include <string>
#include <string_view>

namespace odopt {

/// Shortest round-trip decimal text, independent of the global locale.
/// Non-finite values print as `nan`, `inf` or `-inf`.
std::string format_double(double value);

/// Minimal CSV row writer. Fields are written verbatim; every value this
/// project emits is numeric or a plain identifier, so no quoting is needed.
class CsvRow {
 public:
  explicit CsvRow(std::ostream& out) : out_(out) {}
  CsvRow(const CsvRow&) = delete;
  CsvRow& operator=(const CsvRow&) = delete;
  ~CsvRow() { out_ << '\n'; }

  CsvRow& operator<<(std::string_view field) {
    sep();
    out_ << field;
    return *this;
  }
  CsvRow& operator<<(const char* field) { return *this << std::string_view(field); }
  CsvRow& operator<<(const std::string& field) { return *this << std::string_view(field); }
  CsvRow& operator<<(double value) { return *this << std::string_view(format_double(value)); }
  CsvRow& operator<<(long value) {
    sep();
    out_ << value;
    return *this;
  }
  CsvRow& operator<<(int value) { return *this << static_cast<long>(value); }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }

  std::ostream& out_;
  bool first_ = true;
};

}  // namespace odopt
