#ifndef BETAGOS_CSV_HPP
#define BETAGOS_CSV_HPP

#include <charconv>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace betagos {

// Minimal comma-separated reader: no quoting, fields trimmed of surrounding
// whitespace, blank lines skipped. Numbers are parsed strictly; errors carry
// the 1-based line number.
class CsvReader {
 public:
  explicit CsvReader(std::istream& is) : is_(is) {}

  // Reads the next non-blank row; returns false at EOF.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
      if (blank) continue;
      fields.clear();
      std::size_t start = 0;
      for (;;) {
        std::size_t comma = line.find(',', start);
        std::string f = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start);
        std::size_t b = f.find_first_not_of(" \t");
        std::size_t e = f.find_last_not_of(" \t");
        fields.push_back(b == std::string::npos ? std::string() : f.substr(b, e - b + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      return true;
    }
    return false;
  }

  int line() const { return line_; }

  double as_double(const std::string& f, const char* column) const {
    double v = 0.0;
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || p != f.data() + f.size()) fail(column, f);
    return v;
  }

  long as_long(const std::string& f, const char* column) const {
    long v = 0;
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || p != f.data() + f.size()) fail(column, f);
    return v;
  }

  [[noreturn]] void fail(const char* what, const std::string& got) const {
    std::ostringstream os;
    os << "csv line " << line_ << ": bad " << what << " value '" << got << "'";
    throw std::runtime_error(os.str());
  }

  [[noreturn]] void fail_columns(std::size_t want, std::size_t got) const {
    std::ostringstream os;
    os << "csv line " << line_ << ": expected " << want << " columns, got " << got;
    throw std::runtime_error(os.str());
  }

 private:
  std::istream& is_;
  int line_ = 0;
};

}  // namespace betagos

#endif  // BETAGOS_CSV_HPP
