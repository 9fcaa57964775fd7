#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "henon/scalar.hpp"

namespace henon {

// locale-independent shortest-faithful formatting, 17 significant digits
std::string format_double(double v);

// real part alone when essentially real, otherwise re{+|-}im"i"
std::string format_complex(const cxd& z);

std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

// write-temp-then-rename; returns the checksum of the written content
std::string atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// P5 grayscale, max value 255, row-major, top-left origin
std::string make_pgm(int width, int height, const std::vector<std::uint8_t>& pixels);

class CsvBuilder {
public:
  explicit CsvBuilder(const std::vector<std::string>& header);
  void add_field(const std::string& s);
  void add_field(double v);
  void add_field(long v);
  void add_empty();
  void end_row();
  const std::string& str() const { return out_; }

private:
  std::string out_;
  size_t columns_ = 0;
  size_t in_row_ = 0;
};

}  // namespace henon
