#include "henon/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "henon/errors.hpp"

namespace henon {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_complex(const cxd& z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string s = format_double(z.real());
  if (!(z.imag() < 0.0)) s += "+";
  s += format_double(z.imag());
  s += "i";
  return s;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& data) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)fnv1a64(data));
  return buf;
}

std::string atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io-error", "cannot open " + tmp + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw Error("io-error", "short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("io-error", "cannot rename " + tmp + " to " + path);
  return fnv1a64_hex(content);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string make_pgm(int width, int height, const std::vector<std::uint8_t>& pixels) {
  if (pixels.size() != size_t(width) * size_t(height))
    throw Error("io-error", "pixel count does not match dimensions");
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  return out;
}

CsvBuilder::CsvBuilder(const std::vector<std::string>& header) : columns_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ", ";
    out_ += header[i];
  }
  out_ += "\n";
}

void CsvBuilder::add_field(const std::string& s) {
  if (in_row_) out_ += ", ";
  out_ += s;
  ++in_row_;
}

void CsvBuilder::add_field(double v) { add_field(format_double(v)); }
void CsvBuilder::add_field(long v) { add_field(std::to_string(v)); }
void CsvBuilder::add_empty() { add_field(std::string()); }

void CsvBuilder::end_row() {
  if (in_row_ != columns_)
    throw Error("io-error", "CSV row has wrong number of fields");
  out_ += "\n";
  in_row_ = 0;
}

}  // namespace henon
