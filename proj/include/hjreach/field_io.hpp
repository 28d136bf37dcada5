#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "value_field.hpp"

namespace hjreach {

/// Malformed value-field file; `offset` is the byte position of the problem.
class FieldParseError : public std::runtime_error
{
public:
  FieldParseError(const std::string & what, std::size_t offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"), offset_(offset)
  {
  }
  [[nodiscard]] std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

inline constexpr std::string_view kFieldMagic = "HJVF1\n";

inline std::string format_double(double v)
{
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

/// HJVF1 header and payload as a byte string.
inline std::string serialize_field(const ValueField & f)
{
  std::string out(kFieldMagic);
  out += std::to_string(f.grid.dims()) + "\n";
  for (const auto & a : f.grid.axes()) {
    out += format_double(a.min) + " " + format_double(a.max) + " " + std::to_string(a.points) + " " + (a.periodic ? "1" : "0") + "\n";
  }
  out += std::to_string(f.stamps.size()) + "\n";
  for (double s : f.stamps) { out += format_double(s) + "\n"; }
  const std::size_t header = out.size();
  out.resize(header + f.data.size() * 4);
  for (std::size_t i = 0; i < f.data.size(); ++i) {
    auto bits = std::bit_cast<std::uint32_t>(f.data[i]);
    for (int b = 0; b < 4; ++b) { out[header + 4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xFFU); }
  }
  return out;
}

namespace detail {

class HeaderReader
{
public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  [[nodiscard]] std::size_t pos() const { return pos_; }

  std::string_view line()
  {
    const auto nl = bytes_.find('\n', pos_);
    if (nl == std::string_view::npos) { throw FieldParseError("unterminated header line", bytes_.size()); }
    auto l = bytes_.substr(pos_, nl - pos_);
    start_ = pos_;
    pos_   = nl + 1;
    return l;
  }

  template<typename T>
  T number(std::string_view & l, const char * what)
  {
    while (!l.empty() && l.front() == ' ') { l.remove_prefix(1); }
    T v{};
    const auto r = std::from_chars(l.data(), l.data() + l.size(), v);
    if (r.ec != std::errc() || l.empty()) { throw FieldParseError(std::string("cannot parse ") + what, static_cast<std::size_t>(l.data() - bytes_.data())); }
    l.remove_prefix(static_cast<std::size_t>(r.ptr - l.data()));
    return v;
  }

  void end_of_line(std::string_view l)
  {
    while (!l.empty() && l.front() == ' ') { l.remove_prefix(1); }
    if (!l.empty()) { throw FieldParseError("unexpected trailing characters in header", pos_ - 1 - l.size()); }
  }

  [[nodiscard]] std::size_t line_start() const { return start_; }

private:
  std::string_view bytes_;
  std::size_t pos_   = 0;
  std::size_t start_ = 0;
};

}  // namespace detail

inline ValueField parse_field(std::string_view bytes)
{
  if (bytes.substr(0, kFieldMagic.size()) != kFieldMagic) {
    std::size_t off = 0;
    while (off < kFieldMagic.size() && off < bytes.size() && bytes[off] == kFieldMagic[off]) { ++off; }
    throw FieldParseError("bad magic, expected HJVF1", off);
  }
  detail::HeaderReader rd(bytes);
  rd.line();
  auto l = rd.line();
  const auto dims = rd.number<std::size_t>(l, "dimension count");
  rd.end_of_line(l);
  if (dims < 1 || dims > GridSpec::max_dims) { throw FieldParseError("dimension count out of range", rd.line_start()); }
  std::vector<Axis> axes;
  for (std::size_t d = 0; d < dims; ++d) {
    l = rd.line();
    Axis a;
    a.min         = rd.number<double>(l, "axis min");
    a.max         = rd.number<double>(l, "axis max");
    a.points      = rd.number<std::size_t>(l, "axis point count");
    const int per = rd.number<int>(l, "axis periodic flag");
    rd.end_of_line(l);
    if (per != 0 && per != 1) { throw FieldParseError("periodic flag must be 0 or 1", rd.line_start()); }
    a.periodic = per == 1;
    axes.push_back(a);
  }
  l = rd.line();
  const auto count = rd.number<std::size_t>(l, "stamp count");
  rd.end_of_line(l);
  std::vector<double> stamps;
  for (std::size_t k = 0; k < count; ++k) {
    l = rd.line();
    stamps.push_back(rd.number<double>(l, "stamp"));
    rd.end_of_line(l);
  }
  GridSpec grid;
  try {
    grid = GridSpec(std::move(axes));
  } catch (const std::invalid_argument & e) {
    throw FieldParseError(std::string("invalid grid: ") + e.what(), kFieldMagic.size());
  }
  const std::size_t header   = rd.pos();
  const std::size_t values   = count * grid.size();
  const std::size_t expected = header + 4 * values;
  if (bytes.size() < expected) {
    throw FieldParseError("truncated payload: expected " + std::to_string(expected) + " bytes, found " + std::to_string(bytes.size()),
                          bytes.size());
  }
  if (bytes.size() > expected) { throw FieldParseError("trailing bytes after payload", expected); }
  ValueField f{std::move(grid), std::move(stamps), std::vector<float>(values)};
  for (std::size_t i = 0; i < values; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) { bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[header + 4 * i + b])) << (8 * b); }
    f.data[i] = std::bit_cast<float>(bits);
  }
  return f;
}

inline void write_field(const std::filesystem::path & path, const ValueField & f)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) { throw std::runtime_error("cannot open " + path.string() + " for writing"); }
  const auto bytes = serialize_field(f);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) { throw std::runtime_error("failed writing " + path.string()); }
}

inline ValueField read_field(const std::filesystem::path & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) { throw std::runtime_error("cannot open " + path.string()); }
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_field(bytes);
}

}  // namespace hjreach
