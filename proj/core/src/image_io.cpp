#include "dprir/image_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <vector>

#include "dprir/error.hpp"

namespace dprir {

namespace le {

namespace {

template <typename U>
void put_bits(std::ostream& os, U bits) {
  std::array<char, sizeof(U)> buf{};
  for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  os.write(buf.data(), buf.size());
}

template <typename U>
U get_bits(std::istream& is) {
  std::array<unsigned char, sizeof(U)> buf{};
  is.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!is) throw FormatError("unexpected end of data");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void put_u32(std::ostream& os, std::uint32_t v) { put_bits(os, v); }
void put_f32(std::ostream& os, float v) { put_bits(os, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::ostream& os, double v) { put_bits(os, std::bit_cast<std::uint64_t>(v)); }
std::uint32_t get_u32(std::istream& is) { return get_bits<std::uint32_t>(is); }
float get_f32(std::istream& is) { return std::bit_cast<float>(get_bits<std::uint32_t>(is)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_bits<std::uint64_t>(is)); }

}  // namespace le

namespace {

void expect_magic(std::istream& is, const char* magic) {
  char buf[8];
  is.read(buf, 8);
  if (!is || std::memcmp(buf, magic, 8) != 0)
    throw FormatError(std::string("bad magic, expected ") + magic);
}

std::string header_line(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.size() > 256) throw FormatError("missing header line");
  return line;
}

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw FormatError("cannot format number");
  return std::string(buf, end);
}

}  // namespace

void write_image(std::ostream& os, const ImageGrid& img) {
  os.write(kImageMagic, 8);
  os << img.width() << ' ' << img.height() << ' ' << shortest(img.pixel_size()) << '\n';
  for (double v : img.values()) le::put_f32(os, static_cast<float>(v));
}

ImageGrid read_image(std::istream& is) {
  expect_magic(is, kImageMagic);
  std::istringstream hdr(header_line(is));
  long long w = 0, h = 0;
  double px = 0.0;
  if (!(hdr >> w >> h >> px) || w < 1 || h < 1 || w > (1 << 16) || h > (1 << 16) || !(px > 0.0))
    throw FormatError("invalid image header");
  std::vector<double> data(static_cast<std::size_t>(w * h));
  for (double& v : data) {
    v = le::get_f32(is);
    if (!std::isfinite(v)) throw FormatError("non-finite pixel value");
  }
  return ImageGrid(static_cast<int>(w), static_cast<int>(h), px, std::move(data));
}

void write_sinogram(std::ostream& os, const Sinogram& s) {
  os.write(kSinogramMagic, 8);
  os << s.n_views() << ' ' << s.n_detectors() << '\n';
  for (double a : s.angles()) le::put_f64(os, a);
  for (double v : s.values()) le::put_f32(os, static_cast<float>(v));
}

Sinogram read_sinogram(std::istream& is) {
  expect_magic(is, kSinogramMagic);
  std::istringstream hdr(header_line(is));
  long long nv = 0, nd = 0;
  if (!(hdr >> nv >> nd) || nv < 1 || nd < 1 || nv > (1 << 20) || nd > (1 << 20))
    throw FormatError("invalid sinogram header");
  std::vector<double> angles(static_cast<std::size_t>(nv));
  for (double& a : angles) a = le::get_f64(is);
  std::vector<double> data(static_cast<std::size_t>(nv * nd));
  for (double& v : data) {
    v = le::get_f32(is);
    if (!std::isfinite(v)) throw FormatError("non-finite sinogram value");
  }
  try {
    return Sinogram(static_cast<int>(nd), std::move(angles), std::move(data));
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
}

void write_pgm(std::ostream& os, int width, int height, std::span<const std::uint8_t> gray) {
  if (gray.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw InvalidArgument("pgm buffer size mismatch");
  os << "P5\n" << width << ' ' << height << "\n255\n";
  os.write(reinterpret_cast<const char*>(gray.data()), static_cast<std::streamsize>(gray.size()));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string encode_image(const ImageGrid& img) {
  std::ostringstream os(std::ios::binary);
  write_image(os, img);
  return os.str();
}

ImageGrid decode_image(const std::string& bytes) {
  std::istringstream is(bytes, std::ios::binary);
  return read_image(is);
}

std::string encode_sinogram(const Sinogram& s) {
  std::ostringstream os(std::ios::binary);
  write_sinogram(os, s);
  return os.str();
}

Sinogram decode_sinogram(const std::string& bytes) {
  std::istringstream is(bytes, std::ios::binary);
  return read_sinogram(is);
}

}  // namespace dprir
