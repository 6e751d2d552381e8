#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "dprir/grid.hpp"

namespace dprir {

// Raw image:    "DPRIMG01" "<width> <height> <pixel_size>\n" then width*height f32 LE.
// Sinogram:     "DPRSIN01" "<n_views> <n_detectors>\n" then n_views f64 LE angles,
//               then n_views*n_detectors f32 LE samples.
inline constexpr char kImageMagic[] = "DPRIMG01";
inline constexpr char kSinogramMagic[] = "DPRSIN01";

void write_image(std::ostream& os, const ImageGrid& img);
ImageGrid read_image(std::istream& is);

void write_sinogram(std::ostream& os, const Sinogram& s);
Sinogram read_sinogram(std::istream& is);

/// Binary PGM (P5, maxval 255).
void write_pgm(std::ostream& os, int width, int height, std::span<const std::uint8_t> gray);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

std::string encode_image(const ImageGrid& img);
ImageGrid decode_image(const std::string& bytes);
std::string encode_sinogram(const Sinogram& s);
Sinogram decode_sinogram(const std::string& bytes);

/// Little-endian primitives shared by the binary formats.
namespace le {
void put_u32(std::ostream& os, std::uint32_t v);
void put_f32(std::ostream& os, float v);
void put_f64(std::ostream& os, double v);
std::uint32_t get_u32(std::istream& is);
float get_f32(std::istream& is);
double get_f64(std::istream& is);
}  // namespace le

}  // namespace dprir
