#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "binbench/image.hpp"

namespace binbench::pnm {

// Decoding accepts P1-P6 with maxval <= 255. Color (P3/P6) is reduced to
// gray with luma weights 0.299/0.587/0.114. Bitmaps (P1/P4) decode to
// 0 for ink and 255 for background.
GrayImage decode_gray(std::span<const std::uint8_t> bytes);

// Gray inputs threshold at 128: values below become ink.
BinaryImage decode_binary(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
// P5 rendering of a mask: ink 0, background 255.
std::vector<std::uint8_t> encode_pgm(const BinaryImage& mask);
// P4 with 1 = ink, rows padded to whole bytes, MSB first.
std::vector<std::uint8_t> encode_pbm(const BinaryImage& mask);

GrayImage read_gray(const std::filesystem::path& path);
BinaryImage read_binary(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const BinaryImage& mask);
void write_pbm(const std::filesystem::path& path, const BinaryImage& mask);

// Picks P4 for ".pbm", P5 otherwise.
void write_mask(const std::filesystem::path& path, const BinaryImage& mask);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace binbench::pnm
