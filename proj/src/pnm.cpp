#include "binbench/pnm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

namespace binbench::pnm {

namespace {

constexpr long kMaxDimension = 1L << 16;

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long read_uint() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw DecodeError("pnm: expected unsigned integer at byte " + std::to_string(pos_));
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > (1L << 30)) throw DecodeError("pnm: header value out of range");
            ++pos_;
        }
        return v;
    }

    // Plain PBM permits samples without separating whitespace.
    int read_bit() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size()) throw DecodeError("pnm: truncated P1 raster");
        const auto c = bytes_[pos_++];
        if (c == '0') return 0;
        if (c == '1') return 1;
        throw DecodeError("pnm: invalid P1 sample");
    }

    // Exactly one whitespace byte separates the header from a binary raster.
    void end_header() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw DecodeError("pnm: missing whitespace after header");
        }
        ++pos_;
    }

    std::span<const std::uint8_t> take(std::size_t n) {
        if (bytes_.size() - pos_ < n) throw DecodeError("pnm: truncated raster");
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::uint8_t magic() {
        if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] < '1' || bytes_[1] > '6') {
            throw DecodeError("pnm: not a PNM file");
        }
        pos_ = 2;
        return bytes_[1];
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint8_t rescale(long v, long maxval) {
    if (v > maxval) throw DecodeError("pnm: sample exceeds maxval");
    if (maxval == 255) return static_cast<std::uint8_t>(v);
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return static_cast<std::uint8_t>(std::lround(std::min(255.0, y)));
}

GrayImage decode(std::span<const std::uint8_t> bytes) {
    Reader rd(bytes);
    const auto kind = rd.magic();
    const long w = rd.read_uint();
    const long h = rd.read_uint();
    if (w < 1 || h < 1 || w > kMaxDimension || h > kMaxDimension) {
        throw DecodeError("pnm: unsupported dimensions");
    }
    const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    std::vector<std::uint8_t> data(n);

    if (kind == '1' || kind == '4') {
        if (kind == '1') {
            for (auto& px : data) px = rd.read_bit() ? 0 : 255;
        } else {
            rd.end_header();
            const auto row_bytes = static_cast<std::size_t>((w + 7) / 8);
            const auto raster = rd.take(row_bytes * static_cast<std::size_t>(h));
            for (long y = 0; y < h; ++y) {
                for (long x = 0; x < w; ++x) {
                    const auto byte = raster[static_cast<std::size_t>(y) * row_bytes +
                                             static_cast<std::size_t>(x / 8)];
                    const bool ink = (byte >> (7 - x % 8)) & 1;
                    data[static_cast<std::size_t>(y * w + x)] = ink ? 0 : 255;
                }
            }
        }
        return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(data));
    }

    const long maxval = rd.read_uint();
    if (maxval < 1 || maxval > 255) {
        throw DecodeError("pnm: only 8-bit samples are supported (maxval " +
                          std::to_string(maxval) + ")");
    }
    const bool color = kind == '3' || kind == '6';
    const bool ascii = kind == '2' || kind == '3';
    if (ascii) {
        for (auto& px : data) {
            if (color) {
                const auto r = rescale(rd.read_uint(), maxval);
                const auto g = rescale(rd.read_uint(), maxval);
                const auto b = rescale(rd.read_uint(), maxval);
                px = luma(r, g, b);
            } else {
                px = rescale(rd.read_uint(), maxval);
            }
        }
    } else {
        rd.end_header();
        const auto raster = rd.take(n * (color ? 3 : 1));
        for (std::size_t i = 0; i < n; ++i) {
            if (color) {
                data[i] = luma(rescale(raster[3 * i], maxval), rescale(raster[3 * i + 1], maxval),
                               rescale(raster[3 * i + 2], maxval));
            } else {
                data[i] = rescale(raster[i], maxval);
            }
        }
    }
    return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

std::vector<std::uint8_t> header(const char* magic, int w, int h, bool with_maxval) {
    std::string s = std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n";
    if (with_maxval) s += "255\n";
    return {s.begin(), s.end()};
}

}  // namespace

GrayImage decode_gray(std::span<const std::uint8_t> bytes) { return decode(bytes); }

BinaryImage decode_binary(std::span<const std::uint8_t> bytes) {
    const auto gray = decode(bytes);
    BinaryImage out(gray.width(), gray.height());
    const auto px = gray.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) out.set(i, px[i] < 128);
    return out;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    auto out = header("P5", img.width(), img.height(), true);
    const auto px = img.pixels();
    out.insert(out.end(), px.begin(), px.end());
    return out;
}

std::vector<std::uint8_t> encode_pgm(const BinaryImage& mask) {
    auto out = header("P5", mask.width(), mask.height(), true);
    out.reserve(out.size() + mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) out.push_back(mask.at(i) ? 0 : 255);
    return out;
}

std::vector<std::uint8_t> encode_pbm(const BinaryImage& mask) {
    auto out = header("P4", mask.width(), mask.height(), false);
    const auto row_bytes = static_cast<std::size_t>((mask.width() + 7) / 8);
    const auto start = out.size();
    out.resize(start + row_bytes * static_cast<std::size_t>(mask.height()), 0);
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask(x, y)) {
                out[start + static_cast<std::size_t>(y) * row_bytes + static_cast<std::size_t>(x / 8)] |=
                    static_cast<std::uint8_t>(0x80u >> (x % 8));
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

GrayImage read_gray(const std::filesystem::path& path) {
    try {
        return decode_gray(read_file(path));
    } catch (const DecodeError& e) {
        throw DecodeError(path.string() + ": " + e.what());
    }
}

BinaryImage read_binary(const std::filesystem::path& path) {
    try {
        return decode_binary(read_file(path));
    } catch (const DecodeError& e) {
        throw DecodeError(path.string() + ": " + e.what());
    }
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    write_file(path, encode_pgm(img));
}

void write_pgm(const std::filesystem::path& path, const BinaryImage& mask) {
    write_file(path, encode_pgm(mask));
}

void write_pbm(const std::filesystem::path& path, const BinaryImage& mask) {
    write_file(path, encode_pbm(mask));
}

void write_mask(const std::filesystem::path& path, const BinaryImage& mask) {
    if (path.extension() == ".pbm") {
        write_pbm(path, mask);
    } else {
        write_pgm(path, mask);
    }
}

}  // namespace binbench::pnm
