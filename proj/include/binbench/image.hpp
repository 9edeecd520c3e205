#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace binbench {

// Error taxonomy shared by every module. The CLI maps each kind onto a
// stable exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class EmptySeedError : public Error {
public:
    using Error::Error;
};

class EmptyGroundTruthError : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// 8-bit single-channel raster, row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::uint8_t operator()(int x, int y) const { return data_[index(x, y)]; }
    std::uint8_t& operator()(int x, int y) { return data_[index(x, y)]; }

    // Coordinates are clamped into the image (replicate padding).
    std::uint8_t clamped(int x, int y) const;

    std::span<const std::uint8_t> pixels() const noexcept { return data_; }
    std::span<std::uint8_t> pixels() noexcept { return data_; }

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Boolean foreground mask; true (1) is ink. Stored as bytes holding 0 or 1.
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height, bool fill = false);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return mask_.size(); }

    bool operator()(int x, int y) const { return mask_[index(x, y)] != 0; }
    void set(int x, int y, bool v) { mask_[index(x, y)] = v ? 1 : 0; }
    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    // Out-of-bounds reads return background.
    bool at_or_background(int x, int y) const noexcept {
        return contains(x, y) && mask_[index(x, y)] != 0;
    }

    bool at(std::size_t i) const { return mask_[i] != 0; }
    void set(std::size_t i, bool v) { mask_[i] = v ? 1 : 0; }

    std::size_t count() const noexcept;
    bool same_shape(const BinaryImage& o) const noexcept {
        return width_ == o.width_ && height_ == o.height_;
    }

    bool operator==(const BinaryImage&) const = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> mask_;
};

/// Per-pixel Euclidean distances to the nearest seed pixel.
struct DistanceField {
    int width = 0;
    int height = 0;
    std::vector<double> dist;

    double operator()(int x, int y) const {
        return dist[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                    static_cast<std::size_t>(x)];
    }
};

// Throws ShapeError naming `what` when the two masks differ in size.
void require_same_shape(const BinaryImage& a, const BinaryImage& b, const char* what);

BinaryImage complement(const BinaryImage& b);

}  // namespace binbench
