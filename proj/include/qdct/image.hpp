#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdct/dct.hpp"
#include "qdct/driver.hpp"

namespace qdct {

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // row-major

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), pixels(w * h, fill) {}

    std::uint8_t& at(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

enum class PgmErrorCode { bad_magic, unsupported_format, bad_header, bad_maxval, truncated, bad_pixel };

class PgmError : public std::runtime_error {
public:
    PgmError(PgmErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    PgmErrorCode code() const { return code_; }

private:
    PgmErrorCode code_;
};

/// Binary (P5) or ASCII (P2) graymap with maxval <= 255. Pixel values are
/// kept as stored, without rescaling to 255.
GrayImage read_pgm(std::string_view bytes);
/// Always emits P5 with maxval 255.
std::string write_pgm(const GrayImage& img);

struct Block {
    std::size_t row = 0;  // in block units
    std::size_t col = 0;
    Matrix values;
};

struct BlockGrid {
    std::size_t block_size = 8;
    std::size_t width = 0;  // original, unpadded
    std::size_t height = 0;
    std::size_t block_rows = 0;
    std::size_t block_cols = 0;
    std::vector<Block> blocks;  // row-major
};

/// Tiles the image, replicating the last row and column to pad up to a
/// multiple of block_size.
BlockGrid split_blocks(const GrayImage& img, std::size_t block_size);
/// Reassembles, rounding to nearest (ties away from zero), clamping to
/// 0..255 and cropping the padding.
GrayImage merge_blocks(const BlockGrid& grid);

struct CompressionMode {
    enum class Kind { quantum_sim, topk };
    Kind kind = Kind::quantum_sim;
    std::size_t k = 0;

    static CompressionMode quantum_sim() { return {Kind::quantum_sim, 0}; }
    static CompressionMode topk(std::size_t k) { return {Kind::topk, k}; }
    /// "quantum-sim" or "topk:K".
    static CompressionMode parse(std::string_view text);
    std::string str() const;
};

struct CompressOptions {
    double epsilon = 2.0e-5;
    CompressionMode mode;
    std::size_t block_size = 8;
    std::uint64_t master_seed = 0;
    DriverOptions driver;
    unsigned threads = 1;  // 0 uses hardware concurrency
};

struct CompressedBlock {
    std::size_t row = 0;
    std::size_t col = 0;
    SparseCoefficients coefficients;
    // Run statistics; not part of the serialized container.
    bool fell_back = false;
    double block_energy = 0.0;
    std::uint64_t oracle_calls = 0;
};

struct CompressedImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t block_size = 8;
    double epsilon = 2.0e-5;
    CompressionMode mode;
    std::uint64_t seed = 0;
    std::vector<CompressedBlock> blocks;
};

class ContainerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CompressedImage compress(const GrayImage& img, const CompressOptions& opts);
GrayImage decompress(const CompressedImage& c);

/// Text container:
///   QDCT1 <width> <height> <block> <epsilon> <mode> <seed>
///   B <row> <col> <count>
///   <p> <q> <value>      (count lines, value with 17 significant digits)
std::string serialize(const CompressedImage& c);
CompressedImage parse_container(std::string_view text);

struct CompressionStats {
    std::size_t blocks = 0;
    std::size_t coefficients_total = 0;
    std::size_t coefficients_retained = 0;
    std::size_t fallback_blocks = 0;
    double total_energy = 0.0;
    double retained_energy = 0.0;
    double min_block_ratio = 1.0;  // smallest per-block retained-energy ratio
    std::uint64_t oracle_calls = 0;

    double retained_ratio() const { return total_energy > 0.0 ? retained_energy / total_energy : 1.0; }
    double discarded_fraction() const;
};

CompressionStats summarize(const CompressedImage& c);

/// 10 log10(255^2 / MSE); +infinity when the images are identical.
double psnr(const GrayImage& a, const GrayImage& b);

}  // namespace qdct
