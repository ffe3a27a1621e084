#include "qdct/image.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace qdct {

namespace {

class PgmScanner {
public:
    explicit PgmScanner(std::string_view bytes) : bytes_(bytes) {}

    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size()) {
            const char ch = bytes_[pos_];
            if (ch == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    /// Next decimal header or raster field.
    long long number(PgmErrorCode on_error, const char* what)
    {
        skip_space_and_comments();
        if (pos_ >= bytes_.size()) throw PgmError(PgmErrorCode::truncated, std::string("pgm: missing ") + what);
        long long value = 0;
        const char* begin = bytes_.data() + pos_;
        const char* end = bytes_.data() + bytes_.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin ||
            (ptr != end && !std::isspace(static_cast<unsigned char>(*ptr)) && *ptr != '#')) {
            throw PgmError(on_error, std::string("pgm: malformed ") + what);
        }
        pos_ += static_cast<std::size_t>(ptr - begin);
        return value;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::string_view rest() const { return bytes_.substr(pos_); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage read_pgm(std::string_view bytes)
{
    if (bytes.size() < 2 || bytes[0] != 'P') throw PgmError(PgmErrorCode::bad_magic, "pgm: missing 'P' magic");
    const char kind = bytes[1];
    if (kind != '2' && kind != '5') {
        if (kind >= '1' && kind <= '7') {
            throw PgmError(PgmErrorCode::unsupported_format, std::string("pgm: unsupported format P") + kind);
        }
        throw PgmError(PgmErrorCode::bad_magic, "pgm: malformed magic number");
    }
    if (bytes.size() > 2 && !std::isspace(static_cast<unsigned char>(bytes[2])) && bytes[2] != '#') {
        throw PgmError(PgmErrorCode::bad_magic, "pgm: malformed magic number");
    }

    PgmScanner in(bytes);
    in.advance(2);
    const long long w = in.number(PgmErrorCode::bad_header, "width");
    const long long h = in.number(PgmErrorCode::bad_header, "height");
    if (w <= 0 || h <= 0) throw PgmError(PgmErrorCode::bad_header, "pgm: dimensions must be positive");
    const long long maxval = in.number(PgmErrorCode::bad_maxval, "maxval");
    if (maxval <= 0 || maxval > 255) {
        throw PgmError(PgmErrorCode::bad_maxval, "pgm: maxval " + std::to_string(maxval) + " not in 1..255");
    }

    GrayImage img(static_cast<std::size_t>(w), static_cast<std::size_t>(h));
    const std::size_t count = img.pixels.size();
    if (kind == '5') {
        // Exactly one whitespace byte separates the header from the raster.
        if (in.remaining() == 0) throw PgmError(PgmErrorCode::truncated, "pgm: missing raster");
        in.advance(1);
        if (in.remaining() < count) {
            throw PgmError(PgmErrorCode::truncated, "pgm: raster has " + std::to_string(in.remaining()) +
                                                        " bytes, expected " + std::to_string(count));
        }
        const auto raster = in.rest();
        for (std::size_t i = 0; i < count; ++i) {
            const auto v = static_cast<std::uint8_t>(raster[i]);
            if (v > maxval) throw PgmError(PgmErrorCode::bad_pixel, "pgm: pixel exceeds maxval");
            img.pixels[i] = v;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const long long v = in.number(PgmErrorCode::bad_pixel, "pixel");
            if (v < 0 || v > maxval) throw PgmError(PgmErrorCode::bad_pixel, "pgm: pixel out of range");
            img.pixels[i] = static_cast<std::uint8_t>(v);
        }
    }
    return img;
}

std::string write_pgm(const GrayImage& img)
{
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(img.pixels.begin(), img.pixels.end());
    return out;
}

BlockGrid split_blocks(const GrayImage& img, std::size_t block_size)
{
    if (block_size == 0) throw std::invalid_argument("split_blocks: block size must be positive");
    if (img.width == 0 || img.height == 0) throw std::invalid_argument("split_blocks: empty image");
    BlockGrid grid;
    grid.block_size = block_size;
    grid.width = img.width;
    grid.height = img.height;
    grid.block_rows = (img.height + block_size - 1) / block_size;
    grid.block_cols = (img.width + block_size - 1) / block_size;
    for (std::size_t br = 0; br < grid.block_rows; ++br) {
        for (std::size_t bc = 0; bc < grid.block_cols; ++bc) {
            Block b{br, bc, Matrix(block_size, block_size)};
            for (std::size_t r = 0; r < block_size; ++r) {
                const std::size_t y = std::min(br * block_size + r, img.height - 1);
                for (std::size_t c = 0; c < block_size; ++c) {
                    const std::size_t x = std::min(bc * block_size + c, img.width - 1);
                    b.values(r, c) = img.at(y, x);
                }
            }
            grid.blocks.push_back(std::move(b));
        }
    }
    return grid;
}

namespace {

std::uint8_t to_pixel(double v)
{
    const double r = std::round(v);  // halves away from zero
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

}  // namespace

GrayImage merge_blocks(const BlockGrid& grid)
{
    GrayImage img(grid.width, grid.height);
    const std::size_t bs = grid.block_size;
    for (const auto& b : grid.blocks) {
        for (std::size_t r = 0; r < bs; ++r) {
            const std::size_t y = b.row * bs + r;
            if (y >= grid.height) break;
            for (std::size_t c = 0; c < bs; ++c) {
                const std::size_t x = b.col * bs + c;
                if (x >= grid.width) break;
                img.at(y, x) = to_pixel(b.values(r, c));
            }
        }
    }
    return img;
}

CompressionMode CompressionMode::parse(std::string_view text)
{
    if (text == "quantum-sim") return quantum_sim();
    if (text.starts_with("topk:")) {
        const auto digits = text.substr(5);
        std::size_t k = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && k > 0) return topk(k);
    }
    throw std::invalid_argument("mode must be 'quantum-sim' or 'topk:K' with K > 0, got '" + std::string(text) + "'");
}

std::string CompressionMode::str() const
{
    return kind == Kind::quantum_sim ? std::string("quantum-sim") : "topk:" + std::to_string(k);
}

namespace {

SparseCoefficients keep_largest(const Matrix& c, std::size_t k)
{
    std::vector<std::size_t> order(c.rows() * c.cols());
    std::iota(order.begin(), order.end(), 0);
    const auto vals = c.values();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(vals[a]) > std::abs(vals[b]); });
    order.resize(std::min(k, order.size()));
    std::sort(order.begin(), order.end());
    SparseCoefficients out{c.rows(), c.cols(), {}};
    for (std::size_t idx : order) out.entries.push_back({idx / c.cols(), idx % c.cols(), vals[idx]});
    return out;
}

CompressedBlock compress_block(const Block& block, const CompressOptions& opts, const DctMatrix& d)
{
    CompressedBlock out;
    out.row = block.row;
    out.col = block.col;
    out.block_energy = energy(block.values);
    if (opts.mode.kind == CompressionMode::Kind::topk) {
        out.coefficients = keep_largest(dct2d(block.values, d), opts.mode.k);
        return out;
    }
    SeededRng rng(derive_seed(opts.master_seed, block.row, block.col));
    const Qdct2Report report = qdct2(block.values, opts.epsilon, opts.driver, rng);
    out.coefficients = report.coefficients;
    out.coefficients.rows = out.coefficients.cols = block.values.rows();
    out.fell_back = report.fell_back;
    out.oracle_calls = report.oracle_calls;
    return out;
}

}  // namespace

CompressedImage compress(const GrayImage& img, const CompressOptions& opts)
{
    if (!(opts.epsilon > 0.0)) throw std::invalid_argument("compress: epsilon must be positive");
    const BlockGrid grid = split_blocks(img, opts.block_size);
    const DctMatrix d(opts.block_size);

    CompressedImage out;
    out.width = img.width;
    out.height = img.height;
    out.block_size = opts.block_size;
    out.epsilon = opts.epsilon;
    out.mode = opts.mode;
    out.seed = opts.master_seed;
    out.blocks.resize(grid.blocks.size());

    unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.blocks.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < grid.blocks.size(); ++i) out.blocks[i] = compress_block(grid.blocks[i], opts, d);
        return out;
    }

    // Each block owns its rng stream, so the assignment of blocks to workers
    // does not affect the result.
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < grid.blocks.size(); i = next++) {
                        out.blocks[i] = compress_block(grid.blocks[i], opts, d);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

GrayImage decompress(const CompressedImage& c)
{
    if (c.block_size == 0 || c.width == 0 || c.height == 0) throw ContainerError("decompress: invalid dimensions");
    const DctMatrix d(c.block_size);
    BlockGrid grid;
    grid.block_size = c.block_size;
    grid.width = c.width;
    grid.height = c.height;
    grid.block_rows = (c.height + c.block_size - 1) / c.block_size;
    grid.block_cols = (c.width + c.block_size - 1) / c.block_size;
    if (c.blocks.size() != grid.block_rows * grid.block_cols) {
        throw ContainerError("decompress: expected " + std::to_string(grid.block_rows * grid.block_cols) +
                             " blocks, found " + std::to_string(c.blocks.size()));
    }
    for (const auto& b : c.blocks) {
        if (b.row >= grid.block_rows || b.col >= grid.block_cols) throw ContainerError("decompress: block out of range");
        Matrix coeffs(c.block_size, c.block_size);
        for (const auto& e : b.coefficients.entries) {
            if (e.row >= c.block_size || e.col >= c.block_size) {
                throw ContainerError("decompress: coefficient index out of range");
            }
            coeffs(e.row, e.col) = e.value;
        }
        grid.blocks.push_back({b.row, b.col, idct2d(coeffs, d)});
    }
    return merge_blocks(grid);
}

namespace {

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string serialize(const CompressedImage& c)
{
    std::string out = "QDCT1 " + std::to_string(c.width) + " " + std::to_string(c.height) + " " +
                      std::to_string(c.block_size) + " " + format_double(c.epsilon) + " " + c.mode.str() + " " +
                      std::to_string(c.seed) + "\n";
    for (const auto& b : c.blocks) {
        out += "B " + std::to_string(b.row) + " " + std::to_string(b.col) + " " +
               std::to_string(b.coefficients.entries.size()) + "\n";
        for (const auto& e : b.coefficients.entries) {
            out += std::to_string(e.row) + " " + std::to_string(e.col) + " " + format_double(e.value) + "\n";
        }
    }
    return out;
}

CompressedImage parse_container(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) -> ContainerError {
        return ContainerError("container line " + std::to_string(line_no) + ": " + why);
    };

    CompressedImage c;
    if (!std::getline(in, line)) throw ContainerError("container: empty input");
    ++line_no;
    {
        std::istringstream hs(line);
        std::string magic, mode;
        if (!(hs >> magic >> c.width >> c.height >> c.block_size >> c.epsilon >> mode >> c.seed) ||
            magic != "QDCT1") {
            throw fail("malformed header");
        }
        std::string extra;
        if (hs >> extra) throw fail("trailing header fields");
        try {
            c.mode = CompressionMode::parse(mode);
        } catch (const std::invalid_argument& e) {
            throw fail(e.what());
        }
        if (c.width == 0 || c.height == 0 || c.block_size == 0) throw fail("dimensions must be positive");
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream bs(line);
        std::string tag;
        CompressedBlock b;
        std::size_t count = 0;
        if (!(bs >> tag >> b.row >> b.col >> count) || tag != "B") throw fail("expected block record");
        const std::size_t grid_rows = (c.height + c.block_size - 1) / c.block_size;
        const std::size_t grid_cols = (c.width + c.block_size - 1) / c.block_size;
        if (b.row >= grid_rows || b.col >= grid_cols) throw fail("block position outside the image");
        if (count > c.block_size * c.block_size) throw fail("more coefficients than block entries");
        b.coefficients.rows = b.coefficients.cols = c.block_size;
        for (std::size_t i = 0; i < count; ++i) {
            if (!std::getline(in, line)) throw fail("truncated block");
            ++line_no;
            std::istringstream es(line);
            Coefficient e;
            if (!(es >> e.row >> e.col >> e.value)) throw fail("malformed coefficient");
            if (e.row >= c.block_size || e.col >= c.block_size) throw fail("coefficient index outside the block");
            b.coefficients.entries.push_back(e);
        }
        c.blocks.push_back(std::move(b));
    }
    return c;
}

double CompressionStats::discarded_fraction() const
{
    if (coefficients_total == 0) return 0.0;
    return 1.0 - static_cast<double>(coefficients_retained) / static_cast<double>(coefficients_total);
}

CompressionStats summarize(const CompressedImage& c)
{
    CompressionStats s;
    s.blocks = c.blocks.size();
    for (const auto& b : c.blocks) {
        s.coefficients_total += c.block_size * c.block_size;
        s.coefficients_retained += b.coefficients.entries.size();
        if (b.fell_back) ++s.fallback_blocks;
        const double kept = b.coefficients.energy();
        s.total_energy += b.block_energy;
        s.retained_energy += kept;
        if (b.block_energy > 0.0) s.min_block_ratio = std::min(s.min_block_ratio, kept / b.block_energy);
        s.oracle_calls += b.oracle_calls;
    }
    return s;
}

double psnr(const GrayImage& a, const GrayImage& b)
{
    if (a.width != b.width || a.height != b.height) throw std::invalid_argument("psnr: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double diff = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        sum += diff * diff;
    }
    if (sum == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sum / static_cast<double>(a.pixels.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace qdct
