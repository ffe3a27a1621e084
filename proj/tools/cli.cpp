#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "qdct/dct.hpp"
#include "qdct/driver.hpp"
#include "qdct/experiments.hpp"
#include "qdct/image.hpp"

namespace qdct::cli {

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (bad flags, empty input, too few sizes)\n"
    "  3  parse or format error (numeric text, PGM, container)\n"
    "  4  I/O error (cannot read or write a file)\n"
    "  5  verification failure (demo-example --verify, bench-scaling fit outside the claim)\n"
    "  6  fallback-only outcome (every quantum-sim block fell back to the classical transform)\n";

struct CommandError {
    int code;
    std::string message;
};

std::string g17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string g9(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CommandError{kIo, "cannot open '" + path + "'"};
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& bytes)
{
    std::ofstream os(path, std::ios::binary);
    if (!os || !os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
        throw CommandError{kIo, "cannot write '" + path + "'"};
    }
}

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Rows of whitespace-separated decimals; blank lines are skipped.
std::vector<std::vector<double>> parse_numbers(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos >= line.size()) break;
            const std::size_t start = pos;
            while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            const std::string token = line.substr(start, pos - start);
            char* end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (end != token.c_str() + token.size() || !std::isfinite(v)) {
                throw CommandError{kParse, "line " + std::to_string(line_no) + " column " +
                                               std::to_string(start + 1) + ": invalid number '" + token + "'"};
            }
            row.push_back(v);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

struct Emitted {
    std::string path;
    std::uint64_t hash;
};

int cmd_dct(const std::string& input, bool inverse, bool two_d, const std::string& output, std::ostream& out,
            std::vector<Emitted>& emitted)
{
    const auto rows = parse_numbers(read_file(input));
    if (rows.empty()) throw CommandError{kUsage, "input '" + input + "' contains no numbers"};

    std::ostringstream os;
    if (two_d) {
        const std::size_t n = rows.size();
        for (std::size_t r = 0; r < n; ++r) {
            if (rows[r].size() != n) {
                throw CommandError{kParse, "row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                                               " values; a 2-D input must be " + std::to_string(n) + "x" +
                                               std::to_string(n)};
            }
        }
        Matrix m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
        const DctMatrix d(n);
        const Matrix res = inverse ? idct2d(m, d) : dct2d(m, d);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) os << (c ? " " : "") << g17(res(r, c));
            os << '\n';
        }
    } else {
        Vector v;
        for (const auto& row : rows) v.insert(v.end(), row.begin(), row.end());
        const DctMatrix d(v.size());
        const Vector res = inverse ? idct1d(v, d) : dct1d(v, d);
        for (double x : res) os << g17(x) << '\n';
    }
    if (output.empty()) {
        out << os.str();
    } else {
        write_file(output, os.str());
        emitted.push_back({output, fnv1a(os.str())});
    }
    return kOk;
}

void print_trace(std::ostream& os, const std::string& prefix, const RunReport& report)
{
    for (const auto& r : report.trace) {
        os << prefix << "round=" << r.round << " delta_e=" << g9(r.delta_e) << " ratio=" << g9(r.ratio)
           << " alpha=" << g9(r.window.alpha) << " beta=" << g9(r.window.beta) << " solutions=" << r.solutions
           << " found=" << (r.outcome.found ? "true" : "false") << " index=" << r.outcome.index
           << " value=" << g9(r.outcome.value) << " iterations=" << r.outcome.total_iterations
           << " action=" << to_string(r.action) << '\n';
    }
    os << prefix << "accepted=";
    for (std::size_t i = 0; i < report.accepted.entries.size(); ++i) {
        const auto& e = report.accepted.entries[i];
        os << (i ? "," : "") << e.row << ':' << g9(e.value);
    }
    os << '\n'
       << prefix << "delta_e=" << g9(report.delta_e) << '\n'
       << prefix << "final_ratio=" << g9(report.final_ratio) << '\n'
       << prefix << "fell_back=" << (report.fell_back ? "true" : "false") << '\n'
       << prefix << "rounds=" << report.rounds << '\n'
       << prefix << "oracle_calls=" << report.oracle_calls << '\n';
}

int cmd_demo(std::uint64_t seed, double epsilon, int readout_digits, bool verify, std::ostream& out)
{
    if (!(epsilon > 0.0)) throw CommandError{kUsage, "--epsilon must be positive"};
    const WorkedExample ex = run_worked_example(seed, epsilon, readout_digits);

    out << "command=demo-example\n"
        << "seed=" << seed << '\n'
        << "epsilon=" << g9(epsilon) << '\n'
        << "readout_digits=" << readout_digits << '\n'
        << "signal=";
    for (std::size_t i = 0; i < kExampleSignal.size(); ++i) out << (i ? "," : "") << kExampleSignal[i];
    out << '\n' << "norm_sq=" << g9(ex.report.total_energy) << '\n';
    for (std::size_t i = 0; i < ex.squared_coefficients.size(); ++i) {
        out << "c_sq[" << i << "]=" << g9(ex.squared_coefficients[i]) << '\n';
    }
    print_trace(out, "", ex.report);

    // Same seed with a full-precision readout register.
    DriverOptions exact_opts;
    SeededRng rng(seed);
    const RunReport exact = qdct1(kExampleSignal, epsilon, exact_opts, rng);
    print_trace(out, "exact.", exact);

    for (const auto& c : ex.checks) {
        out << "check " << c.name << " expected="
            << (c.expected_text.empty() ? g9(c.expected) : c.expected_text)
            << " actual=" << (c.actual_text.empty() ? g9(c.actual) : c.actual_text)
            << " status=" << (c.pass ? "pass" : "FAIL") << '\n';
    }
    out << "selected_6_then_7=" << (ex.selected_six_then_seven ? "true" : "false") << '\n';
    if (verify) {
        out << "verify=" << (ex.pass() ? "pass" : "FAIL") << '\n';
        return ex.pass() ? kOk : kVerification;
    }
    return kOk;
}

GrayImage load_pgm(const std::string& path)
{
    try {
        return read_pgm(read_file(path));
    } catch (const PgmError& e) {
        throw CommandError{kParse, path + ": " + e.what()};
    }
}

int cmd_compress(const std::string& input, const std::string& output, const CompressOptions& opts,
                 std::ostream& out, std::vector<Emitted>& emitted)
{
    const GrayImage img = load_pgm(input);
    const CompressedImage packed = compress(img, opts);
    const std::string bytes = serialize(packed);
    write_file(output, bytes);
    emitted.push_back({output, fnv1a(bytes)});

    const CompressionStats s = summarize(packed);
    const double quality = psnr(img, decompress(packed));
    out << "command=compress\n"
        << "width=" << img.width << '\n'
        << "height=" << img.height << '\n'
        << "block=" << opts.block_size << '\n'
        << "mode=" << opts.mode.str() << '\n'
        << "epsilon=" << g9(opts.epsilon) << '\n'
        << "seed=" << opts.master_seed << '\n'
        << "blocks=" << s.blocks << '\n'
        << "coefficients_total=" << s.coefficients_total << '\n'
        << "coefficients_retained=" << s.coefficients_retained << '\n'
        << "discarded_fraction=" << g9(s.discarded_fraction()) << '\n'
        << "retained_energy_ratio=" << g9(s.retained_ratio()) << '\n'
        << "min_block_energy_ratio=" << g9(s.min_block_ratio) << '\n'
        << "fallback_blocks=" << s.fallback_blocks << '\n'
        << "fallback_rate=" << g9(s.blocks ? static_cast<double>(s.fallback_blocks) / s.blocks : 0.0) << '\n'
        << "oracle_calls=" << s.oracle_calls << '\n'
        << "psnr=" << g9(quality) << '\n';
    if (opts.mode.kind == CompressionMode::Kind::quantum_sim && s.blocks > 0 && s.fallback_blocks == s.blocks) {
        return kFallbackOnly;
    }
    return kOk;
}

int cmd_decompress(const std::string& input, const std::string& output, const std::string& reference,
                   std::ostream& out, std::vector<Emitted>& emitted)
{
    CompressedImage packed;
    GrayImage img;
    try {
        packed = parse_container(read_file(input));
        img = decompress(packed);
    } catch (const ContainerError& e) {
        throw CommandError{kParse, input + ": " + e.what()};
    }
    const std::string bytes = write_pgm(img);
    write_file(output, bytes);
    emitted.push_back({output, fnv1a(bytes)});

    std::size_t retained = 0;
    for (const auto& b : packed.blocks) retained += b.coefficients.entries.size();
    out << "command=decompress\n"
        << "width=" << img.width << '\n'
        << "height=" << img.height << '\n'
        << "block=" << packed.block_size << '\n'
        << "mode=" << packed.mode.str() << '\n'
        << "blocks=" << packed.blocks.size() << '\n'
        << "coefficients_retained=" << retained << '\n';
    if (!reference.empty()) {
        const GrayImage ref = load_pgm(reference);
        if (ref.width != img.width || ref.height != img.height) {
            throw CommandError{kUsage, "reference image dimensions differ from the container"};
        }
        out << "psnr=" << g9(psnr(ref, img)) << '\n';
    }
    return kOk;
}

int cmd_bench(const BenchOptions& opts, std::ostream& out)
{
    if (opts.sizes.size() < 3) throw CommandError{kUsage, "--sizes needs at least three values"};
    const BenchResult res = bench_scaling(opts);
    const auto& r = res.report;
    out << "command=bench-scaling\n"
        << "mode=" << (opts.two_d ? "2d" : "1d") << '\n'
        << "axis=" << (opts.two_d ? "N" : "M") << '\n'
        << "trials=" << opts.trials << '\n'
        << "seed=" << opts.seed << '\n'
        << "failures=" << res.failures << '\n'
        << "exponent=" << g9(r.exponent) << '\n'
        << "exponent_ci95=" << g9(r.ci_low) << "," << g9(r.ci_high) << '\n'
        << "claimed_exponent=" << g9(r.claimed) << '\n'
        << "tolerance=" << g9(r.tolerance) << '\n'
        << "max_constant=" << g9(r.max_constant) << '\n'
        << "status=" << (r.pass ? "pass" : "FAIL") << '\n'
        << "# size domain trials mean_iterations constant\n";
    for (const auto& p : r.points) {
        out << g9(p.size) << ' ' << p.domain << ' ' << p.trials << ' ' << g9(p.mean_iterations) << ' '
            << g9(p.constant) << '\n';
    }
    return r.pass ? kOk : kVerification;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Simulated quantum DCT coefficient search and block image compression", "qdct"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);
    std::string manifest_path;
    app.add_option("--manifest", manifest_path, "Write a run manifest (key=value) to this file");

    auto* dct = app.add_subcommand("dct", "Forward or inverse DCT of a vector or square matrix file");
    std::string dct_input, dct_output;
    bool dct_inverse = false, dct_two_d = false;
    dct->add_option("input", dct_input, "Whitespace-separated decimals; one matrix row per line with --two-d")
        ->required();
    dct->add_flag("--inverse", dct_inverse, "Apply the inverse transform");
    dct->add_flag("--two-d", dct_two_d, "Treat the input as a square matrix");
    dct->add_option("-o,--output", dct_output, "Output file (default stdout)");

    auto* demo = app.add_subcommand("demo-example", "Run QDCT1 on the 8-sample worked example and print the trace");
    std::uint64_t demo_seed = 1;
    double demo_eps = 2.0e-5;
    int demo_digits = 5;
    bool demo_verify = false;
    demo->add_option("--seed", demo_seed, "RNG seed")->capture_default_str();
    demo->add_option("--epsilon", demo_eps, "Residual-energy threshold")->capture_default_str();
    demo->add_option("--readout-digits", demo_digits,
                     "Significant digits of the coefficient readout (0 = full double precision)")
        ->capture_default_str();
    demo->add_flag("--verify", demo_verify, "Check the published checkpoints; exit 5 on mismatch");

    auto* comp = app.add_subcommand("compress", "Compress a PGM image into a QDCT1 text container");
    std::string comp_in, comp_out, comp_mode = "quantum-sim";
    CompressOptions copts;
    comp->add_option("input", comp_in, "P5 or P2 graymap")->required();
    comp->add_option("-o,--output", comp_out, "Container file")->required();
    comp->add_option("--epsilon", copts.epsilon, "Residual-energy threshold")->capture_default_str();
    comp->add_option("--mode", comp_mode, "quantum-sim or topk:K")->capture_default_str();
    comp->add_option("--block", copts.block_size, "Block size")->check(CLI::IsMember({8, 16}))->capture_default_str();
    comp->add_option("--seed", copts.master_seed, "Master RNG seed")->capture_default_str();
    comp->add_option("--threads", copts.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    comp->add_option("--n-max-repetition", copts.driver.n_max_repetition, "Repeat limit before classical fallback")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* decomp = app.add_subcommand("decompress", "Reconstruct a PGM image from a QDCT1 container");
    std::string decomp_in, decomp_out, decomp_ref;
    decomp->add_option("input", decomp_in, "Container file")->required();
    decomp->add_option("-o,--output", decomp_out, "Output P5 graymap")->required();
    decomp->add_option("--reference", decomp_ref, "Original image; reports PSNR against it");

    auto* bench = app.add_subcommand("bench-scaling", "Fit search iterations against problem size");
    BenchOptions bopts;
    bopts.seed = 1;
    bench->add_option("--sizes", bopts.sizes, "Comma-separated sizes: M for 1-D, N (domain N^2) with --two-d")
        ->delimiter(',')
        ->required();
    bench->add_option("--trials", bopts.trials, "Seeded searches per size")->capture_default_str();
    bench->add_option("--seed", bopts.seed, "Master RNG seed")->capture_default_str();
    bench->add_flag("--two-d", bopts.two_d, "Search the N x N product G = D F");
    bench->add_option("--threads", bopts.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    std::vector<Emitted> emitted;
    std::string command;
    std::uint64_t seed = 0;
    int rc = kOk;
    try {
        if (*dct) {
            command = "dct";
            rc = cmd_dct(dct_input, dct_inverse, dct_two_d, dct_output, out, emitted);
        } else if (*demo) {
            command = "demo-example";
            seed = demo_seed;
            rc = cmd_demo(demo_seed, demo_eps, demo_digits, demo_verify, out);
        } else if (*comp) {
            command = "compress";
            seed = copts.master_seed;
            try {
                copts.mode = CompressionMode::parse(comp_mode);
            } catch (const std::invalid_argument& e) {
                throw CommandError{kUsage, e.what()};
            }
            if (!(copts.epsilon > 0.0)) throw CommandError{kUsage, "--epsilon must be positive"};
            rc = cmd_compress(comp_in, comp_out, copts, out, emitted);
        } else if (*decomp) {
            command = "decompress";
            rc = cmd_decompress(decomp_in, decomp_out, decomp_ref, out, emitted);
        } else if (*bench) {
            command = "bench-scaling";
            seed = bopts.seed;
            rc = cmd_bench(bopts, out);
        }
    } catch (const CommandError& e) {
        err << "qdct " << command << ": " << e.message << '\n';
        return e.code;
    } catch (const std::invalid_argument& e) {
        err << "qdct " << command << ": " << e.what() << '\n';
        return kUsage;
    }

    if (!manifest_path.empty()) {
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started);
        std::ostringstream m;
        m << "command=" << command << '\n' << "arguments=";
        for (std::size_t i = 0; i < args.size(); ++i) m << (i ? " " : "") << args[i];
        m << '\n' << "seed=" << seed << '\n' << "exit_code=" << rc << '\n';
        for (const auto& e : emitted) {
            char hash[32];
            std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(e.hash));
            m << "emitted=" << e.path << " fnv1a64=" << hash << '\n';
        }
        m << "elapsed_us=" << elapsed.count() << '\n';
        try {
            write_file(manifest_path, m.str());
        } catch (const CommandError& e) {
            err << "qdct: " << e.message << '\n';
            return e.code;
        }
    }
    return rc;
}

}  // namespace qdct::cli
