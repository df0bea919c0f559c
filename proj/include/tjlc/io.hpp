#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tjlc/dense_tensor.hpp"

namespace tjlc {

/// Binary tensor container: magic "TNSR", u32 version (1), u32 dtype
/// (1 = real64, 2 = bool byte), u32 ndim, ndim u64 extents, then the
/// payload in flat first-index-fastest order. Everything little-endian.
struct TnsHeader {
    std::uint32_t version = 1;
    std::uint32_t dtype = 1;
    std::vector<std::uint64_t> dims;

    std::uint64_t element_count() const;
};

enum class TnsDtype : std::uint32_t { Real64 = 1, Bool8 = 2 };

class TnsError : public std::runtime_error {
public:
    enum class Kind { BadMagic, BadVersion, BadDtype, Truncated, TrailingBytes, Io };

    TnsError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

using TnsValue = std::variant<DenseTensor, IndexSet>;

TnsHeader read_tns_header(const std::filesystem::path& path);
TnsValue read_tns(const std::filesystem::path& path);
void write_tns(const DenseTensor& x, const std::filesystem::path& path);
void write_tns(const IndexSet& omega, const std::filesystem::path& path);

/// SplitMix64 generator, pinned by its public constants so any
/// implementation reproduces identical streams.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound) by modulo reduction (part of the pinned
    /// generation procedure).
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

    /// Uniform in [0, 1) with 53 significand bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; draws two units per pair.
    double next_gaussian();

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct MaskSpec {
    std::uint64_t seed = 0;
    double missing_rate = 0.0;  // percent, [0, 100)
    std::vector<std::size_t> dims;
};

/// Exactly round((1 - MR/100) * total) observed positions, chosen by a
/// SplitMix64-seeded partial Fisher-Yates over flat indices. Deterministic
/// per (seed, dims, MR).
IndexSet generate_mask(const MaskSpec& spec);

/// t-product of seeded random separable factors (a Gaussian spatial column
/// and a Gaussian tube per component), rescaled to the requested
/// root-mean-square entry magnitude. Every mode-pair unfolding of the
/// result has rank <= r and the tubal rank is exactly r. The default scale
/// puts the 30x30x20 benchmark spectra inside the shrinkage window of the
/// shipped parameter presets; pass a larger rms for image-range data.
DenseTensor synth_low_tubal(const std::array<std::size_t, 3>& dims, std::size_t rank,
                            std::uint64_t seed, double rms = 6.0);

/// Stacks binary PGM (P5) slices into an order-3 tensor, or PPM (P6)
/// frames into order-4 (height x width x channel x frame). Files are taken
/// in lexicographic name order and must agree in size and format.
DenseTensor import_slices(const std::filesystem::path& directory);

/// Writes order-3 tensors as per-slice PGM, order-4 (I3 == 3) as per-frame
/// PPM. Values clamp to [0, 255] and round half-up.
void export_slices(const DenseTensor& x, const std::filesystem::path& directory);

}  // namespace tjlc
