#include "tjlc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>

#include "tjlc/t_algebra.hpp"

namespace tjlc {

namespace {

constexpr char kMagic[4] = {'T', 'N', 'S', 'R'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(out, bits);
}

class ByteReader {
public:
    ByteReader(const std::string& bytes, const std::string& name)
        : bytes_(bytes), name_(name) {}

    std::uint32_t u32() {
        need(4, "header");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(
                     static_cast<unsigned char>(bytes_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8, "header");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(
                     static_cast<unsigned char>(bytes_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 8;
        return v;
    }

    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    std::uint8_t u8() {
        need(1, "payload");
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }

    void need(std::size_t n, const char* what) const {
        if (pos_ + n > bytes_.size()) {
            throw TnsError(TnsError::Kind::Truncated,
                           name_ + ": truncated " + what);
        }
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t position() const { return pos_; }

private:
    const std::string& bytes_;
    std::string name_;
    std::size_t pos_ = 0;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw TnsError(TnsError::Kind::Io, "cannot open " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof()) {
        throw TnsError(TnsError::Kind::Io, "read failure on " + path.string());
    }
    return bytes;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw TnsError(TnsError::Kind::Io, "cannot open " + path.string() + " for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) {
        throw TnsError(TnsError::Kind::Io, "write failure on " + path.string());
    }
}

TnsHeader parse_header(ByteReader& r, const std::string& name) {
    r.need(4, "magic");
    char magic[4];
    for (int i = 0; i < 4; ++i) magic[i] = static_cast<char>(r.u8());
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw TnsError(TnsError::Kind::BadMagic, name + ": bad magic");
    }
    TnsHeader h;
    h.version = r.u32();
    if (h.version != 1) {
        throw TnsError(TnsError::Kind::BadVersion,
                       name + ": unsupported version " + std::to_string(h.version));
    }
    h.dtype = r.u32();
    if (h.dtype != static_cast<std::uint32_t>(TnsDtype::Real64) &&
        h.dtype != static_cast<std::uint32_t>(TnsDtype::Bool8)) {
        throw TnsError(TnsError::Kind::BadDtype,
                       name + ": unsupported dtype " + std::to_string(h.dtype));
    }
    const std::uint32_t ndim = r.u32();
    if (ndim == 0) {
        throw TnsError(TnsError::Kind::Truncated, name + ": zero-dimensional header");
    }
    h.dims.resize(ndim);
    for (std::uint32_t i = 0; i < ndim; ++i) h.dims[i] = r.u64();
    return h;
}

std::string header_bytes(TnsDtype dtype, const std::vector<std::size_t>& dims) {
    std::string out;
    out.append(kMagic, 4);
    put_u32(out, 1);
    put_u32(out, static_cast<std::uint32_t>(dtype));
    put_u32(out, static_cast<std::uint32_t>(dims.size()));
    for (std::size_t d : dims) put_u64(out, static_cast<std::uint64_t>(d));
    return out;
}

}  // namespace

std::uint64_t TnsHeader::element_count() const {
    std::uint64_t total = 1;
    for (std::uint64_t d : dims) total *= d;
    return total;
}

TnsHeader read_tns_header(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    ByteReader r(bytes, path.filename().string());
    return parse_header(r, path.filename().string());
}

TnsValue read_tns(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    const std::string name = path.filename().string();
    ByteReader r(bytes, name);
    const TnsHeader h = parse_header(r, name);

    std::vector<std::size_t> dims(h.dims.begin(), h.dims.end());
    const std::uint64_t total = h.element_count();
    const std::size_t elem_size =
        h.dtype == static_cast<std::uint32_t>(TnsDtype::Real64) ? 8 : 1;

    if (r.remaining() < total * elem_size) {
        throw TnsError(TnsError::Kind::Truncated, name + ": truncated payload");
    }
    if (r.remaining() > total * elem_size) {
        throw TnsError(TnsError::Kind::TrailingBytes, name + ": trailing bytes");
    }

    if (h.dtype == static_cast<std::uint32_t>(TnsDtype::Real64)) {
        std::vector<double> data(total);
        for (std::uint64_t i = 0; i < total; ++i) data[i] = r.f64();
        return DenseTensor(std::move(dims), std::move(data));
    }
    std::vector<std::uint8_t> mask(total);
    for (std::uint64_t i = 0; i < total; ++i) {
        mask[i] = r.u8() ? 1 : 0;
    }
    return IndexSet(std::move(dims), std::move(mask));
}

void write_tns(const DenseTensor& x, const std::filesystem::path& path) {
    std::string out = header_bytes(TnsDtype::Real64, x.dims());
    out.reserve(out.size() + 8 * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) put_f64(out, x[i]);
    write_file(path, out);
}

void write_tns(const IndexSet& omega, const std::filesystem::path& path) {
    std::string out = header_bytes(TnsDtype::Bool8, omega.dims());
    out.reserve(out.size() + omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        out.push_back(omega.mask()[i] ? '\x01' : '\x00');
    }
    write_file(path, out);
}

double SplitMix64::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

IndexSet generate_mask(const MaskSpec& spec) {
    if (spec.missing_rate < 0.0 || spec.missing_rate >= 100.0) {
        throw std::invalid_argument("missing rate must lie in [0, 100)");
    }
    IndexSet omega(spec.dims);
    const std::size_t total = omega.size();
    const std::size_t observed = static_cast<std::size_t>(
        std::llround((1.0 - spec.missing_rate / 100.0) * static_cast<double>(total)));

    // Partial Fisher-Yates over flat indices: the first `observed` entries
    // after the seeded swaps are the observation set.
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    SplitMix64 rng(spec.seed);
    for (std::size_t i = 0; i < observed && i < total; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(total - i)));
        std::swap(idx[i], idx[j]);
    }
    for (std::size_t i = 0; i < observed; ++i) omega.mask()[idx[i]] = 1;
    return omega;
}

DenseTensor synth_low_tubal(const std::array<std::size_t, 3>& dims, std::size_t rank,
                            std::uint64_t seed, double rms) {
    const auto [i1, i2, i3] = dims;
    if (rank > std::min(i1, i2)) {
        throw std::invalid_argument("rank exceeds min(I1, I2)");
    }
    if (!(rms > 0.0)) {
        throw std::invalid_argument("rms must be positive");
    }
    if (rank == 0) {
        return DenseTensor({i1, i2, i3});
    }
    // Separable factors (one spatial column and one tube per component)
    // keep every mode-pair unfolding of the product at rank <= r, so the
    // synthetic problems carry the joint low-rank structure the solver
    // exploits, not just a low tubal rank in one orientation.
    SplitMix64 rng(seed);
    DenseTensor a({i1, rank, i3});
    DenseTensor b({rank, i2, i3});
    for (std::size_t k = 0; k < rank; ++k) {
        std::vector<double> spatial(i1), tube(i3);
        for (double& v : spatial) v = rng.next_gaussian();
        for (double& v : tube) v = rng.next_gaussian();
        for (std::size_t t = 0; t < i3; ++t) {
            for (std::size_t i = 0; i < i1; ++i) {
                a[i + k * i1 + t * i1 * rank] = spatial[i] * tube[t];
            }
        }
    }
    for (std::size_t k = 0; k < rank; ++k) {
        std::vector<double> spatial(i2), tube(i3);
        for (double& v : spatial) v = rng.next_gaussian();
        for (double& v : tube) v = rng.next_gaussian();
        for (std::size_t t = 0; t < i3; ++t) {
            for (std::size_t j = 0; j < i2; ++j) {
                b[k + j * rank + t * rank * i2] = spatial[j] * tube[t];
            }
        }
    }
    DenseTensor out = t_product(a, b);

    // scale one factor's worth of magnitude so entries land at the target RMS
    double mean_sq = 0.0;
    for (std::size_t p = 0; p < out.size(); ++p) mean_sq += out[p] * out[p];
    mean_sq /= static_cast<double>(out.size());
    if (mean_sq > 0.0) {
        const double scale = rms / std::sqrt(mean_sq);
        for (std::size_t p = 0; p < out.size(); ++p) out[p] *= scale;
    }
    return out;
}

namespace {

struct PnmImage {
    bool color = false;
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bytes;  // raster order, 1 or 3 bytes per pixel
};

int pnm_token(ByteReader& r, const std::string& name) {
    // Whitespace- and comment-tolerant ASCII integer field.
    int state = 0;
    std::string tok;
    while (r.remaining() > 0) {
        const char ch = static_cast<char>(r.u8());
        if (state == 1) {
            if (ch == '\n') state = 0;
            continue;
        }
        if (ch == '#') {
            state = 1;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!tok.empty()) return std::stoi(tok);
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            throw std::invalid_argument(name + ": malformed PNM header");
        }
        tok.push_back(ch);
    }
    throw std::invalid_argument(name + ": unexpected end of PNM header");
}

PnmImage read_pnm(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    const std::string name = path.filename().string();
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw std::invalid_argument(name + ": unsupported format (want binary P5/P6)");
    }
    PnmImage img;
    img.color = bytes[1] == '6';
    ByteReader r(bytes, name);
    r.u8();
    r.u8();
    img.width = static_cast<std::size_t>(pnm_token(r, name));
    img.height = static_cast<std::size_t>(pnm_token(r, name));
    const int maxval = pnm_token(r, name);
    if (maxval != 255) {
        throw std::invalid_argument(name + ": only maxval 255 is supported");
    }
    const std::size_t n = img.width * img.height * (img.color ? 3 : 1);
    if (bytes.size() - r.position() < n) {
        throw std::invalid_argument(name + ": truncated pixel data");
    }
    img.bytes.resize(n);
    std::memcpy(img.bytes.data(), bytes.data() + r.position(), n);
    return img;
}

std::uint8_t clamp_byte(double v) {
    const double rounded = std::floor(v + 0.5);  // half-up
    if (rounded <= 0.0) return 0;
    if (rounded >= 255.0) return 255;
    return static_cast<std::uint8_t>(rounded);
}

}  // namespace

DenseTensor import_slices(const std::filesystem::path& directory) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm") files.push_back(entry.path());
    }
    if (files.empty()) {
        throw std::invalid_argument("no PGM/PPM files in " + directory.string());
    }
    std::sort(files.begin(), files.end());

    std::vector<PnmImage> images;
    images.reserve(files.size());
    for (const auto& f : files) images.push_back(read_pnm(f));
    for (const auto& img : images) {
        if (img.width != images[0].width || img.height != images[0].height ||
            img.color != images[0].color) {
            throw std::invalid_argument("mixed slice dimensions or formats in " +
                                        directory.string());
        }
    }

    const std::size_t h = images[0].height;
    const std::size_t w = images[0].width;
    const std::size_t k = images.size();

    if (!images[0].color) {
        DenseTensor out({h, w, k});
        for (std::size_t s = 0; s < k; ++s) {
            for (std::size_t row = 0; row < h; ++row) {
                for (std::size_t col = 0; col < w; ++col) {
                    out[row + col * h + s * h * w] =
                        static_cast<double>(images[s].bytes[row * w + col]);
                }
            }
        }
        return out;
    }
    DenseTensor out({h, w, 3, k});
    for (std::size_t f = 0; f < k; ++f) {
        for (std::size_t row = 0; row < h; ++row) {
            for (std::size_t col = 0; col < w; ++col) {
                for (std::size_t ch = 0; ch < 3; ++ch) {
                    out[row + col * h + ch * h * w + f * h * w * 3] =
                        static_cast<double>(images[f].bytes[(row * w + col) * 3 + ch]);
                }
            }
        }
    }
    return out;
}

void export_slices(const DenseTensor& x, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    char name[32];

    if (x.order() == 3) {
        const std::size_t h = x.dim(0), w = x.dim(1), k = x.dim(2);
        for (std::size_t s = 0; s < k; ++s) {
            std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) +
                              "\n255\n";
            for (std::size_t row = 0; row < h; ++row) {
                for (std::size_t col = 0; col < w; ++col) {
                    out.push_back(static_cast<char>(
                        clamp_byte(x[row + col * h + s * h * w])));
                }
            }
            std::snprintf(name, sizeof(name), "slice_%03zu.pgm", s);
            write_file(directory / name, out);
        }
        return;
    }
    if (x.order() == 4 && x.dim(2) == 3) {
        const std::size_t h = x.dim(0), w = x.dim(1), k = x.dim(3);
        for (std::size_t f = 0; f < k; ++f) {
            std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) +
                              "\n255\n";
            for (std::size_t row = 0; row < h; ++row) {
                for (std::size_t col = 0; col < w; ++col) {
                    for (std::size_t ch = 0; ch < 3; ++ch) {
                        out.push_back(static_cast<char>(clamp_byte(
                            x[row + col * h + ch * h * w + f * h * w * 3])));
                    }
                }
            }
            std::snprintf(name, sizeof(name), "frame_%03zu.ppm", f);
            write_file(directory / name, out);
        }
        return;
    }
    throw std::invalid_argument(
        "export_slices expects order-3 (grayscale) or order-4 with 3 channels");
}

}  // namespace tjlc
