#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_support.hpp"
#include "tjlc/io.hpp"
#include "tjlc/t_algebra.hpp"
#include "tjlc/tensor_ops.hpp"

using namespace tjlc;
using namespace tjlc::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = TJLC_TEST_DATA_DIR;

fs::path temp_dir() {
    const fs::path dir =
        fs::temp_directory_path() / ("tjlc_io_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("tns round trip") {
    const fs::path dir = temp_dir();
    const DenseTensor x = random_tensor({3, 4, 5}, 90);
    write_tns(x, dir / "x.tns");
    const TnsValue v = read_tns(dir / "x.tns");
    REQUIRE(std::holds_alternative<DenseTensor>(v));
    CHECK(bit_equal(std::get<DenseTensor>(v), x));

    // canonical bytes: write-read-write reproduces the file
    const std::string first = slurp(dir / "x.tns");
    write_tns(std::get<DenseTensor>(v), dir / "x2.tns");
    CHECK(slurp(dir / "x2.tns") == first);

    const IndexSet omega = random_mask({4, 4}, 91, 0.5);
    write_tns(omega, dir / "m.tns");
    const TnsValue mv = read_tns(dir / "m.tns");
    REQUIRE(std::holds_alternative<IndexSet>(mv));
    CHECK(std::get<IndexSet>(mv).mask() == omega.mask());
}

TEST_CASE("tns header errors are distinct") {
    const fs::path dir = temp_dir();
    const DenseTensor x = random_tensor({2, 2}, 92);
    write_tns(x, dir / "good.tns");
    const std::string good = slurp(dir / "good.tns");

    auto kind_of = [&](const std::string& bytes) {
        spit(dir / "bad.tns", bytes);
        try {
            read_tns(dir / "bad.tns");
        } catch (const TnsError& e) {
            return e.kind();
        }
        return TnsError::Kind::Io;
    };

    std::string bad_magic = good;
    bad_magic[0] = 'X';
    CHECK(kind_of(bad_magic) == TnsError::Kind::BadMagic);

    std::string bad_version = good;
    bad_version[4] = 9;
    CHECK(kind_of(bad_version) == TnsError::Kind::BadVersion);

    std::string bad_dtype = good;
    bad_dtype[8] = 7;
    CHECK(kind_of(bad_dtype) == TnsError::Kind::BadDtype);

    CHECK(kind_of(good.substr(0, good.size() - 3)) == TnsError::Kind::Truncated);
    CHECK(kind_of(good + "zz") == TnsError::Kind::TrailingBytes);

    CHECK_THROWS_AS(read_tns(dir / "missing.tns"), TnsError);

    const TnsHeader h = read_tns_header(dir / "good.tns");
    CHECK(h.version == 1);
    CHECK(h.dims == std::vector<std::uint64_t>({2, 2}));
    CHECK(h.element_count() == 4);
}

TEST_CASE("golden fixtures parse and reproduce byte-exactly") {
    // 2x2x2 real64 with values 1..8 in flat order
    const TnsValue v = read_tns(kDataDir / "golden_2x2x2.tns");
    REQUIRE(std::holds_alternative<DenseTensor>(v));
    const DenseTensor& x = std::get<DenseTensor>(v);
    REQUIRE(x.dims() == std::vector<std::size_t>({2, 2, 2}));
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(x[i] == static_cast<double>(i + 1));
    }
    const fs::path dir = temp_dir();
    write_tns(x, dir / "golden_rewrite.tns");
    CHECK(slurp(dir / "golden_rewrite.tns") == slurp(kDataDir / "golden_2x2x2.tns"));

    // mask fixture: seed 3, MR 50 over (2,2,2) observes flat {0,2,4,5}
    const TnsValue mv = read_tns(kDataDir / "golden_mask_2x2x2.tns");
    REQUIRE(std::holds_alternative<IndexSet>(mv));
    const IndexSet& m = std::get<IndexSet>(mv);
    CHECK(m.mask() == std::vector<std::uint8_t>({1, 0, 1, 0, 1, 1, 0, 0}));

    const IndexSet gen = generate_mask({3, 50.0, {2, 2, 2}});
    CHECK(gen.mask() == m.mask());
    write_tns(gen, dir / "mask_rewrite.tns");
    CHECK(slurp(dir / "mask_rewrite.tns") == slurp(kDataDir / "golden_mask_2x2x2.tns"));
}

TEST_CASE("mask generation") {
    // MR = 0 observes everything
    const IndexSet full = generate_mask({1, 0.0, {3, 4}});
    CHECK(full.observed_count() == 12);
    CHECK(missing_rate(full) == 0.0);

    // highest representable rate keeps exactly one element
    const std::size_t total = 40;
    const double mr = 100.0 * (1.0 - 1.0 / static_cast<double>(total));
    const IndexSet one = generate_mask({2, mr, {5, 8}});
    CHECK(one.observed_count() == 1);

    // deterministic per spec; different seeds decorrelate
    const MaskSpec spec{7, 90.0, {10, 10, 10}};
    const IndexSet a = generate_mask(spec);
    const IndexSet b = generate_mask(spec);
    CHECK(a.mask() == b.mask());
    CHECK(a.observed_count() == 100);

    const IndexSet c = generate_mask({8, 90.0, {10, 10, 10}});
    std::size_t hamming = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
        hamming += a.mask()[i] != c.mask()[i];
    }
    CHECK(hamming > 50);

    CHECK_THROWS_AS(generate_mask({1, 100.0, {2, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(generate_mask({1, -1.0, {2, 2}}), std::invalid_argument);
}

TEST_CASE("synthetic low-tubal-rank generator") {
    CHECK(frobenius_norm(synth_low_tubal({4, 5, 3}, 0, 1)) == 0.0);

    const DenseTensor full = synth_low_tubal({4, 5, 3}, 4, 2);
    CHECK(tubal_rank(full) == 4);

    const DenseTensor x = synth_low_tubal({30, 30, 20}, 3, 42);
    CHECK(tubal_rank(x) == 3);

    CHECK_THROWS_AS(synth_low_tubal({4, 5, 3}, 5, 1), std::invalid_argument);
}

TEST_CASE("pgm import and export") {
    // golden single slice: bytes (0, 128, 255, 64) in raster order
    const fs::path dir = temp_dir() / "golden_import";
    fs::create_directories(dir);
    fs::copy_file(kDataDir / "golden_2x2.pgm", dir / "golden_2x2.pgm",
                  fs::copy_options::overwrite_existing);
    const DenseTensor x = import_slices(dir);
    REQUIRE(x.dims() == std::vector<std::size_t>({2, 2, 1}));
    CHECK(x.at({0, 0, 0}) == 0.0);
    CHECK(x.at({0, 1, 0}) == 128.0);
    CHECK(x.at({1, 0, 0}) == 255.0);
    CHECK(x.at({1, 1, 0}) == 64.0);

    // integer-valued tensors survive the round trip losslessly
    DenseTensor img({5, 7, 3});
    SplitMix64 rng(93);
    for (std::size_t i = 0; i < img.size(); ++i) {
        img[i] = static_cast<double>(rng.next_below(256));
    }
    const fs::path out = temp_dir() / "roundtrip";
    export_slices(img, out);
    CHECK(bit_equal(import_slices(out), img));

    // clamp and round rules
    DenseTensor edge({1, 4, 1}, {255.7, -3.0, 13.5, 13.49});
    const fs::path edge_dir = temp_dir() / "edge";
    export_slices(edge, edge_dir);
    const DenseTensor back = import_slices(edge_dir);
    CHECK(back.at({0, 0, 0}) == 255.0);
    CHECK(back.at({0, 1, 0}) == 0.0);
    CHECK(back.at({0, 2, 0}) == 14.0);  // half rounds up
    CHECK(back.at({0, 3, 0}) == 13.0);

    // color frames stack to order 4
    DenseTensor color({4, 6, 3, 2});
    for (std::size_t i = 0; i < color.size(); ++i) {
        color[i] = static_cast<double>(rng.next_below(256));
    }
    const fs::path color_dir = temp_dir() / "color";
    export_slices(color, color_dir);
    const DenseTensor color_back = import_slices(color_dir);
    REQUIRE(color_back.dims() == color.dims());
    CHECK(bit_equal(color_back, color));
}
