// Embeddings, geometry, hashing, text helpers, and image header sniffing.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>

#include <best/embedding.hpp>
#include <best/geometry.hpp>
#include <best/hash.hpp>
#include <best/image.hpp>
#include <best/text.hpp>

#include "test_support.hpp"

using namespace best;

TEST_CASE("embedding normalization") {
    const auto e = UnitEmbedding::normalized({3.0, 4.0});
    CHECK(e.dim() == 2);
    CHECK(e.values()[0] == Catch::Approx(0.6));
    CHECK(e.values()[1] == Catch::Approx(0.8));
    CHECK(e.norm() == Catch::Approx(1.0));

    CHECK_THROWS_AS(UnitEmbedding::normalized({}), InvalidInput);
    CHECK_THROWS_AS(UnitEmbedding::normalized({0.0, 0.0, 0.0}), InvalidInput);

    testsup::TestRng rng(11);
    for (int i = 0; i < 50; ++i) {
        const auto u = testsup::random_unit(rng, 1 + rng.below(64));
        CHECK(u.norm() == Catch::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("embedding from_unit accepts only unit vectors") {
    CHECK_NOTHROW(UnitEmbedding::from_unit({1.0, 0.0}));
    CHECK_NOTHROW(UnitEmbedding::from_unit({std::sqrt(0.5), std::sqrt(0.5)}));
    CHECK_THROWS_AS(UnitEmbedding::from_unit({0.5, 0.5}), InvalidInput);
    CHECK_THROWS_AS(UnitEmbedding::from_unit({}), InvalidInput);
}

TEST_CASE("similarity is the inner product with dimension checks") {
    const auto a = UnitEmbedding::normalized({1.0, 0.0});
    const auto b = UnitEmbedding::normalized({0.0, 1.0});
    CHECK(similarity(a, b) == Catch::Approx(0.0));
    CHECK(similarity(a, a) == Catch::Approx(1.0));

    const auto c = UnitEmbedding::normalized({1.0, 0.0, 0.0});
    CHECK_THROWS_AS(similarity(a, c), InvalidInput);

    testsup::TestRng rng(12);
    for (int i = 0; i < 50; ++i) {
        const auto u = testsup::random_unit(rng, 8);
        const auto v = testsup::random_unit(rng, 8);
        CHECK(similarity(u, v) == similarity(v, u));
        CHECK(similarity(u, v) <= 1.0 + 1e-9);
        CHECK(similarity(u, v) >= -1.0 - 1e-9);
    }
}

TEST_CASE("bounding box basics") {
    BoundingBox b{10.0, 20.0, 30.0, 60.0, 0.5};
    CHECK(b.width() == 20.0);
    CHECK(b.height() == 40.0);
    CHECK(b.area() == 800.0);
    CHECK(b.valid());
    const auto [cx, cy] = b.center();
    CHECK(cx == 20.0);
    CHECK(cy == 40.0);

    BoundingBox degenerate{5.0, 5.0, 5.0, 9.0, 0.0};
    CHECK(!degenerate.valid());
    CHECK(degenerate.area() == 0.0);
}

TEST_CASE("iou on known configurations") {
    BoundingBox a{0, 0, 10, 10, 0};
    CHECK(iou(a, a) == Catch::Approx(1.0));

    BoundingBox apart{20, 20, 30, 30, 0};
    CHECK(iou(a, apart) == 0.0);

    // Half-width overlap: intersection 50, union 150.
    BoundingBox shifted{5, 0, 15, 10, 0};
    CHECK(iou(a, shifted) == Catch::Approx(50.0 / 150.0));

    testsup::TestRng rng(13);
    for (int i = 0; i < 100; ++i) {
        const auto u = testsup::random_box(rng, 100.0, 80.0);
        const auto v = testsup::random_box(rng, 100.0, 80.0);
        CHECK(iou(u, v) == iou(v, u));
        CHECK(iou(u, v) >= 0.0);
        CHECK(iou(u, v) <= 1.0 + 1e-12);
    }
}

TEST_CASE("clamp_to_frame and covers_frame") {
    const ImageDims dims{100, 50};
    const auto clamped = clamp_to_frame({-10, -5, 60, 70, 0.9}, dims);
    REQUIRE(clamped.has_value());
    CHECK(clamped->x_min == 0.0);
    CHECK(clamped->y_min == 0.0);
    CHECK(clamped->x_max == 60.0);
    CHECK(clamped->y_max == 50.0);
    CHECK(clamped->score == 0.9);

    CHECK(!clamp_to_frame({120, 10, 130, 20, 0.5}, dims).has_value());
    CHECK(!clamp_to_frame({10, 60, 20, 70, 0.5}, dims).has_value());

    CHECK(covers_frame({0, 0, 100, 50, 0}, dims));
    CHECK(covers_frame({-5, -5, 105, 55, 0}, dims));
    CHECK(!covers_frame({1, 0, 100, 50, 0}, dims));

    const auto frame = full_frame(dims);
    CHECK(covers_frame(frame, dims));
    CHECK(frame.area() == dims.area());
}

TEST_CASE("union_box contains both inputs") {
    const BoundingBox a{10, 10, 20, 20, 0.3};
    const BoundingBox b{15, 5, 40, 18, 0.8};
    const auto u = union_box(a, b);
    CHECK(u.x_min == 10.0);
    CHECK(u.y_min == 5.0);
    CHECK(u.x_max == 40.0);
    CHECK(u.y_max == 20.0);
    CHECK(u.score == 0.8);
}

TEST_CASE("fnv1a64 standard vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    const char bytes[] = {'a'};
    CHECK(fnv1a64(bytes, 1) == fnv1a64("a"));
}

TEST_CASE("splitmix64 stream vectors") {
    // Reference sequence for seed 0 from the published algorithm.
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xe220a8397b1dcdafULL);
    CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(rng.next() == 0x06c45d188009454fULL);
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);

    SplitMix64 r2(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = r2.u01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(r2.below(7) < 7);
        const double v = r2.uniform(2.5, 3.5);
        CHECK(v >= 2.5);
        CHECK(v < 3.5);
    }
}

TEST_CASE("hex8 prints the low 32 bits") {
    CHECK(hex8(0) == "00000000");
    CHECK(hex8(0xdeadbeefULL) == "deadbeef");
    CHECK(hex8(0x1122334455667788ULL) == "55667788");
}

TEST_CASE("text helpers") {
    CHECK(ascii_lower("MiXeD 123!") == "mixed 123!");
    CHECK(trim("  hi\t\r\n") == "hi");
    CHECK(trim("\t \n") == "");
    CHECK(trim("x") == "x");

    CHECK(split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split("", ',') == std::vector<std::string>{""});
    CHECK(split("one", ',') == std::vector<std::string>{"one"});

    CHECK(join({"a", "b", "c"}, ", ") == "a, b, c");
    CHECK(join({}, ", ") == "");
    CHECK(join({"solo"}, "-") == "solo");
}

namespace {

std::string write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& b) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    return path.string();
}

}  // namespace

TEST_CASE("image header sniffing") {
    const auto dir = testsup::unique_temp_dir("image_sniff");

    SECTION("ppm from the fixture corpus writer") {
        const auto paths = testsup::write_corpus(dir / "corpus", 2);
        const auto img = load_image(paths[0]);
        CHECK(img.width == 48);
        CHECK(img.height == 32);
        CHECK(img.id == "img_000.ppm");
        CHECK(img.bytes.size() > static_cast<std::size_t>(48 * 32 * 3));

        const auto img1 = load_image(paths[1]);
        CHECK(img1.width == 56);
        CHECK(img1.height == 36);
    }

    SECTION("png ihdr") {
        std::vector<std::uint8_t> b{0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a,
                                    0, 0, 0, 13, 'I', 'H', 'D', 'R',
                                    0, 0, 0x01, 0x00,   // width 256
                                    0, 0, 0x00, 0x80};  // height 128
        const auto img = load_image(write_bytes(dir / "a.png", b));
        CHECK(img.width == 256);
        CHECK(img.height == 128);
    }

    SECTION("jpeg sof") {
        std::vector<std::uint8_t> b{0xff, 0xd8, 0xff, 0xc0, 0x00, 0x11,
                                    0x08, 0x00, 0x20, 0x00, 0x30, 0x00};
        const auto img = load_image(write_bytes(dir / "a.jpg", b));
        CHECK(img.width == 48);
        CHECK(img.height == 32);
    }

    SECTION("bmp header") {
        std::vector<std::uint8_t> b(26, 0);
        b[0] = 'B';
        b[1] = 'M';
        b[18] = 64;  // width 64 little-endian
        b[22] = 40;  // height 40
        const auto img = load_image(write_bytes(dir / "a.bmp", b));
        CHECK(img.width == 64);
        CHECK(img.height == 40);
    }

    SECTION("undecodable bytes") {
        const auto path = write_bytes(dir / "junk.ppm", {1, 2, 3, 4, 5, 6, 7, 8});
        CHECK_THROWS_AS(load_image(path), InvalidInput);
        CHECK_THROWS_AS(load_image((dir / "missing.png").string()), InvalidInput);
    }
}
