#include <gtest/gtest.h>

#include <random>
#include <string>

#include "binbench/pnm.hpp"
#include "test_support.hpp"

using namespace binbench;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(Pnm, PgmRoundTrip) {
    std::mt19937_64 rng(1);
    const auto img = testsupport::random_gray(13, 7, rng);
    const auto enc = pnm::encode_pgm(img);
    const std::string head(enc.begin(), enc.begin() + 11);
    EXPECT_EQ(head, "P5\n13 7\n255");
    EXPECT_EQ(enc.size(), 12u + 13 * 7);
    EXPECT_EQ(pnm::decode_gray(enc), img);
}

TEST(Pnm, PbmRoundTripAndBitLayout) {
    BinaryImage m(10, 2);
    m.set(0, 0, true);
    m.set(9, 0, true);
    m.set(8, 1, true);
    const auto enc = pnm::encode_pbm(m);
    const std::string head = "P4\n10 2\n";
    ASSERT_EQ(enc.size(), head.size() + 4);
    EXPECT_EQ(std::string(enc.begin(), enc.begin() + head.size()), head);
    EXPECT_EQ(enc[head.size() + 0], 0x80);
    EXPECT_EQ(enc[head.size() + 1], 0x40);
    EXPECT_EQ(enc[head.size() + 2], 0x00);
    EXPECT_EQ(enc[head.size() + 3], 0x80);
    EXPECT_EQ(pnm::decode_binary(enc), m);
}

TEST(Pnm, RandomMaskRoundTrips) {
    std::mt19937_64 rng(2);
    for (int w = 1; w <= 17; ++w) {
        const auto m = testsupport::random_mask(w, 5, 0.4, rng);
        EXPECT_EQ(pnm::decode_binary(pnm::encode_pbm(m)), m);
        EXPECT_EQ(pnm::decode_binary(pnm::encode_pgm(m)), m);
    }
}

TEST(Pnm, MaskAsPgmUsesBlackInk) {
    BinaryImage m(2, 1);
    m.set(0, 0, true);
    const auto g = pnm::decode_gray(pnm::encode_pgm(m));
    EXPECT_EQ(g(0, 0), 0);
    EXPECT_EQ(g(1, 0), 255);
}

TEST(Pnm, AsciiFormatsAndComments) {
    const auto p1 = pnm::decode_binary(bytes_of("P1\n# comment\n3 2\n1 0 1\n0 1 0\n"));
    EXPECT_EQ(p1, testsupport::mask_from_rows({"#.#", ".#."}));
    const auto p1_packed = pnm::decode_binary(bytes_of("P1 3 1 101"));
    EXPECT_EQ(p1_packed, testsupport::mask_from_rows({"#.#"}));

    const auto p2 = pnm::decode_gray(bytes_of("P2 2 1 15 0 15"));
    EXPECT_EQ(p2(0, 0), 0);
    EXPECT_EQ(p2(1, 0), 255);

    const auto p3 = pnm::decode_gray(bytes_of("P3 1 1 255 255 0 0"));
    EXPECT_EQ(p3(0, 0), 76);  // round(0.299 * 255)
}

TEST(Pnm, BinaryColorUsesLuma) {
    auto bytes = bytes_of("P6\n2 1\n255\n");
    for (int v : {0, 255, 0, 200, 200, 200}) bytes.push_back(static_cast<std::uint8_t>(v));
    const auto g = pnm::decode_gray(bytes);
    EXPECT_EQ(g(0, 0), 150);  // round(0.587 * 255)
    EXPECT_EQ(g(1, 0), 200);
}

TEST(Pnm, GrayToMaskThreshold) {
    auto bytes = bytes_of("P5 3 1 255\n");
    for (int v : {127, 128, 0}) bytes.push_back(static_cast<std::uint8_t>(v));
    EXPECT_EQ(pnm::decode_binary(bytes), testsupport::mask_from_rows({"#.#"}));
}

TEST(Pnm, RejectsMalformedInput) {
    EXPECT_THROW(pnm::decode_gray(bytes_of("")), DecodeError);
    EXPECT_THROW(pnm::decode_gray(bytes_of("GIF89a")), DecodeError);
    EXPECT_THROW(pnm::decode_gray(bytes_of("P5 4 4 255\n1234")), DecodeError);
    EXPECT_THROW(pnm::decode_gray(bytes_of("P5 4 4 65535\n")), DecodeError);
    EXPECT_THROW(pnm::decode_gray(bytes_of("P5 0 4 255\n")), DecodeError);
    EXPECT_THROW(pnm::decode_gray(bytes_of("P2 1 1 10 11")), DecodeError);
    EXPECT_THROW(pnm::decode_binary(bytes_of("P1 2 1 1 2")), DecodeError);
    EXPECT_THROW(pnm::decode_binary(bytes_of("P4 9 1\n\x01")), DecodeError);
}

TEST(Pnm, FileIo) {
    const auto dir = testsupport::scratch_dir("pnm_io");
    const auto m = testsupport::mask_from_rows({"#..", ".##"});
    pnm::write_mask(dir / "a.pbm", m);
    pnm::write_mask(dir / "a.pgm", m);
    EXPECT_EQ(pnm::read_file(dir / "a.pbm")[1], '4');
    EXPECT_EQ(pnm::read_file(dir / "a.pgm")[1], '5');
    EXPECT_EQ(pnm::read_binary(dir / "a.pbm"), m);
    EXPECT_EQ(pnm::read_binary(dir / "a.pgm"), m);
    EXPECT_THROW(pnm::read_gray(dir / "missing.pgm"), DecodeError);
    EXPECT_THROW(pnm::write_pgm(dir / "no" / "such" / "dir.pgm", GrayImage(1, 1)), IoError);
    std::filesystem::remove_all(dir);
}
