#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include <tempo_bases/basis.hpp>
#include <tempo_bases/io.hpp>

using namespace tempo_bases;

TEST(Csv, RoundTripIsBitExact) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    Matrix m(5, 7);
    for (auto& v : m.reshaped()) v = d(rng);
    m(0, 0) = 1e-310;  // subnormal
    m(0, 1) = -0.0;
    m(0, 2) = std::numeric_limits<double>::max();
    std::stringstream ss;
    write_csv(ss, m);
    EXPECT_EQ(read_csv(ss), m);
}

TEST(Csv, SkipsCommentsAndBlankLines) {
    std::stringstream ss("# header\n1,2\n\n3, 4\r\n");
    const Matrix m = read_csv(ss);
    ASSERT_EQ(m.rows(), 2);
    EXPECT_EQ(m(1, 1), 4.0);
}

TEST(Csv, RaggedRowsRejected) {
    std::stringstream ss("1,2\n3\n");
    EXPECT_THROW(read_csv(ss), ArgumentError);
    std::stringstream bad("1,x\n");
    EXPECT_THROW(read_csv(bad), ArgumentError);
}

TEST(Binary, RoundTripKeepsKindAndValues) {
    const auto E = mk_haar_basis(4, 8);
    std::stringstream ss;
    write_binary(ss, E);
    EXPECT_EQ(ss.str().size(), 16u + 4u * 8u * 8u);
    EXPECT_EQ(ss.str().substr(0, 4), "TBAS");
    const auto back = read_binary(ss);
    EXPECT_EQ(back.kind, BasisKind::Haar);
    EXPECT_EQ(back.data, E.data);
}

TEST(Binary, TruncatedOrForeignDataRejected) {
    std::stringstream foreign("ABCD");
    EXPECT_THROW(read_binary(foreign), ArgumentError);
    const auto E = mk_haar_basis(2, 2);
    std::stringstream ss;
    write_binary(ss, E);
    std::stringstream cut(ss.str().substr(0, 30));
    EXPECT_THROW(read_binary(cut), ArgumentError);
}

TEST(Config, ParsesScalarsArraysAndStrings) {
    std::stringstream ss(
        "# bench\n"
        "N = 64\n"
        "rcond = 1e-4   # comment\n"
        "filtered = true\n"
        "bases = \"ldn,dlop # not a comment\"\n"
        "q_grid = [1, 2.5, 1_000]\n");
    const auto kv = parse_flat_config(ss);
    EXPECT_EQ(std::get<std::int64_t>(kv.at("N")), 64);
    EXPECT_EQ(std::get<double>(kv.at("rcond")), 1e-4);
    EXPECT_TRUE(std::get<bool>(kv.at("filtered")));
    EXPECT_EQ(std::get<std::string>(kv.at("bases")), "ldn,dlop # not a comment");
    EXPECT_EQ(std::get<std::vector<double>>(kv.at("q_grid")), (std::vector<double>{1, 2.5, 1000}));
}

TEST(Config, RejectsTablesDuplicatesAndJunk) {
    for (const char* text : {"[bench]\n", "a = 1\na = 2\n", "a\n", "a = [1, \"x\"]\n", "a = \"open\n", "a = 1x\n"}) {
        std::stringstream ss(text);
        EXPECT_THROW(parse_flat_config(ss), ArgumentError) << text;
    }
}
