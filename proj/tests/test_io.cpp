#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "relunet/io.hpp"

using namespace relunet;
namespace fs = std::filesystem;

TEST(Checkpoint, RoundTripIsBitExact) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> E(-300, 300);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 1 + trial % 2;
        auto net = oracle::random_network(gen, m, 1 + trial, 3.0);
        // Exercise awkward magnitudes too.
        net.mutable_units()[0].weight_out = std::pow(10.0, E(gen) / 10) / 3.0;
        const auto back = io::checkpoint_from_string(io::checkpoint_to_string(net));
        EXPECT_EQ(back, net);
    }
}

TEST(Checkpoint, Schema) {
    Network net(1, 0.5);
    net.add_unit(2.0, 1.0, -3.0);
    const auto text = io::checkpoint_to_string(net);
    EXPECT_NE(text.find("\"input_dim\""), std::string::npos);
    EXPECT_NE(text.find("\"output_bias\""), std::string::npos);
    EXPECT_NE(text.find("\"a\""), std::string::npos);
    EXPECT_NE(text.find("\"xi\""), std::string::npos);
    EXPECT_NE(text.find("\"b\""), std::string::npos);
    const auto parsed = io::checkpoint_from_string(
        R"({"input_dim": 2, "output_bias": -1, "units": [{"a": [1, 2], "xi": 0.5, "b": 3}]})");
    EXPECT_EQ(parsed.input_dim(), 2u);
    EXPECT_EQ(parsed.units()[0], (Unit{{1, 2}, 0.5, 3}));
}

TEST(Checkpoint, Malformed) {
    EXPECT_THROW(io::checkpoint_from_string("{"), std::invalid_argument);
    EXPECT_THROW(io::checkpoint_from_string(R"({"input_dim": 1})"), std::invalid_argument);
    EXPECT_THROW(io::checkpoint_from_string(R"({"input_dim": 1, "output_bias": 0, "units": [{"a": [1, 2], "xi": 0, "b": 1}]})"),
                 DimensionError);
}

TEST(Checkpoint, FileRoundTrip) {
    const fs::path p = fs::temp_directory_path() / "relunet_io_test.json";
    Network net(1, 0.1);
    net.add_unit(1.0, 0.2, 0.3);
    io::save_checkpoint(net, p);
    EXPECT_EQ(io::load_checkpoint(p), net);
    fs::remove(p);
    EXPECT_THROW(io::load_checkpoint(p), std::runtime_error);
}

TEST(Csv, FormatsSeventeenDigits) {
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_double(2.0), "2");
    EXPECT_EQ(io::format_double(NAN), "nan");
    EXPECT_EQ(io::format_double(-INFINITY), "-inf");
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> U(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = U(gen);
        EXPECT_EQ(std::stod(io::format_double(v)), v);
    }
}

TEST(Csv, WriterHeaderAndRows) {
    const fs::path p = fs::temp_directory_path() / "relunet_io_test.csv";
    {
        io::CsvWriter w(p, {"a", "b"});
        w.row({1.0, 0.5});
        EXPECT_THROW(w.row({1.0}), std::invalid_argument);
    }
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "a,b\n1,0.5\n");
    fs::remove(p);
}

TEST(Digest, Sha256KnownValue) {
    const fs::path p = fs::temp_directory_path() / "relunet_digest.txt";
    std::ofstream(p, std::ios::binary) << "abc";
    EXPECT_EQ(io::sha256_file(p), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    fs::remove(p);
}
