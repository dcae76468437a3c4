#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "relunet/core.hpp"

namespace relunet::io {

/// Checkpoint document {input_dim, output_bias, units: [{a: [...], xi, b}]}.
std::string checkpoint_to_string(const Network& net);
Network checkpoint_from_string(std::string_view text);

void save_checkpoint(const Network& net, const std::filesystem::path& path);
Network load_checkpoint(const std::filesystem::path& path);

/// 17 significant digits, '.' decimal, "nan"/"inf"/"-inf" for non-finite.
std::string format_double(double v);

/// Header-first CSV writer. Rows must match the header width.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    void row(std::initializer_list<double> values);
    void row(const std::vector<double>& values);

private:
    std::ofstream out_;
    std::size_t width_;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace relunet::io
