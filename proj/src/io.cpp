#include "relunet/io.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace relunet::io {

using nlohmann::json;

std::string checkpoint_to_string(const Network& net) {
    json units = json::array();
    for (const auto& u : net.units()) {
        units.push_back({{"a", u.weights_in}, {"xi", u.bias}, {"b", u.weight_out}});
    }
    json doc = {{"input_dim", net.input_dim()}, {"output_bias", net.output_bias()}, {"units", units}};
    return doc.dump(1) + "\n";
}

Network checkpoint_from_string(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        const auto m = doc.at("input_dim").get<std::size_t>();
        Network net(m, doc.at("output_bias").get<double>());
        for (const auto& u : doc.at("units")) {
            net.add_unit(Unit{u.at("a").get<std::vector<double>>(), u.at("xi").get<double>(),
                              u.at("b").get<double>()});
        }
        return net;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << checkpoint_to_string(net);
}

Network load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return checkpoint_from_string(ss.str());
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary), width_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) { row(std::vector<double>(values)); }

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != width_) throw std::invalid_argument("CSV row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
    out_ << '\n';
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof buf);
        EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return hex.str();
}

}  // namespace relunet::io
