#include "mwalk/io.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mwalk::io {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("fnv1a64_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

Csv::Csv(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("Csv: cannot open " + path);
}

void Csv::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out_ << ',';
        out_ << names[i];
    }
    out_ << '\n';
}

void Csv::sep() {
    if (!first_in_row_) out_ << ',';
    first_in_row_ = false;
}

void Csv::field(long long v) {
    sep();
    out_ << v;
}
void Csv::field(std::uint64_t v) {
    sep();
    out_ << v;
}
void Csv::field(int v) {
    sep();
    out_ << v;
}
void Csv::field(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    sep();
    out_ << buf;
}
void Csv::field(const std::string& v) {
    sep();
    out_ << v;
}

void Csv::close() {
    out_.close();
    if (!out_) throw std::runtime_error("Csv: write failed");
}

void write_manifest(const std::string& output_path, const std::string& command,
                    const nlohmann::json& params, const std::vector<std::uint64_t>& seeds,
                    double wall_seconds) {
    nlohmann::json j;
    j["command"] = command;
    j["params"] = params;
    j["seeds"] = seeds;
    j["version"] = kVersion;
    j["prng"] = "splitmix64";
    j["wall_seconds"] = wall_seconds;
    j["output"] = {{"path", output_path}, {"fnv1a64", fnv1a64_file(output_path)}};
    std::ofstream out(output_path + ".manifest.json");
    if (!out) throw std::runtime_error("write_manifest: cannot open manifest for " + output_path);
    out << j.dump(2) << '\n';
}

}  // namespace mwalk::io
