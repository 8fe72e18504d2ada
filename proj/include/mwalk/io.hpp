#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mwalk::io {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64_file(const std::string& path);

// Single-header-row CSV writer; doubles are printed with %.17g so identical
// runs produce byte-identical files.
class Csv {
  public:
    explicit Csv(const std::string& path);

    void header(const std::vector<std::string>& names);

    void field(long long v);
    void field(long v) { field(static_cast<long long>(v)); }
    void field(std::uint64_t v);
    void field(int v);
    void field(double v);
    void field(const std::string& v);

    template <class... Ts>
    void row(const Ts&... vs) {
        first_in_row_ = true;
        (field(vs), ...);
        out_ << '\n';
        ++rows_;
    }

    std::size_t rows() const { return rows_; }
    void close();

  private:
    void sep();
    std::ofstream out_;
    std::size_t rows_ = 0;
    bool first_in_row_ = true;
};

// Sidecar manifest at <output>.manifest.json: command line, parameters,
// seeds, version, wall time and the digest of the paired output file.
void write_manifest(const std::string& output_path, const std::string& command,
                    const nlohmann::json& params, const std::vector<std::uint64_t>& seeds,
                    double wall_seconds);

}  // namespace mwalk::io
