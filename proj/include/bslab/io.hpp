#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "bslab/spectral_data.hpp"

namespace bslab::io {

using json = nlohmann::ordered_json;

/// Spectrum CSV: two comment lines (format tag, key=value metadata), then
/// "index,eigenvalue,mode,kernel_flag" rows sorted by |eigenvalue|. Doubles
/// are printed with %.17g so a read-back is bit-exact.
void write_spectrum_csv(const std::string& path, const spectral::SpectralData& sd,
                        const std::map<std::string, std::string>& metadata);

struct SpectrumFile {
    spectral::SpectralData sd;
    std::map<std::string, std::string> metadata;
};
SpectrumFile read_spectrum_csv(const std::string& path);

/// Eigenvector archive, binary little-endian:
///   magic "BSLVEC01" (8 bytes)
///   u64 m (vector length), u64 count, u8 complex flag, 7 pad bytes
///   count * u64 spectrum indices (rows of the CSV the vectors belong to)
///   count rows of m float64 (2m when complex), row-major.
void write_vector_archive(const std::string& path, const spectral::SpectralData& sd);

/// Attach archived vectors to a spectrum read from CSV.
void read_vector_archive(const std::string& path, spectral::SpectralData& sd);

/// Resolved run configuration; serialized alongside every result artifact.
struct RunConfig {
    std::string model = "example1d";
    int grid = 0;  // 0: model default (512 interval, 256 torus)
    int modes = 64;
    std::string backend = "fd";
    double length = kPi;
    double tol = 1e-10;
    double window_lo = 0.0;  // 0 -> default [trusted/8, trusted/2]
    double window_hi = 0.0;
    int windows = 3;
    std::string out;
    std::string vectors_out;
    std::uint64_t seed = 12345;
    bool strict = false;
    int threads = 0;  // 0 -> BSLAB_THREADS env or hardware

    json to_json() const;
    static RunConfig from_json(const json& j);
};

/// Result document: config + results + meta (timestamps live only in meta).
json result_document(const std::string& command, const RunConfig& cfg, json results);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

std::string format_double(double v);  // %.17g

}  // namespace bslab::io
