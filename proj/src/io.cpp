#include "bslab/io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bslab::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_spectrum_csv(const std::string& path, const spectral::SpectralData& sd,
                        const std::map<std::string, std::string>& metadata) {
    std::ostringstream out;
    out << "# bslab spectrum v1\n# ";
    std::map<std::string, std::string> meta = metadata;
    meta["trusted"] = format_double(sd.trusted);
    meta["dim"] = std::to_string(sd.dim);
    meta["kernel_tol"] = format_double(sd.kernel_tol);
    meta["block_rows"] = std::to_string(sd.block_rows);
    bool first = true;
    for (const auto& [k, v] : meta) {
        if (!first) out << ' ';
        out << k << '=' << v;
        first = false;
    }
    out << "\nindex,eigenvalue,mode,kernel_flag\n";
    for (size_t i = 0; i < sd.order.size(); ++i) {
        const auto& e = sd.order[i];
        out << i << ',' << format_double(e.value) << ',' << sd.blocks[e.block].mode << ','
            << (sd.is_kernel(e) ? 1 : 0) << '\n';
    }
    write_text(path, out.str());
}

SpectrumFile read_spectrum_csv(const std::string& path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line.rfind("# bslab spectrum", 0) != 0)
        throw std::runtime_error("not a bslab spectrum CSV: " + path);
    SpectrumFile out;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw std::runtime_error("missing metadata line in " + path);
    {
        std::istringstream meta(line.substr(2));
        std::string tok;
        while (meta >> tok) {
            const auto eq = tok.find('=');
            if (eq != std::string::npos) out.metadata[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
    }
    std::getline(in, line);  // header row

    std::map<int, std::vector<double>> per_mode;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        std::getline(row, tok, ',');  // index (positional)
        std::getline(row, tok, ',');
        const double value = std::strtod(tok.c_str(), nullptr);
        std::getline(row, tok, ',');
        const int mode = std::atoi(tok.c_str());
        per_mode[mode].push_back(value);
    }
    for (auto& [mode, values] : per_mode) {
        spectral::ModeSpectrum b;
        b.mode = mode;
        std::sort(values.begin(), values.end());
        b.values = Eigen::Map<RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
        out.sd.blocks.push_back(std::move(b));
    }
    if (auto it = out.metadata.find("dim"); it != out.metadata.end())
        out.sd.dim = std::atoi(it->second.c_str());
    if (auto it = out.metadata.find("block_rows"); it != out.metadata.end())
        out.sd.block_rows = std::atoi(it->second.c_str());
    out.sd.finalize();
    if (auto it = out.metadata.find("trusted"); it != out.metadata.end())
        out.sd.trusted = std::strtod(it->second.c_str(), nullptr);
    return out;
}

namespace {

template <typename T>
void put(std::ostream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void write_vector_archive(const std::string& path, const spectral::SpectralData& sd) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write("BSLVEC01", 8);
    put<std::uint64_t>(f, static_cast<std::uint64_t>(sd.block_rows));
    std::uint64_t count = 0;
    for (const auto& e : sd.order) count += sd.has_vector(e) ? 1 : 0;
    put<std::uint64_t>(f, count);
    put<std::uint8_t>(f, 0);  // real vectors
    const char pad[7] = {};
    f.write(pad, 7);
    for (std::uint64_t i = 0; i < sd.order.size(); ++i)
        if (sd.has_vector(sd.order[i])) put<std::uint64_t>(f, i);
    for (const auto& e : sd.order) {
        if (!sd.has_vector(e)) continue;
        const auto v = sd.vector(e);
        f.write(reinterpret_cast<const char*>(v.data()),
                static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(v.size())));
    }
}

void read_vector_archive(const std::string& path, spectral::SpectralData& sd) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    char magic[8];
    f.read(magic, 8);
    if (std::memcmp(magic, "BSLVEC01", 8) != 0)
        throw std::runtime_error("not a bslab vector archive: " + path);
    const auto m = get<std::uint64_t>(f);
    const auto count = get<std::uint64_t>(f);
    const auto is_complex = get<std::uint8_t>(f);
    char pad[7];
    f.read(pad, 7);
    if (is_complex != 0) throw std::runtime_error("complex archives not supported");
    if (static_cast<int>(m) != sd.block_rows)
        throw std::runtime_error("vector archive row length does not match the spectrum");
    std::vector<std::uint64_t> indices(count);
    for (auto& ix : indices) ix = get<std::uint64_t>(f);
    for (auto& b : sd.blocks) {
        b.vectors = RealMatrix(static_cast<Eigen::Index>(m), 0);
        b.vec_cols.clear();
    }
    std::map<int, std::vector<std::pair<int, RealVector>>> staged;  // block -> (col, vec)
    for (std::uint64_t i = 0; i < count; ++i) {
        RealVector v(static_cast<Eigen::Index>(m));
        f.read(reinterpret_cast<char*>(v.data()),
               static_cast<std::streamsize>(sizeof(double) * m));
        if (!f) throw std::runtime_error("truncated vector archive: " + path);
        if (indices[i] >= sd.order.size()) throw std::runtime_error("archive index out of range");
        const auto& e = sd.order[indices[i]];
        staged[e.block].emplace_back(e.col, std::move(v));
    }
    for (auto& [bi, items] : staged) {
        auto& b = sd.blocks[static_cast<size_t>(bi)];
        std::sort(items.begin(), items.end(),
                  [](const auto& a, const auto& c) { return a.first < c.first; });
        b.vectors = RealMatrix(static_cast<Eigen::Index>(m),
                               static_cast<Eigen::Index>(items.size()));
        b.vec_cols.clear();
        for (size_t i = 0; i < items.size(); ++i) {
            b.vec_cols.push_back(items[i].first);
            b.vectors.col(static_cast<Eigen::Index>(i)) = items[i].second;
        }
    }
}

json RunConfig::to_json() const {
    json j;
    j["model"] = model;
    j["grid"] = grid;
    j["modes"] = modes;
    j["backend"] = backend;
    j["length"] = length;
    j["tol"] = tol;
    j["window_lo"] = window_lo;
    j["window_hi"] = window_hi;
    j["windows"] = windows;
    j["out"] = out;
    j["vectors_out"] = vectors_out;
    j["seed"] = seed;
    j["strict"] = strict;
    j["threads"] = threads;
    return j;
}

RunConfig RunConfig::from_json(const json& jin) {
    const json& j = jin.contains("config") ? jin.at("config") : jin;
    RunConfig c;
    c.model = j.value("model", c.model);
    c.grid = j.value("grid", c.grid);
    c.modes = j.value("modes", c.modes);
    c.backend = j.value("backend", c.backend);
    c.length = j.value("length", c.length);
    c.tol = j.value("tol", c.tol);
    c.window_lo = j.value("window_lo", c.window_lo);
    c.window_hi = j.value("window_hi", c.window_hi);
    c.windows = j.value("windows", c.windows);
    c.out = j.value("out", c.out);
    c.vectors_out = j.value("vectors_out", c.vectors_out);
    c.seed = j.value("seed", c.seed);
    c.strict = j.value("strict", c.strict);
    c.threads = j.value("threads", c.threads);
    return c;
}

json result_document(const std::string& command, const RunConfig& cfg, json results) {
    json doc;
    doc["command"] = command;
    doc["config"] = cfg.to_json();
    doc["results"] = std::move(results);
    const auto now = std::chrono::system_clock::now();
    doc["meta"] = {{"timestamp", std::chrono::duration_cast<std::chrono::milliseconds>(
                                     now.time_since_epoch())
                                     .count()},
                   {"format", "bslab-result-v1"}};
    return doc;
}

}  // namespace bslab::io
