#include "ssblow/io.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>

#include "ssblow/errors.hpp"

namespace ssblow {

namespace {

constexpr std::array<char, 4> kMagic = {'S', 'S', 'B', 'F'};

template <class T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw ConfigError("truncated field file " + path);
    return v;
}

}  // namespace

void write_field_csv(const Field& f, const std::string& path) {
    auto out = fmt::output_file(path);
    out.print("z,theta,value\n");
    const auto& r = f.grids->radial;
    const auto& a = f.grids->angular;
    for (int i = 0; i < f.nz(); ++i)
        for (int j = 0; j < f.nt(); ++j) out.print("{:.17g},{:.17g},{:.17g}\n", r.z[i], a.theta[j], f(i, j));
}

void write_radial_csv(const RadialFn& f, const std::string& path) {
    auto out = fmt::output_file(path);
    out.print("z,value\n");
    for (int i = 0; i < f.nz(); ++i) out.print("{:.17g},{:.17g}\n", f.grids->radial.z[i], f(i));
}

void write_field_binary(const Field& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    const GridConfig& c = f.grids->config;
    out.write(kMagic.data(), kMagic.size());
    put(out, kFieldFormatVersion);
    put(out, static_cast<std::int32_t>(f.nz()));
    put(out, static_cast<std::int32_t>(f.nt()));
    put(out, static_cast<std::int32_t>(c.endpoint_refinement));
    put(out, c.z_min);
    put(out, c.z_max);
    for (int i = 0; i < f.nz(); ++i)
        for (int j = 0; j < f.nt(); ++j) put(out, f(i, j));
    if (!out) throw ConfigError("write failed for " + path);
}

Field read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ConfigError(path + " is not a field file");
    const auto version = get<std::uint32_t>(in, path);
    if (version != kFieldFormatVersion)
        throw ConfigError(fmt::format("{}: unsupported field format version {}", path, version));
    GridConfig c;
    c.n_z = get<std::int32_t>(in, path);
    c.n_theta = get<std::int32_t>(in, path);
    c.endpoint_refinement = get<std::int32_t>(in, path);
    c.z_min = get<double>(in, path);
    c.z_max = get<double>(in, path);
    if (c.n_z <= 0 || c.n_theta <= 0) throw ConfigError(path + ": invalid grid size");
    Field f = Field::zeros(make_grids(c));
    for (int i = 0; i < c.n_z; ++i)
        for (int j = 0; j < c.n_theta; ++j) f(i, j) = get<double>(in, path);
    return f;
}

void write_potential_solution(const PotentialSolution& s, const std::string& prefix) {
    write_field_binary(s.phi, prefix + "phi.bin");
    write_field_binary(s.phi_tilde, prefix + "phi_tilde.bin");
    write_radial_csv(s.g_star, prefix + "g_star.csv");
    write_radial_csv(s.g_tilde, prefix + "g_tilde.csv");
}

}  // namespace ssblow
