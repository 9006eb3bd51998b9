#pragma once

#include <string>

#include "ssblow/elliptic.hpp"
#include "ssblow/field.hpp"

namespace ssblow {

// CSV with header "z,theta,value", one row per grid node, z-major order.
void write_field_csv(const Field& f, const std::string& path);
// CSV with header "z,value".
void write_radial_csv(const RadialFn& f, const std::string& path);

// Binary layout (little-endian as written by the host):
//   char[4]  magic "SSBF"
//   uint32   version (1)
//   int32    n_z, n_theta, endpoint_refinement
//   float64  z_min, z_max
//   float64  values[n_z * n_theta], row-major (z outer, theta inner)
// The grid is rebuilt from the header on read.
inline constexpr std::uint32_t kFieldFormatVersion = 1;
void write_field_binary(const Field& f, const std::string& path);
Field read_field_binary(const std::string& path);

// Writes <prefix>phi.bin, <prefix>phi_tilde.bin, <prefix>g_star.csv and
// <prefix>g_tilde.csv.
void write_potential_solution(const PotentialSolution& s, const std::string& prefix);

}  // namespace ssblow
