#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "polingforge/jsa.hpp"
#include "polingforge/phasematch.hpp"

namespace polingforge {

/// Contents of a poling file: `# key = value` header lines followed by one
/// `+1` or `-1` per domain, n = 1..N.
struct PolingFile {
  DomainConfig config;
  std::optional<double> cost;
  std::string mode;
  std::map<std::string, std::string> header;
};

/// Writes the N, l_c_um, Lambda_um, cost and mode header followed by the
/// orientations. `extra` lines are appended to the header in key order.
void write_poling_file(const std::filesystem::path& path, const DomainConfig& config, double cost, CostMode mode,
                       const std::map<std::string, std::string>& extra = {});

/// Throws std::runtime_error with the file name and line on malformed input.
PolingFile read_poling_file(const std::filesystem::path& path);

/// dk_rad_per_m,phi_abs_m,phi_re_m,phi_im_m,target_m at each target sample.
void write_curve_csv(const std::filesystem::path& path, const DomainConfig& config, const TargetFunction& target);

/// omega_a_rad_s,omega_b_rad_s,re,im, row-major over the grid.
void write_jsa_csv(const std::filesystem::path& path, const JsaGrid& grid);

/// k,b_k with k starting at 1.
void write_schmidt_csv(const std::filesystem::path& path, std::span<const double> coefficients);

/// Shortest round-trippable text form of a double.
std::string format_double(double value);

}  // namespace polingforge
