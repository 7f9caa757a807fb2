#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "liouville/grid.hpp"

namespace liouville {
namespace io {

// Radial profile file, text:
//   # liouville-profile v1
//   epsilon=<17 significant digits>
//   r u
//   <r> <u>        (one node per line, 17 significant digits)
void save_profile(const std::filesystem::path& path, const RadialProfile& p);
RadialProfile load_profile(const std::filesystem::path& path);

// Strip field file, text:
//   # liouville-field v1
//   <lambda> <X> <nx> <ny>
//   <ny values per row, nx rows, row-major>
void save_field(const std::filesystem::path& path, const StripField& f);
StripField load_field(const std::filesystem::path& path);

// formats a double with 17 significant digits (round-trip exact)
std::string format_g17(double v);

// CSV writing: header plus rows of preformatted cells
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace io
}  // namespace liouville
