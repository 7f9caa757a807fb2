#include "liouville/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {
namespace io {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw FormatError(std::string(what) + ": trailing junk in '" + s + "'");
    return v;
  } catch (const FormatError&) {
    throw;
  } catch (...) {
    throw FormatError(std::string(what) + ": cannot parse '" + s + "'");
  }
}

}  // namespace

void save_profile(const std::filesystem::path& path, const RadialProfile& p) {
  std::ofstream out(path);
  if (!out) throw IoError("save_profile: cannot open " + path.string());
  out << "# liouville-profile v1\n";
  out << "epsilon=" << format_g17(p.epsilon) << "\n";
  out << "r u\n";
  for (int i = 0; i < p.n(); ++i)
    out << format_g17(p.grid->r[i]) << " " << format_g17(p.values[i]) << "\n";
  if (!out) throw IoError("save_profile: write failed for " + path.string());
}

RadialProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_profile: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "# liouville-profile v1")
    throw FormatError("load_profile: bad header '" + line + "'");
  if (!std::getline(in, line) || line.rfind("epsilon=", 0) != 0)
    throw FormatError("load_profile: missing epsilon line");
  const double eps = parse_double(line.substr(8), "load_profile epsilon");
  if (!std::getline(in, line) || line != "r u")
    throw FormatError("load_profile: missing column header");
  std::vector<double> r, u;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double rv, uv;
    if (!(ss >> rv >> uv))
      throw FormatError("load_profile: bad data line '" + line + "'");
    r.push_back(rv);
    u.push_back(uv);
  }
  auto grid = std::make_shared<RadialGrid>(std::move(r));
  RadialProfile p(grid, eps);
  p.values = std::move(u);
  return p;
}

void save_field(const std::filesystem::path& path, const StripField& f) {
  std::ofstream out(path);
  if (!out) throw IoError("save_field: cannot open " + path.string());
  out << "# liouville-field v1\n";
  out << format_g17(f.grid.lambda) << " " << format_g17(f.grid.X) << " "
      << f.grid.nx << " " << f.grid.ny << "\n";
  for (int i = 0; i < f.grid.nx; ++i) {
    for (int j = 0; j < f.grid.ny; ++j) {
      if (j) out << " ";
      out << format_g17(f.at(i, j));
    }
    out << "\n";
  }
  if (!out) throw IoError("save_field: write failed for " + path.string());
}

StripField load_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_field: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "# liouville-field v1")
    throw FormatError("load_field: bad header '" + line + "'");
  double lambda = 0, X = 0;
  int nx = 0, ny = 0;
  if (!(in >> lambda >> X >> nx >> ny))
    throw FormatError("load_field: bad dimension line");
  StripField f{StripGrid(lambda, X, nx, ny)};
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (!(in >> f.values[k]))
      throw FormatError("load_field: truncated data section");
  return f;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("write_csv: cannot open " + path.string());
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << row[i];
    }
    out << "\n";
  }
  if (!out) throw IoError("write_csv: write failed for " + path.string());
}

}  // namespace io
}  // namespace liouville
