#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "liouville/config.hpp"
#include "liouville/errors.hpp"
#include "liouville/io.hpp"
#include "liouville/runner.hpp"

using namespace liouville;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("liouville_test_" + tag);
  fs::create_directories(p);
  return p;
}

std::string strip_wallclock(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("wallclock_s:", 0) != 0) out << line << "\n";
  return out.str();
}

}  // namespace

TEST_CASE("sha256 known vectors") {
  CHECK(io::sha256_hex("abc", 3) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("", 0) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("radial profile round trip") {
  auto grid = std::make_shared<RadialGrid>(20.0, 50, 1.5);
  RadialProfile p(grid, 0.03125);
  for (int i = 0; i < p.n(); ++i)
    p.values[i] = -0.1 * grid->r[i] - 1.0 / (1.0 + grid->r[i]);
  const fs::path dir = temp_dir("profile");
  const fs::path f1 = dir / "p1.txt", f2 = dir / "p2.txt";
  io::save_profile(f1, p);
  RadialProfile q = io::load_profile(f1);
  CHECK(q.epsilon == p.epsilon);
  REQUIRE(q.n() == p.n());
  for (int i = 0; i < p.n(); ++i) {
    CHECK(q.values[i] == p.values[i]);
    CHECK(q.grid->r[i] == grid->r[i]);
  }
  io::save_profile(f2, q);
  CHECK(slurp(f1) == slurp(f2));  // bit-exact round trip

  SECTION("wrong version is a format error") {
    const fs::path bad = dir / "bad.txt";
    std::ofstream out(bad);
    out << "# liouville-profile v2\nepsilon=0\nr u\n0 0\n1 1\n2 2\n";
    out.close();
    CHECK_THROWS_AS(io::load_profile(bad), FormatError);
  }
}

TEST_CASE("strip field round trip") {
  StripGrid g(3.25, 7.0, 11, 5);
  StripField f(g);
  for (std::size_t k = 0; k < f.values.size(); ++k)
    f.values[k] = std::sin(0.7 * double(k)) * 1e-3 + double(k);
  const fs::path dir = temp_dir("field");
  const fs::path f1 = dir / "f1.txt", f2 = dir / "f2.txt";
  io::save_field(f1, f);
  StripField h = io::load_field(f1);
  CHECK(h.grid == f.grid);
  for (std::size_t k = 0; k < f.values.size(); ++k)
    CHECK(h.values[k] == f.values[k]);
  io::save_field(f2, h);
  CHECK(slurp(f1) == slurp(f2));
}

TEST_CASE("config parsing") {
  SECTION("minimal spectrum2d config and defaults") {
    RunConfig cfg = parse_config("command = spectrum2d\nlambda = 3.14\n");
    CHECK(cfg.command == "spectrum2d");
    CHECK(cfg.get("lambda", 0.0) == 3.14);
    CHECK(cfg.get("X", 20.0) == 20.0);       // documented default
    CHECK(cfg.get("nx", 2001.0) == 2001.0);  // documented default
  }

  SECTION("negative lambda is rejected naming the key") {
    try {
      parse_config("command = spectrum2d\nlambda = -1\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("lambda") != std::string::npos);
    }
  }

  SECTION("unknown key and unknown command") {
    CHECK_THROWS_AS(parse_config("command = spectrum2d\nbogus = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("command = warpdrive\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(""), ConfigError);
  }

  SECTION("type mismatch") {
    CHECK_THROWS_AS(parse_config("command = spectrum2d\nlambda = three\n"),
                    ConfigError);
  }

  SECTION("emit-then-parse round trip") {
    RunConfig cfg = parse_config(
        "command = radial3d\nR = 42.5\nn = 1000\ntol = 1e-11\n");
    RunConfig cfg2 = parse_config(emit_config(cfg));
    CHECK(cfg2.command == cfg.command);
    CHECK(cfg2.numbers == cfg.numbers);
    CHECK(cfg2.strings == cfg.strings);
  }

  SECTION("CLI/preset command conflicts are caught") {
    CHECK_THROWS_AS(parse_config("command = radial3d\n", "spectrum2d"),
                    ConfigError);
  }
}

TEST_CASE("run determinism and manifest digests") {
  RunConfig cfg = parse_config(
      "command = legendre-scan\nmu_lo = 0.05\nmu_hi = 3.0\nstep = 0.01\n");
  const fs::path d1 = temp_dir("run1"), d2 = temp_dir("run2");
  RunManifest m1 = run(cfg, d1);
  RunManifest m2 = run(cfg, d2);

  SECTION("identical configs give byte-identical data files") {
    CHECK(slurp(d1 / "legendre_scan.csv") == slurp(d2 / "legendre_scan.csv"));
  }

  SECTION("manifests agree up to wall-clock") {
    CHECK(strip_wallclock(m1.to_text()) == strip_wallclock(m2.to_text()));
    CHECK(strip_wallclock(slurp(d1 / "manifest.txt")) ==
          strip_wallclock(slurp(d2 / "manifest.txt")));
  }

  SECTION("every listed digest matches the emitted file") {
    for (const auto& [name, digest] : m1.files)
      CHECK(io::sha256_file(d1 / name) == digest);
  }
}

TEST_CASE("pohozaev command round trip through a profile file") {
  // solve coarse, save, reload through the command path
  const fs::path dir = temp_dir("poh");
  RunConfig solve_cfg = parse_config(
      "command = pohozaev\nepsilon = 0.25\nR = 30\nn = 800\n");
  RunManifest m = run(solve_cfg, dir);
  const double res = std::abs(std::stod(m.results.at("pohozaev_residual")));
  CHECK(res <= 1e-5);
}
