#include "liouville/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "liouville/errors.hpp"
#include "liouville/io.hpp"
#include "liouville/negindex4d.hpp"
#include "liouville/normdiag.hpp"
#include "liouville/parallel.hpp"
#include "liouville/quadrature.hpp"
#include "liouville/radial3d.hpp"
#include "liouville/specfun.hpp"
#include "liouville/strip2d.hpp"

namespace liouville {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;
using io::format_g17;

struct Emitter {
  fs::path dir;
  RunManifest* man;
  void note(const fs::path& p) {
    man->files.emplace_back(p.filename().string(), io::sha256_file(p));
  }
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

void run_spectrum2d(const RunConfig& cfg, Emitter& em) {
  const double X = cfg.get("X", 20.0);
  const int nx = int(cfg.get("nx", 2001.0));
  const int ny = int(cfg.get("ny", 41.0));
  const int n_eigs = int(cfg.get("n_eigs", 4.0));
  std::vector<double> lambdas;
  if (cfg.has("lambda")) {
    lambdas.push_back(cfg.get("lambda", kPi));
  } else {
    const double lo = cfg.get("lambda_lo", 2.0);
    const double hi = cfg.get("lambda_hi", 10.0);
    const double st = cfg.get("lambda_step", 0.5);
    for (double l = lo; l <= hi + 1e-12; l += st) lambdas.push_back(l);
  }
  std::vector<std::vector<std::string>> rows;
  for (double lam : lambdas) {
    StripGrid g(lam, X, nx, ny);
    strip2d::SpectrumReport rep = strip2d::linearized_spectrum(lam, g, n_eigs);
    for (const auto& e : rep.per_mode)
      rows.push_back({format_g17(lam), std::to_string(e.mode),
                      format_g17(e.eigenvalue)});
  }
  const fs::path csv = em.dir / "spectrum.csv";
  io::write_csv(csv, "lambda,mode,eigenvalue", rows);
  em.note(csv);
  em.man->results["n_lambda"] = std::to_string(lambdas.size());
}

void run_bifurcate2d(const RunConfig& cfg, Emitter& em) {
  const double X = cfg.get("X", 20.0);
  const int nx = int(cfg.get("nx", 2001.0));
  const int ny = int(cfg.get("ny", 41.0));
  const int k = int(cfg.get("k", 1.0));
  const int n_steps = int(cfg.get("n_steps", 20.0));
  const double ds = cfg.get("ds", 0.01);
  StripGrid g(kPi * k, X, nx, ny);
  const double lo = cfg.get("lambda_lo", 0.8 * kPi * k);
  const double hi = cfg.get("lambda_hi", 1.2 * kPi * k);
  auto points = strip2d::detect_bifurcations(lo, hi, cfg.get("lambda_step", 0.05), g);
  if (points.empty()) throw SolverError("bifurcate2d: no bifurcation detected", 0.0);
  double lam_star = points.front();
  for (double p : points)
    if (std::abs(p - kPi * k) < std::abs(lam_star - kPi * k)) lam_star = p;
  strip2d::BifurcationDiagnostics diag = strip2d::bifurcation_diagnostics(lam_star, g);
  strip2d::Branch br = strip2d::continue_branch(diag, n_steps, ds);

  std::vector<std::vector<std::string>> rows;
  for (const auto& p : br.points)
    rows.push_back({format_g17(p.lambda), format_g17(p.amplitude),
                    format_g17(p.newton_residual)});
  const fs::path csv = em.dir / "branch.csv";
  io::write_csv(csv, "lambda,t,residual", rows);
  em.note(csv);
  const fs::path fstar = em.dir / "u_star.field";
  io::save_field(fstar, diag.u_star);
  em.note(fstar);
  const fs::path fu2 = em.dir / "u2.field";
  io::save_field(fu2, diag.u2);
  em.note(fu2);
  if (!br.points.empty()) {
    const fs::path fb = em.dir / "branch_last.field";
    io::save_field(fb, br.points.back().field);
    em.note(fb);
  }
  em.man->results["lambda_star"] = format_g17(diag.lambda_star);
  em.man->results["lambda1"] = format_g17(diag.lambda1);
  em.man->results["lambda2"] = format_g17(diag.lambda2);
  em.man->results["lambda_star_fit"] = format_g17(br.lambda_star_fit);
  em.man->results["lambda2_fit"] = format_g17(br.lambda2_fit);
}

void run_lambda2(const RunConfig& cfg, Emitter& em) {
  const double X = cfg.get("X", 20.0);
  const int nx = int(cfg.get("nx", 2001.0));
  const int ny = int(cfg.get("ny", 41.0));
  const double lam = cfg.get("lambda_star", kPi);
  StripGrid g(lam, X, nx, ny);
  strip2d::BifurcationDiagnostics diag = strip2d::bifurcation_diagnostics(lam, g);
  const fs::path fstar = em.dir / "u_star.field";
  io::save_field(fstar, diag.u_star);
  em.note(fstar);
  const fs::path fu2 = em.dir / "u2.field";
  io::save_field(fu2, diag.u2);
  em.note(fu2);
  em.man->results["lambda_star"] = format_g17(diag.lambda_star);
  em.man->results["mode"] = std::to_string(diag.mode);
  em.man->results["lambda1"] = format_g17(diag.lambda1);
  em.man->results["lambda2"] = format_g17(diag.lambda2);
  em.man->results["u2_residual"] = format_g17(diag.u2_residual);
}

void run_radial3d(const RunConfig& cfg, Emitter& em) {
  const double R = cfg.get("R", 50.0);
  const int n = int(cfg.get("n", 4000.0));
  const double grading = cfg.get("grading", 1.5);
  const double tol = cfg.get("tol", 1e-12);
  const double floor_eps = cfg.get("eps_floor", 1e-5);
  auto grid = std::make_shared<RadialGrid>(R, n, grading);
  auto schedule = radial3d::default_schedule(floor_eps);
  radial3d::EpsContinuation cont = radial3d::continue_eps_to_zero(schedule, grid, tol);

  for (std::size_t i = 0; i < cont.profiles.size(); ++i) {
    std::ostringstream name;
    name << "profile_eps_" << i << ".txt";
    const fs::path p = em.dir / name.str();
    io::save_profile(p, cont.profiles[i]);
    em.note(p);
  }
  const fs::path pl = em.dir / "profile_limit.txt";
  io::save_profile(pl, cont.limit);
  em.note(pl);

  em.man->results["stages"] = std::to_string(schedule.size());
  em.man->results["measured_order"] = format_g17(cont.measured_order);
  em.man->results["u0_limit"] = format_g17(cont.limit.values[0]);
  em.man->results["volume"] = format_g17(radial3d::volume(cont.limit));
  em.man->results["decay_slope"] = format_g17(radial3d::decay_slope(cont.limit));
  em.man->results["eps0_residual_r10"] =
      format_g17(radial3d::integral_residual_eps0(cont.limit, 10.0));
  em.man->results["biharmonic_residual"] =
      format_g17(radial3d::biharmonic_residual(cont.limit));
  double worst_poh = 0.0;
  for (std::size_t i = 0; i < cont.profiles.size(); ++i)
    worst_poh = std::max(worst_poh,
                         std::abs(radial3d::pohozaev_residual(
                             cont.profiles[i], schedule[i])));
  em.man->results["max_pohozaev_residual"] = format_g17(worst_poh);
}

void run_pohozaev(const RunConfig& cfg, Emitter& em) {
  RadialProfile prof;
  if (cfg.has("profile")) {
    prof = io::load_profile(cfg.get("profile", std::string{}));
  } else {
    const double eps = cfg.get("epsilon", 0.1);
    auto grid = std::make_shared<RadialGrid>(cfg.get("R", 50.0),
                                             int(cfg.get("n", 4000.0)),
                                             cfg.get("grading", 1.5));
    prof = radial3d::picard_solve(eps, grid, cfg.get("tol", 1e-12)).first;
  }
  const double eps = cfg.has("epsilon") ? cfg.get("epsilon", 0.1) : prof.epsilon;
  em.man->results["pohozaev_residual"] =
      format_g17(radial3d::pohozaev_residual(prof, eps));
  em.man->results["epsilon"] = format_g17(eps);
}

void run_legendre_scan(const RunConfig& cfg, Emitter& em) {
  const double lo = cfg.get("mu_lo", 1e-3);
  const double hi = cfg.get("mu_hi", 10.0);
  const double step = cfg.get("step", 1e-3);
  specfun::ScanReport rep = specfun::scan_no_root(lo, hi, step);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(rep.samples.size());
  for (const auto& [mu, g] : rep.samples)
    rows.push_back({format_g17(mu), format_g17(g)});
  const fs::path csv = em.dir / "legendre_scan.csv";
  io::write_csv(csv, "mu,g", rows);
  em.note(csv);
  em.man->results["min_gap"] = format_g17(rep.min_gap);
  em.man->results["samples"] = std::to_string(rep.samples.size());
  em.man->results["excluded_intervals"] = std::to_string(rep.excluded.size());
}

void run_negindex4d(const RunConfig& cfg, Emitter& em) {
  auto grid = std::make_shared<RadialGrid>(cfg.get("R", 50.0),
                                           int(cfg.get("n", 4000.0)),
                                           cfg.get("grading", 1.5));
  radial3d::EpsContinuation cont = radial3d::continue_eps_to_zero(
      radial3d::default_schedule(cfg.get("eps_floor", 1e-5)), grid,
      cfg.get("tol", 1e-12));
  const RadialProfile& u1 = cont.limit;
  auto [mu_star, form] = negindex4d::find_mu_star(u1, cfg.get("mu_cap", double(1 << 20)));
  RadialProfile umu = radial3d::rescale_solution(u1, mu_star);
  negindex4d::Eigenpair ep = negindex4d::v0_eigenpair(umu, grid);

  std::vector<double> lambdas = parse_list(cfg.get("lambdas", std::string("5,10,20,40")));
  const int kmax_cfg = int(cfg.get("kmax", 0.0));

  // locate the f sign change once; kmax per lambda just needs to pass it
  double tstar = 1.0;
  while (negindex4d::f_of_t(tstar, ep.v0, umu) < 0.0) tstar *= 2.0;

  std::vector<std::vector<std::string>> rows;
  for (double lam : lambdas) {
    int kmax = kmax_cfg;
    if (kmax <= 0) kmax = int(lam * std::sqrt(tstar) / (2.0 * kPi)) + 2;
    negindex4d::NegativeIndexReport rep =
        negindex4d::count_negative(lam, kmax, ep.v0, umu, mu_star, ep.nu0);
    rows.push_back({format_g17(lam), format_g17(mu_star), format_g17(ep.nu0),
                    std::to_string(rep.count)});
    std::vector<std::vector<std::string>> frows;
    for (const auto& [t, f] : rep.f_samples)
      frows.push_back({format_g17(t), format_g17(f)});
    std::ostringstream name;
    name << "f_samples_lambda_" << format_g17(lam) << ".csv";
    const fs::path fp = em.dir / name.str();
    io::write_csv(fp, "t,f", frows);
    em.note(fp);
  }
  const fs::path csv = em.dir / "negindex.csv";
  io::write_csv(csv, "lambda,mu,nu0,count", rows);
  em.note(csv);
  em.man->results["mu_star"] = format_g17(mu_star);
  em.man->results["form_at_mu_star"] = format_g17(form);
  em.man->results["nu0"] = format_g17(ep.nu0);
}

void run_extend(const RunConfig& cfg, Emitter& em) {
  if (!cfg.has("field")) throw ConfigError("extend: missing required key 'field'");
  StripField u = io::load_field(cfg.get("field", std::string{}));
  const int copies = int(cfg.get("copies", 2.0));
  StripField ext = strip2d::extend_by_reflection(u, copies);
  const fs::path p = em.dir / "extended.field";
  io::save_field(p, ext);
  em.note(p);
  // seam vs interior residual
  StripField res = strip2d::residual_2d(ext.grid, ext);
  double seam = 0.0, interior = 0.0;
  for (int i = 1; i + 1 < ext.grid.nx; ++i)
    for (int j = 0; j < ext.grid.ny; ++j) {
      const bool is_seam = (j % (u.grid.ny - 1)) == 0;
      const double v = std::abs(res.at(i, j));
      if (is_seam)
        seam = std::max(seam, v);
      else
        interior = std::max(interior, v);
    }
  em.man->results["seam_residual"] = format_g17(seam);
  em.man->results["interior_residual"] = format_g17(interior);
}

void run_norms(const RunConfig& cfg, Emitter& em) {
  std::ostringstream rep;
  const double alpha = cfg.get("alpha", 0.5);
  if (cfg.has("profile")) {
    RadialProfile p = io::load_profile(cfg.get("profile", std::string{}));
    normdiag::WeightSpec spec{cfg.get("exponent", 4.5), alpha, 0};
    rep << "kind: radial-profile\n";
    rep << "weighted_sup: "
        << format_g17(normdiag::weighted_sup_norm(p.grid->r, p.values,
                                                  spec.exponent))
        << "\n";
    rep << "holder_seminorm: "
        << format_g17(normdiag::weighted_holder_seminorm(p.grid->r, p.values, spec))
        << "\n";
    normdiag::DecayFit fit = normdiag::decay_fit(p.grid->r, p.values);
    rep << "decay_kind: "
        << (fit.kind == normdiag::DecayKind::Linear
                ? "linear"
                : fit.kind == normdiag::DecayKind::Power ? "power" : "exponential")
        << "\n";
    rep << "decay_rate: " << format_g17(fit.rate) << "\n";
  } else if (cfg.has("field")) {
    StripField f = io::load_field(cfg.get("field", std::string{}));
    normdiag::WeightSpec spec{cfg.get("exponent", 1.5), alpha, 0};
    rep << "kind: strip-field\n";
    rep << "weighted_sup_m12: "
        << format_g17(normdiag::weighted_sup_norm(f, -0.5)) << "\n";
    rep << "weighted_sup_32: "
        << format_g17(normdiag::weighted_sup_norm(f, 1.5)) << "\n";
    rep << "holder_seminorm: "
        << format_g17(normdiag::weighted_holder_seminorm(f, spec)) << "\n";
  } else {
    throw ConfigError("norms: need 'field' or 'profile'");
  }
  const fs::path p = em.dir / "norms.txt";
  std::ofstream out(p);
  out << rep.str();
  out.close();
  em.note(p);
  em.man->results["report"] = "norms.txt";
}

void run_validate(const RunConfig& cfg, Emitter& em) {
  int pass = 0, fail = 0;
  auto check = [&](const std::string& name, bool ok) {
    (ok ? pass : fail) += 1;
    em.man->results["check." + name] = ok ? "pass" : "FAIL";
  };

  // Chen-Li stencil order
  strip2d::ChenLiReport cl = strip2d::validate_stencil_chen_li(cfg.get("h", 0.02));
  check("chen_li_order", cl.order >= 1.8 && cl.order <= 2.2);
  em.man->results["chen_li_order"] = format_g17(cl.order);

  // gamma reflection identity on seeded random orders
  {
    std::mt19937_64 rng(uint64_t(cfg.get("seed", 20240814.0)));
    std::uniform_real_distribution<double> unif(0.01, 0.99);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double mu = unif(rng);
      const double lhs =
          specfun::gamma(mu) * specfun::gamma(1.0 - mu) * std::sin(kPi * mu) / kPi;
      worst = std::max(worst, std::abs(lhs - 1.0));
    }
    check("gamma_reflection", worst <= 1e-12);
    em.man->results["gamma_reflection_worst"] = format_g17(worst);
  }

  // weighted-operator transform identity
  {
    const double worst = normdiag::transform_identity_check(
        uint64_t(cfg.get("seed", 20240814.0)), int(cfg.get("samples", 50.0)));
    check("operator_transform_identity", worst <= 1e-10);
    em.man->results["operator_transform_worst"] = format_g17(worst);
  }

  // Holder seminorm windowed == all-pairs on a 20-node grid
  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> x(20), u(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = i * 0.35 + 0.05 * unif(rng);
      u[i] = std::sin(0.8 * x[i]) + 0.3 * unif(rng);
    }
    normdiag::WeightSpec spec{0.0, 0.5, 1};
    const double windowed = normdiag::weighted_holder_seminorm(x, u, spec, 32);
    const double all_pairs = normdiag::weighted_holder_seminorm(x, u, spec, 20);
    check("holder_all_pairs", windowed == all_pairs);
  }

  em.man->results["pass_count"] = std::to_string(pass);
  em.man->results["fail_count"] = std::to_string(fail);
}

}  // namespace

std::string RunManifest::to_text() const {
  std::ostringstream out;
  out << "# liouville-manifest v1\n";
  out << "version: " << kArtifactVersion << "\n";
  out << "command: " << command << "\n";
  std::istringstream cfg_lines(emit_config(config));
  std::string line;
  while (std::getline(cfg_lines, line)) out << "config." << line << "\n";
  for (const auto& [k, v] : results) out << "result." << k << ": " << v << "\n";
  out << "wallclock_s: " << format_g17(wallclock_s) << "\n";
  for (const auto& [name, digest] : files)
    out << "file: " << name << " sha256: " << digest << "\n";
  return out.str();
}

RunManifest run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);
  RunManifest man;
  man.command = cfg.command;
  man.config = cfg;
  Emitter em{out_dir, &man};

  if (cfg.command == "spectrum2d")
    run_spectrum2d(cfg, em);
  else if (cfg.command == "bifurcate2d")
    run_bifurcate2d(cfg, em);
  else if (cfg.command == "lambda2")
    run_lambda2(cfg, em);
  else if (cfg.command == "radial3d")
    run_radial3d(cfg, em);
  else if (cfg.command == "pohozaev")
    run_pohozaev(cfg, em);
  else if (cfg.command == "legendre-scan")
    run_legendre_scan(cfg, em);
  else if (cfg.command == "negindex4d")
    run_negindex4d(cfg, em);
  else if (cfg.command == "extend")
    run_extend(cfg, em);
  else if (cfg.command == "norms")
    run_norms(cfg, em);
  else if (cfg.command == "validate")
    run_validate(cfg, em);
  else
    throw ConfigError("unknown command '" + cfg.command + "'");

  man.wallclock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ofstream mf(out_dir / "manifest.txt");
  if (!mf) throw IoError("run: cannot write manifest");
  mf << man.to_text();
  return man;
}

}  // namespace liouville
