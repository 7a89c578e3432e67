#include "polysafe/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "polysafe/analysis.hpp"
#include "polysafe/batch.hpp"
#include "polysafe/errors.hpp"
#include "polysafe/rng.hpp"
#include "polysafe/scenario.hpp"
#include "polysafe/svg.hpp"

namespace polysafe {

namespace fs = std::filesystem;

namespace {

// independent sampling streams derived from each scenario seed
constexpr std::uint64_t kCertStream = 101;
constexpr std::uint64_t kGammaStream = 102;
constexpr std::uint64_t kX0Stream = 103;

constexpr int kBoundarySamples = 200;
constexpr int kSweepSamples = 500;
constexpr int kGammaSamples = 200;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_overrides(Scenario& sc, const CliOptions& opts) {
  if (opts.seed_override) sc.seeds = {*opts.seed_override};
  if (opts.dt_override) {
    if (!(*opts.dt_override > 0)) throw ScenarioError("--dt must be positive");
    sc.sim.dt = *opts.dt_override;
  }
  if (opts.policy_override)
    sc.policy = policy_from_name(*opts.policy_override, sc.system.m);
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    if (!f) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

double resolve_gamma(const Scenario& sc, std::ostream& out) {
  if (!sc.gamma_auto) return sc.sim.gamma;
  const DomainSampler sampler =
      make_interior_sampler(sc.spec, sc.system, split_seed(sc.seeds.front(), kGammaStream), true);
  const double g = estimate_gamma(sc.spec, sc.system, sampler, 0.5, kGammaSamples);
  out << "gamma_auto: " << fmt(g) << '\n';
  return g;
}

std::optional<Scenario> load_checked(const std::string& path, const CliOptions& opts,
                                     std::ostream& err) {
  try {
    Scenario s = load_scenario(path);
    apply_overrides(s, opts);
    return s;
  } catch (const ScenarioError& e) {
    err << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

int cmd_check(const std::string& scenario_path, const CliOptions& opts, std::ostream& out,
              std::ostream& err) {
  const std::optional<Scenario> sc = load_checked(scenario_path, opts, err);
  if (!sc) return kExitBadInput;
  try {
    const CertificationReport rep =
        certify(sc->spec, sc->system, kBoundarySamples, kSweepSamples,
                split_seed(sc->seeds.front(), kCertStream));
    write_certification_report(rep, sc->spec, out);
    return rep.certified ? kExitOk : kExitViolation;
  } catch (const std::exception& e) {
    err << "check failed: " << e.what() << '\n';
    return kExitViolation;
  }
}

int cmd_gamma(const std::string& scenario_path, const CliOptions& opts, std::ostream& out,
              std::ostream& err) {
  const std::optional<Scenario> sc = load_checked(scenario_path, opts, err);
  if (!sc) return kExitBadInput;
  try {
    const DomainSampler sampler = make_interior_sampler(
        sc->spec, sc->system, split_seed(sc->seeds.front(), kGammaStream), true);
    const double g = estimate_gamma(sc->spec, sc->system, sampler, 0.5, kGammaSamples);
    out << "gamma: " << fmt(g) << '\n';
    out << "min_cheb_radius: " << fmt(g / 0.5) << '\n';
    out << "samples: " << kGammaSamples << '\n';
    return kExitOk;
  } catch (const SampleOutsideOmega& e) {
    err << "sample outside the feasible-map domain: [";
    for (int i = 0; i < e.state.size(); ++i) err << (i ? "," : "") << fmt(e.state[i]);
    err << "]\n";
    return kExitViolation;
  } catch (const std::exception& e) {
    err << "gamma estimation failed: " << e.what() << '\n';
    return kExitViolation;
  }
}

int cmd_run(const std::string& scenario_path, const CliOptions& opts, std::ostream& out,
            std::ostream& err) {
  std::optional<Scenario> loaded = load_checked(scenario_path, opts, err);
  if (!loaded) return kExitBadInput;
  Scenario& sc = *loaded;

  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  {
    std::ofstream probe(fs::path(opts.out_dir) / ".write_probe", std::ios::trunc);
    if (!probe) {
      err << "out dir not writable: " << opts.out_dir << '\n';
      return kExitBadInput;
    }
  }
  fs::remove(fs::path(opts.out_dir) / ".write_probe", ec);

  bool uncertified = false;
  try {
    const CertificationReport cert =
        certify(sc.spec, sc.system, kBoundarySamples, kSweepSamples,
                split_seed(sc.seeds.front(), kCertStream));
    uncertified = !cert.certified;
    if (uncertified && !opts.force) {
      write_certification_report(cert, sc.spec, err);
      err << "certification failed; rerun with --force to simulate anyway\n";
      return kExitViolation;
    }
  } catch (const std::exception& e) {
    if (!opts.force) {
      err << "certification failed: " << e.what() << '\n';
      return kExitViolation;
    }
    uncertified = true;
  }
  if (uncertified) out << "UNCERTIFIED run (forced)\n";

  std::vector<RunCase> cases;
  try {
    sc.sim.gamma = resolve_gamma(sc, out);
    for (const std::uint64_t seed : sc.seeds) {
      if (sc.x0_explicit) {
        cases.push_back({seed, 0, *sc.x0_explicit});
      } else {
        const DomainSampler sampler =
            make_interior_sampler(sc.spec, sc.system, split_seed(seed, kX0Stream), true);
        for (int i = 0; i < sc.x0_sample_count; ++i)
          cases.push_back({seed, i, sampler(static_cast<std::uint64_t>(i))});
      }
    }
  } catch (const std::exception& e) {
    err << "run setup failed: " << e.what() << '\n';
    return uncertified ? kExitForcedUncertified : kExitViolation;
  }

  const BatchResult batch = run_batch(sc.spec, sc.system, sc.policy, cases, sc.sim);

  bool clean = true;
  std::ostringstream summary;
  if (uncertified) summary << "UNCERTIFIED\n";
  summary << "scenario: " << fs::path(scenario_path).filename().string() << '\n';
  summary << "cases: " << cases.size() << '\n';

  for (std::size_t k = 0; k < cases.size(); ++k) {
    const std::string base =
        "run_" + std::to_string(cases[k].seed) + "_" + std::to_string(cases[k].index);
    if (!batch.errors[k].empty()) {
      clean = false;
      summary << base << ": error " << batch.errors[k] << '\n';
      out << base << ": error " << batch.errors[k] << '\n';
      continue;
    }
    const SimResult& res = batch.results[k];
    const RunReport& rep = res.report;

    std::ostringstream csv;
    write_trajectory_csv(res.trajectory, csv);
    std::ostringstream report;
    if (uncertified) report << "UNCERTIFIED\n";
    write_run_report(rep, report);
    try {
      write_atomic(fs::path(opts.out_dir) / (base + ".csv"), csv.str());
      write_atomic(fs::path(opts.out_dir) / (base + ".report.txt"), report.str());
    } catch (const std::exception& e) {
      err << e.what() << '\n';
      return kExitBadInput;
    }

    // independent pass: re-read the CSV and recompute h from the states alone
    std::istringstream reread(csv.str());
    const Trajectory back = read_trajectory_csv(reread);
    const InvarianceCheck chk = verify_invariance(back, sc.spec, sc.sim.violation_tol);
    const double recorded_worst = rep.max_h.maxCoeff();
    if (std::abs(chk.worst - recorded_worst) > 1e-12) {
      err << base << ": verify mismatch, recomputed " << fmt(chk.worst) << " vs recorded "
          << fmt(recorded_worst) << '\n';
      clean = false;
    }

    const bool violated = !rep.violations.empty() || rep.exit_reason != ExitReason::Completed;
    clean = clean && !violated;
    summary << base << ": " << to_string(rep.exit_reason) << " worst_h=" << fmt(recorded_worst)
            << " violations=" << rep.violations.size() << '\n';
    out << base << ": " << to_string(rep.exit_reason) << " worst_h=" << fmt(recorded_worst)
        << " violations=" << rep.violations.size() << " wall=" << rep.wall_time << "s\n";
  }

  summary << "worst_h: " << fmt(batch.worst_h) << '\n';
  summary << "completed: " << batch.completed << '/' << cases.size() << '\n';
  try {
    write_atomic(fs::path(opts.out_dir) / "summary.txt", summary.str());
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitBadInput;
  }
  out << "worst_h: " << fmt(batch.worst_h) << '\n';

  if (uncertified) return kExitForcedUncertified;
  return clean ? kExitOk : kExitViolation;
}

int cmd_plot(const std::string& trajectory_csv, const std::string& scenario_path,
             const std::string& out_svg, std::ostream& out, std::ostream& err) {
  const std::optional<Scenario> sc = load_checked(scenario_path, CliOptions{}, err);
  if (!sc) return kExitBadInput;
  if (sc->system.n != 2) {
    out << "plot supports planar scenarios only\n";
    return kExitViolation;
  }
  Trajectory traj;
  try {
    std::ifstream in(trajectory_csv);
    if (!in) throw std::runtime_error("cannot open " + trajectory_csv);
    traj = read_trajectory_csv(in);
  } catch (const std::exception& e) {
    err << "plot input error: " << e.what() << '\n';
    return kExitBadInput;
  }
  try {
    std::ostringstream svg;
    write_trajectory_svg(traj, sc->spec, svg);
    write_atomic(out_svg, svg.str());
  } catch (const std::exception& e) {
    err << "plot failed: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitOk;
}

}  // namespace polysafe
