#include "ramanpass/sweep.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "ramanpass/analysis.hpp"
#include "ramanpass/cli_commands.hpp"
#include "ramanpass/csv.hpp"
#include "ramanpass/protocol_io.hpp"

namespace raman {

using nlohmann::ordered_json;

std::vector<SweepJob> expand_grid(const SweepGrid& grid) {
  if (grid.families.empty() || grid.etas.empty() || grid.fractions.empty() ||
      grid.thresholds.empty())
    throw ValidationError("sweep grid has an empty axis");
  if (!(grid.nu > 0.0)) throw ValidationError("nu must be positive");
  for (double eta : grid.etas)
    if (eta == 0.0) throw ValidationError("eta must be nonzero");
  for (double f : grid.fractions)
    if (!(f > 0.0) || !(f <= 1.0))
      throw ValidationError("fractions must lie in (0, 1]");
  for (double thr : grid.thresholds)
    if (!(thr > 0.0) || !(thr < 1.0))
      throw ValidationError("thresholds must lie in (0, 1)");

  std::vector<SweepJob> jobs;
  for (Family fam : grid.families)
    for (double eta : grid.etas)
      for (double fraction : grid.fractions)
        for (double threshold : grid.thresholds) {
          SweepJob job{fam, eta, fraction, threshold, {}};
          job.file_name = std::string("sweep_") + family_char(fam) + "_eta" +
                          format_double(eta) + "_frac" +
                          format_double(fraction) + "_thr" +
                          format_double(threshold) + ".csv";
          jobs.push_back(std::move(job));
        }
  return jobs;
}

namespace {

struct JobOutcome {
  bool ok = false;
  std::string error;
  ordered_json summary;
};

JobOutcome run_job(const SweepGrid& grid, const SweepJob& job,
                   const std::filesystem::path& out_dir) {
  JobOutcome outcome;
  try {
    ProtocolSpec spec = builtin_family(job.family, grid.nu);
    spec.eta = job.eta;
    spec.threshold = job.threshold;
    spec.samples = grid.samples;
    spec.name = job.file_name.substr(0, job.file_name.size() - 4);

    const Protocol proto = Protocol::compile(spec);
    StateVector psi;
    psi << 1.0, 0.0, 0.0;
    const Trajectory traj = evolve(proto, psi);
    write_trajectory_csv(proto, traj, (out_dir / job.file_name).string());

    const double t_eff = effective_duration(proto, job.threshold);
    ordered_json summary;
    summary["effective_duration"] = t_eff;
    double max_p2 = 0.0;
    for (const TrajectoryRow& row : traj.rows)
      max_p2 = std::max(max_p2, row.populations[1]);
    summary["max_p2"] = max_p2;
    summary["final_p3"] = traj.rows.back().populations[2];
    if (job.eta == 1.0) {
      const double t_fc =
          proto.tau0() + job.fraction * (t_eff - proto.tau0());
      const TruncationReport trunc = truncation_population(proto, t_fc);
      ordered_json jt;
      jt["t_fc"] = trunc.t_fc;
      jt["delta"] = trunc.delta;
      jt["predicted_p3"] = trunc.predicted_p3;
      jt["simulated_p3"] = trunc.simulated_p3;
      jt["stirap_baseline"] = trunc.stirap_baseline;
      summary["truncation"] = std::move(jt);
    }
    outcome.summary = std::move(summary);
    outcome.ok = true;
  } catch (const Error& e) {
    outcome.error = e.what();
  }
  return outcome;
}

}  // namespace

int run_sweep(const SweepGrid& grid, const std::string& out_dir, int jobs,
              std::ostream& log) {
  const std::vector<SweepJob> all = expand_grid(grid);
  if (jobs < 1) throw ValidationError("worker count must be >= 1");

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  log << all.size() << " sweep jobs\n";

  std::vector<JobOutcome> outcomes(all.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= all.size()) return;
      outcomes[i] = run_job(grid, all[i], dir);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(all.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  // Index is assembled in canonical job order, independent of which worker
  // finished first.
  ordered_json index;
  index["schema_version"] = 1;
  index["nu"] = grid.nu;
  ordered_json jlist = ordered_json::array();
  int failures = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    ordered_json j;
    j["family"] = std::string(1, family_char(all[i].family));
    j["eta"] = all[i].eta;
    j["fraction"] = all[i].fraction;
    j["threshold"] = all[i].threshold;
    j["csv"] = all[i].file_name;
    if (outcomes[i].ok) {
      j["status"] = "ok";
      j["summary"] = outcomes[i].summary;
    } else {
      j["status"] = "error";
      j["error"] = outcomes[i].error;
      ++failures;
    }
    jlist.push_back(std::move(j));
  }
  index["jobs"] = std::move(jlist);
  {
    std::ofstream out(dir / "index.json", std::ios::binary);
    if (!out)
      throw ValidationError("cannot write sweep index in '" + out_dir + "'");
    out << index.dump(2) << "\n";
  }

  if (failures > 0) {
    log << failures << " of " << all.size() << " jobs failed\n";
    for (std::size_t i = 0; i < all.size(); ++i)
      if (!outcomes[i].ok)
        log << "  " << all[i].file_name << ": " << outcomes[i].error << "\n";
    return 2;
  }
  log << "all jobs completed\n";
  return 0;
}

}  // namespace raman
