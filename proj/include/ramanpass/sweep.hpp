#ifndef RAMANPASS_SWEEP_HPP
#define RAMANPASS_SWEEP_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ramanpass/schedule.hpp"

// Deterministic cross-product sweeps over the built-in families. Jobs are
// independent pure computations; each writes its own CSV, and an index JSON
// is written last. Outputs are byte-identical across runs and across worker
// counts.
namespace raman {

struct SweepGrid {
  std::vector<Family> families;
  std::vector<double> etas{1.0};
  std::vector<double> fractions{1.0};    // of the effective duration
  std::vector<double> thresholds{0.9999};
  double nu = 1.0;
  int samples = 201;
};

struct SweepJob {
  Family family;
  double eta;
  double fraction;
  double threshold;
  std::string file_name;
};

std::vector<SweepJob> expand_grid(const SweepGrid& grid);

// Runs every job (jobs > 1 uses that many worker threads), writes one CSV
// per job plus index.json into out_dir. Returns 0 on full success, 2 if
// any job failed; failures are summarized on log.
int run_sweep(const SweepGrid& grid, const std::string& out_dir, int jobs,
              std::ostream& log);

}  // namespace raman

#endif  // RAMANPASS_SWEEP_HPP
