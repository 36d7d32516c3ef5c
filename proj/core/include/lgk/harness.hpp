#pragma once

#include "lgk/config.hpp"
#include "lgk/dynamics.hpp"
#include "lgk/pde.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lgk {

struct ComparisonRow {
  int N;
  double t;
  int functional_id;
  double mean;
  double stderr_value;
  double pde_value;
  double gap;        // |mean - pde_value|
  double gap_in_se;  // gap / stderr
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double wall_seconds = 0.0;
  bool operator==(const ComparisonReport& o) const { return rows == o.rows; }
};

inline bool operator==(const ComparisonRow& a, const ComparisonRow& b) {
  return a.N == b.N && a.t == b.t && a.functional_id == b.functional_id && a.mean == b.mean &&
         a.stderr_value == b.stderr_value && a.pde_value == b.pde_value && a.gap == b.gap &&
         a.gap_in_se == b.gap_in_se;
}

// Ensemble-vs-PDE comparison.  Replica streams are keyed by (N, replica), so
// results are independent of the worker count; aggregation runs in replica
// order.
ComparisonReport run_comparison(const ExperimentConfig& cfg, int threads);

// Per-replica functional values for one system size, ordered by
// (replica, snapshot, functional).  Optionally reports per-replica event
// counters.
std::vector<double> run_replicas(const ExperimentConfig& cfg, int N, int threads,
                                 std::vector<EventCounters>* counters = nullptr);

// CSV schema: N,t,functional_id,mean,stderr,pde_value,gap,gap_in_se with
// shortest round-trip decimal formatting.
void write_csv(const ComparisonReport& report, std::ostream& os);
ComparisonReport parse_csv(std::istream& is);

// JSON manifest: config echo, seed, version, wall time.
void write_manifest(const ComparisonReport& report, const ExperimentConfig& cfg,
                    std::ostream& os);

// Line chart of gap vs N, one polyline per functional.
void write_svg(const ComparisonReport& report, std::ostream& os);

// Decimal string that parses back to exactly the same double.
std::string format_double(double x);

}  // namespace lgk
