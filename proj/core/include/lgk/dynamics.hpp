#pragma once

#include "lgk/lattice.hpp"
#include "lgk/measure.hpp"
#include "lgk/rng.hpp"
#include "lgk/velocity.hpp"

#include <cstdint>
#include <vector>

namespace lgk {

// Parameters of the process generated by N^2 (L_ex + L_c), macroscopic time units.
struct SimParams {
  const VelocitySet* vs = nullptr;
  int N = 0;
  double a = 0.0;                  // weak-asymmetry exponent, in (0,1)
  double horizon = 0.0;            // macroscopic end time T
  std::vector<double> snapshot_times;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;

  void validate() const;  // throws NegativeRate if v_max > N^{1-a}, ConfigInvalid otherwise
};

struct EventCounters {
  std::uint64_t exchange_attempts = 0;
  std::uint64_t exchange_accepts = 0;
  std::uint64_t collision_attempts = 0;
  std::uint64_t collision_accepts = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Configuration> snapshots;
  EventCounters counters;
};

// rate = N^2 eta_x(v)(1 - eta_y(v))(1 + (y-x).v / N^{1-a}) for neighbors x, y.
double exchange_rate(const SimParams& params, const Configuration& cfg, std::int64_t x,
                     std::int64_t y, int v);

enum class EventType { Rejected, Exchange, Collision };

struct StepResult {
  double waiting_time;  // exponential with the dominating rate
  EventType type;
  std::int64_t site = -1;
  int dir = -1;       // exchange
  int species = -1;   // exchange
  int quadruple = -1; // collision, index into collision_set
};

// Dominating-rate uniformization: one proposal per call; the accepted-event
// process is distributed exactly as the chain generated by L_N.
class Stepper {
public:
  Stepper(const SimParams& params);

  StepResult step(Configuration& cfg, RngStream& rng);

  // The two phases of step(), split so a caller can observe the pre-event
  // state: the waiting time elapses before the proposal is applied.
  double draw_waiting_time(RngStream& rng) { return rng.next_exponential(total_rate_); }
  StepResult propose(Configuration& cfg, RngStream& rng);

  double dominating_rate() const { return total_rate_; }

  const EventCounters& counters() const { return counters_; }

private:
  const SimParams* params_;
  double exchange_max_rate_;   // per exchange proposal
  double collision_max_rate_;  // per collision proposal
  double exchange_weight_;     // total exchange channel bound
  double total_rate_;
  double drift_scale_;         // N^{a-1}
  EventCounters counters_;
};

Trajectory simulate(const SimParams& params, Configuration initial);

// N^{a-d} sum_x F(x/N) . (I(eta_x) - p_*) for a Fourier test function F.
double empirical_field(const Configuration& cfg, const VelocitySet& vs, double a,
                       const FourierMode& F);

}  // namespace lgk
