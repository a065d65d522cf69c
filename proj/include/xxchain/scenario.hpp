// scenario.hpp: the runs behind the CLI, each producing a CSV-ready table.

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "xxchain/config.hpp"
#include "xxchain/state.hpp"

namespace xxchain {

inline constexpr const char* kVersion = "0.1.0";

struct ResultTable {
  std::vector<std::string> header_lines;  // written with a leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Index of a named column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
  void write_csv(std::ostream& os) const;
  std::string to_csv() const;
};

// Sweep status codes.
inline constexpr int kStatusOk = 0;
inline constexpr int kStatusInvalidThreeSpin = 1;
inline constexpr int kStatusInvalidTwoSpin = 2;

// Computational-basis initial state for `cfg.chain`.
DensityMatrix initial_state(const RunConfig& cfg);

// Columns: kt, concurrence, population_1..2^n (eigenbasis), trace_error,
// hermiticity_defect, min_eigenvalue; with cfg.oracle or a verify tolerance also
// oracle_concurrence and oracle_deviation. Three-spin runs use the analytic
// propagator, two-spin runs the Liouvillian exponential. Throws VerificationError
// when a state fails the validity gates or the oracle deviation exceeds the tolerance.
ResultTable run_evolve(const RunConfig& cfg);

// One row: population_i, concurrence, deviation (analytic vs kernel, NaN for n=2)
// and the state gates.
ResultTable run_steady(const RunConfig& cfg);

// sweep-eq: epsilon x T with both baths at T. sweep-noneq: T_first x T_last at
// chain.epsilon. compare23: epsilon x T_first x T_last. Columns are the grid
// coordinates, C_3spin, C_2spin, difference and status (bit 0: three-spin point
// invalid, bit 1: two-spin point invalid; the affected values are NaN).
ResultTable run_sweeps(const RunConfig& cfg);

// Dispatches on cfg.mode after validate(cfg); adds the run header.
ResultTable run(const RunConfig& cfg);

// Runs body(0..count-1) on up to `jobs` threads. The exception of the lowest
// failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace xxchain
