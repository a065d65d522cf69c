#include "xxchain/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "xxchain/analytic.hpp"
#include "xxchain/entanglement.hpp"
#include "xxchain/oracle.hpp"

namespace xxchain {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SpinEigenSystem numeric_eigen_system(const ChainSpec& spec) {
  const auto eig = eig_hermitian(build_hamiltonian(spec));
  return {eig.vectors, eig.values};
}

std::vector<std::string> state_columns(int dim) {
  std::vector<std::string> cols;
  for (int i = 1; i <= dim; ++i) cols.push_back("population_" + std::to_string(i));
  cols.insert(cols.end(), {"trace_error", "hermiticity_defect", "min_eigenvalue"});
  return cols;
}

void append_state(std::vector<double>& row, const ComplexMatrix& eigen_rho, const StateCheck& check) {
  for (Eigen::Index i = 0; i < eigen_rho.rows(); ++i) row.push_back(eigen_rho(i, i).real());
  row.insert(row.end(), {check.trace_error, check.hermiticity_defect, check.min_eigenvalue});
}

StateCheck gated(const ComplexMatrix& rho, const std::string& context) {
  const StateCheck check = check_state(rho);
  if (!check.passes()) require_valid_state(rho, context);
  return check;
}

std::string at_kt(double kt) {
  std::ostringstream os;
  os << "state at kt=" << kt;
  return os.str();
}

// Steps a vectorized state through the sample times, reusing expm(L, dt) while dt repeats.
class OracleStepper {
 public:
  OracleStepper(const Liouvillian& l, const DensityMatrix& rho0) : l_(l), v_(vec(rho0.rho)) {}

  ComplexMatrix advance_to(double t) {
    const double dt = t - t_;
    if (dt > 0.0) {
      if (!cached_dt_ || std::abs(*cached_dt_ - dt) > 1e-12 * dt) {
        step_ = expm(l_.matrix, dt);
        cached_dt_ = dt;
      }
      v_ = step_ * v_;
      t_ = t;
    }
    return unvec(v_, l_.system_dimension());
  }

 private:
  const Liouvillian& l_;
  ComplexVector v_;
  double t_ = 0.0;
  ComplexMatrix step_;
  std::optional<double> cached_dt_;
};

struct SweepPoint {
  double c3 = kNaN;
  double c2 = kNaN;
  int status = kStatusOk;
};

SweepPoint evaluate_point(double epsilon, double kappa, const BathSpec& baths) {
  SweepPoint p;
  const ChainSpec three{3, epsilon, kappa};
  try {
    validate(three);
    const DensityMatrix ss = steady_state(compute_rates(three, baths));
    require_valid_state(ss.rho, "three-spin steady state");
    p.c3 = concurrence(reduce_to_end_pair(ss, three));
  } catch (const ParameterError&) {
    p.status |= kStatusInvalidThreeSpin;
  }
  const ChainSpec two{2, epsilon, kappa};
  try {
    validate(two);
    const DensityMatrix ss = steady_state_numeric(build_liouvillian(two, baths));
    require_valid_state(ss.rho, "two-spin steady state");
    p.c2 = concurrence(reduce_to_end_pair(ss, two));
  } catch (const ParameterError&) {
    p.status |= kStatusInvalidTwoSpin;
  }
  return p;
}

std::string format_value(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

}  // namespace

std::size_t ResultTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column '" + name + "'");
}

void ResultTable::write_csv(std::ostream& os) const {
  for (const auto& line : header_lines) os << "# " << line << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_value(row[i]);
    os << "\n";
  }
}

std::string ResultTable::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

DensityMatrix initial_state(const RunConfig& cfg) {
  const int n = cfg.chain.spins;
  switch (cfg.initial.kind) {
    case InitialKind::W3: return pure_state(w_state(n));
    case InitialKind::AllUp: return pure_state(all_up_state(n));
    case InitialKind::Ground: {
      const ComplexVector ground = numeric_eigen_system(cfg.chain).vectors.col(0);
      return pure_state(ground);
    }
    case InitialKind::Custom: {
      const ComplexVector amps = Eigen::Map<const ComplexVector>(cfg.initial.amplitudes.data(),
                                                                 static_cast<Eigen::Index>(cfg.initial.amplitudes.size()));
      if (amps.size() != cfg.chain.dimension()) throw ConfigError("custom initial state needs 2^n amplitudes");
      const double norm = amps.norm();
      if (!(norm > 0.0)) throw ConfigError("custom initial state has zero norm");
      return pure_state(amps / norm);
    }
  }
  throw ConfigError("unknown initial state");
}

ResultTable run_evolve(const RunConfig& cfg) {
  const ChainSpec& chain = cfg.chain;
  const BathSpec baths = cfg.baths();
  const bool with_oracle = cfg.oracle || cfg.verify_tolerance.has_value();
  const DensityMatrix rho0 = initial_state(cfg);

  ResultTable table;
  table.columns = {"kt", "concurrence"};
  for (auto& c : state_columns(chain.dimension())) table.columns.push_back(c);
  if (with_oracle) table.columns.insert(table.columns.end(), {"oracle_concurrence", "oracle_deviation"});

  if (chain.spins == 3) {
    const AnalyticPropagator prop = build_propagator(compute_rates(chain, baths), chain);
    std::optional<Liouvillian> l;
    std::optional<OracleStepper> stepper;
    if (with_oracle) {
      l.emplace(build_liouvillian(chain, baths));
      stepper.emplace(*l, rho0);
    }
    for (double kt : cfg.kt_grid) {
      const double t = kt / chain.kappa;
      const DensityMatrix rho = propagate(prop, rho0, t);
      const StateCheck check = gated(rho.rho, at_kt(kt));
      std::vector<double> row{kt, concurrence(reduce_to_end_pair(rho, prop.eigen))};
      append_state(row, rho.rho, check);
      if (with_oracle) {
        const ComplexMatrix numeric = stepper->advance_to(t);
        const double deviation = max_abs(prop.eigen.to_computational(rho.rho) - numeric);
        row.push_back(concurrence(reduce_to_end_pair({numeric, Basis::Computational}, chain)));
        row.push_back(deviation);
        if (cfg.verify_tolerance && !(deviation <= *cfg.verify_tolerance)) {
          std::ostringstream os;
          os << "oracle deviation " << deviation << " exceeds " << *cfg.verify_tolerance << " at kt=" << kt;
          throw VerificationError(os.str());
        }
      }
      table.rows.push_back(std::move(row));
    }
    return table;
  }

  // Two spins: the Liouvillian exponential is the only propagator.
  const Liouvillian l = build_liouvillian(chain, baths);
  const SpinEigenSystem sys = numeric_eigen_system(chain);
  OracleStepper stepper(l, rho0);
  for (double kt : cfg.kt_grid) {
    const ComplexMatrix rho = stepper.advance_to(kt / chain.kappa);
    const StateCheck check = gated(rho, at_kt(kt));
    std::vector<double> row{kt, concurrence(reduce_to_end_pair({rho, Basis::Computational}, chain))};
    append_state(row, sys.to_eigenbasis(rho), check);
    if (with_oracle) row.insert(row.end(), {row[1], 0.0});
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_steady(const RunConfig& cfg) {
  const ChainSpec& chain = cfg.chain;
  const BathSpec baths = cfg.baths();
  ResultTable table;
  table.columns = {"concurrence", "deviation"};
  for (auto& c : state_columns(chain.dimension())) table.columns.push_back(c);

  const Liouvillian l = build_liouvillian(chain, baths);
  const DensityMatrix numeric = steady_state_numeric(l);
  std::vector<double> row;
  if (chain.spins == 3) {
    const SpinEigenSystem sys = eigen_system(chain);
    const DensityMatrix analytic = steady_state(compute_rates(chain, baths));
    const StateCheck check = gated(analytic.rho, "steady state");
    const double deviation = max_abs(analytic.rho - sys.to_eigenbasis(numeric.rho));
    if (cfg.verify_tolerance && !(deviation <= *cfg.verify_tolerance)) {
      std::ostringstream os;
      os << "steady-state deviation " << deviation << " exceeds " << *cfg.verify_tolerance;
      throw VerificationError(os.str());
    }
    row = {concurrence(reduce_to_end_pair(analytic, sys)), deviation};
    append_state(row, analytic.rho, check);
  } else {
    const SpinEigenSystem sys = numeric_eigen_system(chain);
    const StateCheck check = gated(numeric.rho, "steady state");
    row = {concurrence(reduce_to_end_pair(numeric, chain)), kNaN};
    append_state(row, sys.to_eigenbasis(numeric.rho), check);
  }
  table.rows.push_back(std::move(row));
  return table;
}

ResultTable run_sweeps(const RunConfig& cfg) {
  struct Coordinates {
    std::vector<double> values;
    double epsilon;
    BathSpec baths;
  };
  std::vector<Coordinates> points;
  ResultTable table;
  const double kappa = cfg.chain.kappa;
  auto baths_at = [&](double t_first, double t_last) {
    return BathSpec{cfg.gamma_first, cfg.gamma_last, 1.0 / t_first, 1.0 / t_last};
  };

  switch (cfg.mode) {
    case Mode::SweepEquilibrium:
      table.columns = {"epsilon", "T"};
      for (double eps : cfg.epsilon_grid) {
        for (double t : cfg.temperature_grid) points.push_back({{eps, t}, eps, baths_at(t, t)});
      }
      break;
    case Mode::SweepNonequilibrium:
      table.columns = {"T_first", "T_last"};
      for (double t1 : cfg.t_first_grid) {
        for (double t3 : cfg.t_last_grid) points.push_back({{t1, t3}, cfg.chain.epsilon, baths_at(t1, t3)});
      }
      break;
    case Mode::Compare23:
      table.columns = {"epsilon", "T_first", "T_last"};
      for (double eps : cfg.epsilon_grid) {
        for (double t1 : cfg.t_first_grid) {
          for (double t3 : cfg.t_last_grid) points.push_back({{eps, t1, t3}, eps, baths_at(t1, t3)});
        }
      }
      break;
    default:
      throw ConfigError("run_sweeps: not a sweep mode");
  }
  table.columns.insert(table.columns.end(), {"C_3spin", "C_2spin", "difference", "status"});

  std::vector<SweepPoint> results(points.size());
  parallel_for(points.size(), cfg.jobs,
               [&](std::size_t i) { results[i] = evaluate_point(points[i].epsilon, kappa, points[i].baths); });

  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> row = points[i].values;
    const SweepPoint& p = results[i];
    row.insert(row.end(), {p.c3, p.c2, p.c3 - p.c2, static_cast<double>(p.status)});
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run(const RunConfig& cfg) {
  validate(cfg);
  ResultTable table;
  switch (cfg.mode) {
    case Mode::Evolve: table = run_evolve(cfg); break;
    case Mode::Steady: table = run_steady(cfg); break;
    default: table = run_sweeps(cfg); break;
  }
  table.header_lines.push_back(std::string("xxchain ") + kVersion);
  std::istringstream echo(write_config(cfg));
  for (std::string line; std::getline(echo, line);) {
    if (!line.empty()) table.header_lines.push_back(line);
  }
  return table;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::mutex mutex;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t i;
          {
            std::lock_guard lock(mutex);
            if (next == count) return;
            i = next++;
          }
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace xxchain
