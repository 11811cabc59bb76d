#ifndef ECSQB_SWEEP_HPP
#define ECSQB_SWEEP_HPP

// Parameter sweeps behind the region-partition maps and the bound-vs-photon
// curves, plus the CSV writer. Cells are evaluated on a worker pool and always
// returned in row-major order, so output is byte-identical for any worker
// count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ecsqb/bounds.hpp"
#include "ecsqb/errors.hpp"
#include "ecsqb/states.hpp"

namespace ecsqb {

inline constexpr const char* kWorkersEnv = "ECSQB_WORKERS";

/// Worker count from ECSQB_WORKERS, else hardware concurrency (at least 1).
inline unsigned worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// results[i] = fn(i) for i in [0, n), evaluated by `workers` threads. The
/// first exception thrown by any cell is rethrown on the caller.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn, unsigned workers = worker_count()) {
  using Result = decltype(fn(std::size_t{0}));
  std::vector<std::optional<Result>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  const unsigned pool = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (pool == 1) {
    run();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(pool);
    for (unsigned t = 0; t < pool; ++t) threads.emplace_back(run);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Result> out;
  out.reserve(n);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

/// 17 significant digits, enough to round-trip a double.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct SweepAxis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
};

/// Rows of pre-formatted CSV fields, one per cell, in row-major order.
struct SweepGrid {
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> cells;

  std::size_t expected_cells() const {
    return static_cast<std::size_t>(axis1.steps) * (axis2 ? static_cast<std::size_t>(axis2->steps) : 1u);
  }
};

inline void write_csv(std::ostream& out, const SweepGrid& grid) {
  auto write_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  write_row(grid.header);
  for (const auto& row : grid.cells) write_row(row);
}

struct RegionSweepConfig {
  int m = 1;
  int d_min = 1;
  int d_max = 100;
  double alpha_min = 0.0;
  double alpha_max = 4.0;
  int alpha_steps = 400;
};

/// alpha_i = lo + (hi - lo)(i + 1)/steps, i = 0..steps-1. The lower end is
/// excluded so alpha = 0 never appears.
inline double region_alpha(const RegionSweepConfig& cfg, int i) {
  return cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * (i + 1) / cfg.alpha_steps;
}

inline SweepGrid region_sweep(const RegionSweepConfig& cfg, unsigned workers = worker_count()) {
  if (cfg.m < 1) throw DomainError("region: m must be >= 1");
  if (cfg.d_min < 1 || cfg.d_max < cfg.d_min) throw DomainError("region: need 1 <= d_min <= d_max");
  if (!(cfg.alpha_min >= 0.0) || !(cfg.alpha_max > cfg.alpha_min))
    throw DomainError("region: need 0 <= alpha_min < alpha_max");
  if (cfg.alpha_steps < 1) throw DomainError("region: resolution must be >= 1");

  const int d_count = cfg.d_max - cfg.d_min + 1;
  SweepGrid grid{{"d", static_cast<double>(cfg.d_min), static_cast<double>(cfg.d_max), d_count},
                 SweepAxis{"alpha", cfg.alpha_min, cfg.alpha_max, cfg.alpha_steps},
                 {"d", "alpha", "m", "b_star", "sqrt_gamma", "interior"},
                 {}};
  const auto total = grid.expected_cells();
  grid.cells = parallel_map(
      total,
      [&cfg](std::size_t idx) {
        const int d = cfg.d_min + static_cast<int>(idx / static_cast<std::size_t>(cfg.alpha_steps));
        const double alpha = region_alpha(cfg, static_cast<int>(idx % static_cast<std::size_t>(cfg.alpha_steps)));
        const DomainGeometry geo = domain_geometry(d, cfg.m, alpha * alpha);
        return std::vector<std::string>{std::to_string(d), format_real(alpha), std::to_string(cfg.m),
                                        format_real(geo.b_star), format_real(std::sqrt(geo.gamma_cap)),
                                        geo.interior ? "1" : "0"};
      },
      workers);
  return grid;
}

struct CurveSweepConfig {
  int d = 5;
  double ntot_min = 1.0;
  double ntot_max = 100.0;
  int points = 991;
};

inline double curve_ntot(const CurveSweepConfig& cfg, int i) {
  if (cfg.points == 1) return cfg.ntot_min;
  return cfg.ntot_min + (cfg.ntot_max - cfg.ntot_min) * i / (cfg.points - 1);
}

/// Mean total photon number of the linear-protocol ECS at its optimal
/// admissible b, min(b_star, sqrt Gamma).
inline double optimal_ecs_mean_photons(int d, double alpha_sq) {
  const DomainGeometry geo = domain_geometry(d, 1, alpha_sq);
  const double b = std::min(geo.b_star, std::sqrt(geo.gamma_cap));
  return mean_total_photons({d, alpha_sq, b, solve_c(b, d, alpha_sq), 1});
}

/// ECS columns at alpha^2 = n_tot, NOON columns at N = n_tot.
inline SweepGrid curves_sweep(const CurveSweepConfig& cfg, unsigned workers = worker_count()) {
  if (cfg.d < 1) throw DomainError("curves: d must be >= 1");
  if (!(cfg.ntot_min >= 1.0) || cfg.ntot_max < cfg.ntot_min) throw DomainError("curves: need 1 <= ntot_min <= ntot_max");
  if (cfg.points < 1) throw DomainError("curves: points must be >= 1");
  SweepGrid grid{{"n_tot", cfg.ntot_min, cfg.ntot_max, cfg.points},
                 std::nullopt,
                 {"n_tot", "ecs_linear", "noon_linear", "ecs_nonlinear", "noon_nonlinear", "ecs_mean_photons_exact"},
                 {}};
  grid.cells = parallel_map(
      static_cast<std::size_t>(cfg.points),
      [&cfg](std::size_t i) {
        const double n = curve_ntot(cfg, static_cast<int>(i));
        return std::vector<std::string>{format_real(n),
                                        format_real(ecs_linear_closed_form(cfg.d, n)),
                                        format_real(qcrb_noon_linear(cfg.d, n).value),
                                        format_real(ecs_nonlinear_closed_form(cfg.d, n)),
                                        format_real(qcrb_noon_nonlinear(cfg.d, n).value),
                                        format_real(optimal_ecs_mean_photons(cfg.d, n))};
      },
      workers);
  return grid;
}

}  // namespace ecsqb

#endif  // ECSQB_SWEEP_HPP
