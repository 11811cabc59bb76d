// Command-line front end: single bounds, region-partition maps, bound-vs-photon
// curves, and the verification suites.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or domain error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecsqb/ecsqb.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct Output {
  std::string path;
  std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, Output& out, const std::string& default_format) {
  out.format = default_format;
  cmd->add_option("--out", out.path, "Output file (default: standard output)");
  cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

/// Writes through `fn` to the requested file or to stdout.
template <class Fn>
void emit(const Output& out, Fn fn) {
  if (out.path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream file(out.path, std::ios::binary);
  if (!file) throw ecsqb::Error("cannot open output file '" + out.path + "' for writing");
  fn(file);
  file.flush();
  if (!file) throw ecsqb::Error("failed writing output file '" + out.path + "'");
}

json to_json(const ecsqb::BoundReport& r) {
  json params{{"d", r.params.d}};
  if (r.params.m) params["m"] = *r.params.m;
  if (r.params.alpha_sq) params["alpha_sq"] = *r.params.alpha_sq;
  if (r.params.photon_number) params["N"] = *r.params.photon_number;
  if (r.params.n_tot) params["n_tot"] = *r.params.n_tot;
  if (r.params.b) params["b"] = *r.params.b;
  return {{"kind", ecsqb::to_string(r.kind)},
          {"value", r.value},
          {"regime", ecsqb::to_string(r.regime)},
          {"params", params}};
}

void write_bound_csv(std::ostream& os, const ecsqb::BoundReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? ecsqb::format_real(*v) : std::string{}; };
  os << "kind,value,regime,d,m,alpha_sq,N,n_tot,b\n";
  os << ecsqb::to_string(r.kind) << ',' << ecsqb::format_real(r.value) << ',' << ecsqb::to_string(r.regime) << ','
     << r.params.d << ',' << (r.params.m ? std::to_string(*r.params.m) : "") << ',' << opt(r.params.alpha_sq) << ','
     << opt(r.params.photon_number) << ',' << opt(r.params.n_tot) << ',' << opt(r.params.b) << '\n';
}

void write_grid(std::ostream& os, const ecsqb::SweepGrid& grid, const std::string& format) {
  if (format == "csv") {
    ecsqb::write_csv(os, grid);
    return;
  }
  json rows = json::array();
  for (const auto& cells : grid.cells) {
    json row = json::object();
    for (std::size_t i = 0; i < cells.size(); ++i) row[grid.header[i]] = std::stod(cells[i]);
    rows.push_back(std::move(row));
  }
  os << rows.dump() << '\n';
}

struct BoundsArgs {
  std::string family;
  int d = 0;
  std::optional<double> alpha;
  std::optional<double> alpha_sq;
  std::optional<double> photon_number;
  std::optional<double> n_tot;
  std::optional<double> b;
  int m = 1;
  double lambda = ecsqb::kZivZakaiLambda;
  Output out;
};

double require(const std::optional<double>& v, const char* flag, const std::string& family) {
  if (!v) throw CLI::ValidationError(flag, "required by --family " + family);
  return *v;
}

double alpha_sq_of(const BoundsArgs& a) {
  if (a.alpha && a.alpha_sq) throw CLI::ValidationError("--alpha", "give either --alpha or --alpha-sq, not both");
  if (a.alpha) return *a.alpha * *a.alpha;
  return require(a.alpha_sq, "--alpha", a.family);
}

ecsqb::BoundReport compute_bound(const BoundsArgs& a) {
  using namespace ecsqb;
  const std::string& f = a.family;
  if (f == "ecs-linear") return qcrb_ecs_linear(a.d, alpha_sq_of(a));
  if (f == "ecs-nonlinear") return qcrb_ecs_nonlinear(a.d, alpha_sq_of(a));
  if (f == "ecs-optimal") return minimize_bound_over_b(a.d, a.m, alpha_sq_of(a));
  if (f == "ecs-at-b") {
    const EcsParams p = make_ecs(a.d, alpha_sq_of(a), require(a.b, "--b", f), a.m);
    return {trace_inverse_bound(p), BoundKind::GeneralEcsAtB, Regime::NotApplicable, {p.d, p.m, p.alpha_sq, {}, {}, p.b}};
  }
  if (f == "noon-linear") return qcrb_noon_linear(a.d, require(a.photon_number, "--N", f));
  if (f == "noon-nonlinear") return qcrb_noon_nonlinear(a.d, require(a.photon_number, "--N", f));
  if (f == "independent-ecs") {
    if (a.n_tot) return independent_ecs_vs_ntot(a.d, *a.n_tot);
    return qcrb_independent_ecs(a.d, alpha_sq_of(a));
  }
  if (f == "independent-noon") return qcrb_independent_noon(a.d, require(a.n_tot, "--ntot", f));
  if (f == "zzb-ecs") return zzb_ecs(a.d, alpha_sq_of(a), a.lambda);
  if (f == "zzb-noon") return zzb_noon(a.d, require(a.photon_number, "--N", f), a.lambda);
  throw CLI::ValidationError("--family", "unknown family " + f);
}

int run(int argc, char** argv) {
  CLI::App app{"Precision bounds for multiparameter phase estimation with generalized ECS and NOON states"};
  app.require_subcommand(1);

  BoundsArgs bounds;
  auto* cmd_bounds = app.add_subcommand("bounds", "Evaluate a single bound and print it");
  cmd_bounds->add_option("--family", bounds.family, "Bound family")
      ->required()
      ->check(CLI::IsMember({"ecs-linear", "ecs-nonlinear", "ecs-optimal", "ecs-at-b", "noon-linear", "noon-nonlinear",
                             "independent-ecs", "independent-noon", "zzb-ecs", "zzb-noon"}));
  cmd_bounds->add_option("--d", bounds.d, "Number of estimated phases")->required();
  cmd_bounds->add_option("--alpha", bounds.alpha, "Coherent amplitude |alpha|");
  cmd_bounds->add_option("--alpha-sq", bounds.alpha_sq, "Mean photon number |alpha|^2 of the coherent branch");
  cmd_bounds->add_option("--N", bounds.photon_number, "NOON photon number");
  cmd_bounds->add_option("--ntot", bounds.n_tot, "Total mean photon number (independent baselines)");
  cmd_bounds->add_option("--m", bounds.m, "Generator order, H_j = (a_j^dag a_j)^m");
  cmd_bounds->add_option("--b", bounds.b, "Branch coefficient b (ecs-at-b)");
  cmd_bounds->add_option("--lambda", bounds.lambda, "Ziv-Zakai constant");
  add_output_flags(cmd_bounds, bounds.out, "json");

  ecsqb::RegionSweepConfig region;
  Output region_out;
  auto* cmd_region = app.add_subcommand("region", "Region partition: is b_star inside the admissible b domain");
  cmd_region->add_option("--m", region.m, "Generator order");
  cmd_region->add_option("--d-min", region.d_min, "Smallest d");
  cmd_region->add_option("--d-max", region.d_max, "Largest d");
  cmd_region->add_option("--alpha-min", region.alpha_min, "Lower alpha limit (excluded)");
  cmd_region->add_option("--alpha-max", region.alpha_max, "Upper alpha limit (included)");
  cmd_region->add_option("--resolution", region.alpha_steps, "Number of alpha cells");
  add_output_flags(cmd_region, region_out, "csv");

  ecsqb::CurveSweepConfig curves;
  Output curves_out;
  auto* cmd_curves = app.add_subcommand("curves", "Linear and nonlinear ECS/NOON bounds vs total photon number");
  cmd_curves->add_option("--d", curves.d, "Number of estimated phases");
  cmd_curves->add_option("--ntot-min", curves.ntot_min, "Smallest total photon number");
  cmd_curves->add_option("--ntot-max", curves.ntot_max, "Largest total photon number");
  cmd_curves->add_option("--points", curves.points, "Number of evenly spaced points");
  add_output_flags(cmd_curves, curves_out, "csv");

  std::string suite = "all";
  std::uint64_t seed = 1;
  std::vector<std::string> overrides;
  Output verify_out;
  auto* cmd_verify = app.add_subcommand("verify", "Run a cross-verification suite");
  cmd_verify->add_option("--suite", suite, "Suite to run")->check(CLI::IsMember(ecsqb::verify::suite_names()));
  cmd_verify->add_option("--seed", seed, "Seed for randomized draws");
  cmd_verify->add_option("--tol", overrides, "Tolerance override, CHECK=VALUE (repeatable)");
  add_output_flags(cmd_verify, verify_out, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cmd_bounds) {
      const ecsqb::BoundReport report = compute_bound(bounds);
      emit(bounds.out, [&](std::ostream& os) {
        if (bounds.out.format == "json")
          os << to_json(report).dump() << '\n';
        else
          write_bound_csv(os, report);
      });
      return kExitOk;
    }
    if (*cmd_region) {
      const auto grid = ecsqb::region_sweep(region);
      emit(region_out, [&](std::ostream& os) { write_grid(os, grid, region_out.format); });
      return kExitOk;
    }
    if (*cmd_curves) {
      const auto grid = ecsqb::curves_sweep(curves);
      emit(curves_out, [&](std::ostream& os) { write_grid(os, grid, curves_out.format); });
      return kExitOk;
    }
    if (*cmd_verify) {
      ecsqb::verify::Options opt;
      opt.seed = seed;
      for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--tol", "expected CHECK=VALUE, got " + item);
        opt.tolerance_overrides[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
      }
      const auto results = ecsqb::verify::run_suite(suite, opt);
      bool all_passed = true;
      emit(verify_out, [&](std::ostream& os) {
        if (verify_out.format == "json") {
          json arr = json::array();
          for (const auto& r : results)
            arr.push_back({{"check", r.name}, {"passed", r.passed}, {"max_discrepancy", r.max_discrepancy},
                           {"tolerance", r.tolerance}, {"detail", r.detail}});
          os << arr.dump(2) << '\n';
        } else {
          os << "status,check,max_discrepancy,tolerance,detail\n";
          for (const auto& r : results)
            os << (r.passed ? "PASS" : "FAIL") << ',' << r.name << ',' << ecsqb::format_real(r.max_discrepancy) << ','
               << ecsqb::format_real(r.tolerance) << ",\"" << r.detail << "\"\n";
        }
      });
      for (const auto& r : results) all_passed = all_passed && r.passed;
      return all_passed ? kExitOk : kExitVerifyFailed;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ecsqb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid number: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
