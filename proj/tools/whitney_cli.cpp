// whitney: command-line front end.
//
//   whitney verify      run the randomized property suites
//   whitney wave        march the wave integrator and write CSV/PLY/JSON
//   whitney export-ply  re-render a saved field CSV + mesh JSON as PLY
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 solver error.  WHITNEY_THREADS caps the verification parallelism.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "whitney/spacetime_mesh.hpp"
#include "whitney/verify.hpp"
#include "whitney/wave_integrator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("WHITNEY_THREADS")) {
    int requested = 0;
    auto r = std::from_chars(env, env + std::string_view(env).size(), requested);
    if (r.ec != std::errc() || requested < 1) {
      throw ConfigError("WHITNEY_THREADS must be a positive integer");
    }
    return std::min<unsigned>(requested, hw);
  }
  return static_cast<int>(hw);
}

// JSON config file: same keys as the long flags; explicit flags win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad config JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw ConfigError("unknown config key: " + key);
    }
    if (opt->count() > 0) continue;  // flags win
    if (value.is_array()) {
      for (const auto& item : value) {
        opt->add_result(item.is_string() ? item.get<std::string>()
                                         : item.dump());
      }
    } else {
      opt->add_result(value.is_string() ? value.get<std::string>()
                                        : value.dump());
    }
    opt->run_callback();
  }
}

whitney::verify::SignatureSet parse_signature(const std::string& name) {
  if (name == "euclid") return whitney::verify::SignatureSet::euclidean;
  if (name == "lorentz") return whitney::verify::SignatureSet::lorentzian;
  if (name == "both") return whitney::verify::SignatureSet::both;
  throw ConfigError("signature must be euclid, lorentz or both");
}

whitney::MeshStyle parse_style(const std::string& name) {
  if (name == "regular") return whitney::MeshStyle::regular;
  if (name == "lightcone") return whitney::MeshStyle::lightcone;
  throw ConfigError("style must be regular or lightcone");
}

struct WaveFlags {
  std::string style = "regular";
  int nodes = 30;
  int slices = 0;  // 0: derive from periods
  double dx = 1.0;
  double dt = 0.0;  // 0: 0.8 dx regular, dx lightcone
  double periods = 2.0;
  std::string out = "./out";
};

whitney::SpacetimeMesh build_mesh(const WaveFlags& flags) {
  whitney::MeshSpec spec;
  spec.style = parse_style(flags.style);
  spec.nodes_per_slice = flags.nodes;
  spec.dx = flags.dx;
  spec.dt = flags.dt > 0
                ? flags.dt
                : (spec.style == whitney::MeshStyle::lightcone ? flags.dx
                                                               : 0.8 * flags.dx);
  if (flags.slices > 0) {
    spec.num_slices = flags.slices;
  } else {
    if (flags.periods <= 0) throw ConfigError("periods must be positive");
    double circumference = (spec.style == whitney::MeshStyle::lightcone)
                               ? 2.0 * spec.nodes_per_slice * spec.dx
                               : spec.nodes_per_slice * spec.dx;
    spec.num_slices =
        static_cast<int>(std::lround(flags.periods * circumference / spec.dt)) +
        1;
  }
  return spec.style == whitney::MeshStyle::lightcone
             ? whitney::build_lightcone_mesh(spec)
             : whitney::build_cylinder_mesh(spec);
}

int run_verify(const whitney::verify::SuiteConfig& cfg) {
  auto results = whitney::verify::run_all(cfg);
  bool all_pass = true;
  std::printf("%-24s %10s %14s %12s  %s\n", "suite", "cases", "max residual",
              "tolerance", "result");
  for (const auto& r : results) {
    std::printf("%-24s %10ld %14.3e %12.1e  %s\n", r.name.c_str(), r.cases,
                r.max_residual, r.tolerance, r.pass() ? "pass" : "FAIL");
    all_pass = all_pass && r.pass();
  }
  if (!all_pass) {
    for (const auto& r : results) {
      if (!r.pass()) std::fprintf(stderr, "suite failed: %s\n", r.name.c_str());
    }
    return kExitVerifyFailure;
  }
  return kExitOk;
}

int run_wave(const WaveFlags& flags) {
  whitney::SpacetimeMesh mesh = build_mesh(flags);
  auto issues = whitney::validate(mesh);
  if (!issues.empty()) {
    for (const auto& issue : issues) std::cerr << "mesh: " << issue << '\n';
    throw ConfigError("mesh validation failed");
  }

  whitney::WaveOperator op(mesh);
  auto [s0, s1] = whitney::exact_initial_slices(mesh);
  whitney::DiscreteField field = op.march(s0, s1);

  std::filesystem::create_directories(flags.out);
  auto in_out = [&](const char* name) {
    return (std::filesystem::path(flags.out) / name).string();
  };
  whitney::save_mesh_json(mesh, in_out("mesh.json"));
  whitney::export_csv(field, mesh, in_out("field.csv"));
  whitney::Diagnostics diag = whitney::diagnostics(field, mesh);
  whitney::export_diagnostics_csv(diag, mesh, in_out("diagnostics.csv"));
  whitney::export_ply(mesh, field, in_out("field.ply"));

  double max_err = 0.0;
  const double L = mesh.circumference();
  for (int node = 0; node < mesh.num_nodes(); ++node) {
    max_err = std::max(max_err,
                       std::abs(field.values[node] -
                                whitney::exact_solution(mesh.node_x(node),
                                                        mesh.node_t(node), L)));
  }
  std::printf("final-slice l2 error: %.6e\n", diag.l2_error.back());
  std::printf("max nodal error:      %.6e\n", max_err);
  std::printf("outputs in %s: mesh.json field.csv diagnostics.csv field.ply\n",
              flags.out.c_str());
  return kExitOk;
}

int run_export_ply(const std::string& mesh_path, const std::string& field_path,
                   const std::string& out_path) {
  whitney::SpacetimeMesh mesh = whitney::load_mesh_json(mesh_path);
  whitney::DiscreteField field = whitney::load_field_csv(field_path, mesh);
  whitney::export_ply(mesh, field, out_path);
  std::printf("wrote %s (%d vertices, %zu faces)\n", out_path.c_str(),
              mesh.num_nodes(), mesh.triangles.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spacetime Whitney forms and a multisymplectic wave integrator"};
  app.require_subcommand(1);

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "run the randomized property suites");
  std::vector<int> dims{2, 3, 4};
  std::string signature = "both";
  std::uint64_t seed = 42;
  int trials = 100;
  std::string verify_config;
  verify_cmd->add_option("--dims", dims, "simplex dimensions to test");
  verify_cmd->add_option("--signature", signature, "euclid|lorentz|both");
  verify_cmd->add_option("--seed", seed, "random seed");
  verify_cmd->add_option("--trials", trials, "random simplices per suite");
  verify_cmd->add_option("--config", verify_config, "JSON config file");

  // wave
  auto* wave_cmd = app.add_subcommand("wave", "run the wave integrator");
  WaveFlags wave;
  std::string wave_config;
  wave_cmd->add_option("--style", wave.style, "regular|lightcone");
  wave_cmd->add_option("--nodes", wave.nodes, "nodes per spacelike slice");
  wave_cmd->add_option("--slices", wave.slices,
                       "number of slices (default: derived from --periods)");
  wave_cmd->add_option("--dx", wave.dx, "spatial step");
  wave_cmd->add_option("--dt", wave.dt,
                       "time step (default: 0.8 dx regular, dx lightcone)");
  wave_cmd->add_option("--periods", wave.periods, "periods to integrate");
  wave_cmd->add_option("--out", wave.out, "output directory");
  wave_cmd->add_option("--config", wave_config, "JSON config file");

  // export-ply
  auto* export_cmd =
      app.add_subcommand("export-ply", "render a saved field as PLY");
  std::string mesh_path, field_path, ply_out = "./out/field.ply";
  export_cmd->add_option("--mesh", mesh_path, "mesh JSON path")->required();
  export_cmd->add_option("--field", field_path, "field CSV path")->required();
  export_cmd->add_option("--out", ply_out, "output PLY path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (verify_cmd->parsed()) {
      if (!verify_config.empty()) apply_config_file(verify_cmd, verify_config);
      if (trials < 1) throw ConfigError("trials must be >= 1");
      if (dims.empty()) throw ConfigError("dims must not be empty");
      for (int n : dims) {
        if (n < 1 || n > whitney::kMaxDim) {
          throw ConfigError("dims entries must be within 1..6");
        }
      }
      whitney::verify::SuiteConfig cfg;
      cfg.dims = dims;
      cfg.signatures = parse_signature(signature);
      cfg.seed = seed;
      cfg.trials = trials;
      cfg.threads = thread_cap();
      return run_verify(cfg);
    }
    if (wave_cmd->parsed()) {
      if (!wave_config.empty()) apply_config_file(wave_cmd, wave_config);
      return run_wave(wave);
    }
    if (export_cmd->parsed()) {
      return run_export_ply(mesh_path, field_path, ply_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const whitney::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolverError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}
