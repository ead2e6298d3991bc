#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "certificate_io.hpp"
#include "manifest.hpp"
#include "scma/bounds.hpp"
#include "scma/codebook_io.hpp"
#include "scma/design.hpp"
#include "scma/errors.hpp"
#include "scma/med.hpp"
#include "scma/sim.hpp"

namespace scma::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Context {
  std::ostream& out;
  std::ostream& err;
  RunManifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void finish_timing() {
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct LoadedCodebook {
  CodebookCollection collection;
  std::string digest;
};

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON (") + e.what() + ")");
  }
}

// "bundled:appendix-c" names a shipped collection; anything else is a path.
LoadedCodebook load_codebook(const std::string& spec, Context& ctx) {
  fs::path path = spec;
  if (spec.rfind("bundled:", 0) == 0) path = bundled_codebook_path(spec.substr(8));
  const std::string text = read_file(path);
  LoadedCodebook cb{codebook_from_json(parse_json_text(text)), fnv1a_hex(text)};
  ctx.manifest.inputs.emplace_back(spec, cb.digest);
  return cb;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw ParameterError("failed writing '" + path.string() + "'");
}

std::function<void(const SolverEvent&)> solver_logger(std::ostream& err) {
  return [&err](const SolverEvent& e) {
    err << json{{"stage", e.stage},
                {"iteration", e.iteration},
                {"objective", e.objective},
                {"primal_residual", e.primal_residual},
                {"dual_residual", e.dual_residual},
                {"gap", e.gap},
                {"active", e.active_size}}
               .dump()
        << '\n';
  };
}

struct MedArgs {
  std::string codebook;
  std::string report;
  double tie_tol = 1e-12;
};

int cmd_med(const MedArgs& a, Context& ctx) {
  const auto cb = load_codebook(a.codebook, ctx);
  const auto& c = cb.collection;
  const auto s = med(c, a.tie_tol);
  ctx.manifest.config = {{"codebook", a.codebook}, {"tie_tol", a.tie_tol}};

  auto& out = ctx.out;
  out << std::setprecision(12);
  out << "d_min: " << s.d_min << '\n';
  out << "d_min_normalized: " << s.normalized_d_min << '\n';
  out << "symbol_energy: " << s.symbol_energy << '\n';
  for (int j = 1; j <= c.dims().users(); ++j) {
    out << "user_power[" << j << "]: " << c.user_power(j) << '\n';
  }
  out << "argmin_pairs: " << s.argmin_pairs.size() << '\n';
  if (!s.argmin_pairs.empty()) {
    out << "first_pair: " << s.argmin_pairs.front().first << ' ' << s.argmin_pairs.front().second
        << '\n';
  }

  if (!a.report.empty()) {
    json r;
    r["d_min"] = s.d_min;
    r["d_min_sq"] = s.d_min_sq;
    r["d_min_normalized"] = s.normalized_d_min;
    r["symbol_energy"] = s.symbol_energy;
    r["pair_count"] = s.pair_count;
    std::vector<double> powers;
    for (int j = 1; j <= c.dims().users(); ++j) powers.push_back(c.user_power(j));
    r["user_powers"] = powers;
    r["argmin_pair_count"] = s.argmin_pairs.size();
    auto& pairs = r["argmin_pairs"] = json::array();
    for (const auto& [k, l] : s.argmin_pairs) pairs.push_back({k, l});
    r["manifest"] = ctx.manifest.to_json(false);
    write_text(a.report, r.dump(2) + "\n");
    ctx.finish_timing();
    ctx.manifest.write_beside(a.report);
  }
  return kSuccess;
}

struct DesignArgs {
  int users = 0;
  std::string init;
  std::string schedule = "j3-default";
  std::string out;
  std::string trace;
  double power = 1.0;
  double jitter = 0.01;
  std::string backend = "auto";
  double penalty_tol = 1e-3;
  double rank_ratio = 1e-4;
  bool skip_dual_check = false;
  bool verbose = false;
};

json trace_to_json(const DesignTrace& trace, const WeightSchedule& schedule) {
  json j;
  j["status"] = trace.status;
  j["seed"] = trace.seed ? json(*trace.seed) : json(nullptr);
  j["initial_med"] = trace.initial_med;
  j["schedule"] = schedule.to_json();
  auto& its = j["iterations"] = json::array();
  for (const auto& it : trace.iterations) {
    its.push_back({{"phi", it.phi},
                   {"w1", it.w1},
                   {"w2", it.w2},
                   {"t1", it.t1},
                   {"t2", it.t2},
                   {"objective_after_first", it.objective_after_first},
                   {"objective_after_second", it.objective_after_second},
                   {"penalty_residual", it.penalty_residual},
                   {"sigma_ratio", it.sigma_ratio},
                   {"relative_difference", it.relative_difference},
                   {"active_pairs", it.active_pairs}});
  }
  return j;
}

WeightSchedule load_schedule(const std::string& spec, Context& ctx) {
  if (spec == "j3-default" || spec == "paper-j6") return WeightSchedule::preset(spec);
  const std::string text = read_file(spec);
  ctx.manifest.inputs.emplace_back(spec, fnv1a_hex(text));
  return WeightSchedule::from_json(parse_json_text(text));
}

int cmd_design(const DesignArgs& a, Context& ctx) {
  if (!(a.power > 0.0)) throw ParameterError("--power must be positive");
  const WeightSchedule schedule = load_schedule(a.schedule, ctx);
  schedule.validate();

  std::optional<CodebookCollection> init;
  std::optional<std::uint64_t> seed;
  if (a.init.rfind("random:", 0) == 0) {
    if (a.users < 1) throw ParameterError("--users is required with a random init");
    const std::string digits = a.init.substr(7);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw ParameterError("random init needs a nonnegative integer seed, e.g. random:7");
    }
    seed = std::stoull(digits);
    init = random_initial_collection(SystemDims::standard(a.users), a.power, *seed, a.jitter);
  } else {
    const auto cb = load_codebook(a.init, ctx);
    if (a.users > 0 && cb.collection.dims().users() != a.users) {
      throw ParameterError("--users " + std::to_string(a.users) + " but the init file has J = " +
                           std::to_string(cb.collection.dims().users()));
    }
    init = normalize_each_user(cb.collection, a.power);
  }
  const int users = init->dims().users();

  SolverConfig config;
  config.backend = parse_backend(a.backend);
  if (a.verbose) config.trace = solver_logger(ctx.err);
  DesignOptions options;
  options.penalty_tol = a.penalty_tol;
  options.rank_ratio = a.rank_ratio;
  options.check_weak_duality = !a.skip_dual_check;

  ctx.manifest.config = {{"users", users},
                         {"init", a.init},
                         {"init_jitter", a.jitter},
                         {"schedule", schedule.to_json()},
                         {"power", a.power},
                         {"backend", a.backend},
                         {"penalty_tol", a.penalty_tol},
                         {"rank_ratio", a.rank_ratio},
                         {"dual_check", options.check_weak_duality}};
  if (seed) ctx.manifest.seeds.push_back(*seed);
  const fs::path trace_path = a.trace.empty() ? fs::path(a.out + ".trace.json") : fs::path(a.trace);

  const QcqpInstance instance(init->dims(), a.power);
  try {
    DesignResult result = run_algorithm1(*init, schedule, instance, config, options);
    if (seed) result.trace.seed = seed;
    json doc = codebook_to_json(result.collection);
    doc["manifest"] = ctx.manifest.to_json(false);
    write_text(a.out, doc.dump(2) + "\n");
    write_text(trace_path, trace_to_json(result.trace, schedule).dump(2) + "\n");
    ctx.finish_timing();
    ctx.manifest.write_beside(a.out);

    ctx.out << std::setprecision(12);
    ctx.out << "status: " << result.trace.status << '\n';
    ctx.out << "iterations: " << result.trace.iterations.size() << '\n';
    ctx.out << "initial_med: " << result.trace.initial_med << '\n';
    ctx.out << "d_min: " << result.med.d_min << '\n';
    if (result.dual_bound) ctx.out << "dual_bound: " << *result.dual_bound << '\n';
    ctx.out << "sigma_ratio: " << (result.sigma1 > 0 ? result.sigma2 / result.sigma1 : 0.0) << '\n';
    return result.trace.status == "converged" ? kSuccess : kNotConverged;
  } catch (const DesignConvergenceError& e) {
    DesignTrace trace = e.trace();
    if (seed) trace.seed = seed;
    write_text(trace_path, trace_to_json(trace, schedule).dump(2) + "\n");
    ctx.finish_timing();
    ctx.manifest.write_beside(trace_path);
    ctx.err << "error: design did not converge: " << e.what() << " (trace: " << trace_path.string()
            << ")\n";
    return kNotConverged;
  }
}

struct BoundArgs {
  int users = 0;
  double power = 1.0;
  std::string out;
  bool verify = false;
  std::string check;
  std::string backend = "auto";
  bool verbose = false;
};

void print_check(std::ostream& out, const CertificateCheck& check) {
  out << "verify: " << (check.valid ? "pass" : "fail") << '\n';
  out << "verify_min_slack_eigenvalue: " << check.min_slack_eigenvalue << '\n';
  out << "verify_lambda_sum: " << check.lambda_sum << '\n';
  out << "verify_med_bound: " << std::sqrt(std::max(check.bound, 0.0)) << '\n';
}

bool bound_matches(const CertificateCheck& check, double stored_bound) {
  return std::abs(check.bound - stored_bound) <= 1e-9 * std::max(1.0, std::abs(stored_bound));
}

int cmd_bound(const BoundArgs& a, Context& ctx) {
  ctx.out << std::setprecision(12);
  if (!a.check.empty()) {
    const std::string text = read_file(a.check);
    ctx.manifest.inputs.emplace_back(a.check, fnv1a_hex(text));
    const StoredCertificate stored = certificate_from_json(parse_json_text(text));
    if (a.users > 0 && a.users != stored.users) {
      throw ParameterError("--users disagrees with the certificate file");
    }
    const QcqpInstance instance(SystemDims::standard(stored.users), stored.power);
    const auto check = verify_certificate(instance, stored.certificate);
    print_check(ctx.out, check);
    const bool ok = check.valid && bound_matches(check, stored.certificate.bound);
    if (!ok) ctx.err << "error: certificate is not dual feasible for its stated bound\n";
    return ok ? kSuccess : kUsageError;
  }

  if (a.users < 1) throw ParameterError("--users is required");
  if (!(a.power > 0.0)) throw ParameterError("--power must be positive");
  SolverConfig config;
  config.backend = parse_backend(a.backend);
  if (a.verbose) config.trace = solver_logger(ctx.err);
  ctx.manifest.config = {{"users", a.users}, {"power", a.power}, {"backend", a.backend}};

  const SystemDims dims = SystemDims::standard(a.users);
  const auto ub = compute_med_upper_bound(dims, a.power, config);
  ctx.out << "med_bound: " << ub.bound << '\n';
  ctx.out << "bound_sq: " << ub.certificate.bound << '\n';
  ctx.out << "status: " << to_string(ub.certificate.status) << '\n';
  ctx.out << "support_size: " << ub.support_size << '\n';
  ctx.out << "min_slack_eigenvalue: " << ub.certificate.min_slack_eigenvalue << '\n';

  StoredCertificate stored{a.users, a.power, ub.certificate};
  if (!a.out.empty()) {
    json doc = certificate_to_json(stored);
    doc["manifest"] = ctx.manifest.to_json(false);
    write_text(a.out, doc.dump(2) + "\n");
  }
  int code = ub.certificate.status == SolveStatus::optimal ? kSuccess : kSolverFailure;
  if (a.verify) {
    // Recheck what a reader of the file would see.
    if (!a.out.empty()) stored = certificate_from_json(parse_json_text(read_file(a.out)));
    const QcqpInstance instance(dims, a.power);
    const auto check = verify_certificate(instance, stored.certificate);
    print_check(ctx.out, check);
    if (!check.valid || !bound_matches(check, stored.certificate.bound)) code = kSolverFailure;
  }
  if (!a.out.empty()) {
    ctx.finish_timing();
    ctx.manifest.write_beside(a.out);
  }
  if (code == kSolverFailure) ctx.err << "error: dual certificate failed its checks\n";
  return code;
}

struct SimulateArgs {
  std::string codebook;
  std::string scenario = "awgn";
  std::string detector = "mpa";
  std::string ebn0;
  std::uint64_t seed = 1;
  double exclude = 0.0;
  int mpa_iters = 15;
  std::uint64_t min_errors = 400;
  std::uint64_t max_trials = 10'000'000;
  std::string events = "bit";
  std::vector<int> subcarriers;
  unsigned threads = 0;
  std::uint64_t chunk = 4096;
  std::string out;
  bool verbose = false;
};

void emit_curve(ErrorCurve& curve, const std::string& out_path, const LoadedCodebook& cb,
                Context& ctx) {
  curve.metadata.emplace_back("tool_version", tool_version());
  curve.metadata.emplace_back("codebook_fnv1a64", cb.digest);
  if (!out_path.empty()) {
    curve.metadata.emplace_back("manifest", fs::path(out_path).filename().string() + ".manifest.json");
  }
  std::ostringstream csv;
  write_csv(csv, curve);
  if (out_path.empty()) {
    ctx.out << csv.str();
    return;
  }
  write_text(out_path, csv.str());
  ctx.finish_timing();
  ctx.manifest.write_beside(out_path);
}

int cmd_simulate(const SimulateArgs& a, Context& ctx) {
  const auto cb = load_codebook(a.codebook, ctx);
  const auto& dims = cb.collection.dims();

  SimulationConfig config;
  config.scenario = parse_scenario(a.scenario);
  config.detector = parse_detector(a.detector);
  config.ebn0_db = parse_grid(a.ebn0);
  config.seed = a.seed;
  config.exclusion = a.exclude;
  config.mpa.iterations = a.mpa_iters;
  config.stop.min_errors = a.min_errors;
  config.stop.max_trials = a.max_trials;
  if (a.events != "bit" && a.events != "symbol") throw ParameterError("--events must be bit or symbol");
  config.stop.count_bit_errors = a.events == "bit";
  config.threads = a.threads;
  config.chunk_size = a.chunk;
  if (!a.subcarriers.empty()) {
    config.ofdm = OfdmConfig::separated(a.subcarriers);
  } else if (config.scenario == Scenario::downlink_separated) {
    if (dims.resources() != 4) throw ParameterError("dl-sep needs --subcarriers when K != 4");
    config.ofdm = OfdmConfig::separated({32, 96, 160, 224});
  } else {
    config.ofdm = OfdmConfig::consecutive(dims.resources());
  }

  ctx.manifest.config = {{"codebook", a.codebook},
                         {"scenario", to_string(config.scenario)},
                         {"detector", to_string(config.detector)},
                         {"ebn0_db", config.ebn0_db},
                         {"exclusion", a.exclude},
                         {"mpa_iterations", a.mpa_iters},
                         {"min_errors", a.min_errors},
                         {"max_trials", a.max_trials},
                         {"events", a.events},
                         {"subcarriers", config.ofdm.subcarriers},
                         {"fft_size", config.ofdm.fft_size},
                         {"cp_length", config.ofdm.cp_length},
                         {"taps", config.ofdm.taps},
                         {"chunk_size", a.chunk}};
  ctx.manifest.seeds.push_back(a.seed);

  ProgressFn progress;
  if (a.verbose) {
    progress = [&ctx](const ErrorPoint& p) {
      ctx.err << "ebn0 " << p.ebn0_db << " dB: trials " << p.trials << ", ser " << p.ser
              << ", ber " << p.ber << '\n';
    };
  }
  ErrorCurve curve = simulate(cb.collection, config, progress);
  curve.metadata.emplace_back("subcarriers", [&] {
    std::string s;
    for (int i : config.ofdm.subcarriers) s += (s.empty() ? "" : " ") + std::to_string(i);
    return s;
  }());
  emit_curve(curve, a.out, cb, ctx);
  return kSuccess;
}

struct PredictArgs {
  std::string codebook;
  std::string ebn0;
  std::string out;
};

int cmd_predict(const PredictArgs& a, Context& ctx) {
  const auto cb = load_codebook(a.codebook, ctx);
  const auto grid = parse_grid(a.ebn0);
  ctx.manifest.config = {{"codebook", a.codebook}, {"ebn0_db", grid}};
  ErrorCurve curve = predict_curves(cb.collection, grid);
  emit_curve(curve, a.out, cb, ctx);
  return kSuccess;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      throw ParameterError("bad number '" + s + "' in Eb/N0 grid '" + text + "'");
    }
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, sep);) parts.push_back(part);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
  };
  if (text.empty()) throw ParameterError("empty Eb/N0 grid");
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto p = split(text, ':');
    if (p.size() != 3) throw ParameterError("Eb/N0 range must be a:step:b, got '" + text + "'");
    const double a = number(p[0]);
    const double step = number(p[1]);
    const double b = number(p[2]);
    if (!(step > 0.0) || b < a) throw ParameterError("Eb/N0 range needs step > 0 and a <= b");
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    if (n > 10000) throw ParameterError("Eb/N0 range has too many points");
    for (long i = 0; i <= n; ++i) grid.push_back(a + static_cast<double>(i) * step);
    return grid;
  }
  for (const auto& part : split(text, ',')) grid.push_back(number(part));
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SCMA codebook design and evaluation", "scma"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  MedArgs med_args;
  auto* med_cmd = app.add_subcommand("med", "Minimum Euclidean distance of a codebook collection");
  med_cmd->add_option("codebook", med_args.codebook, "codebook JSON, or bundled:appendix-b|c")
      ->required();
  med_cmd->add_option("--json", med_args.report, "also write a JSON report");
  med_cmd->add_option("--tie-tol", med_args.tie_tol, "relative tolerance for argmin ties");

  DesignArgs design_args;
  auto* design_cmd = app.add_subcommand("design", "Alternating-maximization codebook design");
  design_cmd->add_option("--users", design_args.users, "number of users J");
  design_cmd->add_option("--init", design_args.init, "random:SEED or a codebook JSON")->required();
  design_cmd->add_option("--schedule", design_args.schedule,
                         "j3-default, paper-j6 or a schedule JSON file");
  design_cmd->add_option("--out", design_args.out, "output codebook JSON")->required();
  design_cmd->add_option("--trace", design_args.trace, "trace JSON (default OUT.trace.json)");
  design_cmd->add_option("--power", design_args.power, "per-user power budget P");
  design_cmd->add_option("--init-jitter", design_args.jitter,
                         "std of the imaginary jitter added to random inits");
  design_cmd->add_option("--backend", design_args.backend, "SDP backend: auto, ipm, admm");
  design_cmd->add_option("--penalty-tol", design_args.penalty_tol, "stop when the penalty residual is below this");
  design_cmd->add_option("--rank-ratio", design_args.rank_ratio, "max sigma2/sigma1 for rank-one extraction");
  design_cmd->add_flag("--no-dual-check", design_args.skip_dual_check,
                       "skip the weak-duality check against the dual bound");
  design_cmd->add_flag("--verbose", design_args.verbose, "solver trace as JSON lines on stderr");

  BoundArgs bound_args;
  auto* bound_cmd = app.add_subcommand("bound", "Lagrange-dual upper bound on the MED");
  bound_cmd->add_option("--users", bound_args.users, "number of users J");
  bound_cmd->add_option("--power", bound_args.power, "per-user power budget P");
  bound_cmd->add_option("--out", bound_args.out, "write the dual certificate JSON");
  bound_cmd->add_flag("--verify", bound_args.verify, "re-verify the produced certificate");
  bound_cmd->add_option("--check", bound_args.check, "verify an existing certificate file and exit");
  bound_cmd->add_option("--backend", bound_args.backend, "SDP backend: auto, ipm, admm");
  bound_cmd->add_flag("--verbose", bound_args.verbose, "solver trace as JSON lines on stderr");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo SER/BER curve");
  sim_cmd->add_option("--codebook", sim_args.codebook, "codebook JSON, or bundled:appendix-b|c")
      ->required();
  sim_cmd->add_option("--scenario", sim_args.scenario, "awgn, dl, dl-sep, ul");
  sim_cmd->add_option("--detector", sim_args.detector, "map, marginal, mpa");
  sim_cmd->add_option("--ebn0", sim_args.ebn0, "Eb/N0 grid in dB: a:step:b, a,b,c or a")->required();
  sim_cmd->add_option("--seed", sim_args.seed, "RNG seed");
  sim_cmd->add_option("--exclude-poorest", sim_args.exclude, "fraction of poorest channels dropped");
  sim_cmd->add_option("--mpa-iters", sim_args.mpa_iters, "message passing iterations");
  sim_cmd->add_option("--min-errors", sim_args.min_errors, "stop after this many error events (0: off)");
  sim_cmd->add_option("--max-trials", sim_args.max_trials, "cap on blocks per point (0: off)");
  sim_cmd->add_option("--events", sim_args.events, "error events for the stop rule: bit or symbol");
  sim_cmd->add_option("--subcarriers", sim_args.subcarriers, "explicit one-based subcarrier indices")
      ->delimiter(',');
  sim_cmd->add_option("--threads", sim_args.threads, "worker cap (0: all cores)");
  sim_cmd->add_option("--chunk", sim_args.chunk, "blocks per RNG chunk");
  sim_cmd->add_option("--out", sim_args.out, "CSV path (default stdout)");
  sim_cmd->add_flag("--verbose", sim_args.verbose, "per-point progress on stderr");

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "Union-bound SER/BER curve");
  predict_cmd->add_option("--codebook", predict_args.codebook, "codebook JSON, or bundled:appendix-b|c")
      ->required();
  predict_cmd->add_option("--ebn0", predict_args.ebn0, "Eb/N0 grid in dB")->required();
  predict_cmd->add_option("--out", predict_args.out, "CSV path (default stdout)");

  std::vector<std::string> argv_store{"scma"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
  }

  Context ctx{out, err, {}};
  ctx.manifest.arguments = args;
  ctx.manifest.started_at = utc_timestamp();
  try {
    if (med_cmd->parsed()) {
      ctx.manifest.command = "med";
      return cmd_med(med_args, ctx);
    }
    if (design_cmd->parsed()) {
      ctx.manifest.command = "design";
      return cmd_design(design_args, ctx);
    }
    if (bound_cmd->parsed()) {
      ctx.manifest.command = "bound";
      return cmd_bound(bound_args, ctx);
    }
    if (sim_cmd->parsed()) {
      ctx.manifest.command = "simulate";
      return cmd_simulate(sim_args, ctx);
    }
    ctx.manifest.command = "predict";
    return cmd_predict(predict_args, ctx);
  } catch (const SchemaError& e) {
    // An empty pointer is the document root.
    err << "error: invalid input at " << (e.path().empty() ? "document root" : "") << e.what() << '\n';
    return kUsageError;
  } catch (const SolverError& e) {
    err << "error: solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DegenerateInputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON content: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: internal failure: " << e.what() << '\n';
    return kSolverFailure;
  }
}

}  // namespace scma::cli
