// sso: generate, solve, and score nonnegative-orthogonal programs from the
// command line. Results are machine-readable (JSON/CSV); formats are
// documented in the README.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "sso/matrix_io.hpp"
#include "sso/metrics.hpp"
#include "sso/objectives.hpp"
#include "sso/problems.hpp"
#include "sso/solver.hpp"
#include "sso/stationarity.hpp"

namespace {

using nlohmann::json;
using namespace sso;

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenRowMajor>;

struct SolveFlags {
  std::string problem;
  std::string input;
  int p = 0;
  std::string init = "random";
  double delta = 0.1;
  double theta = 1e-2;
  double tol = 1e-6;
  int max_iters = 1000;
  std::uint64_t seed = 0;
  double fixed_eta = 0.0;
  bool has_fixed_eta = false;
  std::string out;
  std::string trace;
};

DenseMatrix gram_aat(const DenseMatrix& a) {
  DenseMatrix g(a.rows(), a.rows());
  Eigen::Map<EigenRowMajor>(g.data(), g.rows(), g.cols()) =
      ConstMap(a.data(), a.rows(), a.cols()) *
      ConstMap(a.data(), a.rows(), a.cols()).transpose();
  return g;
}

DenseMatrix gram_ata(const DenseMatrix& a) {
  DenseMatrix g(a.cols(), a.cols());
  Eigen::Map<EigenRowMajor>(g.data(), g.rows(), g.cols()) =
      ConstMap(a.data(), a.rows(), a.cols()).transpose() *
      ConstMap(a.data(), a.rows(), a.cols());
  return g;
}

std::unique_ptr<Objective> make_objective(const std::string& problem,
                                          const DenseMatrix& a, int p) {
  if (problem == "npca") return std::make_unique<NpcaObjective>(a, p);
  if (problem == "onmf") {
    const bool gram = a.cols() >= 2 * a.rows();  // cheap cache when n << m
    return std::make_unique<OnmfObjective>(a, p, gram);
  }
  if (problem == "community") return std::make_unique<CommunityObjective>(a, p);
  if (problem == "linear") return std::make_unique<LinearObjective>(a);
  throw Error(ErrorCode::InvalidOptions, "unknown problem '" + problem + "'");
}

SupportMatrix make_init(const SolveFlags& flags, const std::string& problem,
                        const DenseMatrix& a, int n, int p) {
  if (flags.init == "random") return gen_random_feasible(n, p, flags.seed);
  if (flags.init == "spectral") {
    if (problem == "npca") return spectral_init(gram_ata(a), p);
    if (problem == "onmf") return spectral_init(gram_aat(a), p);
    if (problem == "community") return spectral_init(a, p);
    throw Error(ErrorCode::InvalidOptions,
                "spectral init is not defined for the linear problem");
  }
  SupportMatrix x = load_support(flags.init);
  if (x.rows() != n || x.cols() != p) {
    throw Error(ErrorCode::ShapeMismatch, "initial point file has the wrong shape");
  }
  validate(x);
  return x;
}

json result_to_json(const std::string& problem, const SolveResult& res,
                    double wall_ms) {
  json support = json::array();
  json values = json::array();
  for (int i = 0; i < res.x_final.rows(); ++i) {
    if (res.x_final.has_entry(i)) {
      support.push_back({i, res.x_final.col(i)});
      values.push_back(res.x_final.value(i));
    }
  }
  return json{
      {"problem", problem},
      {"n", res.x_final.rows()},
      {"p", res.x_final.cols()},
      {"f_final", res.f_final},
      {"iterations", res.iterations},
      {"status", res.status == SolveStatus::kConverged ? "converged" : "max_iters"},
      {"wall_ms", wall_ms},
      {"residuals",
       {{"supp", res.residuals.supp_residual}, {"zrow", res.residuals.zrow_residual}}},
      {"support", support},
      {"values", values},
  };
}

SupportMatrix point_from_result(const json& j) {
  const int n = j.at("n").get<int>();
  const int p = j.at("p").get<int>();
  std::vector<std::int32_t> cols(n, -1);
  std::vector<double> vals(n, 0.0);
  const auto& support = j.at("support");
  const auto& values = j.at("values");
  for (std::size_t k = 0; k < support.size(); ++k) {
    const int i = support[k][0].get<int>();
    cols[i] = support[k][1].get<std::int32_t>();
    vals[i] = values[k].get<double>();
  }
  return SupportMatrix(n, p, std::move(cols), std::move(vals));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_trace_csv(const std::string& path, const SolveTrace& trace) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "k,f,step_y,step_x,eta,branch,r_k,support_changes\n";
  char buf[128];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%s,%d,%d\n", r.k,
                  r.f_value, r.step_y, r.step_x, r.eta,
                  r.branch == Branch::kKeptSupport ? "kept-support" : "relocation",
                  r.r_k, r.support_changes);
    out << buf;
  }
}

int run_gen(int n, int m, int p, std::uint64_t seed, const std::string& out_dir) {
  PlantedNpca inst = gen_planted_npca(n, m, p, seed);
  std::filesystem::create_directories(out_dir);
  save_matrix_market(out_dir + "/A.mtx", inst.a);
  save_support(out_dir + "/x_opt.txt", inst.x_opt);
  json meta{{"f_opt", inst.f_opt}, {"n", n}, {"m", m}, {"p", p}, {"seed", seed}};
  std::ofstream fout(out_dir + "/f_opt.json");
  if (!fout) throw Error(ErrorCode::IoError, "cannot write " + out_dir + "/f_opt.json");
  fout << meta.dump(2) << "\n";
  std::cout << "wrote " << out_dir << "/A.mtx, x_opt.txt, f_opt.json\n";
  return 0;
}

int run_solve(const SolveFlags& flags) {
  DenseMatrix a = load_matrix_auto(flags.input);

  int p = flags.p;
  if (flags.problem == "linear") {
    if (p == 0) p = a.cols();
    if (p != a.cols()) {
      throw Error(ErrorCode::ShapeMismatch, "--p disagrees with the matrix width");
    }
  } else if (p <= 0) {
    throw Error(ErrorCode::InvalidOptions, "--p is required");
  }
  const int n = flags.problem == "npca" ? a.cols() : a.rows();

  std::unique_ptr<Objective> obj = make_objective(flags.problem, a, p);
  SupportMatrix x0 = make_init(flags, flags.problem, a, n, p);

  SolverOptions opts;
  opts.delta = flags.delta;
  opts.theta = flags.theta;
  opts.tol = flags.tol;
  opts.max_iters = flags.max_iters;
  opts.seed = flags.seed;
  if (flags.has_fixed_eta) opts.fixed_eta = flags.fixed_eta;

  const auto t0 = std::chrono::steady_clock::now();
  SolveResult res = solve(*obj, x0, opts);
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();

  std::ofstream out(flags.out);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + flags.out);
  out << result_to_json(flags.problem, res, wall_ms).dump(2) << "\n";
  if (!flags.trace.empty()) write_trace_csv(flags.trace, res.trace);

  std::cout << "status=" << (res.status == SolveStatus::kConverged ? "converged"
                                                                   : "max_iters")
            << " f=" << res.f_final << " iters=" << res.iterations << "\n";
  return res.status == SolveStatus::kConverged ? 0 : 2;
}

int run_metrics_cluster(const std::string& pred_path, const std::string& truth_path,
                        int p, const std::string& out_path) {
  const json pred_json = read_json_file(pred_path);
  SupportMatrix x = point_from_result(pred_json);
  ClusterAssignment pred = labels_from(x);

  std::vector<int> raw = load_labels_csv(truth_path);
  if (static_cast<int>(raw.size()) != x.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "label count does not match the solution");
  }
  ClusterAssignment truth;
  truth.labels.assign(raw.begin(), raw.end());
  for (int& l : truth.labels) {
    if (l < 0) l = kUnassigned;
  }

  json out{{"entropy", entropy(pred, truth, p)},
           {"purity", purity(pred, truth, p)},
           {"nmi", nmi(pred, truth, p)},
           {"accuracy", accuracy(pred, truth, p)}};
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + out_path);
    f << out.dump(2) << "\n";
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_metrics_npca(const std::string& result_path, const std::string& opt_path,
                     const std::string& xopt_path, const std::string& out_path) {
  const json res = read_json_file(result_path);
  const json opt = read_json_file(opt_path);
  SupportMatrix x = point_from_result(res);
  SupportMatrix x_opt = load_support(xopt_path);

  json out{{"relative_gap",
            relative_gap(res.at("f_final").get<double>(), opt.at("f_opt").get<double>())},
           {"subspace_distance", subspace_distance(x, x_opt)}};
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + out_path);
    f << out.dump(2) << "\n";
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct BenchRow {
  int n, m, p;
  std::uint64_t seed;
  double time_ms;
  double rel_gap;
  double subspace;
  int iterations;
};

int run_bench(const std::string& config_path, const std::string& out_path) {
  const json cfg = read_json_file(config_path);
  const std::string problem = cfg.value("problem", std::string("npca"));
  if (problem != "npca") {
    throw Error(ErrorCode::InvalidOptions,
                "bench drives the planted-npca pipeline; got '" + problem + "'");
  }

  std::vector<std::uint64_t> seeds;
  if (cfg.contains("seeds") && cfg["seeds"].is_array()) {
    for (const auto& s : cfg["seeds"]) seeds.push_back(s.get<std::uint64_t>());
  } else {
    const int count = cfg.value("seeds", 5);
    for (int s = 0; s < count; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  }

  SolverOptions opts;
  if (cfg.contains("solver")) {
    const json& s = cfg["solver"];
    opts.delta = s.value("delta", opts.delta);
    opts.theta = s.value("theta", opts.theta);
    opts.tol = s.value("tol", opts.tol);
    opts.max_iters = s.value("max_iters", opts.max_iters);
    if (s.contains("fixed_eta")) opts.fixed_eta = s["fixed_eta"].get<double>();
  }

  struct Job {
    int n, m, p;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& size : cfg.at("sizes")) {
    const int n = size.at("n").get<int>();
    const int m = size.at("m").get<int>();
    const int p = size.at("p").get<int>();
    for (std::uint64_t s : seeds) jobs.push_back({n, m, p, s});
  }

  int threads = 1;
  if (const char* env = std::getenv("SSO_THREADS")) {
    threads = std::max(1, std::atoi(env));
  }
  threads = std::min<int>(threads, static_cast<int>(jobs.size()));

  std::vector<BenchRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job& job = jobs[k];
      PlantedNpca inst = gen_planted_npca(job.n, job.m, job.p, job.seed);
      NpcaObjective obj(inst.a, job.p);
      SupportMatrix x0 =
          gen_random_feasible(job.n, job.p, job.seed ^ 0x9e3779b97f4a7c15ULL);
      const auto t0 = std::chrono::steady_clock::now();
      SolveResult res = solve(obj, x0, opts);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      rows[k] = {job.n,
                 job.m,
                 job.p,
                 job.seed,
                 ms,
                 relative_gap(res.f_final, inst.f_opt),
                 subspace_distance(res.x_final, inst.x_opt),
                 res.iterations};
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::ofstream out(out_path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + out_path);
  out << "n,m,p,seed,time_ms,relative_gap,subspace_distance,iterations\n";
  char buf[160];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%llu,%.3f,%.12g,%.12g,%d\n", r.n, r.m,
                  r.p, static_cast<unsigned long long>(r.seed), r.time_ms, r.rel_gap,
                  r.subspace, r.iterations);
    out << buf;
  }
  std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"support-set solver for orthogonal nonnegative programs"};
  app.require_subcommand(1);

  // gen
  CLI::App* gen = app.add_subcommand("gen", "generate synthetic instances");
  gen->require_subcommand(1);
  CLI::App* gen_npca = gen->add_subcommand("npca", "planted nonnegative-PCA instance");
  int gn = 0, gm = 0, gp = 0;
  std::uint64_t gseed = 0;
  std::string gout;
  gen_npca->add_option("--n", gn, "ambient dimension")->required();
  gen_npca->add_option("--m", gm, "number of data rows")->required();
  gen_npca->add_option("--p", gp, "number of columns")->required();
  gen_npca->add_option("--seed", gseed, "generator seed");
  gen_npca->add_option("--out", gout, "output directory")->required();

  // solve
  SolveFlags sf;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run the support-set solver");
  solve_cmd->add_option("--problem", sf.problem, "npca|onmf|community|linear")
      ->required();
  solve_cmd->add_option("--input", sf.input, "data matrix (.mtx/.mm or .csv)")
      ->required();
  solve_cmd->add_option("--p", sf.p, "number of columns");
  solve_cmd->add_option("--init", sf.init, "spectral|random|FILE (default random)");
  solve_cmd->add_option("--delta", sf.delta, "small-row threshold");
  solve_cmd->add_option("--theta", sf.theta, "keep-support gate");
  solve_cmd->add_option("--tol", sf.tol, "step-norm stopping tolerance");
  solve_cmd->add_option("--max-iters", sf.max_iters, "iteration budget");
  solve_cmd->add_option("--seed", sf.seed, "seed for random initialization");
  CLI::Option* fe = solve_cmd->add_option("--fixed-eta", sf.fixed_eta,
                                          "constant proximal parameter (disables BB)");
  solve_cmd->add_option("--out", sf.out, "result JSON path")->required();
  solve_cmd->add_option("--trace", sf.trace, "per-iteration trace CSV path");

  // metrics
  CLI::App* metrics_cmd = app.add_subcommand("metrics", "score solver output");
  metrics_cmd->require_subcommand(1);
  CLI::App* mc = metrics_cmd->add_subcommand("cluster", "clustering quality");
  std::string mc_pred, mc_truth, mc_out;
  int mc_p = 0;
  mc->add_option("--pred", mc_pred, "result JSON from solve")->required();
  mc->add_option("--truth", mc_truth, "ground-truth labels CSV")->required();
  mc->add_option("--p", mc_p, "number of clusters")->required();
  mc->add_option("--out", mc_out, "optional JSON output path");
  CLI::App* mn = metrics_cmd->add_subcommand("npca", "distance to a planted optimum");
  std::string mn_result, mn_opt, mn_xopt, mn_out;
  mn->add_option("--result", mn_result, "result JSON from solve")->required();
  mn->add_option("--opt", mn_opt, "f_opt JSON sidecar")->required();
  mn->add_option("--xopt", mn_xopt, "planted point support-list file")->required();
  mn->add_option("--out", mn_out, "optional JSON output path");

  // bench
  CLI::App* bench_cmd = app.add_subcommand("bench", "gen->solve->metrics sweeps");
  std::string bc_config, bc_out;
  bench_cmd->add_option("--config", bc_config, "bench config JSON")->required();
  bench_cmd->add_option("--out", bc_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen_npca->parsed()) return run_gen(gn, gm, gp, gseed, gout);
    if (solve_cmd->parsed()) {
      sf.has_fixed_eta = fe->count() > 0;
      return run_solve(sf);
    }
    if (mc->parsed()) return run_metrics_cluster(mc_pred, mc_truth, mc_p, mc_out);
    if (mn->parsed()) return run_metrics_npca(mn_result, mn_opt, mn_xopt, mn_out);
    if (bench_cmd->parsed()) return run_bench(bc_config, bc_out);
  } catch (const sso::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
