#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "neoclust/neoclust.hpp"

namespace neoclust::cli {
namespace {

struct Options {
  std::string data;
  bool header = false;
  std::string kernel = "linear";
  std::string graph;
  double shift = 0.0;
  std::string truth;

  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::string method = "palm";
  std::vector<std::string> methods{"alm", "palm", "admm", "sadmm"};
  double tol = 1e-3;
  double kkt_tol = 0.0;
  int max_outer = 300;
  std::optional<double> sigma0;
  std::optional<double> tau;
  std::uint64_t seed = 0;
  int restarts = 1;
  int trials = 1;
  int threads = 1;

  std::string out_path;
  std::string trace_path;
  std::string trace_dir = ".";
  std::string metrics_path;
};

// Problem rows map to output ids through `ids` (0-based, written 1-based).
struct Instance {
  KernelProblem problem;
  std::vector<Index> ids;
  std::optional<ClusterList> truth;
};

struct Trial {
  int index = 0;
  std::uint64_t seed = 0;
  std::string method;
  PipelineResult result;
  std::optional<double> f1;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f.imbue(std::locale::classic());
  return f;
}

ClusterList map_truth(const ClusterList& truth, const std::vector<Index>& ids,
                      Index n_original) {
  std::vector<Index> row_of(static_cast<std::size_t>(n_original), -1);
  for (std::size_t r = 0; r < ids.size(); ++r) row_of[ids[r]] = static_cast<Index>(r);
  ClusterList mapped;
  for (const auto& c : truth) {
    std::vector<Index> m;
    for (Index id : c) {
      if (id < 0 || id >= n_original)
        throw std::runtime_error("truth file refers to point " +
                                 std::to_string(id + 1) + " outside the input");
      if (row_of[id] >= 0) m.push_back(row_of[id]);
    }
    mapped.push_back(std::move(m));
  }
  return mapped;
}

Instance load_instance(const Options& o) {
  if (!o.data.empty() == !o.graph.empty())
    throw std::invalid_argument("give exactly one of --data or --graph");

  std::optional<ClusterList> truth;
  if (!o.truth.empty()) truth = io::read_clusters(o.truth);

  if (!o.data.empty()) {
    const MatrixXd X = io::read_features(o.data, o.header);
    KernelProblem p = kernel_from_data(X, KernelSpec::parse(o.kernel), o.k,
                                       o.alpha, o.beta);
    std::vector<Index> ids(static_cast<std::size_t>(X.rows()));
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<Index>(i);
    if (truth) truth = map_truth(*truth, ids, X.rows());
    return {std::move(p), std::move(ids), std::move(truth)};
  }

  const Graph g = io::read_edge_list(o.graph);
  GraphKernel gk = kernel_from_graph(g, o.k, o.alpha, o.beta, o.shift);
  if (truth) truth = map_truth(*truth, gk.kept, g.n());
  return {std::move(gk.problem), std::move(gk.kept), std::move(truth)};
}

PipelineOptions pipeline_options(const Options& o, const std::string& method,
                                 std::uint64_t seed) {
  PipelineOptions po;
  if (method != "iterative") po.method = parse_method(method);
  po.solver.tol_infeas = o.tol;
  po.solver.tol_kkt = o.kkt_tol;
  po.solver.max_outer = o.max_outer;
  po.solver.sigma0 = o.sigma0;
  po.solver.tau = o.tau;
  po.iterative.seed = seed;
  po.restarts = o.restarts;
  return po;
}

// Trials run on a small worker pool; each owns its result slot, so the output
// does not depend on scheduling.
std::vector<Trial> run_trials(const Instance& inst, const Options& o,
                              const std::string& method) {
  std::vector<Trial> trials(static_cast<std::size_t>(o.trials));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(trials.size());

  auto worker = [&] {
    for (int t = next++; t < o.trials; t = next++) {
      try {
        Trial& tr = trials[t];
        tr.index = t;
        tr.seed = o.seed + static_cast<std::uint64_t>(t);
        tr.method = method;
        tr.result = run_pipeline(inst.problem, pipeline_options(o, method, tr.seed));
        if (inst.truth) tr.f1 = f1_score(tr.result.clustering.clusters(), *inst.truth);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };

  const int n_threads = std::clamp(o.threads, 1, o.trials);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return trials;
}

const char* kMetricsHeader =
    "trial,seed,method,status,n,k,alpha,beta,warm_objective,neo_objective,"
    "sdp_objective,infeasibility,outer_iterations,inner_evals,warm_seconds,"
    "solve_seconds,total_assignments,unassigned,f1";

std::string metrics_row(const Instance& inst, const Trial& t) {
  const auto& r = t.result;
  const auto& p = inst.problem;
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << t.index << ',' << t.seed << ',' << t.method << ',' << r.status << ','
    << p.n() << ',' << p.k() << ',' << num(p.alpha()) << ',' << num(p.beta())
    << ',' << num(r.warm_objective) << ',' << num(r.neo_objective) << ',';
  if (r.solve) {
    const TraceRow& last = r.solve->trace.back();
    s << num(last.objective) << ',' << num(last.infeasibility) << ','
      << r.solve->outer_iterations << ',' << r.solve->inner_evals;
  } else {
    s << ",,,";
  }
  s << ',' << num(r.warm_seconds) << ',' << num(r.solve_seconds) << ','
    << r.clustering.total_assignments() << ',' << r.clustering.unassigned()
    << ',';
  if (t.f1) s << num(*t.f1);
  return s.str();
}

void print_block(std::ostream& out, const Instance& inst, const Trial& t) {
  const auto& r = t.result;
  const auto& p = inst.problem;
  out << "method: " << t.method << '\n'
      << "status: " << r.status << '\n'
      << "n: " << p.n() << '\n'
      << "k: " << p.k() << '\n'
      << "alpha: " << num(p.alpha()) << '\n'
      << "beta: " << num(p.beta()) << '\n'
      << "seed: " << t.seed << '\n'
      << "warm_objective: " << num(r.warm_objective) << '\n'
      << "neo_objective: " << num(r.neo_objective) << '\n';
  if (r.solve) {
    const TraceRow& last = r.solve->trace.back();
    out << "sdp_objective: " << num(last.objective) << '\n'
        << "infeasibility: " << num(last.infeasibility) << '\n'
        << "outer_iterations: " << r.solve->outer_iterations << '\n'
        << "inner_evals: " << r.solve->inner_evals << '\n';
  }
  out << "warm_seconds: " << num(r.warm_seconds) << '\n'
      << "solve_seconds: " << num(r.solve_seconds) << '\n'
      << "total_assignments: " << r.clustering.total_assignments() << '\n'
      << "unassigned: " << r.clustering.unassigned() << '\n';
  if (t.f1) out << "f1: " << num(*t.f1) << '\n';
}

void print_summary(std::ostream& out, const std::vector<Trial>& trials) {
  auto line = [&](const char* name, auto get) {
    std::vector<double> v;
    for (const auto& t : trials) {
      const std::optional<double> x = get(t);
      if (x) v.push_back(*x);
    }
    if (v.empty()) return;
    const Quartiles q = quartiles(v);
    out << std::left << std::setw(16) << name << ' ' << num(q.min) << ' '
        << num(q.q1) << ' ' << num(q.median) << ' ' << num(q.q3) << ' '
        << num(q.max) << '\n';
  };
  out << "# summary over " << trials.size() << " trials: min q1 median q3 max\n";
  line("neo_objective", [](const Trial& t) { return std::optional(t.result.neo_objective); });
  line("warm_objective", [](const Trial& t) { return std::optional(t.result.warm_objective); });
  line("solve_seconds", [](const Trial& t) { return std::optional(t.result.solve_seconds); });
  line("f1", [](const Trial& t) { return t.f1; });
}

void write_trace(const std::string& path, const SolverTrace& trace) {
  std::ofstream f = open_output(path);
  f << "iter,wall_seconds,sdp_objective,infeasibility_inf,sigma,inner_evals\n";
  for (const TraceRow& r : trace)
    f << r.iter << ',' << num(r.wall_seconds) << ',' << num(r.objective) << ','
      << num(r.infeasibility) << ',' << num(r.sigma) << ',' << r.inner_evals
      << '\n';
}

void write_assignment(const std::string& path, const Instance& inst,
                      const DiscreteClustering& c) {
  ClusterList clusters = c.clusters();
  for (auto& cl : clusters)
    for (Index& i : cl) i = inst.ids[static_cast<std::size_t>(i)];
  io::write_clusters(path, clusters);
}

// Lowest NEO objective, ties to the earlier trial.
const Trial& best_trial(const std::vector<Trial>& trials) {
  return *std::min_element(trials.begin(), trials.end(), [](const Trial& a, const Trial& b) {
    return a.result.neo_objective < b.result.neo_objective;
  });
}

int run_single(const Options& o, std::ostream& out) {
  if (!o.trace_path.empty() && o.method == "iterative")
    throw std::invalid_argument("--trace needs a solver method");
  const Instance inst = load_instance(o);
  const std::vector<Trial> trials = run_trials(inst, o, o.method);

  if (trials.size() == 1) {
    print_block(out, inst, trials.front());
  } else {
    out << kMetricsHeader << '\n';
    for (const Trial& t : trials) out << metrics_row(inst, t) << '\n';
    print_summary(out, trials);
  }
  const Trial& chosen = best_trial(trials);
  if (!o.out_path.empty()) write_assignment(o.out_path, inst, chosen.result.clustering);
  if (!o.trace_path.empty()) write_trace(o.trace_path, chosen.result.solve->trace);
  if (!o.metrics_path.empty()) {
    std::ofstream f = open_output(o.metrics_path);
    f << kMetricsHeader << '\n';
    for (const Trial& t : trials) f << metrics_row(inst, t) << '\n';
  }
  return 0;
}

// First outer iteration whose infeasibility is within tol, or -1.
int iterations_to_tol(const SolverTrace& trace, double tol) {
  for (const TraceRow& r : trace)
    if (r.iter > 0 && r.infeasibility <= tol) return r.iter;
  return -1;
}

int run_race(Options o, std::ostream& out) {
  for (const auto& m : o.methods) parse_method(m);
  o.trials = 1;
  const Instance inst = load_instance(o);
  std::filesystem::create_directories(o.trace_dir);

  std::vector<Trial> rows;
  out << "method status outer to_tol sdp_objective infeasibility seconds\n";
  for (const auto& m : o.methods) {
    Trial t = run_trials(inst, o, m).front();
    const SolveResult& s = *t.result.solve;
    write_trace((std::filesystem::path(o.trace_dir) / ("trace_" + m + ".csv")).string(),
                s.trace);
    out << m << ' ' << t.result.status << ' ' << s.outer_iterations << ' '
        << iterations_to_tol(s.trace, o.tol) << ' ' << num(s.trace.back().objective)
        << ' ' << num(s.trace.back().infeasibility) << ' ' << num(s.wall_seconds)
        << '\n';
    rows.push_back(std::move(t));
  }
  if (!o.metrics_path.empty()) {
    std::ofstream f = open_output(o.metrics_path);
    f << kMetricsHeader << '\n';
    for (const Trial& t : rows) f << metrics_row(inst, t) << '\n';
  }
  return 0;
}

void add_model_options(CLI::App* app, Options& o) {
  app->add_option("--k", o.k, "Number of clusters")->required()->check(CLI::PositiveNumber);
  app->add_option("--alpha", o.alpha, "Overlap: total assignments are (1 + alpha) n")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app->add_option("--beta", o.beta, "At most beta n points stay unassigned")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app->add_option("--truth", o.truth, "Ground-truth clusters, one per line, 1-based ids");
  app->add_option("--tol", o.tol, "Infeasibility tolerance")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--kkt-tol", o.kkt_tol, "Optional stationarity tolerance (0 = off)")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  app->add_option("--max-outer", o.max_outer, "Outer iteration limit")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--sigma0", o.sigma0, "Initial penalty (default: scaled to the kernel)")
      ->check(CLI::PositiveNumber);
  app->add_option("--tau", o.tau, "PALM proximal parameter (default: follows sigma)")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "Seed of the iterative warm start")->capture_default_str();
  app->add_option("--restarts", o.restarts, "Warm-start restarts")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--metrics", o.metrics_path, "Write metrics CSV here");
}

// Either --data or --graph; checked when loading.
void add_input_options(CLI::App* app, Options& o) {
  app->add_option("--data", o.data, "Feature table, one point per row");
  app->add_flag("--header", o.header, "Skip the first line of --data");
  app->add_option("--kernel", o.kernel, "linear or gaussian:H")->capture_default_str();
  app->add_option("--graph", o.graph, "Edge list 'u v [w]', 1-based");
  app->add_option("--shift", o.shift, "Diagonal shift for the graph kernel")
      ->capture_default_str();
}

void add_run_options(CLI::App* app, Options& o) {
  app->add_option("--method", o.method, "Solver")
      ->capture_default_str()
      ->check(CLI::IsMember({"iterative", "alm", "palm", "admm", "sadmm"}));
  app->add_option("--trials", o.trials, "Independent seeded runs (seed, seed+1, ...)")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--threads", o.threads, "Worker threads for trials")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--out", o.out_path, "Write clusters here (best trial)");
  app->add_option("--trace", o.trace_path, "Write the solver trace CSV here (best trial)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Non-exhaustive, overlapping clustering via low-rank SDP"};
  app.name("neoclust");
  app.require_subcommand(1);

  auto* cluster = app.add_subcommand("cluster", "Cluster feature vectors");
  cluster->add_option("--data", o.data, "Feature table, one point per row")->required();
  cluster->add_flag("--header", o.header, "Skip the first line of --data");
  cluster->add_option("--kernel", o.kernel, "linear or gaussian:H")->capture_default_str();
  add_model_options(cluster, o);
  add_run_options(cluster, o);

  auto* community = app.add_subcommand("community", "Overlapping communities of a graph");
  community->add_option("--graph", o.graph, "Edge list 'u v [w]', 1-based")->required();
  community->add_option("--shift", o.shift, "Diagonal shift for the graph kernel")
      ->capture_default_str();
  add_model_options(community, o);
  add_run_options(community, o);

  auto* race = app.add_subcommand("race", "Run several solvers from one warm start");
  add_input_options(race, o);
  add_model_options(race, o);
  race->add_option("--methods", o.methods, "Comma separated solvers")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"alm", "palm", "admm", "sadmm"}));
  race->add_option("--trace-dir", o.trace_dir, "Directory for trace_<method>.csv")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (race->parsed()) return run_race(o, out);
    return run_single(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace neoclust::cli
