#include "commands.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>

#include "pgl/pgl.hpp"
#include "report.hpp"

namespace pglearn {

namespace {

using pgl::Index;
using Clock = std::chrono::steady_clock;

void require(bool ok, const std::string& message) {
  if (!ok) throw pgl::ConfigError(message);
}

struct CommonOpts {
  std::string out;
  bool timing = false;
};

void add_common(CLI::App& sub, CommonOpts& o) {
  sub.add_option("--out", o.out, "Output directory (default: $PGLEARN_OUTPUT_DIR or .)");
  sub.add_flag("--timing", o.timing, "Record wall time in the report");
}

struct SolverOpts {
  double rho = 0.0051;
  double tol = 1e-6;
  int max_iter = 100000;
  int stall_window = 10000;

  pgl::SolverConfig config() const {
    pgl::SolverConfig c;
    c.rho = rho;
    c.tol = tol;
    c.max_iter = max_iter;
    c.stall_window = stall_window;
    c.validate();
    return c;
  }
};

void add_solver(CLI::App& sub, SolverOpts& o, double default_rho) {
  o.rho = default_rho;
  sub.add_option("--rho", o.rho, "Dual ascent step size; 0 selects one from the constraint spectrum")
      ->capture_default_str();
  sub.add_option("--tol", o.tol, "Feasibility tolerance of the inner QP")->capture_default_str();
  sub.add_option("--max-iter", o.max_iter, "Inner QP iteration cap")->capture_default_str();
  sub.add_option("--stall-window", o.stall_window, "Iterations without progress before stalling")
      ->capture_default_str();
}

pgl::CovarianceScaling parse_scaling(const std::string& s) {
  if (s == "sum") return pgl::CovarianceScaling::kSum;
  if (s == "unit-diagonal") return pgl::CovarianceScaling::kUnitDiagonal;
  throw pgl::ConfigError("scaling must be 'sum' or 'unit-diagonal', got '" + s + "'");
}

Json qp_report(const pgl::QpSolution& s) {
  return {{"status", pgl::to_string(s.status())},
          {"iterations", s.iterations()},
          {"feasibility_residual", round12(s.feas_residual())},
          {"rho", round12(s.rho())}};
}

Json components_report(const pgl::ComponentReport& c) {
  Json j = {{"count", c.count}, {"spectral_count", c.spectral_count}, {"consistent", c.consistent()}};
  if (!c.diagnostic.empty()) j["diagnostic"] = c.diagnostic;
  return j;
}

Json trace_report(const pgl::AlternationTrace& t) {
  return {{"error", round12(t.error)},
          {"objective", round12(t.objective)},
          {"outer_iterations", t.outer_iterations},
          {"converged", t.converged},
          {"inner_converged", t.inner_converged}};
}

Json graph_summary(const pgl::GraphLaplacian& L) {
  return {{"nodes", L.n()},
          {"edges", pgl::edges_of(L.dense()).size()},
          {"trace", round12(L.trace())}};
}

// Collects output files and writes the report.
class Run {
 public:
  Run(const CLI::App& sub, const CommonOpts& common, std::string mode = {})
      : sub_(sub), common_(common), start_(Clock::now()) {
    dir_ = resolve_output_dir(common.out);
    report_["command"] = sub.get_name();
    if (!mode.empty()) report_["mode"] = mode;
    report_["config"] = echo_config(sub);
  }

  std::string path(const std::string& name) {
    outputs_.push_back(name);
    return (std::filesystem::path(dir_) / name).string();
  }

  Json& results() { return report_["results"]; }

  int finish(bool converged) {
    report_["converged"] = converged;
    report_["outputs"] = outputs_;
    if (common_.timing)
      report_["wall_time_seconds"] =
          std::chrono::duration<double>(Clock::now() - start_).count();
    const std::string file = (std::filesystem::path(dir_) / "report.json").string();
    write_json(file, report_);
    std::cout << file << "\n";
    if (!converged) {
      std::cerr << "pglearn " << sub_.get_name() << ": solver did not converge\n";
      return kExitNotConverged;
    }
    return kExitOk;
  }

 private:
  const CLI::App& sub_;
  const CommonOpts& common_;
  Clock::time_point start_;
  std::string dir_;
  Json report_;
  std::vector<std::string> outputs_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Runner add_simulate(CLI::App& sub) {
  struct Opts {
    CommonOpts common;
    long long P = 0, Q = 0, KP = 0, KQ = 0, T = 1000;
    double p_in = 1.0, p_out = 0.02, weight_lo = 0.1, weight_hi = 1.0, sigma2 = 0.0;
    double train_fraction = 0.0;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->common);
  sub.add_option("--P", o->P, "Nodes of the first factor");
  sub.add_option("--Q", o->Q, "Nodes of the second factor");
  sub.add_option("--KP", o->KP, "Communities of the first factor (0: max(1, P/5))")->capture_default_str();
  sub.add_option("--KQ", o->KQ, "Communities of the second factor (0: max(1, Q/5))")->capture_default_str();
  sub.add_option("--p-in", o->p_in, "Edge probability within a community")->capture_default_str();
  sub.add_option("--p-out", o->p_out, "Edge probability across communities")->capture_default_str();
  sub.add_option("--weight-lo", o->weight_lo, "Lower edge weight")->capture_default_str();
  sub.add_option("--weight-hi", o->weight_hi, "Upper edge weight")->capture_default_str();
  sub.add_option("--T", o->T, "Number of snapshots")->capture_default_str();
  sub.add_option("--sigma2", o->sigma2, "Noise variance")->capture_default_str();
  sub.add_option("--train-fraction", o->train_fraction,
                 "Write train/test masks with this training fraction (0: no masks)")
      ->capture_default_str();
  sub.add_option("--seed", o->seed, "Random seed")->capture_default_str();

  return [o, &sub] {
    require(o->P > 0 && o->Q > 0, "--P and --Q must be positive");
    require(o->T > 0, "--T must be positive");
    require(o->train_fraction >= 0.0 && o->train_fraction < 1.0, "--train-fraction must lie in [0, 1)");
    const auto blocks = [](long long n, long long k) {
      return static_cast<int>(k > 0 ? k : std::max(1LL, n / 5));
    };
    pgl::CommunityGraphSpec sp;
    sp.p_in = o->p_in;
    sp.p_out = o->p_out;
    sp.weight_lo = o->weight_lo;
    sp.weight_hi = o->weight_hi;
    pgl::CommunityGraphSpec sq = sp;
    sp.n = o->P;
    sp.k = blocks(o->P, o->KP);
    sp.seed = derive_seed(o->seed, 0);
    sq.n = o->Q;
    sq.k = blocks(o->Q, o->KQ);
    sq.seed = derive_seed(o->seed, 1);

    Run run(sub, o->common);
    const pgl::PlantedGraph gp = pgl::random_community_graph(sp);
    const pgl::PlantedGraph gq = pgl::random_community_graph(sq);
    const pgl::GraphLaplacian L_N = pgl::kron_sum(gp.L, gq.L);
    const pgl::MultiDomainData data =
        pgl::generate_smooth_signals(gp.L, gq.L, o->T, o->sigma2, derive_seed(o->seed, 2));

    pgl::io::write_laplacian(run.path("L_P.tsv"), gp.L);
    pgl::io::write_laplacian(run.path("L_Q.tsv"), gq.L);
    pgl::io::write_laplacian(run.path("product.tsv"), L_N);
    pgl::io::write_data_csv(run.path("data.csv"), data);
    pgl::io::write_labels_csv(run.path("labels_P.csv"), gp.blocks);
    pgl::io::write_labels_csv(run.path("labels_Q.csv"), gq.blocks);
    pgl::io::write_labels_csv(run.path("labels_N.csv"), pgl::product_labels(gp.blocks, gq.blocks));

    Json& r = run.results();
    r["L_P"] = graph_summary(gp.L);
    r["L_Q"] = graph_summary(gq.L);
    r["K_P"] = gp.blocks.k;
    r["K_Q"] = gq.blocks.k;
    r["snapshots"] = data.T();
    if (o->train_fraction > 0.0) {
      const pgl::MaskedData masked = pgl::apply_mask(data, o->train_fraction, derive_seed(o->seed, 3));
      pgl::io::write_mask_csv(run.path("train_mask.csv"), masked.train);
      pgl::io::write_mask_csv(run.path("test_mask.csv"), masked.test);
      r["mask_degenerate"] = masked.degenerate;
    }
    return run.finish(true);
  };
}

Runner add_learn(CLI::App& sub) {
  struct Opts {
    CommonOpts common;
    SolverOpts solver;
    std::string mode = "pgl", data, scaling = "unit-diagonal";
    long long P = 0, Q = 0, KP = 1, KQ = 1;
    double beta1 = 0.2, beta2 = 0.3, beta = 0.2, gamma1 = 0.5, gamma2 = 0.7, outer_tol = 1e-6;
    int max_outer = 100;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->common);
  add_solver(sub, o->solver, 0.0051);
  sub.add_option("--mode", o->mode, "pgl, rpgl, or gl (single graph on the product nodes)")
      ->capture_default_str();
  sub.add_option("--data", o->data, "Data CSV: one row per product node, one column per snapshot");
  sub.add_option("--P", o->P, "Nodes of the first factor");
  sub.add_option("--Q", o->Q, "Nodes of the second factor");
  sub.add_option("--scaling", o->scaling, "Covariance scaling: sum or unit-diagonal")->capture_default_str();
  sub.add_option("--beta1", o->beta1, "Frobenius weight of the first factor")->capture_default_str();
  sub.add_option("--beta2", o->beta2, "Frobenius weight of the second factor")->capture_default_str();
  sub.add_option("--beta", o->beta, "Frobenius weight of the single graph (gl)")->capture_default_str();
  sub.add_option("--gamma1", o->gamma1, "Rank penalty of the first factor (rpgl)")->capture_default_str();
  sub.add_option("--gamma2", o->gamma2, "Rank penalty of the second factor (rpgl)")->capture_default_str();
  sub.add_option("--KP", o->KP, "Components of the first factor (rpgl)")->capture_default_str();
  sub.add_option("--KQ", o->KQ, "Components of the second factor (rpgl)")->capture_default_str();
  sub.add_option("--max-outer", o->max_outer, "Outer iteration cap (rpgl)")->capture_default_str();
  sub.add_option("--outer-tol", o->outer_tol, "Outer tolerance on the iterate error (rpgl)")
      ->capture_default_str();

  return [o, &sub] {
    require(o->mode == "pgl" || o->mode == "rpgl" || o->mode == "gl",
            "--mode must be pgl, rpgl or gl");
    require(!o->data.empty(), "--data is required");
    require(o->P > 0 && o->Q > 0, "--P and --Q must be positive");
    const pgl::CovarianceScaling scaling = parse_scaling(o->scaling);
    const pgl::SolverConfig solver = o->solver.config();
    const pgl::MultiDomainData data = pgl::io::read_data_csv(o->data, o->P, o->Q);

    Run run(sub, o->common, o->mode);
    Json& r = run.results();
    if (o->mode == "gl") {
      const Eigen::MatrixXd X = data.stacked();
      const Eigen::MatrixXd S = pgl::scale_covariance(X * X.transpose(), scaling);
      const pgl::FactorSolve fit = pgl::learn_single_graph(S, o->beta, solver);
      pgl::io::write_laplacian(run.path("product.tsv"), fit.L);
      r["L_N"] = graph_summary(fit.L);
      r["solver"] = qp_report(fit.solution);
      return run.finish(fit.solution.converged());
    }

    pgl::PglConfig pc;
    pc.beta1 = o->beta1;
    pc.beta2 = o->beta2;
    pc.solver = solver;
    pc.scaling = scaling;
    if (o->mode == "pgl") {
      const pgl::PglResult fit = pgl::learn_product_graph(data, pc);
      pgl::io::write_laplacian(run.path("L_P.tsv"), fit.L_P);
      pgl::io::write_laplacian(run.path("L_Q.tsv"), fit.L_Q);
      r["L_P"] = graph_summary(fit.L_P);
      r["L_Q"] = graph_summary(fit.L_Q);
      r["solver_P"] = qp_report(fit.solution_P);
      r["solver_Q"] = qp_report(fit.solution_Q);
      r["objective"] = round12(fit.objective);
      return run.finish(fit.converged());
    }

    pgl::RpglConfig rc;
    rc.pgl = pc;
    rc.gamma1 = o->gamma1;
    rc.gamma2 = o->gamma2;
    rc.K_P = o->KP;
    rc.K_Q = o->KQ;
    rc.max_outer = o->max_outer;
    rc.outer_tol = o->outer_tol;
    const pgl::RpglResult fit = pgl::learn_rank_constrained(data, rc);
    pgl::io::write_laplacian(run.path("L_P.tsv"), fit.L_P);
    pgl::io::write_laplacian(run.path("L_Q.tsv"), fit.L_Q);
    pgl::io::write_matrix_csv(run.path("V_P.csv"), fit.embedding.V_P);
    pgl::io::write_matrix_csv(run.path("V_Q.csv"), fit.embedding.V_Q);
    r["L_P"] = graph_summary(fit.L_P);
    r["L_Q"] = graph_summary(fit.L_Q);
    r["components_P"] = components_report(fit.components_P);
    r["components_Q"] = components_report(fit.components_Q);
    r["trace"] = trace_report(fit.trace);
    return run.finish(fit.trace.converged && fit.trace.inner_converged);
  };
}

Runner add_factorize(CLI::App& sub) {
  struct Opts {
    CommonOpts common;
    SolverOpts solver;
    std::string mode = "kron", laplacian;
    long long P = 0, Q = 0, KP = 1, KQ = 1;
    double gamma1 = 10.0, gamma2 = 10.0, outer_tol = 1e-6;
    int max_outer = 200;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->common);
  add_solver(sub, o->solver, 0.0);
  sub.add_option("--mode", o->mode, "kron or rkron")->capture_default_str();
  sub.add_option("--laplacian", o->laplacian, "Symmetric N x N matrix (edge list or dense CSV)");
  sub.add_option("--P", o->P, "Nodes of the first factor");
  sub.add_option("--Q", o->Q, "Nodes of the second factor");
  sub.add_option("--gamma1", o->gamma1, "Rank penalty of the first factor (rkron)")->capture_default_str();
  sub.add_option("--gamma2", o->gamma2, "Rank penalty of the second factor (rkron)")->capture_default_str();
  sub.add_option("--KP", o->KP, "Components of the first factor (rkron)")->capture_default_str();
  sub.add_option("--KQ", o->KQ, "Components of the second factor (rkron)")->capture_default_str();
  sub.add_option("--max-outer", o->max_outer, "Outer iteration cap (rkron)")->capture_default_str();
  sub.add_option("--outer-tol", o->outer_tol, "Outer tolerance on the iterate error (rkron)")
      ->capture_default_str();

  return [o, &sub] {
    require(o->mode == "kron" || o->mode == "rkron", "--mode must be kron or rkron");
    require(!o->laplacian.empty(), "--laplacian is required");
    require(o->P > 0 && o->Q > 0, "--P and --Q must be positive");
    const pgl::SolverConfig solver = o->solver.config();
    const Eigen::MatrixXd L_N = pgl::io::read_square_matrix(o->laplacian);
    if (L_N.rows() != o->P * o->Q)
      throw pgl::DimensionError("matrix has " + std::to_string(L_N.rows()) + " rows but P*Q = " +
                                std::to_string(o->P * o->Q));

    Run run(sub, o->common, o->mode);
    Json& r = run.results();
    if (o->mode == "kron") {
      const pgl::KronFactResult fit = pgl::factorize(L_N, o->P, o->Q, solver);
      pgl::io::write_laplacian(run.path("L_P.tsv"), fit.L_P);
      pgl::io::write_laplacian(run.path("L_Q.tsv"), fit.L_Q);
      r["L_P"] = graph_summary(fit.L_P);
      r["L_Q"] = graph_summary(fit.L_Q);
      r["solver_P"] = qp_report(fit.solution_P);
      r["solver_Q"] = qp_report(fit.solution_Q);
      r["objective"] = round12(fit.objective);
      return run.finish(fit.converged());
    }

    pgl::RKronFactConfig rc;
    rc.K_P = o->KP;
    rc.K_Q = o->KQ;
    rc.gamma1 = o->gamma1;
    rc.gamma2 = o->gamma2;
    rc.solver = solver;
    rc.max_outer = o->max_outer;
    rc.outer_tol = o->outer_tol;
    const pgl::RKronFactResult fit = pgl::factorize_rank_constrained(L_N, o->P, o->Q, rc);
    pgl::io::write_laplacian(run.path("L_P.tsv"), fit.L_P);
    pgl::io::write_laplacian(run.path("L_Q.tsv"), fit.L_Q);
    pgl::io::write_matrix_csv(run.path("V_P.csv"), fit.embedding.V_P);
    pgl::io::write_matrix_csv(run.path("V_Q.csv"), fit.embedding.V_Q);
    r["L_P"] = graph_summary(fit.L_P);
    r["L_Q"] = graph_summary(fit.L_Q);
    r["components_P"] = components_report(fit.components_P);
    r["components_Q"] = components_report(fit.components_Q);
    r["trace"] = trace_report(fit.trace);
    return run.finish(fit.trace.converged && fit.trace.inner_converged);
  };
}

Runner add_cluster(CLI::App& sub) {
  struct Opts {
    CommonOpts common;
    std::string laplacian_p, laplacian_q, labels_true;
    long long KP = 1, KQ = 1;
    int restarts = 10;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->common);
  sub.add_option("--laplacian-p", o->laplacian_p, "Laplacian of the first factor");
  sub.add_option("--laplacian-q", o->laplacian_q, "Laplacian of the second factor");
  sub.add_option("--KP", o->KP, "Clusters of the first factor")->capture_default_str();
  sub.add_option("--KQ", o->KQ, "Clusters of the second factor")->capture_default_str();
  sub.add_option("--restarts", o->restarts, "k-means restarts")->capture_default_str();
  sub.add_option("--seed", o->seed, "k-means seed")->capture_default_str();
  sub.add_option("--labels-true", o->labels_true, "Product labels to score the result against (NMI)");

  return [o, &sub] {
    require(!o->laplacian_p.empty() && !o->laplacian_q.empty(),
            "--laplacian-p and --laplacian-q are required");
    require(o->KP > 0 && o->KQ > 0, "--KP and --KQ must be positive");
    require(o->restarts > 0, "--restarts must be positive");
    const pgl::GraphLaplacian L_P = pgl::io::read_laplacian(o->laplacian_p);
    const pgl::GraphLaplacian L_Q = pgl::io::read_laplacian(o->laplacian_q);
    require(o->KP <= L_P.n() && o->KQ <= L_Q.n(), "cluster counts exceed the node counts");

    Run run(sub, o->common);
    pgl::KMeansConfig km;
    km.restarts = o->restarts;
    km.seed = derive_seed(o->seed, 0);
    const pgl::ClusterLabels lp = pgl::spectral_clustering(L_P.dense(), static_cast<int>(o->KP), km);
    km.seed = derive_seed(o->seed, 1);
    const pgl::ClusterLabels lq = pgl::spectral_clustering(L_Q.dense(), static_cast<int>(o->KQ), km);
    const pgl::ClusterLabels ln = pgl::product_labels(lp, lq);

    pgl::io::write_labels_csv(run.path("labels_P.csv"), lp);
    pgl::io::write_labels_csv(run.path("labels_Q.csv"), lq);
    pgl::io::write_labels_csv(run.path("labels_N.csv"), ln);
    pgl::io::write_matrix_csv(run.path("V_P.csv"), pgl::smallest_eigpairs(L_P.dense(), o->KP).vectors);
    pgl::io::write_matrix_csv(run.path("V_Q.csv"), pgl::smallest_eigpairs(L_Q.dense(), o->KQ).vectors);

    Json& r = run.results();
    r["clusters_P"] = lp.k;
    r["clusters_Q"] = lq.k;
    r["clusters_N"] = ln.k;
    r["degenerate"] = lp.degenerate || lq.degenerate;
    r["components_P"] = components_report(pgl::connected_components(L_P));
    r["components_Q"] = components_report(pgl::connected_components(L_Q));
    if (!o->labels_true.empty()) {
      const pgl::ClusterLabels truth = pgl::io::read_labels_csv(o->labels_true);
      if (truth.labels.size() != ln.labels.size())
        throw pgl::DimensionError("--labels-true has " + std::to_string(truth.labels.size()) +
                                  " nodes, expected " + std::to_string(ln.labels.size()));
      r["nmi"] = round12(pgl::nmi(truth, ln));
    }
    return run.finish(true);
  };
}

Runner add_impute(CLI::App& sub) {
  struct Opts {
    CommonOpts common;
    SolverOpts solver;
    std::string data, train_mask, test_mask, scaling = "sum";
    long long P = 0, Q = 0;
    double alpha1 = 0.01, alpha2 = 0.01, alpha3 = 1e-6, beta1 = 2.0, beta2 = 2.0, outer_tol = 1e-3;
    int max_outer = 50, knn_baseline = 0;
  };
  auto o = std::make_shared<Opts>();
  add_common(sub, o->common);
  add_solver(sub, o->solver, 0.0);
  sub.add_option("--data", o->data, "Data CSV; entries outside the training mask are ignored");
  sub.add_option("--train-mask", o->train_mask, "0/1 CSV of observed entries");
  sub.add_option("--test-mask", o->test_mask, "0/1 CSV of held-out entries to score");
  sub.add_option("--P", o->P, "Nodes of the first factor");
  sub.add_option("--Q", o->Q, "Nodes of the second factor");
  sub.add_option("--alpha1", o->alpha1, "Smoothness weight on the first factor")->capture_default_str();
  sub.add_option("--alpha2", o->alpha2, "Smoothness weight on the second factor")->capture_default_str();
  sub.add_option("--alpha3", o->alpha3, "Ridge weight")->capture_default_str();
  sub.add_option("--beta1", o->beta1, "Frobenius weight of the first factor")->capture_default_str();
  sub.add_option("--beta2", o->beta2, "Frobenius weight of the second factor")->capture_default_str();
  sub.add_option("--scaling", o->scaling, "Covariance scaling of the graph step: sum or unit-diagonal")
      ->capture_default_str();
  sub.add_option("--max-outer", o->max_outer, "Outer iteration cap")->capture_default_str();
  sub.add_option("--outer-tol", o->outer_tol, "Outer tolerance on the graph iterate error")
      ->capture_default_str();
  sub.add_option("--knn-baseline", o->knn_baseline,
                 "Also impute with fixed k-nearest-neighbour graphs (0: off)")
      ->capture_default_str();

  return [o, &sub] {
    require(!o->data.empty() && !o->train_mask.empty(), "--data and --train-mask are required");
    require(o->P > 0 && o->Q > 0, "--P and --Q must be positive");
    require(o->knn_baseline >= 0, "--knn-baseline must be nonnegative");
    pgl::ImputeConfig ic;
    ic.alpha1 = o->alpha1;
    ic.alpha2 = o->alpha2;
    ic.alpha3 = o->alpha3;
    ic.pgl.beta1 = o->beta1;
    ic.pgl.beta2 = o->beta2;
    ic.pgl.scaling = parse_scaling(o->scaling);
    ic.pgl.solver = o->solver.config();
    ic.outer_tol = o->outer_tol;
    ic.max_outer = o->max_outer;
    ic.validate();

    const pgl::MultiDomainData data = pgl::io::read_data_csv(o->data, o->P, o->Q);
    const std::vector<pgl::Mask> train = pgl::io::read_mask_csv(o->train_mask, o->P, o->Q);
    require(static_cast<Index>(train.size()) == data.T(), "train mask and data differ in snapshots");
    std::vector<pgl::Mask> test;
    if (!o->test_mask.empty()) {
      test = pgl::io::read_mask_csv(o->test_mask, o->P, o->Q);
      require(static_cast<Index>(test.size()) == data.T(), "test mask and data differ in snapshots");
    }
    const pgl::MultiDomainData observed = pgl::mask_data(data, train);

    Run run(sub, o->common);
    const pgl::ImputeResult fit = pgl::joint_impute_learn(observed, train, ic);
    pgl::io::write_data_csv(run.path("imputed.csv"), fit.imputed);
    pgl::io::write_laplacian(run.path("L_P.tsv"), fit.L_P);
    pgl::io::write_laplacian(run.path("L_Q.tsv"), fit.L_Q);

    Json& r = run.results();
    r["L_P"] = graph_summary(fit.L_P);
    r["L_Q"] = graph_summary(fit.L_Q);
    r["trace"] = {{"error", round12(fit.error)},
                  {"objective", round12(fit.objective)},
                  {"outer_iterations", fit.outer_iterations},
                  {"converged", fit.converged},
                  {"inner_converged", fit.inner_converged}};
    r["train_error"] = round12(pgl::imputation_error(data, fit.imputed, train));
    if (!test.empty()) r["test_error"] = round12(pgl::imputation_error(data, fit.imputed, test));
    if (o->knn_baseline > 0) {
      const pgl::FactorGraphs knn = pgl::knn_factor_graphs(observed, o->knn_baseline);
      const pgl::MultiDomainData base = pgl::impute_step(observed, train, knn.L_P, knn.L_Q, ic);
      pgl::io::write_data_csv(run.path("knn_imputed.csv"), base);
      Json b = {{"k", o->knn_baseline},
                {"train_error", round12(pgl::imputation_error(data, base, train))}};
      if (!test.empty()) b["test_error"] = round12(pgl::imputation_error(data, base, test));
      r["knn_baseline"] = b;
    }
    return run.finish(fit.converged && fit.inner_converged);
  };
}

Runner add_eval(CLI::App& sub) {
  struct Opts {
    std::string out, graph_true, graph_est, labels_true, labels_est;
    double edge_tol = 1e-4;
  };
  auto o = std::make_shared<Opts>();
  sub.add_option("--out", o->out, "Also write metrics.json to this directory");
  sub.add_option("--graph-true", o->graph_true, "Reference graph file");
  sub.add_option("--graph-est", o->graph_est, "Estimated graph file");
  sub.add_option("--edge-tol", o->edge_tol, "Weight below which an entry is not an edge")
      ->capture_default_str();
  sub.add_option("--labels-true", o->labels_true, "Reference labels file");
  sub.add_option("--labels-est", o->labels_est, "Estimated labels file");

  return [o, &sub] {
    const bool graphs = !o->graph_true.empty() || !o->graph_est.empty();
    const bool labels = !o->labels_true.empty() || !o->labels_est.empty();
    require(graphs != labels, "give either --graph-true/--graph-est or --labels-true/--labels-est");
    Json report = {{"command", "eval"}, {"config", echo_config(sub)}};
    Json& r = report["results"];
    if (graphs) {
      require(!o->graph_true.empty() && !o->graph_est.empty(), "both graph files are required");
      const Eigen::MatrixXd A = pgl::io::read_square_matrix(o->graph_true);
      const Eigen::MatrixXd B = pgl::io::read_square_matrix(o->graph_est);
      if (A.rows() != B.rows())
        throw pgl::DimensionError("graphs have " + std::to_string(A.rows()) + " and " +
                                  std::to_string(B.rows()) + " nodes");
      const pgl::EdgeCounts c =
          pgl::compare_edges(pgl::edges_of(A, o->edge_tol), pgl::edges_of(B, o->edge_tol));
      r["f_score"] = round12(pgl::f_score(A, B, o->edge_tol));
      r["true_positives"] = c.tp;
      r["false_positives"] = c.fp;
      r["false_negatives"] = c.fn;
      const double norm = A.norm();
      r["relative_frobenius_error"] = round12(norm > 0.0 ? (A - B).norm() / norm : (A - B).norm());
    } else {
      require(!o->labels_true.empty() && !o->labels_est.empty(), "both label files are required");
      const pgl::ClusterLabels a = pgl::io::read_labels_csv(o->labels_true);
      const pgl::ClusterLabels b = pgl::io::read_labels_csv(o->labels_est);
      if (a.labels.size() != b.labels.size())
        throw pgl::DimensionError("labelings have different lengths");
      r["nmi"] = round12(pgl::nmi(a, b));
    }
    std::cout << report.dump(2) << "\n";
    if (!o->out.empty()) {
      const std::string dir = resolve_output_dir(o->out);
      write_json((std::filesystem::path(dir) / "metrics.json").string(), report);
    }
    return kExitOk;
  };
}

}  // namespace pglearn
