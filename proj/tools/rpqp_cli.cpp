// rpqp: command-line front end for the sketch-and-convexify QP solver.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rpqp/errors.hpp"
#include "rpqp/experiments.hpp"

using namespace rpqp;

namespace {

struct Common {
  std::string out;
  std::string format = "json";
  double tol = 1e-8;
  int max_iters = 20000;
  int workers = 0;
};

struct GenFlags {
  Index n = 60;
  Index mprime = 200;
  double mu = 0.0;
  std::uint64_t gen_seed = 0;
  std::string instance;
};

struct ParamFlags {
  BoundParams p;
  std::string constants;
  double R = -1.0;
};

void add_output(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--out", c.out, "Output file (default: stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_solver(CLI::App* sub, Common& c) {
  sub->add_option("--tol", c.tol, "Relative residual tolerance of the convex solver");
  sub->add_option("--max-iters", c.max_iters, "Iteration cap of the convex solver");
}

void add_generator(CLI::App* sub, GenFlags& g) {
  sub->add_option("--instance", g.instance, "Instance JSON file");
  sub->add_option("--n", g.n, "Variables of the generated instance");
  sub->add_option("--mprime", g.mprime, "Random constraint rows of the generated instance");
  sub->add_option("--mu", g.mu, "Mean of the diagonal entries of Q");
  sub->add_option("--gen-seed", g.gen_seed, "Seed of the generated instance");
}

void add_params(CLI::App* sub, ParamFlags& f) {
  sub->add_option("--eps", f.p.eps);
  sub->add_option("--eps1", f.p.eps1);
  sub->add_option("--eps2", f.p.eps2);
  sub->add_option("--eps3", f.p.eps3);
  sub->add_option("--eps4", f.p.eps4);
  sub->add_option("--delta1", f.p.delta1);
  sub->add_option("--delta2", f.p.delta2);
  sub->add_option("--constants", f.constants, "Absolute constants, e.g. C0=1,C1=1,C=1,D=1");
  sub->add_option("--R", f.R, "Known bound on the norm of an optimum (translated coordinates)");
}

BoundParams resolve_params(const ParamFlags& f) {
  BoundParams p = f.p;
  std::stringstream ss(f.constants);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("--constants: expected NAME=VALUE, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const double v = std::stod(item.substr(eq + 1));
    if (key == "C0") p.C0 = v;
    else if (key == "C1") p.C1 = v;
    else if (key == "C" || key == "C_sub") p.C_sub = v;
    else if (key == "D") p.D = v;
    else throw DomainError("--constants: unknown constant '" + key + "'");
  }
  if (f.R >= 0.0) p.R = f.R;
  p.validate();
  return p;
}

SolverSettings solver_settings(const Common& c) {
  SolverSettings s;
  s.eps_rel = c.tol;
  s.max_iters = c.max_iters;
  return s;
}

InstanceData instance_from(const GenFlags& g) {
  if (!g.instance.empty()) return load_instance(g.instance);
  const RandomQpInstance inst = gen_random_qp({g.n, g.mprime, g.mu, g.gen_seed});
  return {inst.problem, inst.ball};
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error("cannot write '" + c.out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random projection + PSD convexification for non-convex QPs"};
  app.require_subcommand(1);

  // solve
  Common solve_c;
  GenFlags solve_g;
  ParamFlags solve_p;
  SolveOptions solve_o;
  double target_trace = -1.0, box_radius = -1.0;
  auto* solve = app.add_subcommand("solve", "Project, convexify, solve and lift one instance");
  add_output(solve, solve_c, "json");
  add_solver(solve, solve_c);
  add_generator(solve, solve_g);
  add_params(solve, solve_p);
  solve->add_option("--d", solve_o.d, "Reduced dimension")->required();
  solve->add_option("--seed", solve_o.seed, "Sketch seed");
  solve->add_flag("--scale", solve_o.scale, "Eigen-scale so that the trace becomes positive");
  solve->add_flag("--translate", solve_o.translate, "Translate to the inscribed-ball center");
  solve->add_option("--target-trace", target_trace, "Trace after scaling (default 0.1 |Q|_F)");
  solve->add_option("--box-radius", box_radius, "Search box for the inscribed-ball LP");

  // eighist
  Common eig_c;
  Index eig_n = 2000, eig_d = 200;
  double ramp_a = -10.0, ramp_b = 30.0;
  std::uint64_t eig_seed = 0;
  auto* eig = app.add_subcommand("eighist", "Eigenvalues of Q and of the sketched P Q P'");
  add_output(eig, eig_c, "csv");
  eig->add_option("--n", eig_n);
  eig->add_option("--d", eig_d);
  eig->add_option("--ramp-start", ramp_a, "Spectrum a + b i / n, i = 1..n: value of a");
  eig->add_option("--ramp-slope", ramp_b, "Spectrum a + b i / n, i = 1..n: value of b");
  eig->add_option("--seed", eig_seed);

  // gapsweep
  Common gap_c;
  std::string preset = "desk";
  GapSweepConfig gap_cfg;
  std::vector<Index> gap_ds;
  std::vector<double> gap_mus;
  Index gap_n = 0, gap_mprime = 0;
  int gap_reps = 0, gap_starts = 10;
  auto* gap = app.add_subcommand("gapsweep", "Gaps between best-found opt(P), opt(RP) and opt(CRP)");
  add_output(gap, gap_c, "csv");
  add_solver(gap, gap_c);
  gap->add_option("--preset", preset, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  gap->add_option("--n", gap_n);
  gap->add_option("--mprime", gap_mprime);
  gap->add_option("--d", gap_ds, "Reduced dimensions")->delimiter(',');
  gap->add_option("--mu", gap_mus, "Diagonal means")->delimiter(',');
  gap->add_option("--reps", gap_reps);
  gap->add_option("--starts", gap_starts, "DCA starts per problem");
  gap->add_option("--seed", gap_cfg.seed, "Master seed");
  gap->add_option("--workers", gap_c.workers, "Worker threads (default: RPQP_WORKERS or all cores)");

  // svmsweep
  Common svm_c;
  SvmConfig svm_cfg;
  SvmSweepConfig svm_sweep;
  std::vector<Index> svm_ds;
  std::string kernel, labels, test_kernel, test_labels;
  auto* svm = app.add_subcommand("svmsweep", "Indefinite-kernel SVM accuracy across reduced dimensions");
  add_output(svm, svm_c, "csv");
  add_solver(svm, svm_c);
  svm->add_option("--n", svm_cfg.n, "Training points");
  svm->add_option("--n-test", svm_cfg.n_test, "Test points");
  svm->add_option("--dim", svm_cfg.dim, "Feature dimension");
  svm->add_option("--separation", svm_cfg.separation);
  svm->add_option("--gamma", svm_cfg.gamma, "Weight of the subtracted kernel");
  svm->add_option("--poly-scale", svm_cfg.poly_scale);
  svm->add_option("--C", svm_cfg.C, "Box constraint");
  svm->add_option("--data-seed", svm_cfg.seed);
  svm->add_option("--kernel", kernel, "Training kernel matrix file (n x n)");
  svm->add_option("--labels", labels, "Training labels file (+1/-1, one column)");
  svm->add_option("--test-kernel", test_kernel, "Test kernel file (n_test x n)");
  svm->add_option("--test-labels", test_labels, "Test labels file");
  svm->add_option("--d", svm_ds, "Reduced dimensions")->delimiter(',');
  svm->add_option("--reps", svm_sweep.reps);
  svm->add_option("--seed", svm_sweep.seed, "Master seed");
  svm->add_option("--workers", svm_c.workers);

  // bounds
  Common bnd_c;
  GenFlags bnd_g;
  ParamFlags bnd_p;
  BoundsQuery bnd_q;
  Index bnd_d = 0;
  double bnd_target = -1.0;
  auto* bnd = app.add_subcommand("bounds", "Admissible reduced dimensions and concentration tail");
  add_output(bnd, bnd_c, "json");
  add_generator(bnd, bnd_g);
  add_params(bnd, bnd_p);
  bnd->add_option("--d", bnd_d, "Evaluate the concentration tail at this d");
  bnd->add_flag("--scale", bnd_q.scale, "Use the eigen-scaled conditions");
  bnd->add_option("--target-trace", bnd_target);

  // gen
  Common gen_c;
  RandomQpConfig gen_cfg;
  auto* gen = app.add_subcommand("gen", "Write a random non-convex QP instance as JSON");
  add_output(gen, gen_c, "json");
  gen->add_option("--n", gen_cfg.n);
  gen->add_option("--mprime", gen_cfg.m_prime);
  gen->add_option("--mu", gen_cfg.mu);
  gen->add_option("--seed", gen_cfg.seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      solve_o.params = resolve_params(solve_p);
      solve_o.solver = solver_settings(solve_c);
      if (target_trace > 0.0) solve_o.target_trace = target_trace;
      if (box_radius > 0.0) solve_o.box_radius = box_radius;
      const SolveReport rep = cmd_solve(instance_from(solve_g), solve_o);
      emit(solve_c, to_json(rep).dump(2) + "\n");
      return rep.status == SolveStatus::optimal ? 0 : 4;
    }
    if (*eig) {
      const EighistResult r = cmd_eighist(eig_n, eig_d, ramp_a, ramp_b, eig_seed);
      if (eig_c.format == "csv") {
        std::ostringstream s;
        write_eighist_csv(s, r);
        emit(eig_c, s.str());
      } else {
        Json j = {{"Q", vector_to_json(r.q_eigenvalues)},
                  {"PQP", vector_to_json(r.pqp_eigenvalues)},
                  {"q_negative_fraction", r.q_negative_fraction},
                  {"pqp_negative_fraction", r.pqp_negative_fraction},
                  {"pqp_mean", r.pqp_mean},
                  {"trace_over_d", r.trace_over_d}};
        emit(eig_c, j.dump(2) + "\n");
      }
      std::fprintf(stderr, "negative fraction: Q %.4f, PQP' %.4f; mean eigenvalue of PQP' %.4f (tr Q / d = %.4f)\n",
                   r.q_negative_fraction, r.pqp_negative_fraction, r.pqp_mean, r.trace_over_d);
      return 0;
    }
    if (*gap) {
      const std::uint64_t seed = gap_cfg.seed;
      gap_cfg = gapsweep_preset(preset);
      gap_cfg.seed = seed;
      if (gap_n) gap_cfg.n = gap_n;
      if (gap_mprime) gap_cfg.m_prime = gap_mprime;
      if (!gap_ds.empty()) gap_cfg.ds = gap_ds;
      if (!gap_mus.empty()) gap_cfg.mus = gap_mus;
      if (gap_reps) gap_cfg.reps = gap_reps;
      gap_cfg.dca.n_starts = gap_starts;
      gap_cfg.solver = solver_settings(gap_c);
      gap_cfg.workers = gap_c.workers;
      const GapSweepResult r = cmd_gapsweep(gap_cfg);
      if (gap_c.format == "csv") {
        std::ostringstream s;
        write_gapsweep_csv(s, r);
        emit(gap_c, s.str());
      } else {
        emit(gap_c, to_json(r).dump(2) + "\n");
      }
      return 0;
    }
    if (*svm) {
      SvmInstance inst;
      if (!kernel.empty()) {
        if (labels.empty() || test_kernel.empty() || test_labels.empty())
          throw DomainError("--kernel needs --labels, --test-kernel and --test-labels");
        inst.K = load_dense_matrix(kernel);
        inst.y = load_dense_matrix(labels).reshaped();
        inst.K_test = load_dense_matrix(test_kernel);
        inst.y_test = load_dense_matrix(test_labels).reshaped();
        inst.C = svm_cfg.C;
      } else {
        inst = gen_synthetic_svm(svm_cfg);
      }
      if (!svm_ds.empty()) svm_sweep.ds = svm_ds;
      svm_sweep.solver = solver_settings(svm_c);
      svm_sweep.workers = svm_c.workers;
      const SvmSweepResult r = cmd_svmsweep(inst, svm_sweep);
      if (svm_c.format == "csv") {
        std::ostringstream s;
        write_svmsweep_csv(s, r);
        emit(svm_c, s.str());
      } else {
        emit(svm_c, to_json(r).dump(2) + "\n");
      }
      return 0;
    }
    if (*bnd) {
      bnd_q.params = resolve_params(bnd_p);
      if (bnd_d > 0) bnd_q.d = bnd_d;
      if (bnd_target > 0.0) bnd_q.target_trace = bnd_target;
      emit(bnd_c, cmd_bounds(instance_from(bnd_g).problem, bnd_q).dump(2) + "\n");
      return 0;
    }
    if (*gen) {
      emit(gen_c, cmd_gen(gen_cfg).dump(1) + "\n");
      return 0;
    }
  } catch (const AssumptionError& e) {
    std::fprintf(stderr, "assumption violated: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
