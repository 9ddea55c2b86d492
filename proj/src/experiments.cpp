#include "rpqp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "rpqp/errors.hpp"
#include "rpqp/pipeline.hpp"
#include "rpqp/random.hpp"
#include "rpqp/scaling.hpp"
#include "rpqp/spectral.hpp"

namespace rpqp {

// ---------------------------------------------------------------- workers

int default_worker_count() {
  if (const char* env = std::getenv("RPQP_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 0) workers = default_worker_count();
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
}

// ------------------------------------------------------------------ solve

std::string to_string(AssumptionStatus s) {
  switch (s) {
    case AssumptionStatus::holds: return "holds";
    case AssumptionStatus::violated: return "violated";
    case AssumptionStatus::unverified: return "unverified";
  }
  return "unknown";
}

namespace {

AssumptionCheck check(std::string label, bool ok, std::string detail) {
  return {std::move(label), ok ? AssumptionStatus::holds : AssumptionStatus::violated, std::move(detail)};
}

AssumptionCheck unverified(std::string label, std::string detail) {
  return {std::move(label), AssumptionStatus::unverified, std::move(detail)};
}

AssumptionCheck* find(std::vector<AssumptionCheck>& v, const std::string& label) {
  for (auto& a : v)
    if (a.label == label) return &a;
  return nullptr;
}

}  // namespace

SolveReport cmd_solve(const InstanceData& instance, const SolveOptions& o) {
  const QpProblem& raw = instance.problem;
  raw.validate();
  const Index n = raw.n();
  SolveReport rep;
  rep.n = n;
  rep.seed = o.seed;

  QpProblem p;
  try {
    p = normalize_rows(raw);
  } catch (const DomainError& e) {
    throw AssumptionError("A2", e.what());
  }
  auto& as = rep.assumptions;
  as.push_back(unverified("A1", "finite optimum not certified"));
  as.push_back(check("A2", true, "inequality rows normalized to unit length"));

  const SpectralSummary q = sym_eig(p.Q);
  as.push_back(check("A3", q.trace > 0.0, "tr Q = " + format_double(q.trace)));
  const double lam_max = q.eigenvalues.size() ? q.eigenvalues(0) : 0.0;
  as.push_back(check("A3'", lam_max > 0.0, "largest eigenvalue " + format_double(lam_max)));

  // Ball around the origin: with unit rows its largest radius is min b.
  std::optional<double> origin_radius;
  if (p.has_equalities()) {
    as.push_back(check("A4", false, "equality constraints: feasible region is not full-dimensional"));
  } else if (p.m() == 0) {
    as.push_back(unverified("A4", "no inequality rows; no finite radius to report"));
  } else {
    const double r0 = p.b.minCoeff();
    if (r0 > 0.0) origin_radius = r0;
    as.push_back(check("A4", r0 > 0.0, "largest ball at the origin has radius " + format_double(r0)));
  }

  std::optional<BallInfo> ball;
  if (p.has_equalities()) {
    as.push_back(check("A4'", false, "equality constraints: feasible region is not full-dimensional"));
  } else if (instance.ball) {
    const bool inside = instance.ball->radius > 0.0 && ball_inside(p, *instance.ball, 1e-9);
    if (inside) ball = instance.ball;
    as.push_back(check("A4'", inside, inside ? "ball supplied with the instance" : "supplied ball is not inside the polytope"));
  } else {
    try {
      ChebyshevOptions copt;
      copt.box_radius = o.box_radius;
      ball = chebyshev_center(p, copt);
      as.push_back(check("A4'", true, "inscribed ball radius " + format_double(ball->radius)));
    } catch (const InfeasibleError& e) {
      as.push_back(check("A4'", false, e.what()));
    } catch (const Error& e) {
      as.push_back(unverified("A4'", e.what()));
    }
  }
  rep.ball = ball;

  const std::optional<double> box_R = box_radius_bound(p, Vector::Zero(n));
  if (box_R && ball) *find(as, "A1") = check("A1", true, "bounded polytope with nonempty interior");

  Vector x0 = Vector::Zero(n);
  std::optional<double> r;
  if (o.translate) {
    if (!ball) throw AssumptionError("A4'", "translation needs an inscribed ball: " + find(as, "A4'")->detail);
    x0 = ball->center;
    r = ball->radius;
  } else {
    r = origin_radius;
  }
  const TranslatedProblem t = translate(p, x0);
  QpProblem work = t.problem;

  std::optional<ScalingSpec> spec;
  if (o.scale) {
    if (!(lam_max > 0.0)) throw AssumptionError("A3'", "scaling needs a positive eigenvalue of Q");
    spec = choose_sigmas(q, o.target_trace.value_or(default_target_trace(q)));
    work = build_scaled_problem(work, *spec);
    rep.cond_U = spec->cond_U;
    rep.sigma_hi = spec->sigma_hi;
    rep.scaled_trace = spec->target_trace;
  }

  const ProjectionMatrix P = o.projection ? *o.projection : sample_projection(n, o.d, o.seed);
  if (P.original_dim() != n) throw DimensionError("cmd_solve: projection has the wrong number of columns");
  rep.d = P.reduced_dim();

  const ProjectedProblem crp = build_crp(build_rp(work, P));
  const SolveResult res = solve_crp(crp, o.solver);
  rep.status = res.status;
  rep.iterations = res.iterations;
  if (!res.ok()) {
    rep.bounds_note = "no solution: reduced problem " + to_string(res.status);
    return rep;
  }

  const Vector z = P.lift(res.x);
  const Vector y = spec ? unscale(*spec, z) : z;
  rep.x = x0 + y;
  rep.objective = objective(raw, rep.x);
  rep.max_violation = max_violation(raw, rep.x);
  rep.crp_optimum_shifted = res.objective;
  rep.crp_optimum = res.objective + t.offset;

  if (p.has_equalities()) {
    rep.bounds_note = "bounds need a full-dimensional feasible region (equality constraints present)";
  } else if (!r) {
    rep.bounds_note = o.translate ? "no inscribed ball" : "no ball around the origin; try --translate";
  } else if (!spec && !(q.trace > 0.0)) {
    rep.bounds_note = "tr Q <= 0: bounds need --scale";
  } else {
    BoundInputs in;
    in.m = p.m();
    in.rank_Q = q.numerical_rank();
    in.r = *r;
    in.linear_norm = t.problem.c.norm();
    in.opt_crp = res.objective;
    if (spec) in.cond_U = spec->cond_U;
    if (o.params.R) {
      in.y_norm = *o.params.R;
      in.y_norm_source = "user bound";
    } else if (const auto R = box_radius_bound(p, x0)) {
      in.y_norm = *R;
      in.y_norm_source = "radius bound";
    } else {
      in.y_norm = y.norm();
      in.y_norm_source = "incumbent-based, heuristic";
    }
    BoundReport br = bound_report(q, in, o.params);
    if (!spec && y.norm() > 0.0) {
      const MultiplicativeFactor mf = multiplicative_factor(y, p.Q, x0, p.c, *r, o.params);
      br.cos_theta = mf.cos_theta;
      if (mf.applicable) br.multiplicative_factor = mf.factor;
      rep.bounds_note = "multiplicative factor evaluated at the lifted point in place of y* (incumbent-based, heuristic)";
    }
    rep.bounds = br;
  }
  return rep;
}

Json to_json(const SolveReport& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["n"] = r.n;
  j["d"] = r.d;
  j["seed"] = r.seed;
  j["iterations"] = r.iterations;
  j["x"] = vector_to_json(r.x);
  if (r.x.size()) {
    j["objective"] = r.objective;
    j["crp_optimum"] = r.crp_optimum;
    j["crp_optimum_shifted"] = r.crp_optimum_shifted;
    j["max_violation"] = r.max_violation;
    j["feasible"] = r.max_violation <= 1e-8;
  }
  Json as = Json::array();
  for (const auto& a : r.assumptions) as.push_back({{"label", a.label}, {"status", to_string(a.status)}, {"detail", a.detail}});
  j["assumptions"] = as;
  j["ball"] = r.ball ? Json{{"center", vector_to_json(r.ball->center)}, {"radius", r.ball->radius}} : Json(nullptr);
  if (r.cond_U)
    j["scaling"] = {{"cond_U", *r.cond_U}, {"sigma_hi", *r.sigma_hi}, {"sigma_lo", 1.0}, {"trace", *r.scaled_trace}};
  j["bounds"] = r.bounds ? to_json(*r.bounds) : Json(nullptr);
  if (!r.bounds_note.empty()) j["bounds_note"] = r.bounds_note;
  return j;
}

// --------------------------------------------------------------- eighist

Vector ramp_spectrum(Index n, double a, double b) {
  if (n < 1) throw DomainError("ramp_spectrum: n must be >= 1");
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = a + b * static_cast<double>(i + 1) / static_cast<double>(n);
  return v;
}

namespace {
double negative_fraction(const Vector& v) {
  if (v.size() == 0) return 0.0;
  return static_cast<double>((v.array() < 0.0).count()) / static_cast<double>(v.size());
}
}  // namespace

EighistResult eighist(const Vector& spectrum, const ProjectionMatrix& P) {
  if (P.original_dim() != spectrum.size()) throw DimensionError("eighist: projection width != n");
  const Matrix& M = P.matrix();
  const Matrix pqp = symmetrized((M * spectrum.asDiagonal()) * M.transpose());
  EighistResult r;
  r.q_eigenvalues = spectrum;
  std::sort(r.q_eigenvalues.data(), r.q_eigenvalues.data() + r.q_eigenvalues.size(), std::greater<>());
  r.pqp_eigenvalues = sym_eig(pqp).eigenvalues;
  r.q_negative_fraction = negative_fraction(r.q_eigenvalues);
  r.pqp_negative_fraction = negative_fraction(r.pqp_eigenvalues);
  r.pqp_mean = r.pqp_eigenvalues.mean();
  r.trace_over_d = spectrum.sum() / static_cast<double>(P.reduced_dim());
  return r;
}

EighistResult cmd_eighist(Index n, Index d, double a, double b, std::uint64_t seed) {
  return eighist(ramp_spectrum(n, a, b), sample_projection(n, d, seed));
}

void write_eighist_csv(std::ostream& out, const EighistResult& r) {
  out << "source,eigenvalue\n";
  for (Index i = 0; i < r.q_eigenvalues.size(); ++i) out << "Q," << format_double(r.q_eigenvalues(i)) << '\n';
  for (Index i = 0; i < r.pqp_eigenvalues.size(); ++i) out << "PQP," << format_double(r.pqp_eigenvalues(i)) << '\n';
}

// -------------------------------------------------------------- gapsweep

GapSweepConfig gapsweep_preset(const std::string& name) {
  GapSweepConfig c;
  if (name == "desk") return c;
  if (name == "paper") {
    c.n = 200;
    c.m_prime = 5000;
    c.ds = {90, 120, 150, 180};
    return c;
  }
  throw DomainError("unknown gapsweep preset '" + name + "' (desk, paper)");
}

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd s;
  s.count = static_cast<int>(v.size());
  if (v.empty()) {
    s.mean = s.std = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

const GapAggregate& GapSweepResult::cell(Index d, double mu) const {
  for (const auto& a : aggregates)
    if (a.d == d && a.mu == mu) return a;
  throw DomainError("gapsweep: no aggregate for d=" + std::to_string(d) + " mu=" + format_double(mu));
}

namespace {

std::vector<GapRow> gap_unit(const GapSweepConfig& cfg, double mu, int rep) {
  const std::uint64_t mu_bits = double_bits(mu);
  const auto urep = static_cast<std::uint64_t>(rep);
  std::vector<GapRow> rows;
  for (Index d : cfg.ds) {
    GapRow row;
    row.d = d;
    row.mu = mu;
    row.rep = rep;
    rows.push_back(row);
  }
  try {
    const std::uint64_t inst_seed = hash64({cfg.seed, mu_bits, urep});
    const RandomQpInstance inst = gen_random_qp({cfg.n, cfg.m_prime, mu, inst_seed});
    DcaSolver dp(inst.problem, cfg.dca);
    double opt_p = dp.multistart(hash64({inst_seed, 1})).objective;

    for (GapRow& row : rows) {
      try {
        const std::uint64_t s = hash64({cfg.seed, static_cast<std::uint64_t>(row.d), mu_bits, urep});
        const ProjectedProblem rp = build_rp(inst.problem, sample_projection(cfg.n, row.d, s));
        const ProjectedProblem crp = build_crp(rp);
        const SolveResult res = solve_crp(crp, cfg.solver);
        if (!res.ok()) {
          row.status = "crp " + to_string(res.status);
          continue;
        }
        row.opt_crp = res.objective;

        // RP: multistart, plus one run from the CRP optimum (RP <= CRP there).
        DcaSolver drp(rp.to_qp_problem(), dc_split(rp.Qbar_spectrum), cfg.dca);
        DcaResult best = drp.multistart(hash64({s, 2}));
        DcaResult from_crp = drp.solve(res.x);
        if (from_crp.objective < best.objective) best = std::move(from_crp);
        row.opt_rp = best.objective;

        // P from the lifted RP point keeps the best-found opt(P) <= opt(RP).
        opt_p = std::min(opt_p, dp.solve(rp.P.lift(best.x)).objective);
      } catch (const Error& e) {
        row.status = std::string("error: ") + e.what();
      }
    }
    for (GapRow& row : rows) row.opt_p = opt_p;
  } catch (const Error& e) {
    for (GapRow& row : rows) row.status = std::string("error: ") + e.what();
  }
  return rows;
}

}  // namespace

GapSweepResult cmd_gapsweep(const GapSweepConfig& cfg) {
  if (cfg.ds.empty() || cfg.mus.empty() || cfg.reps < 1)
    throw DomainError("gapsweep: need at least one d, one mu and one repetition");
  const std::size_t reps = static_cast<std::size_t>(cfg.reps);
  const std::size_t units = cfg.mus.size() * reps;
  std::vector<std::vector<GapRow>> out(units);
  parallel_for(units, cfg.workers, [&](std::size_t u) {
    out[u] = gap_unit(cfg, cfg.mus[u / reps], static_cast<int>(u % reps));
  });

  GapSweepResult r;
  for (auto& unit : out)
    for (auto& row : unit) r.rows.push_back(std::move(row));
  for (Index d : cfg.ds)
    for (double mu : cfg.mus) {
      std::vector<double> a, b, c;
      for (const GapRow& row : r.rows) {
        if (row.d != d || row.mu != mu || row.status != "ok") continue;
        a.push_back(row.gap_rp_p());
        b.push_back(row.gap_crp_rp());
        c.push_back(row.gap_crp_p());
      }
      r.aggregates.push_back({d, mu, mean_std(a), mean_std(b), mean_std(c)});
    }
  return r;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

void write_gapsweep_csv(std::ostream& out, const GapSweepResult& r) {
  out << "kind,d,mu,rep,status,opt_p,opt_rp,opt_crp,gap_rp_p,gap_crp_rp,gap_crp_p,count\n";
  for (const GapRow& row : r.rows) {
    out << "cell," << row.d << ',' << format_double(row.mu) << ',' << row.rep << ',' << csv_field(row.status);
    if (row.status == "ok")
      out << ',' << format_double(row.opt_p) << ',' << format_double(row.opt_rp) << ','
          << format_double(row.opt_crp) << ',' << format_double(row.gap_rp_p()) << ','
          << format_double(row.gap_crp_rp()) << ',' << format_double(row.gap_crp_p()) << ",1\n";
    else
      out << ",,,,,,,0\n";
  }
  for (const GapAggregate& a : r.aggregates) {
    out << "mean," << a.d << ',' << format_double(a.mu) << ",,ok,,,," << format_double(a.rp_p.mean) << ','
        << format_double(a.crp_rp.mean) << ',' << format_double(a.crp_p.mean) << ',' << a.rp_p.count << '\n';
    out << "std," << a.d << ',' << format_double(a.mu) << ",,ok,,,," << format_double(a.rp_p.std) << ','
        << format_double(a.crp_rp.std) << ',' << format_double(a.crp_p.std) << ',' << a.rp_p.count << '\n';
  }
}

namespace {
Json mean_std_json(const MeanStd& s) { return {{"mean", s.mean}, {"std", s.std}, {"count", s.count}}; }
}  // namespace

Json to_json(const GapSweepResult& r) {
  Json rows = Json::array();
  for (const GapRow& row : r.rows) {
    Json j = {{"d", row.d}, {"mu", row.mu}, {"rep", row.rep}, {"status", row.status}};
    if (row.status == "ok") {
      j["opt_p_best_found"] = row.opt_p;
      j["opt_rp_best_found"] = row.opt_rp;
      j["opt_crp"] = row.opt_crp;
    }
    rows.push_back(j);
  }
  Json agg = Json::array();
  for (const GapAggregate& a : r.aggregates)
    agg.push_back({{"d", a.d}, {"mu", a.mu}, {"gap_rp_p", mean_std_json(a.rp_p)},
                   {"gap_crp_rp", mean_std_json(a.crp_rp)}, {"gap_crp_p", mean_std_json(a.crp_p)}});
  return {{"rows", rows}, {"aggregates", agg}};
}

// -------------------------------------------------------------- svmsweep

double svm_violation(const SvmInstance& inst, const Vector& alpha) {
  if (alpha.size() != inst.n()) throw DimensionError("svm_violation: |alpha| != n");
  return std::max({(-alpha).maxCoeff(), (alpha.array() - inst.C).maxCoeff(), std::abs(alpha.dot(inst.y)), 0.0});
}

namespace {

SvmRow svm_row_from(const SvmInstance& inst, const Vector& alpha) {
  SvmRow row;
  row.max_violation = svm_violation(inst, alpha);
  row.train_acc = svm_train_predict(inst, alpha).accuracy;
  row.test_acc = svm_test_predict(inst, alpha).accuracy;
  return row;
}

}  // namespace

SvmRow svm_cell(const SvmInstance& inst, const ProjectionMatrix& P, const SolverSettings& solver) {
  const ProjectedProblem crp = svm_crp_problem(inst, P);
  const SolveResult res = solve_crp(crp, solver);
  SvmRow row;
  if (!res.ok()) {
    row.status = "crp " + to_string(res.status);
  } else {
    row = svm_row_from(inst, P.lift(res.x));
  }
  row.d = P.reduced_dim();
  return row;
}

SvmRow svm_baseline(const SvmInstance& inst, const SolverSettings& solver) {
  const QpProblem p = svm_convexified_problem(inst);
  const SolveResult res = solve_convex_qp({p.Q, p.c, p.A, p.b, p.E, p.f, {}, {}}, solver);
  SvmRow row;
  if (!res.ok()) {
    row.status = "baseline " + to_string(res.status);
    return row;
  }
  return svm_row_from(inst, res.x);
}

SvmSweepResult cmd_svmsweep(const SvmInstance& inst, const SvmSweepConfig& cfg) {
  if (cfg.ds.empty() || cfg.reps < 1) throw DomainError("svmsweep: need at least one d and one repetition");
  const std::size_t reps = static_cast<std::size_t>(cfg.reps);
  const std::size_t cells = cfg.ds.size() * reps;
  SvmSweepResult r;
  r.rows.resize(cells);
  // Task `cells` is the baseline.
  parallel_for(cells + 1, cfg.workers, [&](std::size_t k) {
    if (k == cells) {
      try {
        r.baseline = svm_baseline(inst, cfg.solver);
      } catch (const Error& e) {
        r.baseline.status = std::string("error: ") + e.what();
      }
      return;
    }
    const Index d = cfg.ds[k / reps];
    const int rep = static_cast<int>(k % reps);
    SvmRow row;
    try {
      const std::uint64_t s = hash64({cfg.seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(rep)});
      row = svm_cell(inst, sample_projection(inst.n(), d, s), cfg.solver);
    } catch (const Error& e) {
      row.status = std::string("error: ") + e.what();
    }
    row.d = d;
    row.rep = rep;
    r.rows[k] = row;
  });
  for (Index d : cfg.ds) {
    std::vector<double> tr, te;
    for (const SvmRow& row : r.rows)
      if (row.d == d && row.status == "ok") {
        tr.push_back(row.train_acc);
        te.push_back(row.test_acc);
      }
    r.aggregates.push_back({d, mean_std(tr), mean_std(te)});
  }
  return r;
}

void write_svmsweep_csv(std::ostream& out, const SvmSweepResult& r) {
  out << "kind,d,rep,status,train_acc,test_acc,max_violation,count\n";
  auto cell = [&](const char* kind, const SvmRow& row) {
    out << kind << ',' << row.d << ',' << row.rep << ',' << csv_field(row.status);
    if (row.status == "ok")
      out << ',' << format_double(row.train_acc) << ',' << format_double(row.test_acc) << ','
          << format_double(row.max_violation) << ",1\n";
    else
      out << ",,,,0\n";
  };
  cell("baseline", r.baseline);
  for (const SvmRow& row : r.rows) cell("cell", row);
  for (const SvmAggregate& a : r.aggregates) {
    out << "mean," << a.d << ",,ok," << format_double(a.train.mean) << ',' << format_double(a.test.mean) << ",,"
        << a.test.count << '\n';
    out << "std," << a.d << ",,ok," << format_double(a.train.std) << ',' << format_double(a.test.std) << ",,"
        << a.test.count << '\n';
  }
}

Json to_json(const SvmSweepResult& r) {
  auto row_json = [](const SvmRow& row) {
    Json j = {{"d", row.d}, {"rep", row.rep}, {"status", row.status}};
    if (row.status == "ok") {
      j["train_acc"] = row.train_acc;
      j["test_acc"] = row.test_acc;
      j["max_violation"] = row.max_violation;
    }
    return j;
  };
  Json rows = Json::array();
  for (const SvmRow& row : r.rows) rows.push_back(row_json(row));
  Json agg = Json::array();
  for (const SvmAggregate& a : r.aggregates)
    agg.push_back({{"d", a.d}, {"train", mean_std_json(a.train)}, {"test", mean_std_json(a.test)}});
  return {{"baseline", row_json(r.baseline)}, {"rows", rows}, {"aggregates", agg}};
}

// ---------------------------------------------------------------- bounds

Json cmd_bounds(const QpProblem& p_in, const BoundsQuery& query) {
  const QpProblem p = p_in.m() ? normalize_rows(p_in) : p_in;
  const SpectralSummary q = sym_eig(p.Q);
  const Index rank = q.numerical_rank();
  const BoundParams& params = query.params;

  Json j;
  j["inputs"] = {{"n", p.n()},
                 {"m", p.m()},
                 {"trace", q.trace},
                 {"frob_Q", q.frob_norm},
                 {"op_norm", q.op_norm},
                 {"stable_rank", q.stable_rank},
                 {"effective_rank", q.effective_rank},
                 {"rank_Q", rank}};
  DConditions c;
  SpectralSummary tail_spectrum = q;
  double D = params.D;
  if (query.scale) {
    const ScalingSpec spec = choose_sigmas(q, query.target_trace.value_or(default_target_trace(q)));
    c = scaled_d_conditions(q, spec.cond_U, p.m(), rank, params);
    j["scaling"] = {{"cond_U", spec.cond_U}, {"sigma_hi", spec.sigma_hi}, {"sigma_lo", spec.sigma_lo},
                    {"trace", spec.target_trace}};
    Vector scaled(q.eigenvalues.size());
    for (Index i = 0; i < scaled.size(); ++i) scaled(i) = q.eigenvalues(i) * spec.pattern(i) * spec.pattern(i);
    tail_spectrum = summarize_spectrum(scaled);
    D = params.C_sub;
  } else {
    c = d_conditions(q, p.m(), rank, params);
  }
  j["conditions"] = to_json(c);
  if (query.d) {
    const TailValue tail = lemma35_probability(tail_spectrum, *query.d, params.eps3, D, params.C1);
    j["tail"] = {{"d", *query.d},
                 {"log_value", tail.log_value},
                 {"value", tail.value()},
                 {"below_delta2", tail.log_value <= std::log(params.delta2)},
                 {"admissible", c.admits(*query.d)}};
  }
  j["probability_floor"] = 1.0 - params.delta1 - params.delta2;
  j["params"] = to_json(params);
  return j;
}

// ------------------------------------------------------------------- gen

Json cmd_gen(const RandomQpConfig& cfg) {
  const RandomQpInstance inst = gen_random_qp(cfg);
  return instance_to_json(inst.problem, inst.ball);
}

}  // namespace rpqp
