#include "rpqp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpqp/errors.hpp"

namespace rpqp {

namespace {

bool in_unit(double v) { return v > 0.0 && v <= 1.0; }
bool in_half(double v) { return v > 0.0 && v < 0.5; }

Index ceil_at_least_one(double v) {
  if (!(v > 1.0)) return 1;
  if (v >= static_cast<double>(std::numeric_limits<Index>::max() / 2))
    return std::numeric_limits<Index>::max() / 2;
  return static_cast<Index>(std::ceil(v));
}

double lower_i(Index m, Index rank_Q, const BoundParams& p) {
  const double a = std::log((24.0 * static_cast<double>(rank_Q) + 6.0) / p.delta1) / (p.C0 * p.eps1 * p.eps1);
  const double b = std::log(6.0 / p.delta1) / (p.C0 * p.eps4 * p.eps4);
  const double c = std::log(12.0 * static_cast<double>(m) / p.delta1) / (p.C0 * p.eps * p.eps);
  return std::max({a, b, c});
}

double lower_ii(double stable, double effective, double D, const BoundParams& p) {
  const double D6 = std::pow(D, 6);
  return -(2.0 / p.eps3) * effective / std::sqrt(stable) + 12.0 * D6 / (p.C1 * p.eps3 * p.eps3) -
         std::log(p.delta2) / 3.0;
}

DConditions assemble(double li, double lii, double uiii) {
  DConditions out;
  out.lower_i = li;
  out.lower_ii = lii;
  out.upper_iii = uiii;
  out.d_lower_i = ceil_at_least_one(li);
  out.d_lower_ii = ceil_at_least_one(lii);
  out.d_min = std::max(out.d_lower_i, out.d_lower_ii);
  // Largest integer strictly below upper_iii.
  if (uiii > static_cast<double>(out.d_min)) {
    const double below = std::ceil(uiii) - 1.0;
    out.d_max = below >= static_cast<double>(std::numeric_limits<Index>::max() / 2)
                    ? std::numeric_limits<Index>::max() / 2
                    : static_cast<Index>(below);
    out.admissible = out.d_max >= out.d_min;
  }
  if (!out.admissible) out.d_max = out.d_min - 1;
  return out;
}

void require_spectrum(const SpectralSummary& q) {
  if (!(q.op_norm > 0.0)) throw DomainError("bounds: Q must be nonzero");
}

}  // namespace

void BoundParams::validate() const {
  if (!in_unit(eps) || !in_unit(eps1) || !in_unit(eps3) || !in_unit(eps4) || !in_unit(eps2))
    throw DomainError("BoundParams: every eps must lie in (0, 1]");
  if (!in_half(delta1) || !in_half(delta2)) throw DomainError("BoundParams: deltas must lie in (0, 1/2)");
  if (!(C0 > 0.0) || !(C1 > 0.0) || !(C_sub > 0.0) || !(D > 0.0))
    throw DomainError("BoundParams: constants must be positive");
  if (D < C_sub) throw DomainError("BoundParams: need D >= C_sub");
  if (R && !(*R >= 0.0)) throw DomainError("BoundParams: R must be non-negative");
}

DConditions d_conditions(const SpectralSummary& q, Index m, Index rank_Q, const BoundParams& params) {
  params.validate();
  require_spectrum(q);
  if (!(q.trace > 0.0))
    throw AssumptionError("A3", "d_conditions: tr Q <= 0; the bounds need the eigen-scaled problem");
  const double r = q.stable_rank, k = q.effective_rank;
  const double upper = (2.0 * std::pow(params.D, 3) * r - k) / (params.eps3 * std::sqrt(r));
  return assemble(lower_i(m, rank_Q, params), lower_ii(r, k, params.D, params), upper);
}

DConditions scaled_d_conditions(const SpectralSummary& q, double cond_U, Index m, Index rank_Q,
                                const BoundParams& params) {
  params.validate();
  require_spectrum(q);
  if (!(cond_U >= 1.0)) throw DomainError("scaled_d_conditions: cond(U) must be >= 1");
  const double r = q.stable_rank, k = q.effective_rank;
  const double C = params.C_sub;
  const double c2 = cond_U * cond_U;
  // Written so that cond_U = 1 reproduces the unscaled arithmetic exactly.
  const double upper = cond_U == 1.0
                           ? (2.0 * std::pow(C, 3) * r - k) / (params.eps3 * std::sqrt(r))
                           : (2.0 * std::pow(C, 3) * r - c2 * c2 * k) / (params.eps3 * c2 * std::sqrt(r));
  DConditions out = assemble(lower_i(m, rank_Q, params), lower_ii(r, k, C, params), upper);
  out.lower_ii_k_free = 12.0 * std::pow(C, 6) / (params.C1 * params.eps3 * params.eps3) -
                        std::log(params.delta2) / 3.0;
  return out;
}

double TailValue::value() const { return std::exp(log_value); }

TailValue lemma35_probability(const SpectralSummary& q, Index d, double eps3, double D, double C1) {
  if (d < 1) throw DomainError("lemma35_probability: d must be >= 1");
  require_spectrum(q);
  const double dd = static_cast<double>(d);
  const double s = q.trace + eps3 * dd * q.frob_norm;
  const double first = s * s / (4.0 * std::pow(D, 6) * q.frob_norm * q.frob_norm);
  const double second = s / (2.0 * std::pow(D, 3) * q.op_norm);
  TailValue t;
  t.log_value = std::log(2.0) + dd * std::log(9.0) - C1 * std::min(first, second);
  return t;
}

double additive_bound(double opt_crp, double y_norm, double r, double linear_norm, double frob_Q,
                      const BoundParams& p) {
  if (!(r > 0.0)) throw DomainError("additive_bound: r must be positive");
  if (!(y_norm >= 0.0)) throw DomainError("additive_bound: |y| must be non-negative");
  return (1.0 + p.eps * y_norm / r) * opt_crp - (3.0 * p.eps1 + 2.0 * p.eps3) * y_norm * y_norm * frob_Q -
         p.eps4 * y_norm * linear_norm;
}

double alignment_cosine(const Vector& y, const Matrix& Q, const Vector& linear) {
  if (Q.rows() != y.size() || Q.cols() != y.size() || linear.size() != y.size())
    throw DimensionError("alignment_cosine: size mismatch");
  const double y2 = y.squaredNorm();
  const double xi = std::sqrt(y2 * y2 + y2);
  const double zeta = std::sqrt(Q.squaredNorm() + linear.squaredNorm());
  if (!(xi > 0.0) || !(zeta > 0.0)) throw DomainError("alignment_cosine: zero vector, angle undefined");
  // <y y', Q>_F = y'Qy
  return (y.dot(Q * y) + linear.dot(y)) / (xi * zeta);
}

MultiplicativeFactor multiplicative_factor(const Vector& y_star, const Matrix& Q, const Vector& x0,
                                           const Vector& c, double r, const BoundParams& p) {
  if (!(r > 0.0)) throw DomainError("multiplicative_factor: r must be positive");
  if (x0.size() != Q.rows() || c.size() != Q.rows()) throw DimensionError("multiplicative_factor: size mismatch");
  const Vector linear = 2.0 * (Q * x0) + c;
  MultiplicativeFactor out;
  out.cos_theta = alignment_cosine(y_star, Q, linear);
  out.applicable = out.cos_theta > 0.0;
  const double e = 3.0 * p.eps1 + 2.0 * p.eps3;
  const double lead = r / (r + p.eps * y_star.norm());
  out.factor = out.applicable ? lead * (1.0 + std::sqrt(e * e + p.eps4 * p.eps4) / out.cos_theta)
                              : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double scaled_bound(double opt_crp, double y_norm, double r, double cond_U, double frob_Q,
                    double linear_norm, const BoundParams& p) {
  if (!(cond_U >= 1.0)) throw DomainError("scaled_bound: cond(U) must be >= 1");
  if (cond_U == 1.0) return additive_bound(opt_crp, y_norm, r, linear_norm, frob_Q, p);
  if (!(r > 0.0)) throw DomainError("scaled_bound: r must be positive");
  if (!(y_norm >= 0.0)) throw DomainError("scaled_bound: |y| must be non-negative");
  return (1.0 + p.eps * cond_U * y_norm / r) * opt_crp -
         (3.0 * p.eps1 + 2.0 * p.eps3) * cond_U * cond_U * y_norm * y_norm * frob_Q -
         p.eps4 * cond_U * y_norm * linear_norm;
}

BoundReport bound_report(const SpectralSummary& q, const BoundInputs& in, const BoundParams& params) {
  BoundReport rep;
  rep.conditions = in.cond_U ? scaled_d_conditions(q, *in.cond_U, in.m, in.rank_Q, params)
                             : d_conditions(q, in.m, in.rank_Q, params);
  rep.additive_bound = in.cond_U ? scaled_bound(in.opt_crp, in.y_norm, in.r, *in.cond_U, q.frob_norm,
                                                in.linear_norm, params)
                                 : additive_bound(in.opt_crp, in.y_norm, in.r, in.linear_norm, q.frob_norm, params);
  rep.additive_gap = in.opt_crp - rep.additive_bound;
  rep.probability_floor = 1.0 - params.delta1 - params.delta2;
  rep.stable_rank = q.stable_rank;
  rep.effective_rank = q.effective_rank;
  rep.m = in.m;
  rep.rank_Q = in.rank_Q;
  rep.r = in.r;
  rep.frob_Q = q.frob_norm;
  rep.linear_norm = in.linear_norm;
  rep.y_norm = in.y_norm;
  rep.y_norm_source = in.y_norm_source;
  rep.cond_U = in.cond_U;
  rep.opt_crp = in.opt_crp;
  rep.params = params;
  return rep;
}

}  // namespace rpqp
