#include "carpa/methods.hpp"

#include <cmath>

#include "carpa/spectral.hpp"

namespace carpa {

namespace {

constexpr double kFixedPointTol = 1e-14;

void require_same_dim(const Vector& z, const ConvexSet& X, const ConvexSet& Y,
                      const char* where) {
  const auto dx = ambient_dimension(X);
  const auto dy = ambient_dimension(Y);
  if ((dx && *dx != z.size()) || (dy && *dy != z.size())) {
    throw DimensionMismatch(std::string(where) + ": set/iterate dimensions disagree");
  }
}

void require_subspaces(const ConvexSet& X, const ConvexSet& Y, Method tag) {
  if (!is_subspace(X) || !is_subspace(Y)) {
    throw UnsupportedSet(method_name(tag) + " is defined for linear subspaces only");
  }
}

double clamp_gamma(double g, double lo, double hi) {
  return std::max(std::min(g, hi), lo);
}

} // namespace

Method method_tag(const MethodSpec& spec) {
  struct Visitor {
    Method operator()(const MAP&) const { return Method::Map; }
    Method operator()(const SP&) const { return Method::Sp; }
    Method operator()(const RAP&) const { return Method::Rap; }
    Method operator()(const PRAP&) const { return Method::Prap; }
    Method operator()(const GRAP&) const { return Method::Grap; }
    Method operator()(const AAMR&) const { return Method::Aamr; }
    Method operator()(const RAAR&) const { return Method::Raar; }
    Method operator()(const DRAP&) const { return Method::Drap; }
    Method operator()(const DR&) const { return Method::Dr; }
    Method operator()(const NSDR&) const { return Method::NsDr; }
    Method operator()(const CARPA&) const { return Method::Carpa; }
    Method operator()(const NSCARPA&) const { return Method::NsCarpa; }
  };
  return std::visit(Visitor{}, spec);
}

std::string method_name(Method tag) {
  switch (tag) {
    case Method::Map: return "MAP";
    case Method::Sp: return "SP";
    case Method::Rap: return "RAP";
    case Method::Prap: return "PRAP";
    case Method::Grap: return "GRAP";
    case Method::Aamr: return "AAMR";
    case Method::Raar: return "RAAR";
    case Method::Drap: return "DRAP";
    case Method::Dr: return "DR";
    case Method::NsDr: return "nsDR";
    case Method::Carpa: return "CARPA";
    case Method::NsCarpa: return "nsCARPA";
  }
  return "?";
}

std::string method_name(const MethodSpec& spec) { return method_name(method_tag(spec)); }

std::optional<Method> parse_method_name(const std::string& name) {
  for (Method tag : all_methods()) {
    if (name == method_name(tag)) return tag;
  }
  return std::nullopt;
}

std::vector<Method> all_methods() {
  return {Method::Map,  Method::Sp,   Method::Rap,  Method::Prap,
          Method::Grap, Method::Aamr, Method::Raar, Method::Drap,
          Method::Dr,   Method::NsDr, Method::Carpa, Method::NsCarpa};
}

bool requires_subspaces(Method tag) {
  switch (tag) {
    case Method::Sp:
    case Method::Rap:
    case Method::Prap:
    case Method::Raar:
    case Method::Drap:
      return true;
    default:
      return false;
  }
}

void validate(const MethodSpec& spec) {
  struct Visitor {
    static void fail(const std::string& what) { throw ParameterOutOfRange(what); }
    void operator()(const MAP&) const {}
    void operator()(const SP&) const {}
    void operator()(const RAP& p) const {
      if (!(p.mu > 0.0 && p.mu < 2.0)) fail("RAP: mu must lie in (0, 2)");
    }
    void operator()(const PRAP& p) const {
      if (!(p.mu > 0.0)) fail("PRAP: mu must be positive");
    }
    void operator()(const GRAP& p) const {
      if (!(p.mu > 0.0 && p.mu < 2.0)) fail("GRAP: mu must lie in (0, 2)");
      if (p.alpha1 < -1.0 || p.alpha1 > 1.0 || p.alpha2 < -1.0 || p.alpha2 > 1.0)
        fail("GRAP: alpha must lie in [-1, 1]");
    }
    void operator()(const AAMR& p) const {
      if (!(p.mu > 0.0 && p.mu <= 1.0)) fail("AAMR: mu must lie in (0, 1]");
      if (!(p.beta > 0.0 && p.beta <= 1.0)) fail("AAMR: beta must lie in (0, 1]");
    }
    void operator()(const RAAR& p) const {
      if (!(p.mu > 0.0 && p.mu <= 1.0)) fail("RAAR: mu must lie in (0, 1]");
    }
    void operator()(const DRAP& p) const {
      if (!(p.mu > 0.0 && p.mu <= 1.0)) fail("DRAP: mu must lie in (0, 1]");
    }
    void operator()(const DR& p) const {
      if (!(p.mu > 0.0 && p.mu < 2.0)) fail("DR: mu must lie in (0, 2)");
    }
    void operator()(const NSDR&) const {}
    void operator()(const CARPA& p) const {
      if (!(p.gamma >= 0.0 && p.gamma < 1.0)) fail("CARPA: gamma must lie in [0, 1)");
      if (!(p.mu > 0.0 && p.mu < 2.0 / (1.0 + p.gamma)))
        fail("CARPA: mu must lie in (0, 2/(1+gamma))");
    }
    void operator()(const NSCARPA& p) const {
      // gamma_max = 1 is admitted; the experiments clamp against it.
      if (!(0.0 <= p.gamma_min && p.gamma_min <= p.gamma0 && p.gamma0 <= p.gamma_max &&
            p.gamma_max <= 1.0))
        fail("NSCARPA: need 0 <= gamma_min <= gamma0 <= gamma_max <= 1");
      if (!(p.mu > 0.0 && p.mu <= 1.0)) fail("NSCARPA: mu must lie in (0, 1]");
      if (!(p.c1 > 0.0)) fail("NSCARPA: c1 must be positive");
      if (!(p.c2 > 0.0)) fail("NSCARPA: c2 must be positive");
      if (!(p.delta > 0.0)) fail("NSCARPA: delta must be positive");
      if (p.schedule == GammaSchedule::ArmijoLike && !(p.eta > 0.0 && p.eta < 1.0))
        fail("NSCARPA: eta must lie in (0, 1)");
      if (p.schedule == GammaSchedule::PowerDecay && !(p.delta > 1.0))
        fail("NSCARPA: the power-decay schedule needs delta > 1");
      if (p.schedule == GammaSchedule::GeometricDecay &&
          !(p.decay_rho > 0.0 && p.decay_rho < 1.0))
        fail("NSCARPA: decay_rho must lie in (0, 1)");
      if ((p.schedule == GammaSchedule::PowerDecay ||
           p.schedule == GammaSchedule::GeometricDecay ||
           p.schedule == GammaSchedule::ExpDecay) &&
          !(p.gamma_base >= 0.0 && p.gamma_base < 1.0))
        fail("NSCARPA: gamma_base must lie in [0, 1)");
    }
  };
  std::visit(Visitor{}, spec);
}

namespace detail {

// Shared CARPA kernel; gamma in [0, 1] (NSCARPA may clamp to gamma_max = 1).
CarpaStepResult carpa_kernel(const Vector& z, const ConvexSet& X, const ConvexSet& Y,
                             double gamma, double mu) {
  CarpaStepResult r;
  r.x = project(X, z);
  r.u = 2.0 * r.x - z;
  r.y = project(Y, r.u);
  r.z_next = (1.0 - mu) * z + mu * ((1.0 - gamma) * (z + r.y - r.x) + gamma * r.y);
  return r;
}

} // namespace detail

CarpaStepResult carpa_step(const Vector& z, const ConvexSet& X, const ConvexSet& Y,
                           double gamma, double mu) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw ParameterOutOfRange("carpa_step: gamma must lie in [0, 1)");
  }
  if (!(mu > 0.0 && mu < 2.0 / (1.0 + gamma))) {
    throw ParameterOutOfRange("carpa_step: mu must lie in (0, 2/(1+gamma))");
  }
  require_same_dim(z, X, Y, "carpa_step");
  return detail::carpa_kernel(z, X, Y, gamma, mu);
}

double nscarpa_gamma_update(double gamma_k, double rho_k, long k,
                            const GammaUpdateConfig& cfg) {
  if (k < 1) {
    throw ParameterOutOfRange("nscarpa_gamma_update: k must be at least 1");
  }
  const double step = cfg.c2 / std::pow(static_cast<double>(k + 1), 2.0 + cfg.delta);
  const double half = rho_k < cfg.c1 ? gamma_k + step : gamma_k - step;
  return clamp_gamma(half, cfg.gamma_min, cfg.gamma_max);
}

NsdrStepResult nsdr_step(const Vector& z, const ConvexSet& X, const ConvexSet& Y) {
  require_same_dim(z, X, Y, "nsdr_step");
  NsdrStepResult r;
  r.x = project(X, z);
  const double denom = (r.x - z).norm();
  if (denom < kFixedPointTol) {
    throw FixedPointReached("nsdr_step: z is already a fixed point of P_X");
  }
  r.tau = r.x.norm() / denom;
  r.u = (1.0 + r.tau) * r.x - r.tau * z;
  r.y = project(Y, r.u);
  r.z_next = r.y + r.tau * (z - r.x);
  return r;
}

Vector baseline_step(const MethodSpec& spec, const Vector& z, const ConvexSet& X,
                     const ConvexSet& Y) {
  validate(spec);
  require_same_dim(z, X, Y, "baseline_step");
  const Method tag = method_tag(spec);
  if (requires_subspaces(tag)) {
    require_subspaces(X, Y, tag);
  }
  return detail::baseline_kernel(spec, z, X, Y);
}

namespace detail {

Vector baseline_kernel(const MethodSpec& spec, const Vector& z, const ConvexSet& X,
                       const ConvexSet& Y) {
  struct Visitor {
    const Vector& z;
    const ConvexSet& X;
    const ConvexSet& Y;

    Vector operator()(const MAP&) const { return project(Y, project(X, z)); }
    Vector operator()(const SP&) const { return 0.5 * (project(Y, z) + project(X, z)); }
    Vector operator()(const RAP& p) const {
      return (1.0 - p.mu) * z + p.mu * project(Y, project(X, z));
    }
    Vector operator()(const PRAP& p) const {
      return (1.0 - p.mu) * project(Y, z) + p.mu * project(Y, project(X, z));
    }
    Vector operator()(const GRAP& p) const {
      return (1.0 - p.mu) * z +
             p.mu * relaxed_project(Y, relaxed_project(X, z, p.alpha1), p.alpha2);
    }
    Vector operator()(const AAMR& p) const {
      const Vector t = 2.0 * p.beta * project(X, z) - z;
      return (1.0 - p.mu) * z + p.mu * (2.0 * p.beta * project(Y, t) - t);
    }
    Vector operator()(const RAAR& p) const {
      const Vector x = project(X, z);
      const Vector xc = complement_project(X, z);
      return p.mu * (project(Y, x) + complement_project(Y, xc)) + (1.0 - p.mu) * x;
    }
    Vector operator()(const DRAP& p) const {
      return project(Y, project(X, z)) +
             p.mu * complement_project(Y, complement_project(X, z));
    }
    Vector operator()(const DR& p) const {
      const Vector x = project(X, z);
      return (1.0 - p.mu) * z + p.mu * (z + project(Y, 2.0 * x - z) - x);
    }
    Vector operator()(const NSDR&) const {
      throw ParameterOutOfRange(
          "baseline_step: nsDR is stateful; step it through the driver");
    }
    Vector operator()(const CARPA& p) const {
      return detail::carpa_kernel(z, X, Y, p.gamma, p.mu).z_next;
    }
    Vector operator()(const NSCARPA&) const {
      throw ParameterOutOfRange(
          "baseline_step: nsCARPA is stateful; step it through the driver");
    }
  };
  return std::visit(Visitor{z, X, Y}, spec);
}

} // namespace detail

MethodSpec optimal_params(Method tag, double theta_f, double theta_p) {
  if (theta_f == 0.0) {
    throw DegenerateAngle("optimal_params: theta_F must be positive");
  }
  if (!(theta_f > 0.0) || !(theta_f <= theta_p) || !(theta_p <= M_PI_2 + 1e-15)) {
    throw ParameterOutOfRange(
        "optimal_params: need 0 < theta_F <= theta_p <= pi/2");
  }
  const double sf = std::sin(theta_f);
  const double cf = std::cos(theta_f);
  const double sp = std::sin(theta_p);
  switch (tag) {
    case Method::Map: return MAP{};
    case Method::Sp: return SP{};
    case Method::Dr: return DR{1.0};
    case Method::Rap: return RAP{2.0 / (1.0 + sf * sf)};
    case Method::Prap: return PRAP{2.0 / (sp * sp + sf * sf)};
    case Method::Grap: {
      const double alpha = (1.0 - sf) / (1.0 + sf);
      return GRAP{1.0, alpha, alpha};
    }
    case Method::Aamr: return AAMR{1.0, 1.0 / (1.0 + sf)};
    case Method::Raar: return RAAR{1.0 / (1.0 + 2.0 * cf * sf)};
    case Method::Drap: return DRAP{(1.0 - sf) * (1.0 - sf) / (cf * cf)};
    case Method::Carpa: {
      const CarpaOptimal opt = carpa_optimal(theta_f, theta_p);
      return CARPA{opt.gamma_star, 1.0};
    }
    case Method::NsDr:
    case Method::NsCarpa:
      throw ParameterOutOfRange(
          "optimal_params: no closed-form optimum for non-stationary methods");
  }
  throw ParameterOutOfRange("optimal_params: unknown method");
}

} // namespace carpa
