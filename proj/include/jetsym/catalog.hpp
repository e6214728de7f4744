#pragma once

// Registry of the operators, conditions, invariant lists, ansatze, equations
// and pipelines used as the golden corpus. Payloads are session DSL text over
// a shared header space; entries may require other entries.

#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "jetsym/error.hpp"
#include "jetsym/session.hpp"

namespace jetsym {

struct CatalogEntry {
  std::string id;
  std::string kind;  // operator | condition-set | invariant-list | ansatz | equation | pipeline
  std::string name;  // name declared by the payload
  std::string payload;
  std::string anchor;
  std::vector<std::string> requires_;
  /// Not a displayed formula of the source; built to exercise a stated claim.
  bool constructed = false;
};

inline const std::string& catalog_header() {
  static const std::string h =
      "space t, x, y -> u order 2 metric 1, -1, -1;\n"
      "param lambda0, lambda1, lambda2;\n"
      "func f, g, K1, K2, R1, R2, R3, R4, Fr, Frho;\n";
  return h;
}

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"translation.dx", "operator", "Dx", "op Dx = d/dx;",
       "hidden symmetry with respect to translations: reduction operator d_x", {}},
      {"translation.dy", "operator", "Dy", "op Dy = d/dy;",
       "hidden symmetry with respect to translations: hidden symmetry operator d_y", {}},
      {"rotation.J", "operator", "J", "op J = x*d/dy - y*d/dx;",
       "equations reducible using radial variables: rotation operator J = x d_y - y d_x", {}},
      {"lorentz.J01", "operator", "J01", "op J01 = t*d/dx + x*d/dt;",
       "equations reducible using radial variables: Lorentz operator J01 = t d_x + x d_t", {}},
      {"lorentz.J02", "operator", "J02", "op J02 = t*d/dy + y*d/dt;",
       "equations reducible using radial variables: Lorentz operator J02 = t d_y + y d_t", {}},
      {"rotation.cond", "condition-set", "rotation", "cond rot: x*u_y - y*u_x = 0;\nconds rotation = rot;",
       "equations reducible using radial variables: rotation condition x u_y - y u_x = 0", {}},
      {"lorentz.cond", "condition-set", "lorentz",
       "cond c01: t*u_x + x*u_t = 0;\ncond c02: t*u_y + y*u_t = 0;\ncond c12: x*u_y - y*u_x = 0;\nconds lorentz = c01, c02, c12;",
       "equations reducible using radial variables: Lorentz conditions t u_x + x u_t = 0, t u_y + y u_t = 0, x u_y - y u_x = 0", {}},
      {"rotation.DI", "invariant-list", "DIrot",
       "invariants DIrot = t, u, u_t, u_tt, x^2 + y^2, x*u_x + y*u_y, u_x^2 + u_y^2, u_xx + u_yy,\n"
       "  u_x^2*u_xx + 2*u_x*u_y*u_xy + u_y^2*u_yy, x*u_x*u_xx + (x*u_y + y*u_x)*u_xy + y*u_y*u_yy,\n"
       "  u_tx^2 + u_ty^2, x*u_tx + y*u_ty;",
       "equations reducible using radial variables: functional basis of absolute differential invariants of J", {}},
      {"rotation.CDI", "invariant-list", "CDIrot",
       "invariants CDIrot = u_x/x, u_y/y, u_tx/x, u_ty/y, u_xx/x^2 - u_x/x^3, u_xy/(x*y), u_yy/y^2 - u_y/y^3;",
       "equations reducible using radial variables: conditional differential invariants u_k/x_k, u_kt/x_k, "
       "u_kl/(x_k x_l) - eps_kl u_k/x_k^3 under the rotation condition", {}},
      {"lorentz.DI", "invariant-list", "DIlor",
       "invariants DIlor = u, contract x_a*x_a, contract x_a*u_a, contract u_a*u_a, contract u_aa,\n"
       "  contract u_a*u_ab*u_b, contract u_a*u_ab*u_bc*u_c, contract u_ab*u_bc*u_ac,\n"
       "  contract x_a*u_ab*u_b, contract x_a*u_ab*u_bc*u_c;",
       "equations reducible using radial variables: functional basis of absolute differential invariants of the Lorentz "
       "operators, indices contracted with g = (1, -1, -1)", {}},
      {"lorentz.CDI", "invariant-list", "CDIlor",
       "invariants CDIlor = u_t/t, -u_x/x, -u_y/y,\n"
       "  u_tt/t^2 - u_t/t^3, u_xx/x^2 - u_x/x^3, u_yy/y^2 - u_y/y^3,\n"
       "  -u_tx/(t*x), -u_ty/(t*y), u_xy/(x*y);",
       "equations reducible using radial variables: conditional differential invariants u_mu/x_mu, "
       "u_munu/(x_mu x_nu) - g_munu u_mu/x_mu^3 under the Lorentz conditions (x_mu lowered with g)", {}},
      {"translation.q", "invariant-list", "qtr",
       "cond ux: u_x = 0 upto 1;\n"
       "invariants qtr = u_x*R1(t, y, u, u_t, u_x, u_y, u_tt, u_tx, u_ty, u_xx, u_xy, u_yy),\n"
       "  u_tx*R2(t, y, u, u_t, u_x, u_y, u_tt, u_tx, u_ty, u_xx, u_xy, u_yy),\n"
       "  u_xx*R3(t, y, u, u_t, u_x, u_y, u_tt, u_tx, u_ty, u_xx, u_xy, u_yy),\n"
       "  u_xy*R4(t, y, u, u_t, u_x, u_y, u_tt, u_tx, u_ty, u_xx, u_xy, u_yy);",
       "hidden symmetry with respect to translations: conditional invariants q^k = u_x R^k, u_xt R^k, u_xx R^k, u_xy R^k "
       "on the manifold u_x = 0", {}},
      {"ansatz.r", "ansatz", "r", "ansatz r: u = phi(t, r) where r = x^2 + y^2 by J;",
       "equations reducible using radial variables: ansatz u = phi(t, r), r = x^2 + y^2", {"rotation.J"}},
      {"ansatz.rho", "ansatz", "rho", "ansatz rho: u = phi(rho) where rho = t^2 - x^2 - y^2 by J01, J02, J;",
       "equations reducible using radial variables: ansatz u = phi(rho), rho = t^2 - x^2 - y^2",
       {"lorentz.J01", "lorentz.J02", "rotation.J"}},
      {"hidden-translation.1", "equation", "HT1", "expr HT1 = u_t + u_x*K1(t, y, u) + u_y*K2(t, u) + u_xx + u_yy;",
       "hidden symmetry with respect to translations: first specific example", {}},
      {"hidden-translation.2", "equation", "HT2",
       "expr HT2 = u_tt - K1(t, y, u)*u_xx - K1_;3(t, y, u)*u_x^2 - K2(t, u)*u_yy - K2_;2(t, u)*u_y^2;",
       "hidden symmetry with respect to translations: second specific example, u_tt - (K1 u_x)_x - (K2 u_y)_y expanded", {}},
      {"nl-wave.class", "equation", "NLW", "expr NLW = u_tt - u_xx - u_yy - f(t, x, y, u);",
       "hidden symmetry and reduction: nonlinear wave equation class box u = f(t, x, y, u)", {}},
      {"fts.equation", "equation", "FTS",
       "expr FTS = u_tt - u_xx - u_yy - lambda0*u_t^2/t^2 - lambda1*u_x^2/x^2 - lambda2*u_y^2/y^2;",
       "equations reducible using radial variables: nonlinear wave equation with Lorentz conditional symmetry, n = 2", {}},
      {"pipeline.nl-wave", "pipeline", "nl-wave",
       "expr W_f = u_tt - u_xx - u_yy - f(t, x, u);\n"
       "expr W_g = u_tt - u_xx - u_yy - g(u);\n"
       "expr W_lin = u_tt - u_xx - u_yy;\n"
       "expr W_y = u_tt - u_xx - u_yy - y*u;\n"
       "reduction ry = translation y;\n"
       "op C = (t + x)^2*d/dt + (t + x)^2*d/dx;\n"
       "transform boost: t -> 5/4*t + 3/4*x, x -> 3/4*t + 5/4*x;\n"
       "pipeline nl-wave class \"box u = f(t, x, y, u), reduction by d_y\" members W_f, W_g, W_lin, W_y reductions ry "
       "candidates Dx, J01, C transforms boost;",
       "hidden symmetry and reduction: group classification of the wave class with respect to hidden symmetries after "
       "reduction by d_y", {"translation.dx", "lorentz.J01"}},
      // Constructed from the invariants above to exercise the reduction/condition equivalence.
      {"radial.eq1", "equation", "Req1", "expr Req1 = u_t - u_xx - u_yy;",
       "constructed instance of the radially reducible class", {}, true},
      {"radial.eq2", "equation", "Req2", "expr Req2 = u_tt - u_xx - u_yy - u_x/x;",
       "constructed instance of the radially reducible class", {}, true},
      {"radial.eq3", "equation", "Req3", "expr Req3 = u_t - (u_x^2 + u_y^2)*u - u_tx/x;",
       "constructed instance of the radially reducible class", {}, true},
      {"radial.eq4", "equation", "Req4", "expr Req4 = u_t*(x*u_x + y*u_y) - u_xy/(x*y) - t*u;",
       "constructed instance of the radially reducible class", {}, true},
      {"radial.eq5", "equation", "Req5",
       "expr Req5 = u_tt - Fr(t, u, x^2 + y^2, u_x^2 + u_y^2, x*u_tx + y*u_ty, u_y/y, u_xy/(x*y), u_yy/y^2 - u_y/y^3);",
       "constructed generic instance of the radially reducible class with an opaque outer function", {}, true},
      {"radial.control1", "equation", "Rc1", "expr Rc1 = u_t - u_xx;",
       "constructed control outside the radially reducible class", {}, true},
      {"radial.control2", "equation", "Rc2", "expr Rc2 = u_tt - u_x*u_y;",
       "constructed control outside the radially reducible class", {}, true},
      {"lorentz.eq1", "equation", "Leq1",
       "expr Leq1 = u_tt - u_xx - u_yy - Frho(u, t^2 - x^2 - y^2, u_t^2 - u_x^2 - u_y^2, u_t/t, u_xx/x^2 - u_x/x^3, u_xy/(x*y));",
       "constructed generic instance of the Lorentz-reducible class with an opaque outer function", {}, true},
  };
  return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  throw UnknownEntryError("unknown catalog entry '" + id + "'");
}

/// Declares `id` (after its requirements) in `s`; returns the declared name.
/// A session without a space gets the catalog space; one with its own space
/// gets the catalog parameters and functions.
inline std::string import_entry(Session& s, const std::string& id) {
  const CatalogEntry& e = catalog_entry(id);
  if (!s.has_space()) {
    s.load(catalog_header(), "@catalog/header");
  } else {
    const std::string& h = catalog_header();
    s.load(h.substr(h.find("param")), "@catalog/header");
  }
  for (const auto& r : e.requires_) import_entry(s, r);
  s.load(e.payload, "@catalog/" + id);
  return e.name;
}

inline void attach_catalog(Session& s) { s.set_importer([](Session& session, const std::string& id) { return import_entry(session, id); }); }

/// Fresh session over the catalog header space with catalog references enabled.
inline Session catalog_session() {
  Session s;
  s.load(catalog_header(), "@catalog/header");
  attach_catalog(s);
  return s;
}

/// A catalog entry declared in a fresh catalog session.
struct LoadedEntry {
  CatalogEntry entry;
  Session session;

  VectorField op() { return session.op(entry.name); }
  Expression expression() { return session.expression(entry.name); }
  std::vector<std::pair<std::string, Expression>> items() { return session.targets(entry.name); }
  ConditionSet conditions() { return session.conditions({entry.name}); }
  Ansatz ansatz() { return session.ansatz(entry.name); }
  PipelineSpec pipeline() { return session.pipeline(entry.name); }
};

inline LoadedEntry load(const std::string& id) {
  LoadedEntry l{catalog_entry(id), catalog_session()};
  import_entry(l.session, id);
  return l;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// "id checksum" lines pinning every payload (and the header).
inline std::string catalog_checksums() {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(catalog_header())));
  std::string out = std::string("header ") + buf + "\n";
  for (const auto& e : catalog()) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(e.payload)));
    out += e.id + " " + buf + "\n";
  }
  return out;
}

}  // namespace jetsym
