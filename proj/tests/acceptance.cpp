// One line per acceptance check; exits non-zero if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "ohs/algebra.hpp"
#include "ohs/homology.hpp"
#include "ohs/runner.hpp"
#include "ohs/stability.hpp"

using namespace ohs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

bool exhaustive_pass(const AxiomReport &r, std::string &detail, const std::string &name) {
  if (!r.pass) {
    detail += name + " failed: " + r.witness.value_or("?") + "; ";
    return false;
  }
  if (r.sampled) {
    detail += name + " was sampled; ";
    return false;
  }
  return true;
}

Outcome operad_axioms() {
  const auto t = std::chrono::steady_clock::now();
  Outcome o{true, ""};
  o.pass &= exhaustive_pass(check_operad_axioms(*as_operad(4, 1), 4, 1), o.detail, "As");
  o.pass &= exhaustive_pass(check_operad_axioms(*com_operad(5, 1), 5, 1), o.detail, "Com");
  o.pass &= exhaustive_pass(check_operad_axioms(*barratt_eccles(3, 3), 3, 3), o.detail, "Barratt-Eccles");
  o.pass &= exhaustive_pass(check_operad_axioms(*abelian_monoid_operad(FiniteMonoid::cyclic(2), 3, 1), 3, 1),
                            o.detail, "abelian(Z/2)");
  const auto bad = check_operad_axioms(*corrupted_as(3), 3, 1);
  if (bad.pass || !bad.witness) {
    o.pass = false;
    o.detail += "corrupted As was not caught; ";
  } else {
    o.detail += "corrupted As: " + *bad.witness + "; ";
  }
  const double s = seconds_since(t);
  if (s > 60) o.pass = false;
  o.detail += "total " + fmt_seconds(s);
  return o;
}

Outcome barratt_eccles_point() {
  auto be = barratt_eccles(3, 4);
  Outcome o{true, ""};
  for (int n : {2, 3}) {
    const auto h = homology_through(*be->level(n), 3);
    std::string line;
    for (const auto &g : h) {
      line += g.to_string() + " ";
      if (g.degree == 0 ? g.to_string() != "Z" : !g.is_trivial()) o.pass = false;
    }
    o.detail += "level " + std::to_string(n) + ": " + line;
  }
  return o;
}

Outcome nerve_z2() {
  auto b = nerve(FiniteMonoid::cyclic(2), 5);
  const auto h = homology_through(*b, 4);
  // cellular chains of RP^5: boundaries 0, 2, 0, 2, 0
  ChainComplex hand;
  hand.top = 5;
  hand.boundary.resize(6);
  hand.boundary[0].cols.resize(1);
  for (int q = 1; q <= 5; ++q) {
    hand.boundary[q].rows = 1;
    hand.boundary[q].cols.resize(1);
    if (q % 2 == 0) hand.boundary[q].cols[0].push_back({0, Integer(2)});
  }
  const char *expect[] = {"Z", "Z/2", "0", "Z/2", "0"};
  Outcome o{true, ""};
  for (int q = 0; q <= 4; ++q) {
    o.detail += h[q].to_string() + " ";
    o.pass &= h[q].to_string() == expect[q] && homology(hand, q).isomorphic_to(h[q]);
  }
  return o;
}

Outcome bar_retract() {
  auto s0 = sphere0(3);
  FreeAlgebraBounds fb{3, 3, 3};
  Outcome o{true, ""};
  for (const auto &op : {monoid_operad(FiniteMonoid::cyclic(2), 4, 3), com_operad(4, 3)}) {
    const auto pt = point_algebra(op, 3);
    const auto fx = free_oalgebra(free_algebra(op, s0, fb));
    for (const auto *x : {&pt, &fx}) {
      const auto b = bar(identity_map(op), *x, {3, fb});
      const auto hd = homology_through(*b.diagonal, 2), hx = homology_through(*x->carrier, 2);
      bool same = b.exact;
      for (int q = 0; q <= 2; ++q) same &= hd[q].isomorphic_to(hx[q]);
      o.pass &= same;
      o.detail += op->name() + (x == &pt ? "/point" : "/O(S0)") + (same ? " ok" : " MISMATCH") + "; ";
    }
  }
  return o;
}

Outcome rectification() {
  auto as = as_operad(3, 2);
  auto fa = free_algebra(as, sphere0(2), {3, 3, 2});
  const auto r = rectify(as, free_oalgebra(fa), {2, {3, 3, 2}});
  const auto pm = pi0_monoid(r);
  const auto cx = pi0(*fa->set()), cm = pi0(*r.bar.diagonal);
  bool rho_id = cx.count() == pm.components;
  for (Index v : cx.representatives)
    rho_id &= pm.weight_of[static_cast<std::size_t>(cm.of_vertex[r.rho(0, v)])] == fa->set()->weight(0, v);
  const auto h0 = homology(*r.bar.diagonal, 0);
  const bool ring = h0.rank == pm.components && h0.torsion.empty() && pm.is_truncated_naturals;
  Outcome o;
  o.pass = r.strictly_associative && pm.is_truncated_naturals && rho_id && ring;
  o.detail = "pi0 = N<=" + std::to_string(pm.components - 1) + (pm.is_truncated_naturals ? "" : " (NOT N)") +
             ", rho on pi0 " + (rho_id ? "identity" : "NOT identity") + ", H_0 = " + h0.to_string() +
             (ring ? " = Z[N]" : "");
  return o;
}

Outcome group_completion() {
  const auto t = std::chrono::steady_clock::now();
  const auto r = group_completion_homology(symmetric_group_telescope(6, 2), 6, 1, 2);
  const double s = seconds_since(t);
  Outcome o;
  o.pass = r.stabilized && r.degrees[0].group.to_string() == "Z" && r.degrees[1].group.to_string() == "Z/2" &&
           r.degrees[0].reached_at <= 4 && r.degrees[1].reached_at <= 4 && s <= 300;
  o.detail = "H_0 = " + r.degrees[0].group.to_string() + ", H_1 = " + r.degrees[1].group.to_string() +
             ", window reached at stage " + std::to_string(std::max(r.degrees[0].reached_at, r.degrees[1].reached_at)) +
             ", " + fmt_seconds(s);
  return o;
}

Outcome ohs_verdicts() {
  auto as = as_operad(4, 2);
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 4, 2, {1});
  auto com = trivially_graded(com_operad(4, 2));
  auto p = graded_product(a, com);
  auto gas = trivially_graded(as);
  const bool ra = check_ohs(*a, canonical_mu(as, a->operad), {}).is_ohs;
  const bool rc = check_ohs(*com, canonical_mu(as, com->operad), {}).is_ohs;
  const bool rp = check_ohs(*p, canonical_mu(as, p->operad), {}).is_ohs;
  const auto rs = check_ohs(*gas, identity_map(as), {});
  const bool as_fails = !rs.is_ohs && !rs.inconclusive && rs.arities.size() >= 2 &&
                        rs.arities[1].status == "not-iso" && rs.witness &&
                        rs.witness->find("arity 2, H_0") != std::string::npos;
  Outcome o;
  o.pass = ra && rc && rp && as_fails;
  o.detail = std::string("abelian(Z/2) ") + (ra ? "pass" : "FAIL") + ", Com " + (rc ? "pass" : "FAIL") +
             ", abelian(Z/2) x Com " + (rp ? "pass" : "FAIL") + ", As fails: " + rs.witness.value_or("(no witness)");
  return o;
}

Outcome splitting() {
  const int D = 3;
  auto a = self_graded_abelian(FiniteMonoid::cyclic(2), 3, D, {1});
  auto be = barratt_eccles(3, D);
  auto g = graded_product(a, trivially_graded(be));
  const auto r = splitting_check(
      *g, canonical_mu(as_operad(3, D), g->operad), product_projection(g->operad, be, 1),
      [&](int n) {
        return std::vector<SigmaSet>{trivial_sigma(n, point(D)), free_orbit(n, D), smash_power(sphere0(D), n)};
      },
      {3, 2, 4, 2});
  int iso = 0;
  for (const auto &c : r.cases) iso += c.status == "iso";
  Outcome o;
  o.pass = r.pass && iso == static_cast<int>(r.cases.size()) && !r.cases.empty();
  o.detail = std::to_string(iso) + "/" + std::to_string(r.cases.size()) + " cases iso on H_0..H_2 for n <= 3" +
             (r.witness ? "; " + *r.witness : "");
  return o;
}

Outcome determinism() {
  // small budget so the axiom check samples and the seed matters
  const std::string doc = R"({"objects":{"B":{"barratt-eccles":{}}},"command":{"check-operad":{"of":"B","n_max":3,"q_max":2}},"budget":{"max_cases":1000,"samples":2000}})";
  const auto a = run_document(doc, 99), b = run_document(doc, 99);
  const auto c = run_document(R"({"objects":{"Z2":{"abelian-monoid":{"cyclic":2,"generators":[1]}}},"command":{"ohs-check":{"of":"Z2"}}})", 5);
  const auto d = run_document(R"({"objects":{"Z2":{"abelian-monoid":{"cyclic":2,"generators":[1]}}},"command":{"ohs-check":{"of":"Z2"}}})", 5);
  Outcome o;
  o.pass = a.report == b.report && c.report == d.report && a.exit_code == kPass;
  o.detail = std::to_string(a.report.size()) + " and " + std::to_string(c.report.size()) + " byte reports " +
             (o.pass ? "identical" : "DIFFER");
  return o;
}

} // namespace

int main() {
  const std::pair<const char *, std::function<Outcome()>> criteria[] = {
      {"operad axioms", operad_axioms},
      {"Barratt-Eccles levels are acyclic", barratt_eccles_point},
      {"homology of B(Z/2)", nerve_z2},
      {"bar construction retract", bar_retract},
      {"rectification", rectification},
      {"group completion of coprod B Sigma_n", group_completion},
      {"OHS verdicts", ohs_verdicts},
      {"splitting", splitting},
      {"determinism", determinism},
  };
  int failures = 0, k = 0;
  for (const auto &[name, run] : criteria) {
    ++k;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
