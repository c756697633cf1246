#include "ohs/runner.hpp"

#include <chrono>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ohs/algebra.hpp"
#include "ohs/homology.hpp"
#include "ohs/operad.hpp"
#include "ohs/sset_constructions.hpp"
#include "ohs/stability.hpp"

namespace ohs {

namespace {

using Json = nlohmann::ordered_json;

struct Space {
  SSetPtr set;
  bool exact = true;
  std::string note;
  FreeAlgebraPtr free;
};

// Finite presentations of simplicial sets: an ordered complex from facets.
SSetPtr ordered_complex(const std::vector<std::vector<int>> &facets, std::optional<int> basepoint, int dim,
                        const std::string &label) {
  KeyedModel m;
  m.dim_bound = dim;
  m.label = label;
  m.enumerate = [facets](int q) {
    std::set<Key> out;
    for (const auto &f : facets) {
      // nondecreasing sequences of length q + 1 in f
      std::vector<std::size_t> idx(static_cast<std::size_t>(q + 1), 0);
      while (true) {
        Key k;
        for (auto i : idx) k.push_back(static_cast<std::uint32_t>(f[i]));
        out.insert(k);
        int pos = q;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] + 1 == f.size()) --pos;
        if (pos < 0) break;
        const auto v = ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j <= q; ++j) idx[static_cast<std::size_t>(j)] = v;
      }
    }
    return std::vector<Key>(out.begin(), out.end());
  };
  m.face = [](int, int i, const Key &k) {
    Key out = k;
    out.erase(out.begin() + i);
    return out;
  };
  m.degeneracy = [](int, int i, const Key &k) {
    Key out = k;
    out.insert(out.begin() + i, k[static_cast<std::size_t>(i)]);
    return out;
  };
  if (basepoint) {
    bool found = false;
    for (const auto &f : facets)
      for (int v : f) found = found || v == *basepoint;
    if (!found) throw Error("complex " + label + ": basepoint " + std::to_string(*basepoint) + " is not a vertex");
    m.basepoint = Key{static_cast<std::uint32_t>(*basepoint)};
  }
  return build_keyed(m).set;
}

class World {
public:
  explicit World(const JobSpec &job) : job_(job) {}

  FiniteMonoid monoid(const std::string &name) {
    const ObjectSpec &o = job_.object(name);
    FiniteMonoid m;
    if (o.table) {
      m.table = *o.table;
      const int n = static_cast<int>(m.table.size());
      for (const auto &row : m.table)
        if (static_cast<int>(row.size()) != n) throw LawViolation("monoid " + name + ": table is not square");
      m.identity = -1;
      for (int e = 0; e < n && m.identity < 0; ++e) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = m.table[e][a] == a && m.table[a][e] == a;
        if (ok) m.identity = e;
      }
      if (m.identity < 0) throw LawViolation("monoid " + name + ": the table has no identity element");
    } else if (o.cyclic) {
      m = FiniteMonoid::cyclic(o.cyclic);
    } else if (o.symmetric_group) {
      m = FiniteMonoid::symmetric_group(o.symmetric_group);
    } else if (o.naturals >= 0) {
      m = FiniteMonoid::naturals(o.naturals);
    } else {
      throw Error("monoid " + name + ": the symmetric-groups monoid is only available to group-complete");
    }
    m.label = name;
    m.validate();
    if (o.builtin == "abelian-monoid" && !m.is_commutative())
      throw LawViolation("abelian monoid " + name + " is not commutative");
    for (int g : o.generators)
      if (g < 0 || g >= m.order()) throw Error("monoid " + name + ": generator " + std::to_string(g) + " out of range");
    return m;
  }

  GradedOperadPtr operad(const std::string &name, int arity, int dim) {
    const ObjectSpec &o = job_.object(name);
    const int a = o.arity ? o.arity : arity, d = o.dim ? o.dim : dim;
    const auto key = std::make_tuple(name, a, d);
    if (auto it = operads_.find(key); it != operads_.end()) return it->second;
    GradedOperadPtr g;
    if (o.builtin == "as")
      g = trivially_graded(as_operad(a, d));
    else if (o.builtin == "com")
      g = trivially_graded(com_operad(a, d));
    else if (o.builtin == "barratt-eccles")
      g = trivially_graded(barratt_eccles(a, d));
    else if (o.builtin == "monoid")
      g = trivially_graded(monoid_operad(monoid(name), a, d));
    else if (o.builtin == "abelian-monoid")
      g = self_graded_abelian(monoid(name), a, d, o.generators);
    else if (o.builtin == "product")
      g = graded_product(operad(o.of[0], a, d), operad(o.of[1], a, d));
    else if (o.builtin == "product-over-as")
      g = trivially_graded(product_over_as(operad(o.of[0], a, d)->operad, operad(o.of[1], a, d)->operad));
    else
      throw Error("object " + name + " is not an operad");
    operads_[key] = g;
    return g;
  }

  Space space(const std::string &name, int dim) {
    const ObjectSpec &o = job_.object(name);
    const int d = o.dim ? o.dim : dim;
    const auto key = std::make_pair(name, d);
    if (auto it = spaces_.find(key); it != spaces_.end()) return it->second;
    Space s;
    if (o.builtin == "point") {
      s.set = point(d);
    } else if (o.builtin == "sphere0") {
      s.set = sphere0(d);
    } else if (o.builtin == "nerve") {
      s.set = nerve(monoid(o.of[0]), d);
      s.note = "nerve of " + o.of[0];
    } else if (o.is_monoid()) {
      s.set = nerve(monoid(name), d);
      s.note = "a monoid is read as its nerve";
    } else if (o.builtin == "complex") {
      s.set = ordered_complex(o.simplices, o.basepoint, d, name);
    } else if (o.builtin == "free-algebra") {
      const auto op = operad(o.operad, std::max(o.n_max, 2), d)->operad;
      const Space base = space(o.on, d);
      s.free = free_algebra(op, base.set, {o.n_max, o.w_max, d});
      s.set = s.free->set();
      s.exact = s.free->exact() && base.exact;
      s.note = s.free->exactness_note();
    } else {
      throw Error("object " + name + " is not a space");
    }
    spaces_[key] = s;
    return s;
  }

private:
  const JobSpec &job_;
  std::map<std::tuple<std::string, int, int>, GradedOperadPtr> operads_;
  std::map<std::pair<std::string, int>, Space> spaces_;
};

// Collects checks; the verdict is the worst of them.
class Report {
public:
  Json checks = Json::array();
  Json results = Json::object();
  Json disclosures = Json::array();

  void check(const std::string &name, std::string verdict, const std::optional<std::string> &witness = {}) {
    Json c;
    c["name"] = name;
    c["verdict"] = verdict;
    if (verdict != "pass") c["witness"] = witness.value_or("no witness recorded");
    checks.push_back(std::move(c));
    if (verdict == "fail") failed_ = true;
    if (verdict == "inconclusive") inconclusive_ = true;
  }
  void check_that(const std::string &name, bool pass, const std::optional<std::string> &witness = {}) {
    check(name, std::string(pass ? "pass" : "fail"), witness);
  }
  void disclose(const std::string &s) { disclosures.push_back(s); }

  std::string verdict() const { return failed_ ? "fail" : inconclusive_ ? "inconclusive" : "pass"; }
  int exit_code() const { return failed_ ? kFail : inconclusive_ ? kInconclusive : kPass; }

private:
  bool failed_ = false, inconclusive_ = false;
};

Json group_json(const HomologyGroup &h) {
  Json j;
  j["degree"] = h.degree;
  j["group"] = h.to_string();
  j["rank"] = h.rank;
  Json t = Json::array();
  for (const auto &d : h.torsion) t.push_back(d.get_str());
  j["torsion"] = t;
  return j;
}

Json families_json(const AxiomReport &r) {
  Json out = Json::array();
  for (const auto &f : r.families) {
    Json j;
    j["family"] = f.family;
    j["pass"] = f.pass;
    j["cases"] = f.cases;
    j["sampled"] = f.sampled;
    if (!f.note.empty()) j["note"] = f.note;
    if (f.witness) j["witness"] = *f.witness;
    out.push_back(std::move(j));
  }
  return out;
}

Json degrees_json(const std::vector<IsoVerdict> &ds) {
  Json out = Json::array();
  for (const auto &d : ds) out.push_back({{"degree", d.degree}, {"source", d.source}, {"target", d.target}, {"iso", d.iso}});
  return out;
}

Json colimit_json(const std::vector<ColimitResult> &cs) {
  Json out = Json::array();
  for (const auto &c : cs) {
    Json j = group_json(c.group);
    j["degree"] = c.degree;
    j["stabilized"] = c.stabilized;
    j["stable_from"] = c.stable_from;
    j["reached_at"] = c.reached_at;
    Json st = Json::array();
    for (const auto &g : c.stages) st.push_back(g.to_string());
    j["stages"] = st;
    if (!c.message.empty()) j["message"] = c.message;
    out.push_back(std::move(j));
  }
  return out;
}

CheckBudget budget_of(const JobSpec &job) { return {job.max_cases, job.samples, job.seed}; }

OperadMap choose_mu(const JobSpec &job, const GradedOperadPtr &g, int arity, int dim) {
  const auto &o = g->operad;
  if (job.command.mu == "identity") {
    if (job.object(job.command.of).builtin != "as") throw Error("mu = identity needs the As operad");
    return identity_map(o);
  }
  if (!o->has_from_as()) throw Error("operad " + o->name() + " has no canonical map from As");
  return canonical_mu(as_operad(arity, dim), o);
}

void run_check_operad(const JobSpec &job, World &w, Report &rep) {
  const auto &c = job.command;
  const auto g = w.operad(c.of, std::max(c.n_max, 1), std::max(c.q_max, 1));
  const auto r = check_operad_axioms(*g->operad, c.n_max, c.q_max, budget_of(job));
  rep.results["operad"] = g->operad->name();
  rep.results["families"] = families_json(r);
  for (const auto &f : r.families) {
    rep.check_that(f.family, f.pass, f.witness);
    if (f.sampled) rep.disclose(f.family + ": " + f.note);
  }
}

void run_homology(const JobSpec &job, World &w, Report &rep) {
  const auto &c = job.command;
  const Space s = w.space(c.of, c.q_max + 1);
  if (s.set->dim_bound() < c.q_max + 1)
    throw TruncationError("object " + c.of + " is truncated at dimension " + std::to_string(s.set->dim_bound()) +
                          "; H_" + std::to_string(c.q_max) + " needs dimension " + std::to_string(c.q_max + 1));
  Json table = Json::array();
  for (const auto &h : homology_through(*s.set, c.q_max)) {
    Json j = group_json(h);
    j["exact"] = s.exact;
    j["note"] = s.exact ? (s.note.empty() ? std::string("exact below the dimension bound") : s.note)
                        : "truncated: " + s.note;
    table.push_back(std::move(j));
  }
  rep.results["homology"] = table;
  rep.check("homology", "pass");
  if (!s.exact) rep.disclose("homology of a truncated free algebra: " + s.note);
}

void run_ohs(const JobSpec &job, World &w, Report &rep) {
  const auto &c = job.command;
  const int dim = c.q_max + 1, arity = std::max(c.n_max, 2);
  const auto g = w.operad(c.of, arity, dim);
  const auto mu = choose_mu(job, g, arity, dim);
  OHSParams p{c.n_max, c.G, c.q_max, c.window, {}};
  if (c.s_tilde0) {
    p.s_tilde0 = static_cast<Index>(*c.s_tilde0);
    make_propagator(*g, mu, p.s_tilde0); // validates the grade of the choice
  }
  const auto r = check_ohs(*g, mu, p);
  rep.results["operad"] = g->operad->name();
  rep.results["htpycom"] = {{"pass", r.htpycom.pass}, {"detail", r.htpycom.detail}};
  rep.results["grading_audit"] = {{"pass", r.audit.pass}, {"cases", r.audit.cases}};
  rep.results["propagator"] = {{"s", g->grading.to_string(r.propagator.s)},
                               {"s_tilde0", r.propagator.s_tilde0},
                               {"s_tilde", r.propagator.s_tilde},
                               {"mu0", r.propagator.mu0}};
  Json arities = Json::array();
  for (const auto &a : r.arities) {
    Json j;
    j["arity"] = a.arity;
    j["status"] = a.status;
    j["stable_stage"] = a.stable_stage;
    j["squares_commute"] = a.squares_commute;
    j["degrees"] = degrees_json(a.degrees);
    if (a.witness) j["witness"] = *a.witness;
    arities.push_back(std::move(j));
  }
  rep.results["arities"] = arities;
  rep.results["is_ohs"] = r.is_ohs;
  rep.check_that("htpycom", r.htpycom.pass, r.htpycom.detail);
  rep.check_that("grading audit", r.audit.pass, r.audit.witness);
  for (const auto &a : r.arities) {
    const std::string name = "arity " + std::to_string(a.arity);
    if (a.status == "not-stabilized")
      rep.check(name, "inconclusive", a.witness);
    else
      rep.check_that(name, a.status == "iso" && a.squares_commute, a.witness);
  }
  rep.disclose("homology compared through degree " + std::to_string(c.q_max) + " over at most " +
               std::to_string(c.G) + " stages; a ladder counts as stable after " + std::to_string(c.window) +
               " consecutive isomorphisms");
}

void run_group_complete(const JobSpec &job, World &w, Report &rep) {
  const auto &c = job.command;
  const ObjectSpec &o = job.object(c.of);
  GroupCompletionResult r;
  if (o.symmetric_groups) {
    r = group_completion_homology(symmetric_group_telescope(o.symmetric_groups, c.q_max + 1), c.stages, c.q_max,
                                  c.window);
  } else {
    r = group_completion_homology(w.monoid(c.of), o.generators, c.stages, c.q_max, c.window);
  }
  rep.results["telescope"] = r.name;
  rep.results["degrees"] = colimit_json(r.degrees);
  rep.results["stabilized"] = r.stabilized;
  if (r.pi0) {
    rep.results["pi0"] = {{"commutative", r.pi0->commutative},
                          {"colimit_size", r.pi0->colimit_size},
                          {"grothendieck_size", r.pi0->grothendieck_size},
                          {"match", r.pi0->match}};
    if (r.pi0->commutative)
      rep.check_that("Grothendieck cross-check", r.pi0->match,
                "colimit of pi0 has " + std::to_string(r.pi0->colimit_size) + " elements, the Grothendieck group " +
                    std::to_string(r.pi0->grothendieck_size));
  }
  for (const auto &d : r.degrees)
    rep.check("H_" + std::to_string(d.degree) + " stabilized", d.stabilized ? "pass" : "inconclusive",
              d.message);
  rep.disclose(r.centrality);
}

void run_splitting(const JobSpec &job, World &w, Report &rep) {
  const auto &c = job.command;
  const int dim = c.q_max + 1, arity = std::max(c.n_max, 2);
  const auto g = w.operad(c.of, arity, dim);
  const auto be = barratt_eccles(arity, dim);
  const auto prod = graded_product(g, trivially_graded(be));
  const auto mu = canonical_mu(as_operad(arity, dim), prod->operad);
  const auto pi = product_projection(prod->operad, be, 1);
  const auto r = splitting_check(
      *prod, mu, pi,
      [dim](int n) {
        return std::vector<SigmaSet>{trivial_sigma(n, point(dim)), free_orbit(n, dim), smash_power(sphere0(dim), n)};
      },
      {c.n_max, c.q_max, c.G, c.window});
  Json cases = Json::array();
  for (const auto &sc : r.cases) {
    Json j;
    j["arity"] = sc.arity;
    j["y"] = sc.y;
    j["half_smash"] = sc.half_smash;
    j["status"] = sc.status;
    j["degrees"] = degrees_json(sc.degrees);
    cases.push_back(std::move(j));
    const std::string name =
        "arity " + std::to_string(sc.arity) + ", " + sc.y + (sc.half_smash ? " (half-smash)" : "");
    if (sc.status == "not-stabilized")
      rep.check(name, "inconclusive", "ladder did not stabilize");
    else {
      std::optional<std::string> wit;
      for (const auto &d : sc.degrees)
        if (!d.iso && !wit) wit = "H_" + std::to_string(d.degree) + ": " + d.source + " -> " + d.target;
      rep.check_that(name, sc.status == "iso", wit);
    }
  }
  rep.results["operad"] = prod->operad->name();
  rep.results["cases"] = cases;
  rep.disclose("pi is the projection of " + g->operad->name() +
               " x Barratt-Eccles onto its second factor; the first factor is what is tested");
}

void run_bar(const JobSpec &job, World &w, Report &rep) {
  const auto &c = job.command;
  const int dim = c.q_max + 1;
  const ObjectSpec &xo = job.object(c.on);
  FreeAlgebraBounds fb{std::max(c.n_max, 1), -1, dim};
  OAlgebra x;
  if (xo.builtin == "free-algebra") {
    const Space s = w.space(c.on, dim);
    x = free_oalgebra(s.free);
    fb = s.free->bounds();
  } else {
    x = point_algebra(w.operad(c.of, std::max(c.n_max, 2), dim)->operad, dim);
  }
  const auto b = bar(identity_map(x.operad), x, {std::max(c.p_max, dim), fb});
  const auto hd = homology_through(*b.diagonal, c.q_max);
  const auto hx = homology_through(*x.carrier, c.q_max);
  Json table = Json::array();
  for (int q = 0; q <= c.q_max; ++q) {
    Json j;
    j["degree"] = q;
    j["diagonal"] = hd[static_cast<std::size_t>(q)].to_string();
    j["algebra"] = hx[static_cast<std::size_t>(q)].to_string();
    j["exact"] = b.exact;
    table.push_back(std::move(j));
    rep.check_that("H_" + std::to_string(q), hd[static_cast<std::size_t>(q)].isomorphic_to(hx[static_cast<std::size_t>(q)]),
              "H_" + std::to_string(q) + " of the diagonal is " + hd[static_cast<std::size_t>(q)].to_string() +
                  " but the algebra has " + hx[static_cast<std::size_t>(q)].to_string());
  }
  rep.results["construction"] = b.provenance;
  rep.results["homology"] = table;
  if (!b.exact) rep.disclose("the bar construction is truncated by arity and weight; groups are of the truncation");
}

void run_rectify(const JobSpec &job, World &w, Report &rep) {
  const auto &c = job.command;
  const int dim = c.q_max + 1;
  const Space s = w.space(c.on, dim);
  const auto as = s.free->operad();
  const auto r = rectify(as, free_oalgebra(s.free), {std::max(c.p_max, dim), s.free->bounds()});
  const auto pm = pi0_monoid(r);
  const auto &x = *s.free->set();
  const auto cx = pi0(x), cm = pi0(*r.bar.diagonal);
  // rho on pi0, compared by weight
  std::optional<std::string> rho_w;
  std::set<int> hit;
  for (Index v : cx.representatives) {
    const int m = cm.of_vertex[r.rho(0, v)];
    hit.insert(m);
    if (pm.weight_of[static_cast<std::size_t>(m)] != x.weight(0, v) && !rho_w)
      rho_w = "rho sends a component of weight " + std::to_string(x.weight(0, v)) + " to weight " +
              std::to_string(pm.weight_of[static_cast<std::size_t>(m)]);
  }
  if (static_cast<int>(hit.size()) != pm.components && !rho_w) rho_w = "rho is not surjective on pi0";
  if (cx.count() != pm.components && !rho_w) rho_w = "rho is not injective on pi0";
  const auto h0 = homology(*r.bar.diagonal, 0);
  Json table = Json::array();
  for (int i = 0; i < pm.components; ++i) {
    Json row = Json::array();
    for (int j = 0; j < pm.components; ++j) {
      const int t = pm.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      row.push_back(t < 0 ? -1 : pm.weight_of[static_cast<std::size_t>(t)]);
    }
    table.push_back(row);
  }
  rep.results["components"] = pm.components;
  rep.results["weights"] = pm.weight_of;
  rep.results["product_by_weight"] = table;
  rep.results["associativity_cases"] = r.associativity_cases;
  rep.results["H0"] = group_json(h0);
  rep.check_that("strictly associative", r.strictly_associative, r.witness);
  rep.check_that("pi0 is N", pm.is_truncated_naturals, "pi0 of the rectification is not the truncated naturals");
  rep.check_that("rho on pi0", !rho_w, rho_w);
  rep.check_that("H0 ring is Z[N]", h0.rank == pm.components && h0.torsion.empty() && pm.is_truncated_naturals,
            "H_0 = " + h0.to_string() + " with " + std::to_string(pm.components) + " components");
  rep.disclose("the monoid N is truncated at weight " + std::to_string(s.free->bounds().w_max) +
               "; products beyond it are undefined");
}

std::string render(const Json &report) {
  std::ostringstream out;
  out << report.dump(2) << "\n\n";
  out << "verdict: " << report.value("verdict", std::string("?")) << "\n";
  if (report.contains("error")) out << "error: " << report["error"].get<std::string>() << "\n";
  if (report.contains("checks"))
    for (const auto &c : report["checks"]) {
      out << "  [" << c["verdict"].get<std::string>() << "] " << c["name"].get<std::string>();
      if (c.contains("witness")) out << ": " << c["witness"].get<std::string>();
      out << "\n";
    }
  if (report.contains("results") && report["results"].contains("homology"))
    for (const auto &h : report["results"]["homology"]) {
      out << "  H_" << h["degree"].get<int>() << " = ";
      out << (h.contains("group") ? h["group"].get<std::string>() : h["diagonal"].get<std::string>()) << "\n";
    }
  if (report.contains("disclosures"))
    for (const auto &d : report["disclosures"]) out << "  note: " << d.get<std::string>() << "\n";
  return out.str();
}

Json command_echo(const CommandSpec &c) {
  Json j;
  j["kind"] = c.kind;
  if (!c.of.empty()) j["of"] = c.of;
  if (!c.on.empty()) j["on"] = c.on;
  j["mu"] = c.mu;
  j["n_max"] = c.n_max;
  j["q_max"] = c.q_max;
  j["G"] = c.G;
  j["window"] = c.window;
  j["p_max"] = c.p_max;
  j["stages"] = c.stages;
  if (!c.degrees.empty()) j["degrees"] = c.degrees;
  if (c.s_tilde0) j["s_tilde0"] = *c.s_tilde0;
  return j;
}

RunOutcome finish(Json report, int code, double seconds) {
  RunOutcome out;
  out.exit_code = code;
  out.report = report.dump();
  out.pretty = render(report);
  out.seconds = seconds;
  return out;
}

Json error_report(const std::string &message, std::optional<std::string> path = {}) {
  Json j;
  j["schema"] = "1";
  j["verdict"] = "error";
  j["error"] = message;
  if (path) j["path"] = *path;
  return j;
}

} // namespace

RunOutcome run_job(const JobSpec &job) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  Json j;
  j["schema"] = "1";
  j["command"] = command_echo(job.command);
  j["seed"] = job.seed;
  try {
    World w(job);
    Report rep;
    const auto &k = job.command.kind;
    if (k == "check-operad")
      run_check_operad(job, w, rep);
    else if (k == "homology")
      run_homology(job, w, rep);
    else if (k == "ohs-check")
      run_ohs(job, w, rep);
    else if (k == "group-complete")
      run_group_complete(job, w, rep);
    else if (k == "splitting")
      run_splitting(job, w, rep);
    else if (k == "bar")
      run_bar(job, w, rep);
    else if (k == "rectify")
      run_rectify(job, w, rep);
    j["verdict"] = rep.verdict();
    j["checks"] = rep.checks;
    j["results"] = rep.results;
    j["disclosures"] = rep.disclosures;
    return finish(std::move(j), rep.exit_code(), elapsed());
  } catch (const Error &e) {
    Json err = error_report(e.what());
    err["command"] = j["command"];
    return finish(std::move(err), kUsage, elapsed());
  }
}

RunOutcome run_document(const std::string &document, std::optional<std::uint64_t> seed_override) {
  JobSpec job;
  try {
    job = parse_jobspec(document);
  } catch (const JobError &e) {
    Json err = error_report(e.what(), e.path());
    if (e.offset()) err["offset"] = *e.offset();
    return finish(std::move(err), kUsage, 0);
  }
  if (seed_override) job.seed = *seed_override;
  return run_job(job);
}

} // namespace ohs
