#include "ohs/jobspec.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include <json.hpp>

namespace ohs {

using Json = nlohmann::ordered_json;

JobError::JobError(std::string path, const std::string &message, std::optional<std::size_t> offset)
    : Error(offset ? "byte " + std::to_string(*offset) + ": " + message
                   : (path.empty() ? std::string("/") : path) + ": " + message),
      path_(std::move(path)), offset_(offset) {}

namespace {

const std::set<std::string> kOperads = {"as",      "com",     "barratt-eccles", "product", "product-over-as",
                                        "monoid", "abelian-monoid"};
const std::set<std::string> kSpaces = {"free-algebra", "nerve", "sphere0", "point", "complex", "monoid",
                                       "abelian-monoid"};
const std::set<std::string> kCommands = {"check-operad", "homology", "ohs-check", "group-complete",
                                         "splitting",    "bar",      "rectify"};

std::string escape(const std::string &key) {
  std::string out;
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

// A JSON object whose keys must all be consumed.
class Reader {
public:
  Reader(const Json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw JobError(path_, "expected an object");
  }

  const std::string &path() const { return path_; }
  std::string at(const std::string &key) const { return path_ + "/" + escape(key); }
  bool has(const std::string &key) const { return j_.contains(key); }

  const Json *take(const std::string &key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void integer(const std::string &key, int &out, int min, int max = std::numeric_limits<int>::max()) {
    if (const Json *v = take(key)) {
      if (!v->is_number_integer()) throw JobError(at(key), "expected an integer");
      const auto x = v->get<long long>();
      if (x < min || x > max)
        throw JobError(at(key), "must lie in [" + std::to_string(min) + ", " + std::to_string(max) + "]");
      out = static_cast<int>(x);
    }
  }

  void unsigned64(const std::string &key, std::uint64_t &out) {
    if (const Json *v = take(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
        throw JobError(at(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void string(const std::string &key, std::string &out) {
    if (const Json *v = take(key)) {
      if (!v->is_string()) throw JobError(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void strings(const std::string &key, std::vector<std::string> &out) {
    if (const Json *v = take(key)) {
      if (!v->is_array()) throw JobError(at(key), "expected an array of strings");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_string()) throw JobError(at(key) + "/" + std::to_string(i), "expected a string");
        out.push_back((*v)[i].get<std::string>());
      }
    }
  }

  static std::vector<int> ints(const Json &v, const std::string &path) {
    if (!v.is_array()) throw JobError(path, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) throw JobError(path + "/" + std::to_string(i), "expected an integer");
      const auto x = v[i].get<long long>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw JobError(path + "/" + std::to_string(i), "integer out of range");
      out.push_back(static_cast<int>(x));
    }
    return out;
  }

  void integers(const std::string &key, std::vector<int> &out) {
    if (const Json *v = take(key)) out = ints(*v, at(key));
  }

  void matrix(const std::string &key, std::vector<std::vector<int>> &out) {
    if (const Json *v = take(key)) {
      if (!v->is_array()) throw JobError(at(key), "expected an array of arrays");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) out.push_back(ints((*v)[i], at(key) + "/" + std::to_string(i)));
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw JobError(at(it.key()), "unknown key \"" + it.key() + "\"");
  }

private:
  const Json &j_;
  std::string path_;
  std::set<std::string> used_;
};

// {"<single key>": {...}}
std::pair<std::string, const Json *> single_entry(const Json &j, const std::string &path, const char *what) {
  if (!j.is_object() || j.size() != 1)
    throw JobError(path, std::string("expected an object with exactly one key naming the ") + what);
  return {j.begin().key(), &j.begin().value()};
}

ObjectSpec parse_object(const std::string &name, const Json &j, const std::string &path) {
  auto [builtin, body] = single_entry(j, path, "builtin");
  ObjectSpec o;
  o.name = name;
  o.builtin = builtin;
  o.path = path + "/" + escape(builtin);
  if (!kOperads.count(builtin) && !kSpaces.count(builtin))
    throw JobError(path, "unknown builtin \"" + builtin + "\"");
  Reader r(*body, o.path);
  if (builtin == "as" || builtin == "com" || builtin == "barratt-eccles") {
    r.integer("arity", o.arity, 1, 8);
    r.integer("dim", o.dim, 1, 8);
  } else if (builtin == "product" || builtin == "product-over-as") {
    r.strings("of", o.of);
    if (o.of.size() != 2) throw JobError(r.at("of"), "a product takes exactly two operads");
  } else if (o.is_monoid()) {
    r.integer("arity", o.arity, 1, 8);
    r.integer("dim", o.dim, 1, 8);
    int forms = 0;
    if (r.has("table")) {
      o.table.emplace();
      r.matrix("table", *o.table);
      ++forms;
    }
    for (auto [key, field, min] : {std::tuple{"cyclic", &o.cyclic, 1}, std::tuple{"symmetric-group", &o.symmetric_group, 1},
                                   std::tuple{"naturals", &o.naturals, 0},
                                   std::tuple{"symmetric-groups", &o.symmetric_groups, 1}})
      if (r.has(key)) {
        r.integer(key, *field, min, key == std::string("symmetric-groups") ? 8 : 720);
        ++forms;
      }
    if (forms != 1)
      throw JobError(o.path, "give exactly one of table, cyclic, symmetric-group, naturals, symmetric-groups");
    r.integers("generators", o.generators);
  } else if (builtin == "free-algebra") {
    r.string("operad", o.operad);
    r.string("on", o.on);
    if (o.operad.empty()) throw JobError(o.path, "missing \"operad\"");
    if (o.on.empty()) throw JobError(o.path, "missing \"on\"");
    r.integer("n_max", o.n_max, 0, 8);
    r.integer("w_max", o.w_max, -1, 64);
    r.integer("dim", o.dim, 1, 8);
  } else if (builtin == "nerve") {
    r.strings("of", o.of);
    if (o.of.size() != 1) throw JobError(r.at("of"), "a nerve takes exactly one monoid");
    r.integer("dim", o.dim, 1, 8);
  } else if (builtin == "sphere0" || builtin == "point") {
    r.integer("dim", o.dim, 1, 8);
  } else if (builtin == "complex") {
    r.matrix("simplices", o.simplices);
    if (o.simplices.empty()) throw JobError(r.at("simplices"), "a complex needs at least one simplex");
    for (std::size_t i = 0; i < o.simplices.size(); ++i) {
      const auto &s = o.simplices[i];
      if (s.empty()) throw JobError(r.at("simplices") + "/" + std::to_string(i), "empty simplex");
      for (std::size_t k = 0; k < s.size(); ++k)
        if (s[k] < 0 || (k > 0 && s[k] <= s[k - 1]))
          throw JobError(r.at("simplices") + "/" + std::to_string(i),
                         "vertices must be non-negative and strictly increasing");
    }
    if (r.has("basepoint")) {
      int b = 0;
      r.integer("basepoint", b, 0);
      o.basepoint = b;
    }
    r.integer("dim", o.dim, 1, 8);
  }
  r.finish();
  return o;
}

CommandSpec parse_command(const Json &j, const std::string &path) {
  auto [kind, body] = single_entry(j, path, "command");
  if (!kCommands.count(kind)) throw JobError(path, "unknown command \"" + kind + "\"");
  CommandSpec c;
  c.kind = kind;
  Reader r(*body, path + "/" + escape(kind));
  r.string("of", c.of);
  r.string("on", c.on);
  r.string("mu", c.mu);
  r.integer("n_max", c.n_max, 0, 8);
  r.integer("q_max", c.q_max, 0, 6);
  r.integer("G", c.G, 1, 64);
  r.integer("window", c.window, 1, 16);
  r.integer("p_max", c.p_max, 1, 6);
  r.integer("stages", c.stages, 1, 64);
  r.integers("degrees", c.degrees);
  if (r.has("s_tilde0")) {
    std::uint64_t v = 0;
    r.unsigned64("s_tilde0", v);
    c.s_tilde0 = v;
  }
  r.finish();
  if (c.mu != "canonical" && c.mu != "identity") throw JobError(r.at("mu"), "mu must be \"canonical\" or \"identity\"");
  for (std::size_t i = 0; i < c.degrees.size(); ++i)
    if (c.degrees[i] < 0 || c.degrees[i] > c.q_max)
      throw JobError(r.at("degrees") + "/" + std::to_string(i),
                     "degree " + std::to_string(c.degrees[i]) + " needs q_max >= " + std::to_string(c.degrees[i]) +
                         " but q_max = " + std::to_string(c.q_max));
  if (kind == "rectify" ? c.on.empty() : c.of.empty())
    throw JobError(r.path(), std::string("missing \"") + (kind == "rectify" ? "on" : "of") + "\"");
  if (kind == "bar" && c.on.empty()) throw JobError(r.path(), "missing \"on\"");
  return c;
}

void check_references(const JobSpec &job) {
  std::map<std::string, const ObjectSpec *> by_name;
  for (const auto &o : job.objects) by_name[o.name] = &o;
  auto need = [&](const std::string &path, const std::string &name, const char *what,
                  const std::function<bool(const ObjectSpec &)> &ok) -> const ObjectSpec & {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw JobError(path, "undefined object \"" + name + "\"");
    if (!ok(*it->second)) throw JobError(path, "object \"" + name + "\" is not " + what);
    return *it->second;
  };
  auto is_operad = [](const ObjectSpec &o) { return o.is_operad(); };
  auto is_space = [](const ObjectSpec &o) { return o.is_space(); };
  auto is_monoid = [](const ObjectSpec &o) { return o.is_monoid(); };
  for (const auto &o : job.objects) {
    if (o.builtin == "product" || o.builtin == "product-over-as")
      for (std::size_t i = 0; i < o.of.size(); ++i) need(o.path + "/of/" + std::to_string(i), o.of[i], "an operad", is_operad);
    if (o.builtin == "nerve") need(o.path + "/of/0", o.of[0], "a monoid", is_monoid);
    if (o.builtin == "free-algebra") {
      need(o.path + "/operad", o.operad, "an operad", is_operad);
      need(o.path + "/on", o.on, "a space", is_space);
    }
  }
  // no cycles
  std::map<std::string, int> state;
  std::function<void(const ObjectSpec &)> visit = [&](const ObjectSpec &o) {
    int &s = state[o.name];
    if (s == 2) return;
    if (s == 1) throw JobError(o.path, "object \"" + o.name + "\" refers to itself");
    s = 1;
    std::vector<std::string> refs = o.of;
    if (!o.operad.empty()) refs.push_back(o.operad);
    if (!o.on.empty()) refs.push_back(o.on);
    for (const auto &r : refs) visit(*by_name.at(r));
    state[o.name] = 2;
  };
  for (const auto &o : job.objects) visit(o);

  const auto &c = job.command;
  const std::string cp = "/command/" + escape(c.kind);
  if (c.kind == "check-operad" || c.kind == "ohs-check" || c.kind == "splitting" || c.kind == "bar")
    need(cp + "/of", c.of, "an operad", is_operad);
  if (c.kind == "homology") need(cp + "/of", c.of, "a space", is_space);
  if (c.kind == "group-complete") need(cp + "/of", c.of, "a monoid", is_monoid);
  if (c.kind == "bar") {
    const auto &x = need(cp + "/on", c.on, "a space", is_space);
    if (x.builtin == "free-algebra" && x.operad != c.of)
      throw JobError(cp + "/on", "the free algebra must be over \"" + c.of + "\"");
    if (x.builtin != "free-algebra" && x.builtin != "point")
      throw JobError(cp + "/on", "the bar construction needs a point or a free algebra over \"" + c.of + "\"");
  }
  if (c.kind == "rectify") {
    const auto &x = need(cp + "/on", c.on, "a free algebra", [](const ObjectSpec &o) { return o.builtin == "free-algebra"; });
    need(x.path + "/operad", x.operad, "the As operad", [](const ObjectSpec &o) { return o.builtin == "as"; });
  }
  if (c.kind == "group-complete") {
    const auto &m = *by_name.at(c.of);
    if (m.symmetric_groups == 0 && m.generators.empty())
      throw JobError(m.path, "group completion needs \"generators\"");
  }
}

} // namespace

bool ObjectSpec::is_operad() const { return kOperads.count(builtin) > 0; }
bool ObjectSpec::is_space() const { return kSpaces.count(builtin) > 0; }

const ObjectSpec &JobSpec::object(const std::string &name) const {
  for (const auto &o : objects)
    if (o.name == name) return o;
  throw JobError("/objects", "undefined object \"" + name + "\"");
}

JobSpec parse_jobspec(const std::string &document) {
  Json j;
  try {
    j = Json::parse(document);
  } catch (const nlohmann::json::parse_error &e) {
    std::string what = e.what();
    // drop the library's "[json.exception.parse_error.101] " prefix
    if (auto p = what.find("] "); p != std::string::npos) what = what.substr(p + 2);
    throw JobError("", what, e.byte);
  }
  Reader top(j, "");
  JobSpec job;
  const Json *objects = top.take("objects");
  if (objects) {
    if (!objects->is_object()) throw JobError("/objects", "expected an object");
    for (auto it = objects->begin(); it != objects->end(); ++it)
      job.objects.push_back(parse_object(it.key(), it.value(), "/objects/" + escape(it.key())));
  }
  const Json *command = top.take("command");
  if (!command) throw JobError("", "missing \"command\"");
  job.command = parse_command(*command, "/command");
  top.unsigned64("seed", job.seed);
  if (const Json *b = top.take("budget")) {
    Reader br(*b, "/budget");
    br.unsigned64("max_cases", job.max_cases);
    br.unsigned64("samples", job.samples);
    br.finish();
  }
  if (top.has("output")) {
    std::string out;
    top.string("output", out);
    job.output = out;
  }
  top.finish();
  check_references(job);
  return job;
}

} // namespace ohs
