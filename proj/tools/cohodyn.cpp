// cohodyn: command-line front end over a JSON workspace file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cohodyn.hpp"

using namespace cohodyn;

namespace {

enum Exit { kOk = 0, kOther = 1, kResolution = 2, kCapability = 3, kNumerical = 4 };

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Lookup:
    case ErrorKind::Naming: return kResolution;
    case ErrorKind::Capability: return kCapability;
    case ErrorKind::Numerical: return kNumerical;
    default: return kOther;
  }
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15e", x);
  return buf;
}

std::string complex_text(const Complex& z) {
  return z.imag() == 0 ? sci(z.real()) : sci(z.real()) + (z.imag() < 0 ? "" : "+") + sci(z.imag()) + "i";
}

/// "1,2+1i,-0.5i" -> point. Components are a, bi or a+bi.
Point parse_point(const std::string& text) {
  Point z;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::erase_if(tok, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (tok.empty()) throw ParseError("empty coordinate in point '" + text + "'");
    try {
      if (tok.back() != 'i') {
        z.emplace_back(std::stod(tok), 0.0);
        continue;
      }
      std::string body = tok.substr(0, tok.size() - 1);
      std::size_t split = std::string::npos;
      for (std::size_t i = body.size(); i-- > 1;)
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
          split = i;
          break;
        }
      if (split == std::string::npos) {
        double im = body.empty() || body == "+" ? 1.0 : body == "-" ? -1.0 : std::stod(body);
        z.emplace_back(0.0, im);
      } else {
        std::string ims = body.substr(split);
        double im = ims == "+" ? 1.0 : ims == "-" ? -1.0 : std::stod(ims);
        z.emplace_back(std::stod(body.substr(0, split)), im);
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("bad coordinate '" + tok + "' in point '" + text + "'");
    }
  }
  return z;
}

std::string matrix_table(const RatMatrix& m, const std::vector<std::string>& row_names,
                         const std::vector<std::string>& col_names) {
  std::vector<std::size_t> width(m.cols() + 1, 0);
  for (const auto& r : row_names) width[0] = std::max(width[0], r.size());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    width[c + 1] = col_names[c].size();
    for (std::size_t r = 0; r < m.rows(); ++r) width[c + 1] = std::max(width[c + 1], to_string(m(r, c)).size());
  }
  std::ostringstream os;
  auto pad = [](const std::string& s, std::size_t w) { return std::string(w - s.size(), ' ') + s; };
  os << pad("", width[0]);
  for (std::size_t c = 0; c < m.cols(); ++c) os << "  " << pad(col_names[c], width[c + 1]);
  os << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << pad(row_names[r], width[0]);
    for (std::size_t c = 0; c < m.cols(); ++c) os << "  " << pad(to_string(m(r, c)), width[c + 1]);
    os << '\n';
  }
  return os.str();
}

void print_model(const CohomologyModel& m) {
  std::cout << "manifold " << m.name << " (dim " << m.dim << ")\n";
  for (int p = 0; p <= m.dim; ++p) {
    std::cout << "H^{" << p << "," << p << "}:";
    for (const auto& g : m.bases[static_cast<std::size_t>(p)]) std::cout << ' ' << g;
    std::cout << '\n';
  }
  for (int p = 0; 2 * p <= m.dim; ++p) {
    std::cout << "pairing H^{" << p << "," << p << "} x H^{" << m.dim - p << "," << m.dim - p << "}:\n";
    std::cout << matrix_table(m.pairing(p), m.bases[static_cast<std::size_t>(p)],
                              m.bases[static_cast<std::size_t>(m.dim - p)]);
  }
  std::cout << "reference class: "
            << format_class(CohomologyClass::from(std::make_shared<const CohomologyModel>(m), 1, m.kahler_class))
            << (m.kahler_note.empty() ? "" : " (" + m.kahler_note + ")") << '\n';
}

void print_map(const MapModel& f) {
  std::cout << "map " << f.name << ": " << f.source->name << " -> " << f.target->name << '\n';
  for (const auto& [p, m] : f.pullback) {
    std::cout << "M_" << p << " (columns: images of target generators):\n";
    std::cout << matrix_table(m, f.source->bases[static_cast<std::size_t>(p)],
                              f.target->bases[static_cast<std::size_t>(p)]);
  }
  std::cout << "involution: " << (f.involution ? "yes" : "no") << '\n';
  std::cout << "declared stable degrees:";
  for (int p : f.declared_stable) std::cout << ' ' << p;
  std::cout << '\n';
  if (f.topological_degree) std::cout << "topological degree: " << *f.topological_degree << '\n';
  if (f.monomial) std::cout << "monomial lift (degree " << f.monomial->degree() << "):\n" << monomial_text(*f.monomial);
  for (const auto& [name, v] : f.varieties)
    std::cout << "variety " << name << " (codim " << v.codim << "): " << format_class(v.cls) << '\n';
  for (const auto& note : f.notes) std::cout << "note: " << note << '\n';
}

/// Degree of an expression: the unique p in which it parses, or --p.
int infer_degree(const ModelPtr& m, const std::string& expr, std::optional<int> p) {
  if (p) return *p;
  std::optional<int> found;
  for (int q = 0; q <= m->dim; ++q) {
    try {
      parse_class(m, q, expr);
    } catch (const Error&) {
      continue;
    }
    if (found) throw ParseError("expression '" + expr + "' parses in several degrees; pass --p");
    found = q;
  }
  if (!found) throw LookupError("expression '" + expr + "' names no generators of " + m->name);
  return *found;
}

void verdict_line(const Json& j) { std::cout << j.dump() << '\n'; }

struct Context {
  std::string workspace_path;
  std::optional<std::string> tol_text;
  Workspace ws;
  bool dirty = false;

  Rational tol() const { return tol_text ? parse_rational(*tol_text) : ws.config.tol; }
  std::size_t step_cap() const { return env_step_cap(ws.config.max_steps); }
  void save() { dirty = true; }
};

std::string default_workspace() {
  if (const char* s = std::getenv("COHODYN_WORKSPACE")) return s;
  return "cohodyn_workspace.json";
}

/// Ledger argument: a JSON file, else a ledger stored in the workspace.
SiuLedger load_ledger(const Context& ctx, const MapModel& f, const std::string& arg) {
  Json j;
  if (std::filesystem::exists(arg)) j = Workspace::read_json_file(arg);
  else if (auto it = ctx.ws.ledgers.find(arg); it != ctx.ws.ledgers.end()) j = it->second;
  else throw LookupError("ledger '" + arg + "' is neither a file nor a workspace ledger");
  ModelPtr manifold = f.target;
  if (j.contains("manifold") && j.at("manifold").get<std::string>() != f.target->name)
    throw ModelError("ledger lives on " + j.at("manifold").get<std::string>() + ", map " + f.name + " targets " +
                     f.target->name);
  return ledger_from(j, manifold, [&](const std::string& v) { return f.variety(v); });
}

void print_ledger(const SiuLedger& l) {
  std::cout << "residual: " << format_class(l.residual()) << '\n';
  for (const auto& a : l.atoms()) std::cout << "atom: " << format_atom(a) << "  {" << format_class(a.variety.cls) << "}\n";
  if (l.tail_mass()) std::cout << "tail mass bound: " << to_string(*l.tail_mass()) << '\n';
  std::cout << "total class: " << format_class(l.total()) << '\n';
}

void add_manifold_commands(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("manifold", "cohomology models");
  cmd->require_subcommand(1);

  {
    auto* c = cmd->add_subcommand("new-blowup", "blowup of P^k at m points");
    static int dim = 3, points = 0;
    static std::string name, kahler;
    c->add_option("--dim", dim, "dimension k")->required();
    c->add_option("--points", points, "number of points m")->required();
    c->add_option("--name", name, "model name");
    c->add_option("--kahler", kahler, "a,b_0,...,b_{m-1} for aH - sum b_i E_i");
    c->callback([&ctx] {
      std::optional<RatVector> k;
      if (!kahler.empty()) {
        RatVector v;
        std::stringstream ss(kahler);
        std::string tok;
        while (std::getline(ss, tok, ',')) v.push_back(parse_rational(tok));
        k = v;
      }
      auto m = share(blowup_points(dim, points, k, name));
      ctx.ws.manifolds[m->name] = m;
      ctx.save();
      print_model(*m);
    });
  }
  {
    auto* c = cmd->add_subcommand("new-product", "Kunneth product of two models");
    static std::string a, b, name;
    c->add_option("a", a)->required();
    c->add_option("b", b)->required();
    c->add_option("--name", name);
    c->callback([&ctx] {
      auto m = share(product_model(*ctx.ws.manifold(a), *ctx.ws.manifold(b), name));
      ctx.ws.manifolds[m->name] = m;
      ctx.save();
      print_model(*m);
    });
  }
  {
    auto* c = cmd->add_subcommand("show", "bases and pairing tables");
    static std::string name;
    c->add_option("name", name)->required();
    c->callback([&ctx] { print_model(*ctx.ws.manifold(name)); });
  }
  {
    auto* c = cmd->add_subcommand("pair", "intersection number of two classes");
    static std::string name, y, x;
    static std::optional<int> p;
    c->add_option("name", name)->required();
    c->add_option("y", y)->required();
    c->add_option("x", x)->required();
    c->add_option("--p", p, "degree of y");
    c->callback([&ctx] {
      auto m = ctx.ws.manifold(name);
      int py = infer_degree(m, y, p);
      auto cy = parse_class(m, py, y);
      auto cx = parse_class(m, m->dim - py, x);
      std::cout << to_string(pair(cy, cx)) << '\n';
    });
  }
  {
    auto* c = cmd->add_subcommand("obstruction", "negative mass against the reference class power");
    static std::string name, cls;
    static std::optional<int> p;
    c->add_option("name", name)->required();
    c->add_option("--class", cls)->required();
    c->add_option("--p", p);
    c->callback([&ctx] {
      auto m = ctx.ws.manifold(name);
      auto k = parse_class(m, infer_degree(m, cls, p), cls);
      auto v = positivity_obstruction(k);
      std::cout << (v.obstructed ? "OBSTRUCTED" : "UNOBSTRUCTED") << ": pairing with the reference power = "
                << to_string(v.mass) << '\n';
      verdict_line({{"verdict", v.obstructed ? "Obstructed" : "Unobstructed"}, {"class", format_class(k)},
                    {"mass", to_string(v.mass)}});
    });
  }
  {
    auto* c = cmd->add_subcommand("cone", "membership in the cone spanned by generator classes");
    static std::string name, cls, varieties_of;
    static std::vector<std::string> gens;
    static std::optional<int> p;
    static bool basis = false;
    c->add_option("name", name)->required();
    c->add_option("--class", cls)->required();
    c->add_option("--p", p);
    c->add_option("--gen", gens, "generator class expression (repeatable)");
    c->add_flag("--basis", basis, "include the basis generators of the degree");
    c->add_option("--varieties", varieties_of, "include the variety classes declared by this map");
    c->callback([&ctx] {
      auto m = ctx.ws.manifold(name);
      int q = infer_degree(m, cls, p);
      auto v = parse_class(m, q, cls);
      std::vector<RatVector> g;
      std::vector<std::string> labels;
      if (basis)
        for (std::size_t i = 0; i < m->rank(q); ++i) {
          g.push_back(CohomologyClass::basis(m, q, i).coeffs);
          labels.push_back(m->bases[static_cast<std::size_t>(q)][i]);
        }
      if (!varieties_of.empty())
        for (const auto& [vn, var] : ctx.ws.map(varieties_of).varieties)
          if (var.codim == q) {
            g.push_back(var.cls.coeffs);
            labels.push_back(vn);
          }
      for (const auto& e : gens) {
        g.push_back(parse_class(m, q, e).coeffs);
        labels.push_back(e);
      }
      auto r = cone_membership(v.coeffs, g);
      std::cout << (r.member ? "MEMBER" : "NOT-MEMBER") << " (" << g.size() << " generators)\n";
      Json j = {{"verdict", r.member ? "Member" : "NotMember"}, {"class", format_class(v)}};
      if (r.member) {
        Json co = Json::object();
        for (std::size_t i = 0; i < labels.size(); ++i)
          if (r.coefficients[i] != 0) {
            std::cout << "  " << to_string(r.coefficients[i]) << " * " << labels[i] << '\n';
            co[labels[i]] = to_string(r.coefficients[i]);
          }
        j["coefficients"] = co;
      }
      verdict_line(j);
    });
  }
  {
    auto* c = cmd->add_subcommand("load", "merge manifold definitions from a JSON file");
    static std::string file;
    c->add_option("file", file)->required();
    c->callback([&ctx] {
      Json j = Workspace::read_json_file(file);
      if (!j.contains("manifolds")) {
        auto m = model_from(j);
        j = Json{{"manifolds", Json{{m.name, j}}}};
      }
      ctx.ws.merge(j);
      ctx.save();
      for (const auto& [n, _] : j.at("manifolds").items()) std::cout << "loaded manifold " << n << '\n';
    });
  }
  {
    auto* c = cmd->add_subcommand("export", "canonical JSON of a model");
    static std::string name;
    c->add_option("name", name)->required();
    c->callback([&ctx] { std::cout << model_json(*ctx.ws.manifold(name)).dump(2) << '\n'; });
  }
}

void add_map_commands(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("map", "pullback models of maps");
  cmd->require_subcommand(1);
  {
    auto* c = cmd->add_subcommand("builtin", "register a built-in map");
    static std::string name;
    c->add_option("name", name)->required();
    c->callback([&ctx] {
      auto f = builtin(name);
      ctx.ws.add_map(f);
      ctx.save();
      print_map(f);
    });
  }
  {
    auto* c = cmd->add_subcommand("load", "merge map definitions from a JSON file");
    static std::string file;
    c->add_option("file", file)->required();
    c->callback([&ctx] {
      Json j = Workspace::read_json_file(file);
      if (!j.contains("maps") && !j.contains("manifolds")) j = Json{{"maps", Json{{j.at("name").get<std::string>(), j}}}};
      ctx.ws.merge(j);
      ctx.save();
      if (j.contains("maps"))
        for (const auto& [n, _] : j.at("maps").items()) std::cout << "loaded map " << n << '\n';
    });
  }
  {
    auto* c = cmd->add_subcommand("show", "matrices, flags and varieties");
    static std::string name;
    c->add_option("name", name)->required();
    c->callback([&ctx] { print_map(ctx.ws.map(name)); });
  }
  {
    auto* c = cmd->add_subcommand("export", "canonical JSON of a map");
    static std::string name;
    c->add_option("name", name)->required();
    c->callback([&ctx] { std::cout << map_json(ctx.ws.map(name)).dump(2) << '\n'; });
  }
  {
    auto* c = cmd->add_subcommand("pullback", "f^* of a class");
    static std::string name, cls;
    static std::optional<int> p;
    c->add_option("name", name)->required();
    c->add_option("--class", cls)->required();
    c->add_option("--p", p);
    c->callback([&ctx] {
      auto f = ctx.ws.map(name);
      auto k = parse_class(f.target, infer_degree(f.target, cls, p), cls);
      std::cout << format_class(pullback_class(f, k)) << '\n';
    });
  }
  {
    auto* c = cmd->add_subcommand("pushforward", "f_* of a class (pairing adjoint of f^*)");
    static std::string name, cls;
    static std::optional<int> p;
    c->add_option("name", name)->required();
    c->add_option("--class", cls)->required();
    c->add_option("--p", p);
    c->callback([&ctx] {
      auto f = ctx.ws.map(name);
      auto k = parse_class(f.source, infer_degree(f.source, cls, p), cls);
      std::cout << format_class(pushforward_class(f, k)) << '\n';
    });
  }
  {
    auto* c = cmd->add_subcommand("dual", "M_p derived from the pairing and M_{k-p} (or N_{k-p})");
    static std::string name;
    static int p = 1;
    c->add_option("name", name)->required();
    c->add_option("--p", p)->required();
    c->callback([&ctx] {
      auto f = ctx.ws.map(name);
      auto m = derive_dual_action(f, p);
      std::cout << matrix_table(m, f.source->bases[static_cast<std::size_t>(p)],
                                f.target->bases[static_cast<std::size_t>(p)]);
      if (auto it = f.pullback.find(p); it != f.pullback.end())
        std::cout << "stored M_" << p << (it->second == m ? " agrees" : " DIFFERS") << '\n';
    });
  }
  {
    auto* c = cmd->add_subcommand("stability", "compare (M_p)^n with (f^n)^*");
    static std::string name;
    static int p = 1;
    static std::size_t steps = 8;
    c->add_option("name", name)->required();
    c->add_option("--p", p);
    c->add_option("--steps", steps);
    c->callback([&ctx] {
      auto f = ctx.ws.map(name);
      auto r = stability_check(f, p, steps, ctx.step_cap());
      std::string head = to_string(r.verdict);
      if (r.verdict == StabilityVerdict::UnstableAt) head += " at n=" + std::to_string(r.failing_step);
      std::cout << head << " (p=" << p << ", data: " << r.source << ")\n";
      if (!r.witness.empty()) std::cout << r.witness << '\n';
      Json j = {{"verdict", r.verdict == StabilityVerdict::Stable       ? "Stable"
                            : r.verdict == StabilityVerdict::UnstableAt ? "UnstableAt"
                                                                        : "Unknown"},
                {"p", p},
                {"checked_steps", r.checked_steps},
                {"source", r.source}};
      if (r.verdict == StabilityVerdict::UnstableAt) {
        j["n"] = r.failing_step;
        j["power"] = matrix_json(*r.power);
        j["iterate"] = matrix_json(*r.iterate);
      }
      verdict_line(j);
    });
  }
  {
    auto* c = cmd->add_subcommand("degrees", "degree sequence of the monomial lift (CSV)");
    static std::string name;
    static std::size_t steps = 8;
    c->add_option("name", name)->required();
    c->add_option("--steps", steps);
    c->callback([&ctx] {
      std::cout << degree_sequence_csv(degree_sequence(ctx.ws.monomial(name), steps, ctx.step_cap()));
    });
  }
  {
    auto* c = cmd->add_subcommand("product", "f x g on the Kunneth product");
    static std::string a, b, name;
    c->add_option("f", a)->required();
    c->add_option("g", b)->required();
    c->add_option("--name", name);
    c->callback([&ctx] {
      auto f = product_map(ctx.ws.map(a), ctx.ws.map(b));
      if (!name.empty()) f.name = name;
      ctx.ws.add_map(f);
      ctx.save();
      print_map(f);
    });
  }
  {
    auto* c = cmd->add_subcommand("compose", "g o f (pullback product, tagged outside declared stability)");
    static std::string g, f, name;
    c->add_option("g", g)->required();
    c->add_option("f", f)->required();
    c->add_option("--name", name);
    c->callback([&ctx] {
      auto h = compose(ctx.ws.map(g), ctx.ws.map(f));
      if (!name.empty()) h.name = name;
      ctx.ws.add_map(h);
      ctx.save();
      print_map(h);
    });
  }
  {
    auto* c = cmd->add_subcommand("monomial-load", "monomial map from k+1 lines of Laurent exponents");
    static std::string name, file;
    c->add_option("name", name)->required();
    c->add_option("file", file)->required();
    c->callback([&ctx] {
      std::ifstream in(file);
      if (!in) throw LookupError("cannot open " + file);
      std::stringstream ss;
      ss << in.rdbuf();
      auto f = parse_monomial_text(ss.str());
      ctx.ws.monomials[name] = f;
      ctx.save();
      std::cout << "monomial " << name << " (degree " << f.degree() << ", topological degree "
                << topological_degree(f) << "):\n"
                << monomial_text(f);
    });
  }
}

std::string degree_text(const DegreeEstimate& d) {
  return d.interval.exact() ? to_string(d.interval.lo) : d.interval.to_string();
}

void add_dynamics_commands(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("dynamics", "dynamical degrees, invariant classes, Siu ledgers");
  cmd->require_subcommand(1);
  {
    auto* c = cmd->add_subcommand("degree", "certified enclosure of delta_p");
    static std::string name;
    static int p = 1;
    static std::size_t steps = 16;
    c->add_option("name", name)->required();
    c->add_option("--p", p);
    c->add_option("--steps", steps);
    c->callback([&ctx] {
      auto d = dynamical_degree(ctx.ws.map(name), p, steps, ctx.tol(), ctx.step_cap());
      std::cout << "delta_" << p << " in " << d.interval.to_string() << (d.exact ? " (exact)" : "")
                << (d.determinate ? "" : " INDETERMINATE at the requested tolerance") << " [" << d.method << "]\n";
      verdict_line({{"p", p}, {"interval", interval_json(d.interval)}, {"exact", d.exact},
                    {"determinate", d.determinate}, {"method", d.method}});
    });
  }
  {
    auto* c = cmd->add_subcommand("invariant", "invariant class for an eigenvalue (exact or Cesaro)");
    static std::string name, contains, alpha;
    static int p = 1;
    static std::string lambda = "1";
    static std::size_t doublings = default_cesaro_doublings();
    c->add_option("name", name)->required();
    c->add_option("--p", p)->required();
    c->add_option("--lambda", lambda);
    c->add_option("--contains", contains, "check that this class lies in the eigenspace");
    c->add_option("--cesaro", alpha, "run Cesaro averages from this class instead");
    c->add_option("--doublings", doublings);
    c->callback([&ctx] {
      auto f = ctx.ws.map(name);
      Rational lam = parse_rational(lambda);
      if (!alpha.empty()) {
        auto a = parse_class(f.source, p, alpha);
        auto r = invariant_class_cesaro(f, p, a, lam, doublings, ctx.tol(), ctx.step_cap());
        for (const auto& w : r.warnings) std::cout << "warning: " << w << '\n';
        Json hist = Json::array();
        for (std::size_t i = 0; i < r.schedule.size(); ++i) {
          std::cout << "N=" << r.schedule[i] << "  residual " << to_string(r.residual_norm_history[i]) << '\n';
          hist.push_back({{"N", r.schedule[i]}, {"residual", to_string(r.residual_norm_history[i])}});
        }
        std::cout << "theta = " << format_class(r.theta) << '\n' << r.verdict << '\n';
        verdict_line({{"method", "Cesaro"}, {"lambda", to_string(lam)}, {"theta", format_class(r.theta)},
                      {"history", hist}, {"verdict", r.verdict}});
        return;
      }
      auto r = invariant_class_eigen(f, p, lam);
      std::cout << "eigenspace of M_" << p << " for lambda=" << to_string(lam) << " (dimension "
                << r.kernel.size() << "):\n";
      Json basis = Json::array();
      for (const auto& k : r.kernel) {
        std::cout << "  " << format_class(k) << '\n';
        basis.push_back(format_class(k));
      }
      std::cout << "theta = " << format_class(r.theta) << '\n';
      Json j = {{"method", "Eigen"}, {"lambda", to_string(lam)}, {"theta", format_class(r.theta)},
                {"kernel", basis}};
      if (!contains.empty()) {
        auto c2 = parse_class(f.source, p, contains);
        std::vector<RatVector> span;
        for (const auto& k : r.kernel) span.push_back(k.coeffs);
        bool in = in_span(span, c2.coeffs);
        std::cout << (in ? "CONTAINS " : "DOES NOT CONTAIN ") << format_class(c2) << '\n';
        j["contains"] = {{"class", format_class(c2)}, {"member", in}};
      }
      verdict_line(j);
    });
  }
  {
    auto* c = cmd->add_subcommand("siu-pullback", "pull back a Siu ledger through the map");
    static std::string name, ledger, save;
    c->add_option("name", name)->required();
    c->add_option("--ledger", ledger, "ledger JSON file or workspace ledger name")->required();
    c->add_option("--save", save, "store the result in the workspace under this name");
    c->callback([&ctx] {
      auto f = ctx.ws.map(name);
      auto in = load_ledger(ctx, f, ledger);
      auto out = siu_pullback(f, in);
      print_ledger(out);
      if (out.has_lost_positivity()) {
        for (const auto& a : out.atoms())
          if (a.lost_positivity) {
            auto v = positivity_obstruction(a.weight * a.variety.cls);
            std::cout << "LOST-POSITIVITY: " << format_atom(a) << " has class "
                      << format_class(a.weight * a.variety.cls) << ", mass " << to_string(v.mass) << '\n';
          }
      }
      if (!save.empty()) {
        ctx.ws.ledgers[save] = ledger_json(out);
        ctx.save();
      }
      Json j = ledger_json(out);
      j["lost_positivity"] = out.has_lost_positivity();
      verdict_line(j);
    });
  }
  {
    auto* c = cmd->add_subcommand("large-topdeg", "delta_k > delta_{k-1}?");
    static std::string name;
    static std::size_t steps = 16;
    static bool monomial = false;
    c->add_option("name", name)->required();
    c->add_option("--steps", steps);
    c->add_flag("--monomial", monomial, "use only the monomial lift");
    c->callback([&ctx] {
      LargeTopDegree r;
      if (monomial || (!ctx.ws.maps.count(name) && ctx.ws.monomials.count(name)))
        r = large_topological_degree(ctx.ws.monomial(name), steps, ctx.tol(), ctx.step_cap());
      else
        r = large_topological_degree(ctx.ws.map(name), steps, ctx.tol(), ctx.step_cap());
      const std::string dk = "delta_" + std::to_string(r.k);
      const std::string dk1 = "delta_" + std::to_string(r.k - 1);
      const std::string rhs = r.delta_k_minus_1.exact() ? dk1 + "=" + to_string(r.delta_k_minus_1.lo)
                                                        : dk1 + " in " + r.delta_k_minus_1.to_string();
      const char* op = r.verdict == Tri::Holds ? " > " : r.verdict == Tri::Fails ? " <= " : " ? ";
      std::cout << to_string(r.verdict) << ": " << dk << "=" << to_string(r.delta_k) << op << rhs << '\n';
      verdict_line({{"verdict", to_string(r.verdict)}, {"delta_k", to_string(r.delta_k)},
                    {"delta_k_minus_1", interval_json(r.delta_k_minus_1)}, {"method", r.method}});
    });
  }
  {
    auto* c = cmd->add_subcommand("series-check", "is |lambda| > delta_{p-1}?");
    static std::string name;
    static int p = 1;
    static std::string lambda = "1";
    c->add_option("name", name)->required();
    c->add_option("--p", p)->required();
    c->add_option("--lambda", lambda)->required();
    c->callback([&ctx] {
      auto r = applicability_check_series(ctx.ws.map(name), p, parse_rational(lambda), 16, ctx.tol(),
                                          ctx.step_cap());
      bool ok = r.verdict == Applicability::Applicable;
      std::cout << (ok ? "APPLICABLE: " : "NOT-APPLICABLE: ") << r.reason << '\n';
      verdict_line({{"verdict", ok ? "Applicable" : "NotApplicable"}, {"reason", r.reason}});
    });
  }
}

void add_green_commands(CLI::App& app, Context& ctx) {
  auto* cmd = app.add_subcommand("green", "Green potentials, extracted currents, Lelong numbers");
  cmd->require_subcommand(1);
  {
    auto* c = cmd->add_subcommand("potential", "G(z) along the renormalised orbit");
    static std::string name, point;
    static std::size_t iters = 30;
    c->add_option("name", name)->required();
    c->add_option("--point", point)->required();
    c->add_option("--iters", iters);
    c->callback([&ctx] {
      auto g = green_potential(ctx.ws.homogeneous(name), parse_point(point), std::min(iters, ctx.step_cap()));
      std::cout << "G = " << sci(g.value()) << '\n';
      std::cout << "converged: " << (g.converged ? "yes" : "no") << ", tail bound " << sci(g.tail_bound) << '\n';
      verdict_line({{"G", sci(g.value())}, {"iterations", g.iterations}, {"converged", g.converged},
                    {"tail_bound", sci(g.tail_bound)}});
    });
  }
  {
    auto* c = cmd->add_subcommand("grid", "CSV of G over the slice z = (1, s, t, ...) with real s, t");
    static std::string name, out;
    static double lo = -2, hi = 2;
    static std::size_t n = 21, iters = 30;
    c->add_option("name", name)->required();
    c->add_option("--lo", lo);
    c->add_option("--hi", hi);
    c->add_option("--n", n, "grid points per axis");
    c->add_option("--iters", iters);
    c->add_option("--out", out, "write the CSV here instead of stdout");
    c->callback([&ctx] {
      auto f = ctx.ws.homogeneous(name);
      std::ostringstream os;
      for (int j = 0; j <= f.k; ++j) os << "z" << j << "_re,z" << j << "_im,";
      os << "G,converged,tail_bound\n";
      const std::size_t free = static_cast<std::size_t>(std::min(f.k, 2));
      std::size_t total = 1;
      for (std::size_t i = 0; i < free; ++i) total *= n;
      for (std::size_t idx = 0; idx < total; ++idx) {
        Point z(static_cast<std::size_t>(f.k) + 1, Complex(0));
        z[0] = 1;
        std::size_t rest = idx;
        for (std::size_t a = 0; a < free; ++a) {
          std::size_t i = rest % n;
          rest /= n;
          z[a + 1] = n > 1 ? lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1) : lo;
        }
        for (const auto& x : z) os << sci(x.real()) << ',' << sci(x.imag()) << ',';
        try {
          auto g = green_potential(f, z, std::min(iters, ctx.step_cap()));
          os << sci(g.value()) << ',' << (g.converged ? 1 : 0) << ',' << sci(g.tail_bound) << '\n';
        } catch (const NumericalError&) {
          os << "nan,0,inf\n";
        }
      }
      if (out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream file(out);
        if (!file) throw LookupError("cannot write " + out);
        file << os.str();
        std::cout << "wrote " << total << " rows to " << out << '\n';
      }
    });
  }
  {
    auto* c = cmd->add_subcommand("extracted", "hyperplane weights of the Green current of a monomial map");
    static std::string name;
    static std::size_t steps = 20;
    c->add_option("name", name)->required();
    c->add_option("--steps", steps);
    c->callback([&ctx] {
      auto t = extracted_invariant_current(ctx.ws.monomial(name), steps, ctx.step_cap());
      Json w = Json::object();
      for (std::size_t i = 0; i < t.weights.size(); ++i) {
        std::cout << HypersurfaceCurrent::hyperplane_name(i) << ": " << to_string(t.weights[i])
                  << (t.exact ? " (exact, periodic ledger)" : " (partial sum, tail <= " + sci(t.tail_bound) + ")")
                  << '\n';
        w[HypersurfaceCurrent::hyperplane_name(i)] = to_string(t.weights[i]);
      }
      std::cout << "note: only the hyperplane part is computed; a non-atomic residual is not ruled out\n";
      verdict_line({{"weights", w}, {"exact", t.exact}, {"tail_bound", sci(t.tail_bound)},
                    {"degree", to_string(t.map_degree)}});
    });
  }
  {
    auto* c = cmd->add_subcommand("product", "invariance of T_1 x T_2 under f_1 x f_2");
    static std::string a, b;
    static std::size_t steps = 20;
    c->add_option("f1", a)->required();
    c->add_option("f2", b)->required();
    c->add_option("--steps", steps);
    c->callback([&ctx] {
      auto f1 = ctx.ws.monomial(a);
      auto f2 = ctx.ws.monomial(b);
      auto t1 = extracted_invariant_current(f1, steps, ctx.step_cap());
      auto t2 = extracted_invariant_current(f2, steps, ctx.step_cap());
      auto r = product_invariant_current(t1, t2, f1, f2);
      if (r.pass)
        std::cout << "PASS: f#(T) = " << r.scale_factor << "·T atomwise (" << r.atoms.size()
                  << " codimension-2 atoms)\n";
      else
        std::cout << "FAIL at " << *r.failing_atom << '\n';
      Json atoms = Json::array();
      for (const auto& at : r.atoms) {
        std::cout << "  " << at.name() << ": " << to_string(at.weight) << '\n';
        atoms.push_back({{"atom", at.name()}, {"weight", to_string(at.weight)}});
      }
      verdict_line({{"verdict", r.pass ? "PASS" : "FAIL"}, {"scale_factor", to_string(r.scale_factor)},
                    {"atoms", atoms}});
    });
  }
  {
    auto* c = cmd->add_subcommand("lelong", "slope of sphere maxima of the Green potential");
    static std::string name, center;
    static double r1 = 1e-2, r2 = 1e-3;
    static std::size_t samples = 4096, iters = 30;
    static std::uint64_t seed = LelongOptions{}.seed;
    c->add_option("name", name)->required();
    c->add_option("--center", center)->required();
    c->add_option("--r1", r1);
    c->add_option("--r2", r2);
    c->add_option("--samples", samples);
    c->add_option("--iters", iters);
    c->add_option("--seed", seed);
    c->callback([&ctx] {
      LelongOptions opt;
      opt.r_outer = r1;
      opt.r_inner = r2;
      opt.samples = samples;
      opt.seed = seed;
      auto est = lelong_estimate(green_as_potential(ctx.ws.homogeneous(name), std::min(iters, ctx.step_cap())),
                                 parse_point(center), opt);
      std::cout << "nu = " << sci(est.nu) << " (" << est.samples << " samples per sphere, " << est.failures
                << " failed evaluations)\n";
      verdict_line({{"nu", sci(est.nu)}, {"samples", est.samples}, {"failures", est.failures},
                    {"r1", sci(r1)}, {"r2", sci(r2)}});
    });
  }
  {
    auto* c = cmd->add_subcommand("lift-load", "homogeneous lift from JSON");
    static std::string name, file;
    c->add_option("name", name)->required();
    c->add_option("file", file)->required();
    c->callback([&ctx] {
      auto f = homogeneous_lift_from(Workspace::read_json_file(file));
      f.name = name;
      ctx.ws.lifts[name] = f;
      ctx.save();
      std::cout << "lift " << name << " on P" << f.k << ", degree " << f.degree
                << (f.verified ? "" : " (coprimality unverified)") << '\n';
    });
  }
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  CLI::App app{"cohodyn: exact cohomological dynamics of meromorphic maps"};
  app.require_subcommand(1);
  ctx.workspace_path = default_workspace();
  app.add_option("--workspace", ctx.workspace_path, "workspace JSON file");
  app.add_option("--tol", ctx.tol_text, "root-isolation tolerance as a rational");
  add_manifold_commands(app, ctx);
  add_map_commands(app, ctx);
  add_dynamics_commands(app, ctx);
  add_green_commands(app, ctx);

  // Callbacks run after the workspace is loaded.
  app.parse_complete_callback([&ctx] { ctx.ws = Workspace::load_file(ctx.workspace_path); });
  try {
    app.parse(argc, argv);
    if (ctx.dirty) ctx.ws.save_file(ctx.workspace_path);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kOther;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOk;
}
