#pragma once
// Command-line front end. Everything goes through run() so the tests can call
// it in-process; tools/rsolv.cpp is a thin main().

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rsolv/dsl.hpp"
#include "rsolv/witness.hpp"

namespace rsolv::cli {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_failed = 2;  // ran, but a check failed or nothing separated

struct Options {
  std::string spec;
  std::string group;
  std::string amalgam;
  std::string word;
  std::string left;
  std::string right;
  std::string theorem;
  std::string matrix;
  std::string transversal = "min-index";
  std::size_t max_order = 5000;
  std::size_t lattice_max = 256;
  std::size_t budget = 10'000'000;
  std::size_t catalog_max = 24;
};

inline void emit(std::ostream& out, Json j) {
  j["schema"] = 1;
  out << j.dump(2) << "\n";
}

inline int emit_error(std::ostream& out, std::string const& command, std::string const& kind,
                      std::string const& detail, Json extra = Json::object()) {
  Json e{{"kind", kind}, {"detail", detail}};
  for (auto& [k, v] : extra.items()) e[k] = v;
  emit(out, {{"command", command}, {"status", "error"}, {"error", e}});
  return exit_error;
}

inline Limits limits_of(Options const& o) {
  Limits l;
  l.max_order = o.max_order;
  l.lattice_max_order = o.lattice_max;
  return l;
}

inline dsl::Model load(Options const& o) {
  std::ifstream in(o.spec, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot read spec file '" + o.spec + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return dsl::resolve(dsl::parse(ss.str()), limits_of(o));
}

// Spec file symbols for finite groups, in declaration order.
inline std::vector<std::string> group_names(dsl::Model const& m, Options const& o) {
  if (!o.group.empty()) {
    m.group(o.group);
    return {o.group};
  }
  std::vector<std::string> out;
  for (auto const& n : m.order)
    if (m.groups.count(n)) out.push_back(n);
  return out;
}

inline Json abelian_json(FGAbelian const& A) {
  return {{"free_rank", A.free_rank}, {"torsion", A.torsion}, {"description", A.describe()}};
}

// (A_1 + ... + A_k)_ab modulo the identifications of C. A finite factor enters
// with one generator per element and its multiplication table as relators.
inline FGAbelian amalgam_abelianization(AmalgamSpec const& spec) {
  std::vector<std::size_t> offset;
  std::size_t n = 0;
  for (auto const& F : spec.factors()) {
    offset.push_back(n);
    n += F.is_finite_group() ? F.finite()->order() : F.abelian().width();
  }
  auto coords = [&](std::size_t i, Element const& x) {
    IntVector v(n, 0);
    auto const& F = spec.factor(i);
    if (F.is_finite_group()) {
      v[offset[i] + GroupRep::index(x)] = 1;
    } else {
      for (std::size_t j = 0; j < x.size(); ++j) v[offset[i] + j] = x[j];
    }
    return v;
  };
  std::vector<IntVector> rel;
  for (std::size_t i = 0; i < spec.num_factors(); ++i) {
    auto const& F = spec.factor(i);
    if (F.is_finite_group()) {
      auto const& G = *F.finite();
      for (Index x = 0; x < G.order(); ++x)
        for (Index y = 0; y < G.order(); ++y) {
          IntVector r(n, 0);
          r[offset[i] + x] += 1;
          r[offset[i] + y] += 1;
          r[offset[i] + G.mul(x, y)] -= 1;
          rel.push_back(std::move(r));
        }
    } else {
      auto const& A = F.abelian();
      for (std::size_t j = A.free_rank; j < A.width(); ++j) {
        IntVector r(n, 0);
        r[offset[i] + j] = A.modulus(j);
        rel.push_back(std::move(r));
      }
    }
  }
  for (auto const& c : spec.amalgam().generators()) {
    auto first = coords(0, spec.embedding(0)(c));
    for (std::size_t i = 1; i < spec.num_factors(); ++i) {
      auto other = coords(i, spec.embedding(i)(c));
      IntVector r(n);
      for (std::size_t j = 0; j < n; ++j) r[j] = first[j] - other[j];
      rel.push_back(std::move(r));
    }
  }
  return abelianization_from_presentation(n, rel);
}

inline Json matrix_json(IntMatrix const& M) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) r.push_back(to_int64(M(i, j)));
    rows.push_back(r);
  }
  return rows;
}

inline IntMatrix parse_matrix(std::string const& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (Json::parse_error const& e) {
    fail(ErrorKind::ParseError, std::string("matrix literal: ") + e.what());
  }
  if (!j.is_array() || j.empty()) fail(ErrorKind::InvalidArgument, "matrix must be a non-empty list of rows");
  std::size_t cols = 0;
  for (auto const& r : j) {
    if (!r.is_array()) fail(ErrorKind::InvalidArgument, "matrix rows must be lists");
    if (&r == &j.front()) cols = r.size();
    if (r.size() != cols) fail(ErrorKind::InvalidArgument, "matrix rows differ in length");
  }
  if (cols == 0) fail(ErrorKind::InvalidArgument, "matrix rows must be non-empty");
  IntMatrix M(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i)
    for (std::size_t k = 0; k < cols; ++k) {
      auto const& v = j[i][k];
      if (!v.is_number_integer()) fail(ErrorKind::InvalidArgument, "matrix entries must be integers");
      M(i, k) = v.is_number_unsigned() ? BigInt(v.get<std::uint64_t>()) : BigInt(v.get<std::int64_t>());
    }
  return M;
}

inline int cmd_normal_form(Options const& o, std::ostream& out) {
  auto m = load(o);
  auto const& rw = m.word(o.word);
  auto const& spec = *m.amalgam(rw.amalgam).spec;
  auto nf = reduce(spec, rw.word);
  bool agrees = oracle::oracle_reduce(spec, rw.word) == nf;
  emit(out, {{"command", "normal-form"},
             {"word", o.word},
             {"amalgam", rw.amalgam},
             {"input", word_json(spec, rw.word)},
             {"normal_form", normal_form_json(spec, nf)},
             {"length", nf.tail.size()},
             {"identity", is_identity(spec, nf)},
             {"oracle_agrees", agrees},
             {"status", agrees ? "passed" : "checks-failed"}});
  return agrees ? exit_ok : exit_failed;
}

inline int cmd_equal(Options const& o, std::ostream& out) {
  auto m = load(o);
  auto const& u = m.word(o.left);
  auto const& v = m.word(o.right);
  if (u.amalgam != v.amalgam) {
    fail(ErrorKind::ResolutionError, "words '" + o.left + "' and '" + o.right + "' live in different amalgams");
  }
  auto const& spec = *m.amalgam(u.amalgam).spec;
  auto nu = reduce(spec, u.word), nv = reduce(spec, v.word);
  emit(out, {{"command", "equal"},
             {"amalgam", u.amalgam},
             {"left", {{"word", o.left}, {"normal_form", normal_form_json(spec, nu)}}},
             {"right", {{"word", o.right}, {"normal_form", normal_form_json(spec, nv)}}},
             {"equal", nu == nv},
             {"status", "ok"}});
  return exit_ok;
}

inline int cmd_derived_series(Options const& o, std::ostream& out) {
  auto m = load(o);
  Json gs = Json::array();
  for (auto const& n : group_names(m, o)) {
    auto const& R = m.group(n).rep;
    Json g{{"name", n}};
    if (R.is_abelian_group()) {
      auto const& A = R.abelian();
      g["abelian"] = abelian_json(A);
      g["solvable"] = true;
      g["nilpotent"] = true;
      g["derived_length"] = A.is_trivial() ? 0 : 1;
    } else {
      auto const& G = *R.finite();
      auto d = series(G, SeriesKind::derived);
      auto l = series(G, SeriesKind::lower_central);
      g["order"] = G.order();
      g["derived_orders"] = d.orders();
      g["lower_central_orders"] = l.orders();
      g["solvable"] = d.last().size() == 1;
      g["nilpotent"] = l.last().size() == 1;
      if (auto dl = derived_length(G)) g["derived_length"] = *dl;
    }
    gs.push_back(g);
  }
  emit(out, {{"command", "derived-series"}, {"groups", gs}, {"status", "ok"}});
  return exit_ok;
}

inline int cmd_abelianize(Options const& o, std::ostream& out) {
  auto m = load(o);
  Json j{{"command", "abelianize"}, {"status", "ok"}};
  if (!o.group.empty()) {
    auto const& R = m.group(o.group).rep;
    j["group"] = o.group;
    if (R.is_abelian_group()) {
      j["abelianization"] = abelian_json(R.abelian());
    } else {
      auto inv = abelian_invariants(R.finite());
      j["abelianization"] = abelian_json(FGAbelian(0, std::vector<std::int64_t>(inv.begin(), inv.end())));
    }
  } else {
    auto const& A = m.amalgam_or_single(o.amalgam);
    std::string name = o.amalgam;
    if (name.empty())
      for (auto const& [k, v] : m.amalgams) name = k;
    j["amalgam"] = name;
    j["abelianization"] = abelian_json(amalgam_abelianization(*A.spec));
  }
  emit(out, j);
  return exit_ok;
}

inline int cmd_snf(Options const& o, std::ostream& out) {
  auto M = parse_matrix(o.matrix);
  auto s = snf(M);
  bool ok = s.U * M * s.V == s.D;
  Json inv = Json::array();
  for (auto const& d : s.invariant_factors) inv.push_back(to_int64(d));
  emit(out, {{"command", "snf"},
             {"matrix", matrix_json(M)},
             {"D", matrix_json(s.D)},
             {"U", matrix_json(s.U)},
             {"V", matrix_json(s.V)},
             {"invariant_factors", inv},
             {"rank", s.invariant_factors.size()},
             {"checks", {{{"name", "UMV_equals_D"}, {"passed", ok}}}},
             {"status", ok ? "passed" : "checks-failed"}});
  return ok ? exit_ok : exit_failed;
}

inline int cmd_frattini(Options const& o, std::ostream& out) {
  auto m = load(o);
  auto lim = limits_of(o);
  Json gs = Json::array();
  for (auto const& n : group_names(m, o)) {
    auto const& R = m.group(n).rep;
    if (R.is_abelian_group()) {
      fail(ErrorKind::InvalidArgument, "frattini needs a finite permutation group, '" + n + "' is abelian");
    }
    auto const& G = *R.finite();
    auto phi = frattini(G, lim);
    auto d2 = commutator_subgroup(G, whole_group(G), whole_group(G));
    Json elems = Json::array();
    for (auto x : phi.elements()) elems.push_back(G.label(x));
    gs.push_back({{"name", n},
                  {"order", G.order()},
                  {"frattini_order", phi.size()},
                  {"frattini", elems},
                  {"maximal_subgroups", maximal_subgroups(G, lim).size()},
                  {"commutator_order", d2.size()},
                  {"commutator_in_frattini", d2.is_subset_of(phi)},
                  {"nilpotent", is_nilpotent(G)}});
  }
  emit(out, {{"command", "frattini"}, {"groups", gs}, {"status", "ok"}});
  return exit_ok;
}

inline std::string amalgam_name(dsl::Model const& m, std::string const& requested) {
  m.amalgam_or_single(requested);
  return requested.empty() ? m.amalgams.begin()->first : requested;
}

inline int cmd_certify(Options const& o, std::ostream& out) {
  auto m = load(o);
  auto name = amalgam_name(m, o.amalgam);
  auto const& spec = m.amalgam(name).spec;
  auto lim = limits_of(o);
  Certificate cert;
  if (o.theorem == "not-perfect") cert = not_perfect_certificate(spec, lim);
  else if (o.theorem == "cyclic") cert = cyclic_amalgam_quotient(spec, lim);
  else if (o.theorem == "central") cert = central_amalgam_quotient(spec, lim);
  else if (o.theorem == "double") cert = double_retraction(spec, lim);
  else if (o.theorem == "abelian-factor") cert = abelian_factor_quotient(spec, lim);
  else fail(ErrorKind::InvalidArgument, "unknown theorem '" + o.theorem + "'");
  auto j = cert.to_json();
  emit(out, {{"command", "certify"},
             {"theorem", o.theorem},
             {"amalgam", name},
             {"certificate", j},
             {"status", j["status"]}});
  return cert.passed() ? exit_ok : exit_failed;
}

inline WitnessOptions witness_options(Options const& o) {
  WitnessOptions w;
  w.limits = limits_of(o);
  w.budget = o.budget;
  w.catalog_max = o.catalog_max;
  return w;
}

inline int cmd_witness(Options const& o, std::ostream& out) {
  auto m = load(o);
  auto const& rw = m.word(o.word);
  auto const& spec = m.amalgam(rw.amalgam).spec;
  auto rep = separate_element(spec, rw.word, witness_options(o));
  auto j = to_json(rep, *spec, rw.word);
  j["command"] = "witness";
  j["amalgam"] = rw.amalgam;
  j["name"] = o.word;
  j["status"] = rep.separated() ? "separated" : "not-separated";
  emit(out, j);
  return rep.separated() ? exit_ok : exit_failed;
}

inline int cmd_oracle_check(Options const& o, std::ostream& out) {
  auto m = load(o);
  auto const& rw = m.word(o.word);
  auto const& spec = m.amalgam(rw.amalgam).spec;
  if (is_identity(*spec, reduce(*spec, rw.word))) {
    fail(ErrorKind::IdentityWord, "word '" + o.word + "' is the identity");
  }
  bool agrees = oracle::oracle_reduce(*spec, rw.word) == reduce(*spec, rw.word);
  auto res = oracle_witness(spec, rw.word, witness_options(o));
  auto const& s = res.search;
  Json j{{"command", "oracle-check"},
         {"amalgam", rw.amalgam},
         {"name", o.word},
         {"word", word_json(*spec, rw.word)},
         {"reduce_agrees", agrees},
         {"search", {{"status", oracle::to_string(s.status)}, {"nodes", s.nodes}}}};
  if (s.status == oracle::SearchStatus::budget_exceeded) {
    return emit_error(out, "oracle-check", to_string(ErrorKind::BudgetExceeded),
                      "search stopped after " + std::to_string(s.nodes) + " nodes", {{"nodes", s.nodes}});
  }
  bool ok = agrees && res.certificate && res.certificate->passed();
  if (res.certificate) j["certificate"] = res.certificate->to_json();
  j["status"] = ok ? "passed" : (s.status == oracle::SearchStatus::exhausted ? "exhausted" : "checks-failed");
  emit(out, j);
  return ok ? exit_ok : exit_failed;
}

inline int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact quotient constructions for amalgamated free products.", "rsolv"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--max-order", o.max_order, "cap on any constructed group")->capture_default_str();
  app.add_option("--lattice-max", o.lattice_max, "cap on full subgroup enumeration")->capture_default_str();
  app.add_option("--budget", o.budget, "node budget for the oracle search")->capture_default_str();
  app.add_option("--catalog-max", o.catalog_max, "largest order in the solvable catalog")->capture_default_str();
  app.add_option("--transversal", o.transversal, "transversal rule")
      ->check(CLI::IsMember({"min-index"}))
      ->capture_default_str();

  auto spec_arg = [&](CLI::App* c) { c->add_option("spec", o.spec, "spec file")->required(); };

  auto* nf = app.add_subcommand("normal-form", "reduce a word to normal form");
  spec_arg(nf);
  nf->add_option("--word", o.word)->required();

  auto* eq = app.add_subcommand("equal", "decide equality of two words");
  spec_arg(eq);
  eq->add_option("--left", o.left)->required();
  eq->add_option("--right", o.right)->required();

  auto* ds = app.add_subcommand("derived-series", "derived and lower central series of groups");
  spec_arg(ds);
  ds->add_option("--group", o.group);

  auto* ab = app.add_subcommand("abelianize", "abelianization of a group or amalgam");
  spec_arg(ab);
  auto* abg = ab->add_option("--group", o.group);
  ab->add_option("--amalgam", o.amalgam)->excludes(abg);

  auto* sn = app.add_subcommand("snf", "Smith normal form of an integer matrix");
  sn->add_option("--matrix", o.matrix, "JSON rows, e.g. [[2,4],[6,8]]")->required();

  auto* fr = app.add_subcommand("frattini", "Frattini subgroup of finite groups");
  spec_arg(fr);
  fr->add_option("--group", o.group);

  auto* ce = app.add_subcommand("certify", "build a quotient certificate");
  spec_arg(ce);
  ce->add_option("--theorem", o.theorem)
      ->required()
      ->check(CLI::IsMember({"not-perfect", "cyclic", "central", "double", "abelian-factor"}));
  ce->add_option("--amalgam", o.amalgam);

  auto* wi = app.add_subcommand("witness", "separate a word in a solvable quotient");
  spec_arg(wi);
  wi->add_option("--word", o.word)->required();

  auto* oc = app.add_subcommand("oracle-check", "cross-check a word against the brute-force oracle");
  spec_arg(oc);
  oc->add_option("--word", o.word)->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const&) {
    out << app.help();
    return exit_ok;
  } catch (CLI::CallForAllHelp const&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (CLI::ParseError const& e) {
    // help on a subcommand also lands here with a zero exit code
    if (e.get_exit_code() == 0) {
      for (auto* s : app.get_subcommands()) out << s->help();
      return exit_ok;
    }
    err << e.what() << "\n";
    return emit_error(out, "", to_string(ErrorKind::InvalidArgument), e.what());
  }

  auto* sub = app.get_subcommands().front();
  std::string cmd = sub->get_name();
  try {
    if (sub == nf) return cmd_normal_form(o, out);
    if (sub == eq) return cmd_equal(o, out);
    if (sub == ds) return cmd_derived_series(o, out);
    if (sub == ab) return cmd_abelianize(o, out);
    if (sub == sn) return cmd_snf(o, out);
    if (sub == fr) return cmd_frattini(o, out);
    if (sub == ce) return cmd_certify(o, out);
    if (sub == wi) return cmd_witness(o, out);
    if (sub == oc) return cmd_oracle_check(o, out);
  } catch (dsl::ParseError const& e) {
    return emit_error(out, cmd, to_string(e.kind()), e.detail(),
                      {{"line", e.line()}, {"column", e.column()}, {"expected", e.expected()}});
  } catch (Error const& e) {
    return emit_error(out, cmd, to_string(e.kind()), e.detail());
  } catch (std::exception const& e) {
    return emit_error(out, cmd, "InternalError", e.what());
  }
  return emit_error(out, cmd, to_string(ErrorKind::InvalidArgument), "unknown command");
}

}  // namespace rsolv::cli
